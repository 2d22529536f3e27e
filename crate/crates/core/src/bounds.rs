//! Rate and capacity bounds.
//!
//! Values are rates in nats per symbol. The list-decoding lower bound keeps
//! its probability term as an exact rational and only takes the logarithm at
//! the end; the alternating inner sum cancels badly in floating point.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::ChannelSpec;
use crate::error::{Error, Result};
use crate::simplex::{projected_ascent, random_simplex_point, AscentOptions};
use crate::types::{binomial, compositions, type_of, union_of, Composition};

/// A probability distribution on the alphabet.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidDistribution(
                "need at least two symbols".into(),
            ));
        }
        if probs.iter().any(|&p| p.is_nan() || p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidDistribution(format!(
                "negative or non-finite entry in {probs:?}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}, not 1"
            )));
        }
        Ok(Self(probs))
    }

    pub fn uniform(q: usize) -> Self {
        Self(vec![1.0 / q as f64; q])
    }

    pub fn point_mass(q: usize, a: usize) -> Self {
        let mut v = vec![0.0; q];
        v[a] = 1.0;
        Self(v)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn q(&self) -> usize {
        self.0.len()
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(untagged)]
pub enum BoundWitness {
    Distribution(Distribution),
    QPrime { qprime: usize },
}

#[derive(Debug, Clone, Serialize, PartialEq, Default)]
pub struct BoundParams {
    pub s: usize,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub list_size: Option<usize>,
    pub q: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qprime_max: Option<usize>,
}

/// A named bound value with the parameters and witness that produced it.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub value: f64,
    pub params: BoundParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BoundWitness>,
    /// Exact rational intermediate rendered as "num/den".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub converged: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl BoundReport {
    fn closed_form(name: &str, value: f64, params: BoundParams) -> Self {
        Self {
            name: name.to_string(),
            value,
            params,
            witness: None,
            exact: None,
            converged: true,
            flags: Vec::new(),
        }
    }
}

/// Compositions of a channel, grouped by output.
struct OutputModel {
    comps: Vec<(f64, Vec<u32>, usize)>,
    groups: usize,
}

impl OutputModel {
    fn new(channel: &ChannelSpec) -> Self {
        let mut ids: HashMap<u128, usize> = HashMap::new();
        let comps = compositions(channel.q(), channel.s())
            .into_iter()
            .map(|c| {
                let key = channel.key_of_word(&mut c.to_sorted_word());
                let next = ids.len();
                let group = *ids.entry(key).or_insert(next);
                (c.multinomial() as f64, c.counts().to_vec(), group)
            })
            .collect();
        Self {
            comps,
            groups: ids.len(),
        }
    }

    fn output_probs(&self, p: &[f64]) -> Vec<f64> {
        let mut probs = vec![0.0; self.groups];
        for (mult, counts, g) in &self.comps {
            probs[*g] += mult * monomial(p, counts);
        }
        probs
    }

    fn entropy(&self, p: &[f64]) -> f64 {
        entropy_of(&self.output_probs(p))
    }

    fn entropy_and_gradient(&self, p: &[f64]) -> (f64, Vec<f64>) {
        let probs = self.output_probs(p);
        let weight: Vec<f64> = probs.iter().map(|&z| -(z.max(1e-300).ln() + 1.0)).collect();
        let mut grad = vec![0.0; p.len()];
        for (mult, counts, g) in &self.comps {
            for a in 0..p.len() {
                let ca = counts[a];
                if ca == 0 {
                    continue;
                }
                let mut d = mult * ca as f64 * p[a].powi(ca as i32 - 1);
                for (b, &cb) in counts.iter().enumerate() {
                    if b != a {
                        d *= p[b].powi(cb as i32);
                    }
                }
                grad[a] += weight[*g] * d;
            }
        }
        (entropy_of(&probs), grad)
    }
}

fn monomial(p: &[f64], counts: &[u32]) -> f64 {
    p.iter()
        .zip(counts)
        .map(|(&x, &c)| x.powi(c as i32))
        .product()
}

fn entropy_of(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&z| z > 0.0)
        .map(|&z| -z * z.ln())
        .sum()
}

fn check_distribution(channel: &ChannelSpec, p: &Distribution) -> Result<()> {
    if p.q() != channel.q() {
        return Err(Error::InvalidDistribution(format!(
            "distribution has {} entries but the channel alphabet has q={}",
            p.q(),
            channel.q()
        )));
    }
    Ok(())
}

/// Shannon entropy (nats) of the channel output when all `s` inputs are
/// i.i.d. with law `p`.
pub fn entropy_output(channel: &ChannelSpec, p: &Distribution) -> Result<f64> {
    check_distribution(channel, p)?;
    Ok(OutputModel::new(channel).entropy(p.probs()))
}

/// Output law `Pr{f(xi) = z}` keyed by the channel's output key.
pub fn output_distribution(channel: &ChannelSpec, p: &Distribution) -> Result<Vec<(Composition, f64)>> {
    check_distribution(channel, p)?;
    Ok(compositions(channel.q(), channel.s())
        .into_iter()
        .map(|c| {
            let pr = c.multinomial() as f64 * monomial(p.probs(), c.counts());
            (c, pr)
        })
        .collect())
}

#[derive(Debug, Clone, Copy)]
pub struct CapacityOptions {
    pub random_starts: usize,
    pub seed: u64,
    pub ascent: AscentOptions,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        Self {
            random_starts: 16,
            seed: 0,
            ascent: AscentOptions::default(),
        }
    }
}

/// Capacity `max_p H_p / s` by multi-start projected ascent from the uniform
/// point plus seeded random starts. Ties go to the earliest start.
pub fn capacity_entropy_bound(channel: &ChannelSpec, opts: CapacityOptions) -> Result<BoundReport> {
    let model = OutputModel::new(channel);
    let q = channel.q();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts = vec![vec![1.0 / q as f64; q]];
    starts.extend((0..opts.random_starts).map(|_| random_simplex_point(&mut rng, q)));
    let results: Vec<_> = starts
        .par_iter()
        .map(|start| projected_ascent(|p| model.entropy_and_gradient(p), start, opts.ascent))
        .collect();
    let best = results
        .iter()
        .enumerate()
        .fold(0, |best, (k, r)| if r.value > results[best].value { k } else { best });
    let best = &results[best];
    let s = channel.s();
    let mut report = BoundReport::closed_form(
        "entropy",
        best.value / s as f64,
        BoundParams {
            s,
            q,
            channel: Some(channel.kind().name()),
            ..Default::default()
        },
    );
    report.witness = Some(BoundWitness::Distribution(Distribution(best.point.clone())));
    report.converged = best.converged;
    if !best.converged {
        report.flags.push("approximate".into());
    }
    Ok(report)
}

/// Closed-form capacity of the B channel, `(1/s) * H(T(xi))` for uniform
/// inputs, summed over compositions as written.
pub fn capacity_b_closed_form(s: usize, q: usize) -> Result<f64> {
    if s == 0 || q < 2 {
        return Err(Error::params("need s >= 1 and q >= 2"));
    }
    let qs = (q as f64).powi(s as i32);
    let total: f64 = compositions(q, s)
        .iter()
        .map(|c| {
            let m = c.multinomial() as f64;
            m / qs * (qs / m).ln()
        })
        .sum();
    Ok(total / s as f64)
}

/// Combinatorial upper bound for any symmetric channel, from the split-graph
/// girth argument.
pub fn comb_upper_bound(s: usize, q: usize) -> Result<f64> {
    if s < 2 || q < 2 {
        return Err(Error::params("need s >= 2 and q >= 2"));
    }
    let s = s as f64;
    let coeff = if s as usize % 2 == 1 {
        (s + 1.0) / (2.0 * s)
    } else {
        (s + 2.0) / (2.0 * (s + 1.0))
    };
    Ok(coeff * (q as f64).ln())
}

fn big(n: u128) -> BigInt {
    BigInt::from(n)
}

/// Probability that `L` i.i.d. uniform symbols all fall in the support of
/// `s` further i.i.d. uniform symbols over a q-ary alphabet, computed exactly
/// by inclusion-exclusion over the support size.
pub fn p_term(q: usize, s: usize, list_size: usize) -> Result<BigRational> {
    if q < 2 || s == 0 || list_size == 0 {
        return Err(Error::params("need q >= 2, s >= 1, L >= 1"));
    }
    let qb = BigInt::from(q);
    let mut total = BigRational::zero();
    for m in 1..=q.min(s) {
        let mut inner = BigRational::zero();
        for k in 0..=m {
            let term = BigRational::new(
                big(binomial(m as u64, k as u64)) * BigInt::from(m - k).pow(s as u32),
                qb.pow(s as u32),
            );
            if k % 2 == 0 {
                inner += term;
            } else {
                inner -= term;
            }
        }
        let outer = BigRational::new(
            big(binomial(q as u64, m as u64)) * BigInt::from(m).pow(list_size as u32),
            qb.pow(list_size as u32),
        );
        total += outer * inner;
    }
    Ok(total)
}

pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn ln_rational(r: &BigRational) -> f64 {
    debug_assert!(r.is_positive());
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("fits in f64");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Alphabet-reduction factor: 1 when `qprime == q`, else `ceil(qprime / (q - 1))`.
pub fn k_factor(q: usize, qprime: usize) -> Result<usize> {
    if q < 2 || qprime < q {
        return Err(Error::params(format!(
            "need qprime >= q >= 2, got q={q}, qprime={qprime}"
        )));
    }
    Ok(if qprime == q {
        1
    } else {
        qprime.div_ceil(q - 1)
    })
}

pub const DEFAULT_QPRIME_MAX: usize = 64;

/// Random-coding lower bound on the list-decoding rate: the best over
/// `q' in q..=qprime_max` of `-ln P(q', s, L) / ((s + L - 1) k(q, q'))`.
pub fn lower_bound_ld(s: usize, list_size: usize, q: usize, qprime_max: usize) -> Result<BoundReport> {
    if s < 2 || list_size == 0 || q < 2 {
        return Err(Error::params("need s >= 2, L >= 1, q >= 2"));
    }
    if qprime_max < q {
        return Err(Error::params(format!(
            "empty search range: qprime_max={qprime_max} < q={q}"
        )));
    }
    let denom = (s + list_size - 1) as f64;
    let candidates: Vec<(usize, f64, BigRational)> = (q..=qprime_max)
        .into_par_iter()
        .map(|qp| {
            let p = p_term(qp, s, list_size)?;
            let v = -ln_rational(&p) / (denom * k_factor(q, qp)? as f64);
            Ok((qp, v, p))
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (k, c) in candidates.iter().enumerate() {
        if c.1 > candidates[best].1 * (1.0 + 1e-12) {
            best = k;
        }
    }
    let (qp, value, p) = &candidates[best];
    let mut report = BoundReport::closed_form(
        "ld-lower",
        *value,
        BoundParams {
            s,
            list_size: Some(list_size),
            q,
            qprime_max: Some(qprime_max),
            ..Default::default()
        },
    );
    report.witness = Some(BoundWitness::QPrime { qprime: *qp });
    report.exact = Some(rational_string(p));
    if *qp == qprime_max {
        report.flags.push("argmax_at_cap".into());
    }
    Ok(report)
}

/// Upper bound `L/(s+L-1) ln q` on the list-decoding rate.
pub fn upper_bound_ld(s: usize, list_size: usize, q: usize) -> Result<f64> {
    if s < 2 || list_size == 0 || q < 2 {
        return Err(Error::params("need s >= 2, L >= 1, q >= 2"));
    }
    Ok(list_size as f64 / (s + list_size - 1) as f64 * (q as f64).ln())
}

/// Upper bound `(2/s) ln q` on the A-channel rate.
pub fn upper_bound_a(s: usize, q: usize) -> Result<f64> {
    if s < 2 || q < 2 {
        return Err(Error::params("need s >= 2 and q >= 2"));
    }
    Ok(2.0 / s as f64 * (q as f64).ln())
}

/// Largest enumeration the proof-level estimates will attempt.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ProofEstimates {
    pub q: usize,
    pub m: usize,
    pub s: usize,
    /// `Pr{T(u_1..u_m) = T(v_1..v_m)}` for i.i.d. uniform symbols.
    pub type_collision_exact: String,
    /// `m! / q^m`.
    pub type_collision_bound: String,
    /// `Pr{U(xi_1..xi_m) is contained in U(xi_{m+1}..xi_{m+s})}`.
    pub union_containment_exact: String,
    /// `Pr{U(xi_1..xi_s) = U(xi_{m+1}..xi_{m+s})}`.
    pub union_equality_exact: String,
    /// `(s/q)^m`.
    pub union_containment_bound: String,
    #[serde(skip)]
    pub exact: [BigRational; 5],
}

fn pow_u128(base: usize, exp: usize) -> Option<u128> {
    (base as u128).checked_pow(exp as u32)
}

fn words(q: usize, len: usize) -> impl Iterator<Item = Vec<u8>> {
    let total = (q as u64).pow(len as u32);
    (0..total).map(move |mut idx| {
        (0..len)
            .map(|_| {
                let a = (idx % q as u64) as u8;
                idx /= q as u64;
                a
            })
            .collect()
    })
}

/// Exact collision probabilities behind the random-coding proofs, with the
/// bounds used there. Both exact values come from enumeration.
pub fn proof_probability_estimates(q: usize, m: usize, s: usize) -> Result<ProofEstimates> {
    if q < 2 || m == 0 || s < m {
        return Err(Error::params("need q >= 2, m >= 1, s >= m"));
    }
    let pairs = pow_u128(q, 2 * m).filter(|&n| n <= ENUMERATION_LIMIT);
    let tuples = pow_u128(q, m + s).filter(|&n| n <= ENUMERATION_LIMIT);
    let (Some(pairs), Some(tuples)) = (pairs, tuples) else {
        return Err(Error::TooLarge(format!(
            "enumeration over q^(2m) and q^(m+s) symbols exceeds {ENUMERATION_LIMIT}"
        )));
    };

    // Pairs with equal type: sum over types of (number of words)^2.
    let mut per_type: HashMap<Composition, u128> = HashMap::new();
    for w in words(q, m) {
        *per_type.entry(type_of(&w, q)?).or_default() += 1;
    }
    let equal_pairs: u128 = per_type.values().map(|c| c * c).sum();
    let type_exact = BigRational::new(big(equal_pairs), big(pairs));

    let mut contained = 0u128;
    let mut equal = 0u128;
    for w in words(q, m + s) {
        let small = union_of(&w[..m], q)?.mask();
        let big_union = union_of(&w[m..], q)?.mask();
        if small & !big_union == 0 {
            contained += 1;
        }
        if union_of(&w[..s], q)?.mask() == big_union {
            equal += 1;
        }
    }
    let containment_exact = BigRational::new(big(contained), big(tuples));
    let equality_exact = BigRational::new(big(equal), big(tuples));
    let factorial: u128 = (1..=m as u128).product();
    let type_bound = BigRational::new(big(factorial), big(pow_u128(q, m).expect("checked")));
    let union_bound = BigRational::new(
        big(pow_u128(s, m).expect("s^m <= q^(m+s)")),
        big(pow_u128(q, m).expect("checked")),
    );
    Ok(ProofEstimates {
        q,
        m,
        s,
        type_collision_exact: rational_string(&type_exact),
        type_collision_bound: rational_string(&type_bound),
        union_containment_exact: rational_string(&containment_exact),
        union_equality_exact: rational_string(&equality_exact),
        union_containment_bound: rational_string(&union_bound),
        exact: [
            type_exact,
            type_bound,
            containment_exact,
            equality_exact,
            union_bound,
        ],
    })
}

impl ProofEstimates {
    /// Every exact probability is at most its bound.
    pub fn bounds_hold(&self) -> bool {
        let [te, tb, ce, ee, ub] = &self.exact;
        te <= tb && ee <= ce && ce <= ub
    }
}

/// Unit of a reference curve: multiplies `ln q` or stands alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Unit {
    #[serde(rename = "ln q")]
    LnQ,
    #[serde(rename = "1")]
    One,
}

/// A documented asymptotic bound, shipped for plotting and comparison only.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceCurve {
    pub name: &'static str,
    pub regime: &'static str,
    pub formula: &'static str,
    pub unit: Unit,
    coefficient: fn(f64, f64, f64) -> f64,
}

impl ReferenceCurve {
    /// Coefficient of the curve at `(s, q, l)`; `l` is the list size or the
    /// threshold where the curve uses one.
    pub fn coefficient(&self, s: usize, q: usize, l: usize) -> f64 {
        (self.coefficient)(s as f64, q as f64, l as f64)
    }

    pub fn value(&self, s: usize, q: usize, l: usize) -> f64 {
        let c = self.coefficient(s, q, l);
        match self.unit {
            Unit::LnQ => c * (q as f64).ln(),
            Unit::One => c,
        }
    }
}

fn factorial_f(n: f64) -> f64 {
    (1..=n as u64).map(|k| k as f64).product()
}

/// Table of asymptotic reference bounds (leading terms only).
pub fn reference_asymptotics() -> Vec<ReferenceCurve> {
    vec![
        ReferenceCurve {
            name: "b_mac_lower",
            regime: "q->inf",
            formula: "s/(2s-1) ln q",
            unit: Unit::LnQ,
            coefficient: |s, _, _| s / (2.0 * s - 1.0),
        },
        ReferenceCurve {
            name: "a_mac_lower",
            regime: "q->inf",
            formula: "2/(s+1) ln q",
            unit: Unit::LnQ,
            coefficient: |s, _, _| 2.0 / (s + 1.0),
        },
        ReferenceCurve {
            name: "hash_rate",
            regime: "q->inf",
            formula: "ln q/(s-1)",
            unit: Unit::LnQ,
            coefficient: |s, _, _| 1.0 / (s - 1.0),
        },
        ReferenceCurve {
            name: "frameproof_rate",
            regime: "q->inf",
            formula: "ln q/s",
            unit: Unit::LnQ,
            coefficient: |s, _, _| 1.0 / s,
        },
        ReferenceCurve {
            name: "le_separable_rate",
            regime: "q->inf",
            formula: "2/3 ln q for s=2; ln q/(s-1) for s>=3",
            unit: Unit::LnQ,
            coefficient: |s, _, _| if s == 2.0 { 2.0 / 3.0 } else { 1.0 / (s - 1.0) },
        },
        ReferenceCurve {
            name: "ld_lower_large_q",
            regime: "q->inf",
            formula: "L/(s+L-1) ln q",
            unit: Unit::LnQ,
            coefficient: |s, _, l| l / (s + l - 1.0),
        },
        ReferenceCurve {
            name: "ld_lower_large_s",
            regime: "s->inf",
            formula: "L(q-1)(ln 2)^2/s^2",
            unit: Unit::One,
            coefficient: |s, q, l| l * (q - 1.0) * std::f64::consts::LN_2.powi(2) / (s * s),
        },
        ReferenceCurve {
            name: "disj_lower",
            regime: "s->inf",
            formula: "2(ln 2)^2/s^2",
            unit: Unit::One,
            coefficient: |s, _, _| 2.0 * std::f64::consts::LN_2.powi(2) / (s * s),
        },
        ReferenceCurve {
            name: "disj_upper",
            regime: "s->inf",
            formula: "4 ln s/s^2",
            unit: Unit::One,
            coefficient: |s, _, _| 4.0 * s.ln() / (s * s),
        },
        ReferenceCurve {
            name: "eras_capacity_binary",
            regime: "s->inf, q=2",
            formula: "ln 2/s",
            unit: Unit::One,
            coefficient: |s, _, _| std::f64::consts::LN_2 / s,
        },
        ReferenceCurve {
            name: "eras_lower_binary",
            regime: "s->inf, q=2",
            formula: "2(ln 2)^2/s^2",
            unit: Unit::One,
            coefficient: |s, _, _| 2.0 * std::f64::consts::LN_2.powi(2) / (s * s),
        },
        ReferenceCurve {
            name: "eras_upper_binary",
            regime: "s->inf, q=2",
            formula: "4 ln s/s^2",
            unit: Unit::One,
            coefficient: |s, _, _| 4.0 * s.ln() / (s * s),
        },
        ReferenceCurve {
            name: "thr_lower",
            regime: "s->inf, threshold l fixed",
            formula: "l^l e^(-2l)/((l-1)! 2^(l+1) s^2)",
            unit: Unit::One,
            coefficient: |s, _, l| {
                l.powf(l) * (-2.0 * l).exp() / (factorial_f(l - 1.0) * 2f64.powf(l + 1.0) * s * s)
            },
        },
        ReferenceCurve {
            name: "thr_upper",
            regime: "s->inf, threshold l fixed",
            formula: "2 l^2 ln s/s^2",
            unit: Unit::One,
            coefficient: |s, _, l| 2.0 * l * l * s.ln() / (s * s),
        },
        ReferenceCurve {
            name: "a_mac_lower_large_s",
            regime: "s->inf",
            formula: "(q-1)/(e log2 q) / s^2",
            unit: Unit::One,
            coefficient: |s, q, _| (q - 1.0) / (std::f64::consts::E * q.log2()) / (s * s),
        },
        ReferenceCurve {
            name: "a_mac_upper_large_s",
            regime: "s->inf",
            formula: "2(q-1)/log2 q * ln s/s^2",
            unit: Unit::One,
            coefficient: |s, q, _| 2.0 * (q - 1.0) / q.log2() * s.ln() / (s * s),
        },
        ReferenceCurve {
            name: "b_mac_lower_large_s",
            regime: "s->inf",
            formula: "(q-1) ln s/(4s)",
            unit: Unit::One,
            coefficient: |s, q, _| (q - 1.0) * s.ln() / (4.0 * s),
        },
        ReferenceCurve {
            name: "b_mac_upper_large_s",
            regime: "s->inf",
            formula: "(q-1) ln s/(2s)",
            unit: Unit::One,
            coefficient: |s, q, _| (q - 1.0) * s.ln() / (2.0 * s),
        },
    ]
}
