//! Random-coding error exponents of separable codes.
//!
//! A joint law `tau` on (input word, output) is only allowed mass on pairs
//! `(x, f(x))`, so it is stored as a weight per input word. Both functionals
//! are convex in `tau`; the exponent for a fixed `m` is found by damped Newton
//! steps with equality constraints (total mass, and the per-coordinate input
//! marginals for the fixed-composition ensemble). The kink of
//! `[I_m - mR]^+` is handled through the Lagrangian `H + lambda * I_m`.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::bounds::Distribution;
use crate::channel::{ChannelSpec, OutputSymbol};
use crate::error::{Error, Result};
use crate::types::type_of;

/// Largest `s` and `q` accepted by the numerical exponent routines.
pub const DESK_MAX_S: usize = 3;
pub const DESK_MAX_Q: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum EnsembleKind {
    /// Fixed composition: marginals of `tau` are pinned to `p`.
    Fc,
    /// Completely randomized.
    Cr,
}

impl EnsembleKind {
    pub fn parse(text: &str) -> Result<Self> {
        match text.to_ascii_lowercase().as_str() {
            "fc" => Ok(Self::Fc),
            "cr" => Ok(Self::Cr),
            other => Err(Error::params(format!("unknown ensemble '{other}', expected fc or cr"))),
        }
    }
}

/// Word `x_1..x_s` with index `sum x_k q^(s-k)`.
fn word_of(mut index: usize, q: usize, s: usize) -> Vec<u8> {
    let mut w = vec![0u8; s];
    for slot in w.iter_mut().rev() {
        *slot = (index % q) as u8;
        index /= q;
    }
    w
}

/// A joint law on `A_q^s x Z` supported on the channel graph `z = f(x)`.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    channel: ChannelSpec,
    words: Vec<Vec<u8>>,
    outputs: Vec<u128>,
    weights: Vec<f64>,
}

impl JointDistribution {
    /// Builds `tau` from one weight per input word (index order as in
    /// [`JointDistribution::words`]). The weights must sum to 1.
    pub fn new(channel: &ChannelSpec, weights: Vec<f64>) -> Result<Self> {
        let (q, s) = (channel.q(), channel.s());
        let count = (q as u128)
            .checked_pow(s as u32)
            .filter(|&c| c <= 1 << 20)
            .ok_or_else(|| Error::TooLarge(format!("q^s = {q}^{s} input words")))?
            as usize;
        if weights.len() != count {
            return Err(Error::DimensionMismatch(format!(
                "expected {count} weights, got {}",
                weights.len()
            )));
        }
        if weights.iter().any(|&w| w.is_nan() || w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidDistribution("weights must be finite and >= 0".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}, not 1")));
        }
        let words: Vec<Vec<u8>> = (0..count).map(|i| word_of(i, q, s)).collect();
        let outputs = words
            .iter()
            .map(|w| channel.key_of_word(&mut w.clone()))
            .collect();
        Ok(Self {
            channel: channel.clone(),
            words,
            outputs,
            weights,
        })
    }

    pub fn words(&self) -> &[Vec<u8>] {
        &self.words
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn channel(&self) -> &ChannelSpec {
        &self.channel
    }

    /// Output symbol `f(x)` paired with input word `index`.
    pub fn output(&self, index: usize) -> OutputSymbol {
        let q = self.channel.q();
        let comp = type_of(&self.words[index], q).expect("words are over the alphabet");
        self.channel.eval(&comp).expect("composition has weight s")
    }

    /// Marginal law of coordinate `k` (0-based).
    pub fn marginal(&self, k: usize) -> Vec<f64> {
        let mut m = vec![0.0; self.channel.q()];
        for (w, &t) in self.words.iter().zip(&self.weights) {
            m[w[k] as usize] += t;
        }
        m
    }

    fn with_weights(&self, weights: Vec<f64>) -> Self {
        Self {
            weights,
            ..self.clone()
        }
    }
}

impl Serialize for JointDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Atom {
            x: Vec<u8>,
            z: String,
            weight: f64,
        }
        let mut seq = serializer.serialize_seq(None)?;
        for (i, &w) in self.weights.iter().enumerate() {
            if w > 0.0 {
                seq.serialize_element(&Atom {
                    x: self.words[i].clone(),
                    z: self.output(i).to_string(),
                    weight: w,
                })?;
            }
        }
        seq.end()
    }
}

fn check_inputs(channel: &ChannelSpec, p: &Distribution) -> Result<()> {
    if p.q() != channel.q() {
        return Err(Error::InvalidDistribution(format!(
            "distribution has {} entries but q={}",
            p.q(),
            channel.q()
        )));
    }
    Ok(())
}

fn product(p: &Distribution, word: &[u8]) -> f64 {
    word.iter().map(|&a| p.probs()[a as usize]).product()
}

/// `tau(x, z) = [z = f(x)] prod_k p(x_k)`.
pub fn canonical_tau(p: &Distribution, channel: &ChannelSpec) -> Result<JointDistribution> {
    check_inputs(channel, p)?;
    let (q, s) = (channel.q(), channel.s());
    let count = (q as u128).checked_pow(s as u32).unwrap_or(u128::MAX);
    if count > 1 << 20 {
        return Err(Error::TooLarge(format!("q^s = {q}^{s} input words")));
    }
    let weights: Vec<f64> = (0..count as usize)
        .map(|i| product(p, &word_of(i, q, s)))
        .collect();
    // renormalize away rounding so the total is 1 to machine precision
    let total: f64 = weights.iter().sum();
    JointDistribution::new(channel, weights.into_iter().map(|w| w / total).collect())
}

/// `H(p, tau) = sum tau ln(tau / prod p)`; `+inf` when `tau` has mass where
/// the product law has none.
pub fn eval_h(p: &Distribution, tau: &JointDistribution) -> Result<f64> {
    check_inputs(&tau.channel, p)?;
    let mut total = 0.0;
    for (w, &t) in tau.words.iter().zip(&tau.weights) {
        if t > 0.0 {
            let base = product(p, w);
            if base == 0.0 {
                return Ok(f64::INFINITY);
            }
            total += t * (t / base).ln();
        }
    }
    Ok(total)
}

/// Group of each word for `I_m`: words sharing `(x_{m+1}..x_s, f(x))`.
fn groups(tau: &JointDistribution, m: usize) -> (Vec<usize>, usize) {
    let mut ids: HashMap<(&[u8], u128), usize> = HashMap::new();
    let assigned = tau
        .words
        .iter()
        .zip(&tau.outputs)
        .map(|(w, &z)| {
            let next = ids.len();
            *ids.entry((&w[m..], z)).or_insert(next)
        })
        .collect();
    (assigned, ids.len())
}

/// `I_m(p, tau) = sum tau ln(tau(x_1^m | x_{m+1}^s, z) / prod_{k<=m} p(x_k))`.
pub fn eval_i(p: &Distribution, tau: &JointDistribution, m: usize) -> Result<f64> {
    check_inputs(&tau.channel, p)?;
    let s = tau.channel.s();
    if m == 0 || m > s {
        return Err(Error::params(format!("m must be in 1..={s}, got {m}")));
    }
    let (group, count) = groups(tau, m);
    let mut mass = vec![0.0; count];
    for (g, &t) in group.iter().zip(&tau.weights) {
        mass[*g] += t;
    }
    let mut total = 0.0;
    for ((w, &t), g) in tau.words.iter().zip(&tau.weights).zip(&group) {
        if t > 0.0 {
            let base = product(p, &w[..m]);
            if base == 0.0 {
                return Ok(f64::INFINITY);
            }
            total += t * (t / mass[*g] / base).ln();
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentReport {
    pub value: f64,
    pub ensemble: EnsembleKind,
    #[serde(rename = "R")]
    pub rate: f64,
    /// Minimizing `m`, 1-based.
    pub m_star: usize,
    /// Value for each `m = 1..=s`.
    pub per_m: Vec<f64>,
    pub tau_star: JointDistribution,
    pub converged: bool,
}

/// Convex objective `H + lambda * I_m` restricted to words of positive
/// product probability, with linear equality constraints `A tau = b`.
struct Problem {
    /// Indices (into the full word list) of the free variables.
    vars: Vec<usize>,
    /// `ln prod_k p(x_k)` and `ln prod_{k<=m} p(x_k)` per variable.
    log_base: Vec<f64>,
    log_head: Vec<f64>,
    group: Vec<usize>,
    groups: usize,
    constraints: DMatrix<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Terms {
    h: f64,
    i: f64,
}

impl Problem {
    fn new(p: &Distribution, template: &JointDistribution, m: usize, ensemble: EnsembleKind) -> Self {
        let probs = p.probs();
        let vars: Vec<usize> = (0..template.words.len())
            .filter(|&i| product(p, &template.words[i]) > 0.0)
            .collect();
        let log_base = vars.iter().map(|&i| product(p, &template.words[i]).ln()).collect();
        let log_head = vars
            .iter()
            .map(|&i| product(p, &template.words[i][..m]).ln())
            .collect();
        let (full_group, _) = groups(template, m);
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let group = vars
            .iter()
            .map(|&i| {
                let next = remap.len();
                *remap.entry(full_group[i]).or_insert(next)
            })
            .collect();
        let mut rows: Vec<Vec<f64>> = vec![vec![1.0; vars.len()]];
        if ensemble == EnsembleKind::Fc {
            let positive: Vec<u8> = (0..probs.len() as u8).filter(|&a| probs[a as usize] > 0.0).collect();
            for k in 0..template.channel.s() {
                // the last positive symbol is implied by the total
                for &a in &positive[..positive.len() - 1] {
                    rows.push(
                        vars.iter()
                            .map(|&i| f64::from(u8::from(template.words[i][k] == a)))
                            .collect(),
                    );
                }
            }
        }
        let constraints = DMatrix::from_fn(rows.len(), vars.len(), |r, c| rows[r][c]);
        Self {
            vars,
            log_base,
            log_head,
            group,
            groups: remap.len(),
            constraints,
        }
    }

    fn masses(&self, x: &[f64]) -> Vec<f64> {
        let mut mass = vec![0.0; self.groups];
        for (g, &t) in self.group.iter().zip(x) {
            mass[*g] += t;
        }
        mass
    }

    fn terms(&self, x: &[f64]) -> Terms {
        let mass = self.masses(x);
        let mut h = 0.0;
        let mut i = 0.0;
        for (k, &t) in x.iter().enumerate() {
            if t > 0.0 {
                let lt = t.ln();
                h += t * (lt - self.log_base[k]);
                i += t * (lt - mass[self.group[k]].ln() - self.log_head[k]);
            }
        }
        Terms { h, i }
    }

    fn objective(&self, x: &[f64], lambda: f64) -> f64 {
        let t = self.terms(x);
        t.h + lambda * t.i
    }

    /// Newton minimization of `H + lambda I_m` from a feasible interior point.
    fn minimize(&self, start: &[f64], lambda: f64) -> (Vec<f64>, bool) {
        let n = self.vars.len();
        let r = self.constraints.nrows();
        let mut x = start.to_vec();
        let mut value = self.objective(&x, lambda);
        for _ in 0..500 {
            let mass = self.masses(&x);
            let grad: Vec<f64> = (0..n)
                .map(|k| {
                    (1.0 + lambda) * (x[k].ln() + 1.0)
                        - lambda * (mass[self.group[k]].ln() + 1.0)
                        - self.log_base[k]
                        - lambda * self.log_head[k]
                })
                .collect();
            let mut kkt = DMatrix::<f64>::zeros(n + r, n + r);
            for a in 0..n {
                kkt[(a, a)] += (1.0 + lambda) / x[a];
                for b in 0..n {
                    if self.group[a] == self.group[b] {
                        kkt[(a, b)] -= lambda / mass[self.group[a]];
                    }
                }
            }
            for c in 0..r {
                for a in 0..n {
                    kkt[(n + c, a)] = self.constraints[(c, a)];
                    kkt[(a, n + c)] = self.constraints[(c, a)];
                }
            }
            let mut rhs = DVector::<f64>::zeros(n + r);
            for a in 0..n {
                rhs[a] = -grad[a];
            }
            let Some(sol) = kkt.lu().solve(&rhs) else {
                return (x, false);
            };
            let dx: Vec<f64> = (0..n).map(|a| sol[a]).collect();
            let slope: f64 = grad.iter().zip(&dx).map(|(g, d)| g * d).sum();
            // -slope is the squared Newton decrement, twice the predicted gain
            if -slope < 1e-15 {
                return (x, true);
            }
            // largest step keeping every weight positive
            let mut step: f64 = 1.0;
            for (xa, da) in x.iter().zip(&dx) {
                if *da < 0.0 {
                    step = step.min(-0.99 * xa / da);
                }
            }
            let accepted = loop {
                let cand: Vec<f64> = x.iter().zip(&dx).map(|(a, d)| a + step * d).collect();
                let cv = self.objective(&cand, lambda);
                if cv <= value + 0.25 * step * slope {
                    break Some((cand, cv));
                }
                step *= 0.5;
                if step < 1e-16 {
                    break None;
                }
            };
            match accepted {
                Some((cand, cv)) => {
                    x = cand;
                    value = cv;
                }
                // no decrease representable: at the optimum up to rounding
                None => return (x, -slope < 1e-12),
            }
        }
        (x, false)
    }
}

fn desk_guard(channel: &ChannelSpec) -> Result<()> {
    if channel.s() > DESK_MAX_S || channel.q() > DESK_MAX_Q {
        return Err(Error::TooLarge(format!(
            "exponent evaluation supports s <= {DESK_MAX_S} and q <= {DESK_MAX_Q}, got s={}, q={}",
            channel.s(),
            channel.q()
        )));
    }
    Ok(())
}

struct Branch {
    value: f64,
    weights: Vec<f64>,
    converged: bool,
}

/// `min H + [I_m - mR]^+` over the feasible set.
fn solve_m(p: &Distribution, template: &JointDistribution, m: usize, rate: f64, ensemble: EnsembleKind) -> Branch {
    let problem = Problem::new(p, template, m, ensemble);
    let start: Vec<f64> = problem.vars.iter().map(|&i| template.weights[i]).collect();
    let target = m as f64 * rate;
    let expand = |x: &[f64]| {
        let mut full = vec![0.0; template.words.len()];
        for (&i, &v) in problem.vars.iter().zip(x) {
            full[i] = v;
        }
        full
    };
    let at_start = problem.terms(&start);
    if at_start.i <= target {
        return Branch {
            value: at_start.h.max(0.0),
            weights: expand(&start),
            converged: true,
        };
    }
    let (x1, ok1) = problem.minimize(&start, 1.0);
    let t1 = problem.terms(&x1);
    if t1.i >= target {
        return Branch {
            value: t1.h + t1.i - target,
            weights: expand(&x1),
            converged: ok1,
        };
    }
    // the optimum sits on I_m = mR; I_m along the Lagrangian path decreases in lambda
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut best = (x1, ok1);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let (x, ok) = problem.minimize(&best.0, mid);
        if problem.terms(&x).i > target {
            lo = mid;
        } else {
            hi = mid;
            best = (x, ok);
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    let t = problem.terms(&best.0);
    Branch {
        value: t.h + (t.i - target).max(0.0),
        weights: expand(&best.0),
        converged: best.1,
    }
}

/// Random-coding exponent `min_m min_tau H + [I_m - mR]^+`.
pub fn exponent(channel: &ChannelSpec, p: &Distribution, rate: f64, ensemble: EnsembleKind) -> Result<ExponentReport> {
    desk_guard(channel)?;
    check_inputs(channel, p)?;
    if rate.is_nan() || rate < 0.0 || !rate.is_finite() {
        return Err(Error::params(format!("rate must be finite and >= 0, got {rate}")));
    }
    let template = canonical_tau(p, channel)?;
    let branches: Vec<Branch> = (1..=channel.s())
        .map(|m| solve_m(p, &template, m, rate, ensemble))
        .collect();
    let best = branches
        .iter()
        .enumerate()
        .fold(0, |b, (k, br)| if br.value < branches[b].value { k } else { b });
    Ok(ExponentReport {
        value: branches[best].value.max(0.0),
        ensemble,
        rate,
        m_star: best + 1,
        per_m: branches.iter().map(|b| b.value.max(0.0)).collect(),
        tau_star: template.with_weights(branches[best].weights.clone()),
        converged: branches.iter().all(|b| b.converged),
    })
}

/// Rate lower bound `min_m min_tau (H + I_m) / (s + m - 1)`.
pub fn rate_lower_bound_general(channel: &ChannelSpec, p: &Distribution, ensemble: EnsembleKind) -> Result<f64> {
    desk_guard(channel)?;
    check_inputs(channel, p)?;
    let template = canonical_tau(p, channel)?;
    let s = channel.s();
    Ok((1..=s)
        .map(|m| {
            let problem = Problem::new(p, &template, m, ensemble);
            let start: Vec<f64> = problem.vars.iter().map(|&i| template.weights[i]).collect();
            let (x, _) = problem.minimize(&start, 1.0);
            let t = problem.terms(&x);
            (t.h + t.i) / (s + m - 1) as f64
        })
        .fold(f64::INFINITY, f64::min))
}
