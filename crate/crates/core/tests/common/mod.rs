//! Brute-force reference implementations used as test oracles. They follow
//! the definitions literally and share no code paths with the library beyond
//! the data types.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sepmac::{ChannelSpec, Code, Composition, OutputSymbol};

/// All k-subsets of 0..t, lexicographic.
pub fn subsets(t: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, t: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..t {
            cur.push(j);
            go(j + 1, t, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, t, k, &mut Vec::new(), &mut out);
    out
}

fn composition_of(symbols: &[u8], q: usize) -> Composition {
    let mut counts = vec![0u32; q];
    for &a in symbols {
        counts[a as usize] += 1;
    }
    Composition::new(counts).unwrap()
}

pub fn output(code: &Code, channel: &ChannelSpec, members: &[usize]) -> Vec<OutputSymbol> {
    (0..code.len())
        .map(|i| {
            let symbols: Vec<u8> = members.iter().map(|&j| code.get(i, j)).collect();
            channel.eval(&composition_of(&symbols, code.q())).unwrap()
        })
        .collect()
}

/// Pairwise comparison of all s-message outputs.
pub fn separable(code: &Code, s: usize, channel: &ChannelSpec) -> bool {
    let outs: Vec<Vec<OutputSymbol>> = subsets(code.size(), s)
        .iter()
        .map(|m| output(code, channel, m))
        .collect();
    for a in 0..outs.len() {
        for b in a + 1..outs.len() {
            if outs[a] == outs[b] {
                return false;
            }
        }
    }
    true
}

fn union_row(code: &Code, members: &[usize], i: usize) -> Vec<u8> {
    let mut u: Vec<u8> = members.iter().map(|&j| code.get(i, j)).collect();
    u.sort_unstable();
    u.dedup();
    u
}

fn covered(code: &Code, members: &[usize], j: usize) -> bool {
    (0..code.len()).all(|i| union_row(code, members, i).contains(&code.get(i, j)))
}

pub fn list_decoding(code: &Code, s: usize, list_size: usize) -> bool {
    subsets(code.size(), s).iter().all(|m| {
        let outside = (0..code.size())
            .filter(|j| !m.contains(j) && covered(code, m, *j))
            .count();
        outside < list_size
    })
}

pub fn frameproof(code: &Code, s: usize) -> bool {
    subsets(code.size(), s)
        .iter()
        .all(|m| (0..code.size()).all(|j| m.contains(&j) || !covered(code, m, j)))
}

pub fn hash(code: &Code, s: usize) -> bool {
    subsets(code.size(), s).iter().all(|m| {
        (0..code.len()).any(|i| union_row(code, m, i).len() == s)
    })
}

/// Distinct unions over all tuples of sizes 1..=s.
pub fn at_most_s_separable(code: &Code, s: usize) -> bool {
    let mut seen: Vec<Vec<Vec<u8>>> = Vec::new();
    for k in 1..=s {
        for m in subsets(code.size(), k) {
            let u: Vec<Vec<u8>> = (0..code.len()).map(|i| union_row(code, &m, i)).collect();
            if seen.contains(&u) {
                return false;
            }
            seen.push(u);
        }
    }
    true
}

/// Probability that L uniform symbols all lie among s uniform symbols,
/// counted over every one of the q^(s+L) tuples.
pub fn p_term_enumerated(q: usize, s: usize, list_size: usize) -> BigRational {
    let len = s + list_size;
    let total = (q as u64).pow(len as u32);
    let mut good = 0u64;
    let mut word = vec![0usize; len];
    for mut idx in 0..total {
        for w in word.iter_mut() {
            *w = (idx % q as u64) as usize;
            idx /= q as u64;
        }
        let (head, tail) = word.split_at(s);
        if tail.iter().all(|a| head.contains(a)) {
            good += 1;
        }
    }
    BigRational::new(BigInt::from(good), BigInt::from(total))
}

pub fn random_code(rng: &mut ChaCha8Rng, q: usize, n: usize, t: usize) -> Code {
    let cols: Vec<Vec<u8>> = (0..t)
        .map(|_| (0..n).map(|_| rng.gen_range(0..q) as u8).collect())
        .collect();
    Code::from_columns(q, &cols).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
