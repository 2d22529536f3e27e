//! Random ensembles, alphabet reduction and maximal-code search.

use std::collections::HashSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::Distribution;
use crate::channel::ChannelSpec;
use crate::error::{Error, Result};
use crate::types::{Code, Combinations, MAX_Q};

#[derive(Debug, Clone, PartialEq)]
pub enum Ensemble {
    /// Independent entries drawn from `p`.
    CompletelyRandom(Distribution),
    /// Every codeword is a uniform random word with these symbol counts.
    FixedComposition(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub ensemble: Ensemble,
    pub n: usize,
    pub t: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn q(&self) -> usize {
        match &self.ensemble {
            Ensemble::CompletelyRandom(p) => p.q(),
            Ensemble::FixedComposition(counts) => counts.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.t == 0 {
            return Err(Error::params("N and t must be positive"));
        }
        if !(2..=MAX_Q).contains(&self.q()) {
            return Err(Error::params(format!("unsupported alphabet size {}", self.q())));
        }
        if let Ensemble::FixedComposition(counts) = &self.ensemble {
            let total: usize = counts.iter().sum();
            if total != self.n {
                return Err(Error::params(format!(
                    "composition sums to {total}, expected N={}",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

/// Random generator for codeword `column`: one ChaCha stream per column, so
/// columns can be drawn in any order or in parallel.
fn column_rng(seed: u64, column: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(column as u64);
    rng
}

fn sample(p: &[f64], u: f64) -> u8 {
    let mut acc = 0.0;
    for (a, &pa) in p.iter().enumerate() {
        acc += pa;
        if u < acc {
            return a as u8;
        }
    }
    // rounding left u above the final partial sum
    p.iter().rposition(|&pa| pa > 0.0).unwrap_or(0) as u8
}

/// Draws a code from the ensemble; deterministic given the seed.
pub fn random_code(spec: &EnsembleSpec) -> Result<Code> {
    spec.validate()?;
    let columns: Vec<Vec<u8>> = (0..spec.t)
        .into_par_iter()
        .map(|j| {
            let mut rng = column_rng(spec.seed, j);
            match &spec.ensemble {
                Ensemble::CompletelyRandom(p) => {
                    (0..spec.n).map(|_| sample(p.probs(), rng.gen())).collect()
                }
                Ensemble::FixedComposition(counts) => {
                    let mut word: Vec<u8> = counts
                        .iter()
                        .enumerate()
                        .flat_map(|(a, &c)| std::iter::repeat_n(a as u8, c))
                        .collect();
                    word.shuffle(&mut rng);
                    word
                }
            }
        })
        .collect();
    Code::from_columns(spec.q(), &columns)
}

/// Inner-code length `ceil(q' / (q - 1))` used by [`reduce_alphabet`].
pub fn reduction_length(qprime: usize, q: usize) -> Result<usize> {
    if q < 2 || q >= qprime {
        return Err(Error::params(format!(
            "need 2 <= q < q', got q={q}, q'={qprime}"
        )));
    }
    Ok(qprime.div_ceil(q - 1))
}

/// Image of symbol `a` under the canonical inner code: the length-`l` word
/// with value `a / l + 1` at position `a % l` and zeros elsewhere.
pub fn inner_word(a: usize, l: usize) -> Vec<u8> {
    let mut word = vec![0u8; l];
    word[a % l] = (a / l + 1) as u8;
    word
}

/// Replaces every symbol of a q'-ary code by its inner word over `q` symbols.
/// List-decoding codes stay list-decoding with the same `(s, L)`.
pub fn reduce_alphabet(code: &Code, q: usize) -> Result<Code> {
    let l = reduction_length(code.q(), q)?;
    let images: Vec<Vec<u8>> = (0..code.q()).map(|a| inner_word(a, l)).collect();
    let columns: Vec<Vec<u8>> = code
        .columns()
        .map(|col| col.iter().flat_map(|&a| images[a as usize].iter().copied()).collect())
        .collect();
    Code::from_columns(q, &columns)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Greedy,
}

/// Largest number of candidate columns the exhaustive search accepts.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 20;
/// Largest number of candidate columns the greedy search will shuffle.
pub const GREEDY_LIMIT: u128 = 1 << 24;

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub mode: SearchMode,
    pub t_star: usize,
    /// Columns of the best code found, in increasing lexicographic order.
    #[serde(skip)]
    pub code: Code,
    pub nodes: u64,
    pub wall_time_ms: f64,
}

/// Incremental s-separability state for a growing set of candidate columns.
struct Builder<'a> {
    channel: &'a ChannelSpec,
    columns: &'a [Vec<u8>],
    s: usize,
    n: usize,
    chosen: Vec<usize>,
    outputs: HashSet<Vec<u128>>,
    /// Outputs inserted at each depth, for backtracking.
    inserted: Vec<Vec<Vec<u128>>>,
    girth: Option<GirthTracker>,
}

/// Split graph of the chosen columns at row `split`, used as a cheap
/// necessary test before the full collision check.
struct GirthTracker {
    split_radix: usize,
    adj: Vec<Vec<usize>>,
    left_nodes: usize,
}

impl GirthTracker {
    fn new(q: usize, n: usize) -> Option<Self> {
        if n < 2 {
            return None;
        }
        let split = n / 2;
        let left = q.pow(split as u32);
        let right = q.pow((n - split) as u32);
        Some(Self {
            split_radix: right,
            adj: vec![Vec::new(); left + right],
            left_nodes: left,
        })
    }

    fn ends(&self, column: usize) -> (usize, usize) {
        (column / self.split_radix, self.left_nodes + column % self.split_radix)
    }

    /// Whether adding the edge would close a cycle of length at most `limit`.
    fn closes_short_cycle(&self, column: usize, limit: usize) -> bool {
        if limit < 2 {
            return false;
        }
        let (u, v) = self.ends(column);
        // a path of length d from u to v plus the new edge is a (d+1)-cycle
        let max_depth = limit - 1;
        let mut seen = HashSet::from([u]);
        let mut frontier = vec![u];
        for _ in 0..max_depth {
            let mut next = Vec::new();
            for &x in &frontier {
                for &y in &self.adj[x] {
                    if y == v {
                        return true;
                    }
                    if seen.insert(y) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        false
    }

    fn push(&mut self, column: usize) {
        let (u, v) = self.ends(column);
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    fn pop(&mut self, column: usize) {
        let (u, v) = self.ends(column);
        self.adj[u].pop();
        self.adj[v].pop();
    }
}

impl<'a> Builder<'a> {
    fn new(channel: &'a ChannelSpec, columns: &'a [Vec<u8>], n: usize, use_girth: bool) -> Self {
        Self {
            channel,
            columns,
            s: channel.s(),
            n,
            chosen: Vec::new(),
            outputs: HashSet::new(),
            inserted: Vec::new(),
            girth: if use_girth {
                GirthTracker::new(channel.q(), n)
            } else {
                None
            },
        }
    }

    fn output(&self, members: &[usize], extra: usize, buf: &mut [u8]) -> Vec<u128> {
        (0..self.n)
            .map(|row| {
                for (b, &j) in buf.iter_mut().zip(members) {
                    *b = self.columns[self.chosen[j]][row];
                }
                buf[members.len()] = self.columns[extra][row];
                self.channel.key_of_word(buf)
            })
            .collect()
    }

    /// Adds `column` if the enlarged set is still s-separable.
    fn try_push(&mut self, column: usize) -> bool {
        let size = self.chosen.len() + 1;
        if let Some(g) = &self.girth {
            if size > self.s && g.closes_short_cycle(column, crate::verify::forbidden_cycle_limit(size, self.s)) {
                return false;
            }
        }
        let mut fresh: Vec<Vec<u128>> = Vec::new();
        let mut buf = vec![0u8; self.s];
        let mut ok = true;
        for members in Combinations::new(self.chosen.len(), self.s - 1) {
            let word = self.output(&members, column, &mut buf);
            if self.outputs.contains(&word) || fresh.contains(&word) {
                ok = false;
                break;
            }
            fresh.push(word);
        }
        if !ok {
            return false;
        }
        for w in &fresh {
            self.outputs.insert(w.clone());
        }
        self.inserted.push(fresh);
        self.chosen.push(column);
        if let Some(g) = &mut self.girth {
            g.push(column);
        }
        true
    }

    fn pop(&mut self) {
        let column = self.chosen.pop().expect("non-empty");
        for w in self.inserted.pop().expect("non-empty") {
            self.outputs.remove(&w);
        }
        if let Some(g) = &mut self.girth {
            g.pop(column);
        }
    }
}

fn all_columns(q: usize, n: usize) -> Vec<Vec<u8>> {
    let total = q.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut col = vec![0u8; n];
            for slot in col.iter_mut().rev() {
                *slot = (idx % q) as u8;
                idx /= q;
            }
            col
        })
        .collect()
}

/// Largest s-separable code of length `n` for `channel`.
///
/// Exhaustive mode is exact and returns the lexicographically smallest
/// maximum code; greedy mode returns a maximal code built from a seeded
/// random column order.
pub fn max_code_search(channel: &ChannelSpec, n: usize, mode: SearchMode, seed: u64) -> Result<SearchResult> {
    let q = channel.q();
    if n == 0 {
        return Err(Error::params("N must be positive"));
    }
    let limit = match mode {
        SearchMode::Exhaustive => EXHAUSTIVE_LIMIT,
        SearchMode::Greedy => GREEDY_LIMIT,
    };
    let candidates = (q as u128).checked_pow(n as u32).filter(|&c| c <= limit);
    let Some(_) = candidates else {
        return Err(Error::TooLarge(format!(
            "q^N = {q}^{n} candidate columns exceeds the {mode:?} limit of {limit}"
        )));
    };
    let columns = all_columns(q, n);
    let start = Instant::now();
    let (chosen, nodes) = match mode {
        SearchMode::Exhaustive => branch_and_bound(channel, &columns, n),
        SearchMode::Greedy => greedy(channel, &columns, n, seed),
    };
    let picked: Vec<Vec<u8>> = chosen.iter().map(|&c| columns[c].clone()).collect();
    Ok(SearchResult {
        mode,
        t_star: picked.len(),
        code: Code::from_columns(q, &picked)?,
        nodes,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn branch_and_bound(channel: &ChannelSpec, columns: &[Vec<u8>], n: usize) -> (Vec<usize>, u64) {
    let total = columns.len();
    let mut builder = Builder::new(channel, columns, n, true);
    let mut best: Vec<usize> = Vec::new();
    let mut nodes = 0u64;
    // next candidate to try at each depth
    let mut next = vec![0usize];
    while let Some(&cand) = next.last() {
        let depth = builder.chosen.len();
        if cand >= total || depth + (total - cand) <= best.len() {
            next.pop();
            if !next.is_empty() {
                builder.pop();
            }
            continue;
        }
        *next.last_mut().expect("non-empty") += 1;
        nodes += 1;
        if builder.try_push(cand) {
            if builder.chosen.len() > best.len() {
                best = builder.chosen.clone();
            }
            next.push(cand + 1);
        }
    }
    (best, nodes)
}

fn greedy(channel: &ChannelSpec, columns: &[Vec<u8>], n: usize, seed: u64) -> (Vec<usize>, u64) {
    let mut order: Vec<usize> = (0..columns.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut builder = Builder::new(channel, columns, n, false);
    for &c in &order {
        builder.try_push(c);
    }
    let mut chosen = builder.chosen;
    chosen.sort_unstable();
    (chosen, order.len() as u64)
}
