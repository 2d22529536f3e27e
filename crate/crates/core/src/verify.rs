//! Exact verification of code properties with counterexample witnesses.
//!
//! Every verifier enumerates tuples in lexicographic order and reports the
//! lexicographically smallest witness, independent of how many worker
//! threads computed the output words.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{output_word, ChannelSpec, OutputSymbol};
use crate::error::{Error, Result};
use crate::types::{binomial, message_unchecked, AlphabetSubset, Code, Combinations, Message};

#[derive(Debug, Clone, Serialize, PartialEq, Default)]
pub struct VerdictParams {
    pub q: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub t: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub list_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<usize>,
}

impl VerdictParams {
    fn of(code: &Code) -> Self {
        Self {
            q: code.q(),
            n: code.len(),
            t: code.size(),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Two messages with equal channel output.
    MessagePair { first: Message, second: Message },
    /// Two tuples (possibly of different sizes) with equal unions.
    TuplePair { first: Message, second: Message },
    /// A codeword covered by the union of a tuple it does not belong to.
    Covered {
        tuple: Message,
        #[serde(serialize_with = "one_based")]
        codeword: usize,
    },
    /// A tuple with no coordinate where all its symbols differ.
    NoDistinctCoordinate { tuple: Message },
    /// A tuple whose union covers too many outside codewords.
    ListOverflow {
        tuple: Message,
        #[serde(serialize_with = "one_based_vec")]
        covered: Vec<usize>,
    },
    /// A short cycle in the split graph and the message pair it yields.
    Cycle {
        #[serde(serialize_with = "one_based_vec")]
        codewords: Vec<usize>,
        first: Message,
        second: Message,
    },
}

fn one_based<S: serde::Serializer>(j: &usize, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(*j as u64 + 1)
}

fn one_based_vec<S: serde::Serializer>(
    v: &[usize],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|j| j + 1))
}

/// Outcome of a verifier. `holds == false` always comes with a witness.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Verdict {
    pub property: String,
    pub params: VerdictParams,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colliding_output: Option<Vec<String>>,
}

impl Verdict {
    fn new(property: &str, params: VerdictParams, witness: Option<Witness>) -> Self {
        Self {
            property: property.to_string(),
            params,
            holds: witness.is_none(),
            witness,
            colliding_output: None,
        }
    }
}

fn all_tuples(t: usize, s: usize) -> Vec<Vec<usize>> {
    Combinations::new(t, s).collect()
}

fn check_s(code: &Code, s: usize, strict: bool) -> Result<()> {
    let t = code.size();
    if s == 0 {
        return Err(Error::params("s must be at least 1"));
    }
    if strict && s >= t {
        return Err(Error::params(format!("need s < t, got s={s}, t={t}")));
    }
    if !strict && s > t {
        return Err(Error::params(format!("need s <= t, got s={s}, t={t}")));
    }
    Ok(())
}

struct Group {
    first: usize,
    second: Option<usize>,
    count: usize,
}

/// Groups all s-messages by output word. Returns the messages in
/// lexicographic order and the collision groups (by message position).
fn collision_groups(code: &Code, s: usize, channel: &ChannelSpec) -> (Vec<Vec<usize>>, Vec<Group>) {
    let messages = all_tuples(code.size(), s);
    let keys: Vec<Vec<u128>> = messages
        .par_iter()
        .map_init(Vec::new, |buf, m| {
            channel.output_keys(code, m, buf);
            buf.clone()
        })
        .collect();
    let mut slot: HashMap<&[u128], usize> = HashMap::with_capacity(keys.len());
    let mut groups: Vec<Group> = Vec::new();
    for (pos, key) in keys.iter().enumerate() {
        match slot.entry(key.as_slice()) {
            Entry::Occupied(e) => {
                let g = &mut groups[*e.get()];
                g.count += 1;
                if g.second.is_none() {
                    g.second = Some(pos);
                }
            }
            Entry::Vacant(e) => {
                e.insert(groups.len());
                groups.push(Group {
                    first: pos,
                    second: None,
                    count: 1,
                });
            }
        }
    }
    (messages, groups)
}

fn check_channel(code: &Code, s: usize, channel: &ChannelSpec) -> Result<()> {
    channel.check_code(code)?;
    if channel.s() != s {
        return Err(Error::DimensionMismatch(format!(
            "channel is defined for s={} but s={s} was requested",
            channel.s()
        )));
    }
    Ok(())
}

/// s-separability: all output words of s-messages are distinct.
pub fn is_separable(code: &Code, s: usize, channel: &ChannelSpec) -> Result<Verdict> {
    check_s(code, s, true)?;
    check_channel(code, s, channel)?;
    let (messages, groups) = collision_groups(code, s, channel);
    let pair = groups
        .iter()
        .filter_map(|g| g.second.map(|second| (g.first, second)))
        .min();
    let mut params = VerdictParams::of(code);
    params.s = Some(s);
    params.channel = Some(channel.kind().name());
    let witness = pair.map(|(a, b)| Witness::MessagePair {
        first: message_unchecked(messages[a].clone()),
        second: message_unchecked(messages[b].clone()),
    });
    let mut verdict = Verdict::new("separable", params, witness);
    if let Some((a, _)) = pair {
        let word = output_word(channel, code, &message_unchecked(messages[a].clone()))?;
        verdict.colliding_output = Some(word.iter().map(OutputSymbol::to_string).collect());
    }
    Ok(verdict)
}

fn union_masks(code: &Code, tuple: &[usize], out: &mut Vec<u128>) {
    out.clear();
    out.extend((0..code.len()).map(|row| {
        tuple
            .iter()
            .fold(0u128, |m, &j| m | 1u128 << code.get(row, j))
    }));
}

fn covers(code: &Code, masks: &[u128], j: usize) -> bool {
    masks
        .iter()
        .enumerate()
        .all(|(row, &m)| m >> code.get(row, j) & 1 == 1)
}

/// (<= s)-separability: unions of any two distinct tuples of sizes 1..=s
/// differ somewhere. Tuples are ordered by size, then lexicographically.
pub fn is_at_most_s_separable(code: &Code, s: usize) -> Result<Verdict> {
    check_s(code, s, false)?;
    let tuples: Vec<Vec<usize>> = (1..=s).flat_map(|k| all_tuples(code.size(), k)).collect();
    let masks: Vec<Vec<u128>> = tuples
        .par_iter()
        .map(|tuple| {
            let mut m = Vec::new();
            union_masks(code, tuple, &mut m);
            m
        })
        .collect();
    let mut first_of: HashMap<&[u128], usize> = HashMap::new();
    let mut best: Option<(usize, usize)> = None;
    for (pos, m) in masks.iter().enumerate() {
        match first_of.entry(m.as_slice()) {
            Entry::Occupied(e) => {
                let cand = (*e.get(), pos);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
            Entry::Vacant(e) => {
                e.insert(pos);
            }
        }
    }
    let mut params = VerdictParams::of(code);
    params.s = Some(s);
    let witness = best.map(|(a, b)| Witness::TuplePair {
        first: message_unchecked(tuples[a].clone()),
        second: message_unchecked(tuples[b].clone()),
    });
    let mut verdict = Verdict::new("le_separable", params, witness);
    if let Some((a, _)) = best {
        verdict.colliding_output = Some(
            masks[a]
                .iter()
                .map(|&m| AlphabetSubset::from_mask(m).to_string())
                .collect(),
        );
    }
    Ok(verdict)
}

/// s-frameproof: no codeword outside an s-tuple is covered by its union.
pub fn is_frameproof(code: &Code, s: usize) -> Result<Verdict> {
    check_s(code, s, true)?;
    let t = code.size();
    let witness = all_tuples(t, s).into_par_iter().find_map_first(|tuple| {
        let mut masks = Vec::new();
        union_masks(code, &tuple, &mut masks);
        (0..t)
            .filter(|j| tuple.binary_search(j).is_err())
            .find(|&j| covers(code, &masks, j))
            .map(|codeword| Witness::Covered {
                tuple: message_unchecked(tuple.clone()),
                codeword,
            })
    });
    let mut params = VerdictParams::of(code);
    params.s = Some(s);
    Ok(Verdict::new("frameproof", params, witness))
}

/// s-hash: every s-tuple has a coordinate where its symbols are all distinct.
pub fn is_hash(code: &Code, s: usize) -> Result<Verdict> {
    if code.q() < s {
        return Err(Error::params(format!(
            "hash codes need q >= s, got q={}, s={s}",
            code.q()
        )));
    }
    check_s(code, s, false)?;
    let witness = all_tuples(code.size(), s)
        .into_par_iter()
        .find_first(|tuple| {
            !(0..code.len()).any(|row| {
                let mut seen = 0u128;
                tuple.iter().all(|&j| {
                    let bit = 1u128 << code.get(row, j);
                    let fresh = seen & bit == 0;
                    seen |= bit;
                    fresh
                })
            })
        })
        .map(|tuple| Witness::NoDistinctCoordinate {
            tuple: message_unchecked(tuple),
        });
    let mut params = VerdictParams::of(code);
    params.s = Some(s);
    Ok(Verdict::new("hash", params, witness))
}

/// List-decoding (s, L): the union of any s codewords covers at most `L - 1`
/// other codewords.
pub fn is_list_decoding(code: &Code, s: usize, list_size: usize) -> Result<Verdict> {
    if list_size == 0 {
        return Err(Error::params("L must be at least 1"));
    }
    check_s(code, s, false)?;
    let t = code.size();
    let witness = all_tuples(t, s).into_par_iter().find_map_first(|tuple| {
        let mut masks = Vec::new();
        union_masks(code, &tuple, &mut masks);
        let covered: Vec<usize> = (0..t)
            .filter(|j| tuple.binary_search(j).is_err() && covers(code, &masks, *j))
            .collect();
        (covered.len() >= list_size).then(|| Witness::ListOverflow {
            tuple: message_unchecked(tuple.clone()),
            covered,
        })
    });
    let mut params = VerdictParams::of(code);
    params.s = Some(s);
    params.list_size = Some(list_size);
    Ok(Verdict::new("list_decoding", params, witness))
}

/// Factor decoding: all codewords (0-based) covered by the subset word `z`.
pub fn factor_decode(code: &Code, z: &[AlphabetSubset]) -> Result<Vec<usize>> {
    if z.len() != code.len() {
        return Err(Error::DimensionMismatch(format!(
            "output word has length {}, code has N={}",
            z.len(),
            code.len()
        )));
    }
    let masks: Vec<u128> = z.iter().map(AlphabetSubset::mask).collect();
    Ok((0..code.size()).filter(|&j| covers(code, &masks, j)).collect())
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ErrorFractionReport {
    pub bad_count: u128,
    pub total: u128,
    /// `bad_count / total` as a reduced "num/den" string.
    pub epsilon: String,
    pub epsilon_value: f64,
}

impl ErrorFractionReport {
    fn new(bad_count: u128, total: u128) -> Self {
        let ratio = Ratio::new(bad_count, total.max(1));
        Self {
            bad_count,
            total,
            epsilon: format!("{}/{}", ratio.numer(), ratio.denom()),
            epsilon_value: bad_count as f64 / total.max(1) as f64,
        }
    }
}

/// Fraction of bad messages: those whose output word is shared by another.
pub fn error_fraction(code: &Code, s: usize, channel: &ChannelSpec) -> Result<ErrorFractionReport> {
    check_s(code, s, true)?;
    check_channel(code, s, channel)?;
    let (_, groups) = collision_groups(code, s, channel);
    let bad = groups
        .iter()
        .filter(|g| g.count > 1)
        .map(|g| g.count as u128)
        .sum();
    Ok(ErrorFractionReport::new(
        bad,
        binomial(code.size() as u64, s as u64),
    ))
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LRareReport {
    pub count: usize,
    pub flags: Vec<bool>,
}

/// L-rare census. A codeword is L-rare when some cyclic window of `L`
/// consecutive rows is shared by at most `L - 1` other codewords.
pub fn count_l_rare(code: &Code, list_size: usize) -> Result<LRareReport> {
    if list_size == 0 {
        return Err(Error::params("L must be at least 1"));
    }
    let (n, t) = (code.len(), code.size());
    let mut flags = vec![false; t];
    for start in 0..n {
        let projections: Vec<Vec<u8>> = (0..t)
            .map(|j| {
                (0..list_size)
                    .map(|k| code.get((start + k) % n, j))
                    .collect()
            })
            .collect();
        let mut counts: HashMap<&[u8], usize> = HashMap::new();
        for p in &projections {
            *counts.entry(p.as_slice()).or_default() += 1;
        }
        for (j, p) in projections.iter().enumerate() {
            if counts[p.as_slice()] - 1 < list_size {
                flags[j] = true;
            }
        }
    }
    Ok(LRareReport {
        count: flags.iter().filter(|&&f| f).count(),
        flags,
    })
}

/// Bipartite split graph: prefixes (rows `..split`) on the left, suffixes on
/// the right, one edge per codeword.
struct SplitGraph {
    /// `adj[v]` lists `(neighbour, edge)` with increasing edge index.
    adj: Vec<Vec<(usize, usize)>>,
    ends: Vec<(usize, usize)>,
}

impl SplitGraph {
    fn new(code: &Code, split: usize) -> Self {
        let mut left: HashMap<&[u8], usize> = HashMap::new();
        let mut right: HashMap<&[u8], usize> = HashMap::new();
        let mut raw = Vec::with_capacity(code.size());
        for col in code.columns() {
            let (p, q) = col.split_at(split);
            let l = left.len();
            let u = *left.entry(p).or_insert(l);
            let r = right.len();
            let v = *right.entry(q).or_insert(r);
            raw.push((u, v));
        }
        let offset = left.len();
        let mut adj = vec![Vec::new(); offset + right.len()];
        let ends: Vec<(usize, usize)> = raw.into_iter().map(|(u, v)| (u, v + offset)).collect();
        for (e, &(u, v)) in ends.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        Self { adj, ends }
    }

    /// Shortest cycle through `edge` of length at most `limit`, as an edge list
    /// starting with `edge`.
    fn cycle_through(&self, edge: usize, limit: usize) -> Option<Vec<usize>> {
        let (src, dst) = self.ends[edge];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.adj.len()];
        let mut dist = vec![usize::MAX; self.adj.len()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            if dist[u] + 1 >= limit {
                continue;
            }
            for &(w, e) in &self.adj[u] {
                if e == edge || dist[w] != usize::MAX {
                    continue;
                }
                dist[w] = dist[u] + 1;
                parent[w] = Some((u, e));
                if w == dst {
                    let mut path = vec![edge];
                    let mut cur = dst;
                    while let Some((p, e)) = parent[cur] {
                        path.push(e);
                        cur = p;
                    }
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
        None
    }

    /// A shortest cycle of length at most `limit`; ties go to the smallest
    /// starting edge.
    fn shortest_cycle(&self, limit: usize) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        for e in 0..self.ends.len() {
            let bound = best.as_ref().map_or(limit, |b| b.len() - 1);
            if bound < 2 {
                break;
            }
            if let Some(c) = self.cycle_through(e, bound) {
                best = Some(c);
            }
        }
        best
    }
}

/// Length bound `2 * min(s, t - s)` on cycles that force a collision: a cycle
/// of length `2l` needs `s - l` further codewords outside it.
pub fn forbidden_cycle_limit(t: usize, s: usize) -> usize {
    2 * s.min(t.saturating_sub(s))
}

/// Necessary condition for s-separability under any symmetric channel: the
/// split graph at row `split` (1-based; the prefix is rows `1..=split`) has no
/// cycle of length `2l` with `l <= min(s, t - s)`.
pub fn split_graph_girth_check(code: &Code, s: usize, split: usize) -> Result<Verdict> {
    if s == 0 {
        return Err(Error::params("s must be at least 1"));
    }
    if split == 0 || split >= code.len() {
        return Err(Error::params(format!(
            "split must be in 1..{}, got {split}",
            code.len()
        )));
    }
    let t = code.size();
    let graph = SplitGraph::new(code, split);
    let limit = forbidden_cycle_limit(t, s);
    let witness = graph.shortest_cycle(limit).map(|cycle| {
        let (odd, even): (Vec<_>, Vec<_>) =
            cycle.iter().copied().enumerate().partition(|(k, _)| k % 2 == 0);
        let half = cycle.len() / 2;
        let filler: Vec<usize> = (0..t).filter(|j| !cycle.contains(j)).take(s - half).collect();
        let build = |part: Vec<(usize, usize)>| {
            let mut v: Vec<usize> = part.into_iter().map(|(_, e)| e).chain(filler.iter().copied()).collect();
            v.sort_unstable();
            message_unchecked(v)
        };
        let (first, second) = {
            let (a, b) = (build(odd), build(even));
            if a <= b { (a, b) } else { (b, a) }
        };
        Witness::Cycle {
            codewords: cycle,
            first,
            second,
        }
    });
    let mut params = VerdictParams::of(code);
    params.s = Some(s);
    params.split = Some(split);
    Ok(Verdict::new("split_graph_girth", params, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelKind;

    fn code(cols: &[&[u8]], q: usize) -> Code {
        Code::from_columns(q, &cols.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn msg(v: &[usize]) -> Message {
        Message::from_one_based(v).unwrap()
    }

    fn bmac(s: usize, q: usize) -> ChannelSpec {
        ChannelSpec::builtin(ChannelKind::B, s, q).unwrap()
    }

    #[test]
    fn separable_examples() {
        let c3 = code(&[&[0, 0], &[0, 1], &[1, 0]], 2);
        assert!(is_separable(&c3, 2, &bmac(2, 2)).unwrap().holds);

        let c4 = code(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]], 2);
        let v = is_separable(&c4, 2, &bmac(2, 2)).unwrap();
        assert!(!v.holds);
        assert_eq!(
            v.witness,
            Some(Witness::MessagePair {
                first: msg(&[1, 4]),
                second: msg(&[2, 3])
            })
        );
        assert_eq!(v.colliding_output.unwrap(), vec!["(1,1)", "(1,1)"]);

        let dup = code(&[&[1, 0], &[1, 0], &[0, 1]], 2);
        for kind in [ChannelKind::A, ChannelKind::B, ChannelKind::Disjunctive] {
            let ch = ChannelSpec::builtin(kind, 2, 2).unwrap();
            let v = is_separable(&dup, 2, &ch).unwrap();
            assert_eq!(
                v.witness,
                Some(Witness::MessagePair {
                    first: msg(&[1, 3]),
                    second: msg(&[2, 3])
                })
            );
        }
    }

    #[test]
    fn separable_errors() {
        let c = code(&[&[0, 0], &[0, 1]], 2);
        assert!(is_separable(&c, 2, &bmac(2, 2)).is_err());
        let c = code(&[&[0, 0], &[0, 1], &[1, 1]], 2);
        assert!(is_separable(&c, 2, &bmac(2, 3)).is_err());
        assert!(is_separable(&c, 2, &bmac(1, 2)).is_err());
    }

    #[test]
    fn le_separable_examples() {
        // 1-vs-1, 1-vs-2 and 2-vs-2 comparisons all distinguished
        let c = code(&[&[0, 0], &[1, 1]], 2);
        assert!(is_at_most_s_separable(&c, 2).unwrap().holds);
        assert!(is_at_most_s_separable(&c, 3).is_err());

        let c = code(&[&[0, 0], &[0, 1], &[1, 1], &[1, 0]], 2);
        let v = is_at_most_s_separable(&c, 2).unwrap();
        assert_eq!(
            v.witness,
            Some(Witness::TuplePair {
                first: msg(&[1, 3]),
                second: msg(&[2, 4])
            })
        );
        assert_eq!(v.colliding_output.unwrap(), vec!["{0,1}", "{0,1}"]);

        let c = code(&[&[0, 1], &[1, 0]], 2);
        assert!(is_at_most_s_separable(&c, 1).unwrap().holds);
    }

    #[test]
    fn le_separable_two_codewords_compare_all_sizes() {
        // columns (0,0),(1,1) with s=2: 1-vs-1, 1-vs-2, 2-vs-2 comparisons.
        // With t = 2 the size-2 tuple is unique, so add a third column far away.
        let c = code(&[&[0, 0, 0], &[1, 1, 0], &[2, 2, 2]], 3);
        assert!(is_at_most_s_separable(&c, 2).unwrap().holds);
    }

    #[test]
    fn frameproof_examples() {
        let c = code(&[&[0, 0], &[1, 1]], 2);
        assert!(is_frameproof(&c, 1).unwrap().holds);
        let c = code(&[&[0, 0], &[0, 1], &[1, 1]], 2);
        let v = is_frameproof(&c, 2).unwrap();
        assert_eq!(
            v.witness,
            Some(Witness::Covered {
                tuple: msg(&[1, 3]),
                codeword: 1
            })
        );
        let c = code(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], 2);
        // t = 3 with s = 2: each unit column has its 1 outside the others' unions
        assert!(is_frameproof(&c, 2).unwrap().holds);
    }

    #[test]
    fn frameproof_repeated_column_fails() {
        let c = code(&[&[0, 1], &[0, 1], &[1, 1]], 2);
        let v = is_frameproof(&c, 1).unwrap();
        assert_eq!(
            v.witness,
            Some(Witness::Covered {
                tuple: msg(&[1]),
                codeword: 1
            })
        );
    }

    #[test]
    fn hash_examples() {
        let c = code(&[&[0], &[1], &[2]], 3);
        assert!(is_hash(&c, 3).unwrap().holds);
        let c2 = code(&[&[0], &[1], &[1]], 2);
        assert!(matches!(is_hash(&c2, 3), Err(Error::InvalidParameters(_))));
        let c = code(&[&[0, 0], &[0, 1], &[1, 1]], 3);
        let v = is_hash(&c, 3).unwrap();
        assert_eq!(
            v.witness,
            Some(Witness::NoDistinctCoordinate {
                tuple: msg(&[1, 2, 3])
            })
        );
    }

    #[test]
    fn list_decoding_examples() {
        let c = code(&[&[0, 0], &[1, 1]], 2);
        assert!(is_list_decoding(&c, 2, 1).unwrap().holds);
        let c = code(&[&[0, 0], &[1, 1], &[0, 1]], 2);
        let v = is_list_decoding(&c, 2, 1).unwrap();
        assert_eq!(
            v.witness,
            Some(Witness::ListOverflow {
                tuple: msg(&[1, 2]),
                covered: vec![2]
            })
        );
        assert!(is_list_decoding(&c, 2, 2).unwrap().holds);
        assert!(is_list_decoding(&c, 2, 0).is_err());
        assert!(is_list_decoding(&c, 4, 1).is_err());
    }

    #[test]
    fn factor_decode_examples() {
        let c = code(&[&[0, 0], &[1, 1], &[0, 1]], 2);
        let z = vec![
            AlphabetSubset::new(vec![0, 1], 2).unwrap(),
            AlphabetSubset::new(vec![1], 2).unwrap(),
        ];
        assert_eq!(factor_decode(&c, &z).unwrap(), vec![1, 2]);
        let full = vec![AlphabetSubset::full(2); 2];
        assert_eq!(factor_decode(&c, &full).unwrap(), vec![0, 1, 2]);
        for j in 0..3 {
            let z: Vec<AlphabetSubset> = c
                .column(j)
                .iter()
                .map(|&a| AlphabetSubset::new(vec![a], 2).unwrap())
                .collect();
            assert_eq!(factor_decode(&c, &z).unwrap(), vec![j]);
        }
        assert!(factor_decode(&c, &full[..1]).is_err());
    }

    #[test]
    fn error_fraction_examples() {
        let same = code(&[&[0, 1], &[0, 1], &[0, 1], &[0, 1]], 2);
        let r = error_fraction(&same, 2, &bmac(2, 2)).unwrap();
        assert_eq!((r.bad_count, r.total, r.epsilon.as_str()), (6, 6, "1/1"));

        let c3 = code(&[&[0, 0], &[0, 1], &[1, 0]], 2);
        assert_eq!(error_fraction(&c3, 2, &bmac(2, 2)).unwrap().bad_count, 0);

        let c4 = code(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]], 2);
        let r = error_fraction(&c4, 2, &bmac(2, 2)).unwrap();
        assert_eq!((r.bad_count, r.total, r.epsilon.as_str()), (2, 6, "1/3"));
    }

    #[test]
    fn l_rare_examples() {
        let c = code(&[&[0], &[1], &[1]], 2);
        let r = count_l_rare(&c, 1).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.flags, vec![true, false, false]);

        let same = code(&[&[1u8, 0, 1][..]; 4], 2);
        assert_eq!(count_l_rare(&same, 3).unwrap().count, 0);
        assert_eq!(count_l_rare(&same, 4).unwrap().count, 4);
    }

    #[test]
    fn l_rare_windows_wrap() {
        // N = 3, L = 2: the window starting at row 3 covers rows 3 and 1.
        // Codeword 1 is unique only on rows (3,1).
        let c = code(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0], &[1, 0, 0], &[1, 1, 0], &[1, 1, 0]], 2);
        let r = count_l_rare(&c, 2).unwrap();
        assert!(r.flags[0]);
    }

    #[test]
    fn girth_examples() {
        let k22 = code(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]], 2);
        let v = split_graph_girth_check(&k22, 2, 1).unwrap();
        assert!(!v.holds);
        match v.witness.unwrap() {
            Witness::Cycle {
                codewords,
                first,
                second,
            } => {
                assert_eq!(codewords.len(), 4);
                assert_eq!((first, second), (msg(&[1, 4]), msg(&[2, 3])));
            }
            other => panic!("unexpected witness {other:?}"),
        }
        let c3 = code(&[&[0, 0], &[0, 1], &[1, 0]], 2);
        assert!(split_graph_girth_check(&c3, 2, 1).unwrap().holds);
        let single = code(&[&[0, 1, 1]], 2);
        assert!(split_graph_girth_check(&single, 2, 1).unwrap().holds);
        assert!(split_graph_girth_check(&c3, 2, 0).is_err());
        assert!(split_graph_girth_check(&c3, 2, 2).is_err());
    }

    #[test]
    fn girth_respects_available_filler() {
        // K_{2,2} with s = 3: a 4-cycle would need one more codeword outside it,
        // and this code is in fact 3-separable for the B channel.
        let k22 = code(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]], 2);
        assert!(is_separable(&k22, 3, &bmac(3, 2)).unwrap().holds);
        assert!(split_graph_girth_check(&k22, 3, 1).unwrap().holds);
        assert_eq!(forbidden_cycle_limit(4, 3), 2);
    }

    #[test]
    fn parallel_edges_are_two_cycles() {
        let c = code(&[&[0, 1], &[0, 1], &[1, 1]], 2);
        let v = split_graph_girth_check(&c, 1, 1).unwrap();
        match v.witness.unwrap() {
            Witness::Cycle { codewords, .. } => assert_eq!(codewords, vec![0, 1]),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn witness_is_independent_of_thread_count() {
        let cols: Vec<Vec<u8>> = (0..9u8).map(|j| vec![j % 3, (j / 3) % 3, (j * 2) % 3]).collect();
        let c = Code::from_columns(3, &cols).unwrap();
        let ch = ChannelSpec::builtin(ChannelKind::A, 2, 3).unwrap();
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = single.install(|| is_separable(&c, 2, &ch).unwrap());
        let b = many.install(|| is_separable(&c, 2, &ch).unwrap());
        assert_eq!(a, b);
        let a = single.install(|| is_list_decoding(&c, 2, 1).unwrap());
        let b = many.install(|| is_list_decoding(&c, 2, 1).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn verdict_json_shape() {
        let c4 = code(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]], 2);
        let v = is_separable(&c4, 2, &bmac(2, 2)).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["property"], "separable");
        assert_eq!(json["holds"], false);
        assert_eq!(json["params"]["channel"], "B");
        assert_eq!(json["witness"]["first"], serde_json::json!([1, 4]));
        assert_eq!(json["colliding_output"][0], "(1,1)");
    }
}
