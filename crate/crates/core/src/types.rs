//! Value types shared by every module: alphabets, codes, messages,
//! compositions and alphabet subsets, plus the type and union operators.
//!
//! Codeword indices are 0-based inside the library. Everything that faces a
//! user (files, JSON, `Display`) renders them 1-based.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported alphabet. Unions are kept as `u128` bit masks.
pub const MAX_Q: usize = 128;

/// The q-ary alphabet `{0, .., q-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    q: usize,
}

impl Alphabet {
    pub fn new(q: usize) -> Result<Self> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::params(format!(
                "alphabet size must be in 2..={MAX_Q}, got {q}"
            )));
        }
        Ok(Self { q })
    }

    pub fn size(&self) -> usize {
        self.q
    }

    pub fn check(&self, symbol: usize) -> Result<u8> {
        if symbol < self.q {
            Ok(symbol as u8)
        } else {
            Err(Error::InvalidSymbol {
                symbol,
                q: self.q,
            })
        }
    }
}

/// A q-ary code of length `N` and size `t`, stored column-major: column `j`
/// is the codeword `x(j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Code {
    q: usize,
    n: usize,
    t: usize,
    data: Vec<u8>,
}

impl Code {
    /// Builds a code from its codewords (columns).
    pub fn from_columns(q: usize, columns: &[Vec<u8>]) -> Result<Self> {
        let alphabet = Alphabet::new(q)?;
        let t = columns.len();
        if t == 0 {
            return Err(Error::params("a code needs at least one codeword"));
        }
        let n = columns[0].len();
        if n == 0 {
            return Err(Error::params("a code needs length at least 1"));
        }
        let mut data = Vec::with_capacity(n * t);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "codeword {} has length {}, expected {n}",
                    j + 1,
                    col.len()
                )));
            }
            for &a in col {
                alphabet.check(a as usize)?;
            }
            data.extend_from_slice(col);
        }
        Ok(Self { q, n, t, data })
    }

    /// Builds a code from its rows: `rows[i][j] = x_i(j)`.
    pub fn from_rows(q: usize, rows: &[Vec<u8>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::params("a code needs length at least 1"));
        }
        let t = rows[0].len();
        if rows.iter().any(|r| r.len() != t) {
            return Err(Error::DimensionMismatch("rows have unequal lengths".into()));
        }
        let columns: Vec<Vec<u8>> = (0..t)
            .map(|j| rows.iter().map(|r| r[j]).collect())
            .collect();
        Self::from_columns(q, &columns)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Code length `N` (number of rows).
    pub fn len(&self) -> usize {
        self.n
    }

    /// Code size `t` (number of codewords).
    pub fn size(&self) -> usize {
        self.t
    }

    pub fn is_empty(&self) -> bool {
        self.t == 0
    }

    pub fn column(&self, j: usize) -> &[u8] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.data.chunks_exact(self.n)
    }

    /// Symbol `x_i(j)` with 0-based row and column.
    pub fn get(&self, row: usize, j: usize) -> u8 {
        self.data[j * self.n + row]
    }

    pub fn row(&self, row: usize) -> Vec<u8> {
        (0..self.t).map(|j| self.get(row, j)).collect()
    }

    pub fn has_distinct_columns(&self) -> bool {
        let mut cols: Vec<&[u8]> = self.columns().collect();
        cols.sort_unstable();
        cols.windows(2).all(|w| w[0] != w[1])
    }

    pub fn check_message(&self, message: &Message) -> Result<()> {
        match message.indices().last() {
            Some(&last) if last >= self.t => Err(Error::OutOfRange(format!(
                "message {message} refers to codeword {} but t = {}",
                last + 1,
                self.t
            ))),
            _ => Ok(()),
        }
    }
}

/// An s-subset of codeword indices, sorted and distinct (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Message(Vec<usize>);

impl Message {
    /// Validates and wraps 0-based indices. They must be strictly increasing.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::params(
                "message indices must be distinct and strictly increasing",
            ));
        }
        Ok(Self(indices))
    }

    /// Builds a message from 1-based indices in any order.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::OutOfRange("codeword indices start at 1".into()));
        }
        let mut v: Vec<usize> = indices.iter().map(|&i| i - 1).collect();
        v.sort_unstable();
        Self::new(v)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Message {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(serializer)
    }
}

/// Composition (type) of an s-word: `counts[a]` occurrences of symbol `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    counts: Vec<u32>,
}

impl Composition {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        Alphabet::new(counts.len())?;
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn q(&self) -> usize {
        self.counts.len()
    }

    /// The weight `s = sum of counts`.
    pub fn weight(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn support(&self) -> AlphabetSubset {
        AlphabetSubset {
            members: self
                .counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(a, _)| a as u8)
                .collect(),
        }
    }

    /// Canonical sorted word with this composition.
    pub fn to_sorted_word(&self) -> Vec<u8> {
        let mut w = Vec::with_capacity(self.weight());
        for (a, &c) in self.counts.iter().enumerate() {
            w.extend(std::iter::repeat_n(a as u8, c as usize));
        }
        w
    }

    /// Index of this composition among all compositions of the same weight
    /// and alphabet, in `0..binomial(q+s-1, s)`.
    pub fn rank(&self) -> u64 {
        rank_sorted_multiset(&self.to_sorted_word())
    }

    /// `s! / prod(c_a!)`.
    pub fn multinomial(&self) -> u128 {
        let mut result: u128 = 1;
        let mut seen: u128 = 0;
        for &c in &self.counts {
            for k in 1..=c as u128 {
                seen += 1;
                result = result * seen / k;
            }
        }
        result
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.counts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A subset of the alphabet, kept as its sorted member list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AlphabetSubset {
    members: Vec<u8>,
}

impl AlphabetSubset {
    pub fn new(mut members: Vec<u8>, q: usize) -> Result<Self> {
        let alphabet = Alphabet::new(q)?;
        for &a in &members {
            alphabet.check(a as usize)?;
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { members })
    }

    pub fn full(q: usize) -> Self {
        Self {
            members: (0..q as u8).collect(),
        }
    }

    pub fn from_mask(mask: u128) -> Self {
        Self {
            members: (0..MAX_Q as u8).filter(|&a| mask >> a & 1 == 1).collect(),
        }
    }

    pub fn members(&self) -> &[u8] {
        &self.members
    }

    pub fn contains(&self, a: u8) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn mask(&self) -> u128 {
        self.members.iter().fold(0u128, |m, &a| m | 1u128 << a)
    }
}

impl fmt::Display for AlphabetSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, a) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

fn check_word(word: &[u8], q: usize) -> Result<Alphabet> {
    let alphabet = Alphabet::new(q)?;
    for &a in word {
        alphabet.check(a as usize)?;
    }
    Ok(alphabet)
}

/// The type `T(x)` of a word.
pub fn type_of(word: &[u8], q: usize) -> Result<Composition> {
    check_word(word, q)?;
    let mut counts = vec![0u32; q];
    for &a in word {
        counts[a as usize] += 1;
    }
    Ok(Composition { counts })
}

/// The union `U(x)`: distinct symbols of a word.
pub fn union_of(word: &[u8], q: usize) -> Result<AlphabetSubset> {
    check_word(word, q)?;
    let mut members = word.to_vec();
    members.sort_unstable();
    members.dedup();
    Ok(AlphabetSubset { members })
}

/// The multiset `{x_row(e_1), .., x_row(e_s)}` in sorted order. `row` is 1-based.
pub fn column_multiset(code: &Code, message: &Message, row: usize) -> Result<Vec<u8>> {
    if row == 0 || row > code.len() {
        return Err(Error::OutOfRange(format!(
            "row {row} outside 1..={}",
            code.len()
        )));
    }
    code.check_message(message)?;
    let mut symbols: Vec<u8> = message
        .indices()
        .iter()
        .map(|&j| code.get(row - 1, j))
        .collect();
    symbols.sort_unstable();
    Ok(symbols)
}

/// All s-subsets of `0..t` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    t: usize,
    next: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(t: usize, s: usize) -> Self {
        let next = (s <= t).then(|| (0..s).collect());
        Self { t, next }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let s = current.len();
        let mut succ = current.clone();
        let mut i = s;
        while i > 0 {
            i -= 1;
            if succ[i] < self.t - s + i {
                succ[i] += 1;
                for k in i + 1..s {
                    succ[k] = succ[k - 1] + 1;
                }
                self.next = Some(succ);
                break;
            }
        }
        Some(current)
    }
}

/// Stream of all `binomial(t, s)` messages in lexicographic order.
pub fn enumerate_messages(t: usize, s: usize) -> Result<impl Iterator<Item = Message>> {
    if s == 0 || s > t {
        return Err(Error::params(format!("need 1 <= s <= t, got s={s}, t={t}")));
    }
    Ok(Combinations::new(t, s).map(Message))
}

pub(crate) fn message_unchecked(indices: Vec<usize>) -> Message {
    Message(indices)
}

/// All compositions of weight `s` over `q` symbols, in lexicographic order
/// of their sorted words.
pub fn compositions(q: usize, s: usize) -> Vec<Composition> {
    let mut out = Vec::new();
    let mut word = vec![0u8; s];
    loop {
        let mut counts = vec![0u32; q];
        for &a in &word {
            counts[a as usize] += 1;
        }
        out.push(Composition { counts });
        // next non-decreasing word
        let mut i = s;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (word[i] as usize) < q - 1 {
                let v = word[i] + 1;
                for w in &mut word[i..] {
                    *w = v;
                }
                break;
            }
        }
    }
}

/// Rank of a sorted multiset among all multisets of the same size, via the
/// stars-and-bars bijection to strictly increasing sequences.
pub fn rank_sorted_multiset(sorted: &[u8]) -> u64 {
    sorted
        .iter()
        .enumerate()
        .map(|(k, &a)| binomial(a as u64 + k as u64, k as u64 + 1) as u64)
        .sum()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(cols: &[&[u8]], q: usize) -> Code {
        Code::from_columns(q, &cols.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn type_examples() {
        assert_eq!(type_of(&[0, 0, 1, 1], 3).unwrap().counts(), &[2, 2, 0]);
        assert_eq!(type_of(&[1, 1, 0, 2], 3).unwrap().counts(), &[1, 2, 1]);
        assert_eq!(type_of(&[0; 5], 2).unwrap().counts(), &[5, 0]);
        assert_eq!(
            type_of(&[0, 3], 3),
            Err(Error::InvalidSymbol { symbol: 3, q: 3 })
        );
    }

    #[test]
    fn union_examples() {
        assert_eq!(union_of(&[0, 0, 1, 1], 3).unwrap().members(), &[0, 1]);
        assert_eq!(union_of(&[1, 1, 0, 2], 3).unwrap().members(), &[0, 1, 2]);
        assert_eq!(union_of(&[3, 3, 3], 5).unwrap().members(), &[3]);
        assert!(union_of(&[5], 5).is_err());
    }

    #[test]
    fn column_multiset_examples() {
        let c = code(&[&[0, 0], &[0, 1], &[1, 0]], 2);
        let m = |v: &[usize]| Message::from_one_based(v).unwrap();
        assert_eq!(column_multiset(&c, &m(&[1, 2]), 2).unwrap(), vec![0, 1]);
        assert_eq!(column_multiset(&c, &m(&[1, 3]), 1).unwrap(), vec![0, 1]);
        assert_eq!(column_multiset(&c, &m(&[1, 2, 3]), 1).unwrap(), vec![0, 0, 1]);
        assert!(column_multiset(&c, &m(&[1, 2]), 3).is_err());
        assert!(column_multiset(&c, &m(&[1, 4]), 1).is_err());
    }

    #[test]
    fn message_enumeration() {
        let all: Vec<Vec<usize>> = enumerate_messages(3, 2)
            .unwrap()
            .map(|m| m.one_based())
            .collect();
        assert_eq!(all, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        let all: Vec<_> = enumerate_messages(4, 4).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].one_based(), vec![1, 2, 3, 4]);
        let all: Vec<_> = enumerate_messages(5, 2).unwrap().collect();
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(enumerate_messages(2, 3).is_err());
    }

    #[test]
    fn composition_ranks_are_a_bijection() {
        for q in 2..6 {
            for s in 1..6 {
                let comps = compositions(q, s);
                assert_eq!(comps.len() as u128, binomial((q + s - 1) as u64, s as u64));
                let mut ranks: Vec<u64> = comps.iter().map(Composition::rank).collect();
                ranks.sort_unstable();
                assert!(ranks.iter().enumerate().all(|(i, &r)| r == i as u64));
                assert!(comps.iter().all(|c| c.weight() == s));
            }
        }
    }

    #[test]
    fn multinomials() {
        assert_eq!(Composition::new(vec![2, 2, 0]).unwrap().multinomial(), 6);
        assert_eq!(Composition::new(vec![1, 1, 1]).unwrap().multinomial(), 6);
        assert_eq!(Composition::new(vec![5, 0]).unwrap().multinomial(), 1);
    }

    #[test]
    fn messages_reject_bad_input() {
        assert!(Message::new(vec![2, 1]).is_err());
        assert!(Message::new(vec![1, 1]).is_err());
        assert!(Message::from_one_based(&[0, 1]).is_err());
        assert_eq!(Message::from_one_based(&[3, 1]).unwrap().to_string(), "{1,3}");
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn type_and_union_are_permutation_invariant(
                word in proptest::collection::vec(0u8..4, 1..8),
                seed in any::<u64>(),
            ) {
                let mut shuffled = word.clone();
                // deterministic rotation plus reversal
                let k = (seed as usize) % shuffled.len();
                shuffled.rotate_left(k);
                if seed % 2 == 0 { shuffled.reverse(); }
                prop_assert_eq!(type_of(&word, 4).unwrap(), type_of(&shuffled, 4).unwrap());
                prop_assert_eq!(union_of(&word, 4).unwrap(), union_of(&shuffled, 4).unwrap());
            }

            #[test]
            fn union_is_support_of_type(word in proptest::collection::vec(0u8..5, 1..10)) {
                let ty = type_of(&word, 5).unwrap();
                prop_assert_eq!(ty.weight(), word.len());
                prop_assert_eq!(union_of(&word, 5).unwrap(), ty.support());
            }

            #[test]
            fn message_count_is_binomial(t in 1usize..10, s in 1usize..10) {
                prop_assume!(s <= t);
                let n = enumerate_messages(t, s).unwrap().count();
                prop_assert_eq!(n as u128, binomial(t as u64, s as u64));
            }
        }
    }
}
