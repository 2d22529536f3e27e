//! Symmetric deterministic multiple-access channels.
//!
//! A symmetric channel only sees the composition of its `s` inputs, so every
//! channel here is a function on compositions. Built-in channels evaluate a
//! rule; custom channels carry a table indexed by composition rank.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::types::{
    binomial, compositions, rank_sorted_multiset, type_of, AlphabetSubset, Code, Composition,
    Message,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    /// Output is the set of transmitted symbols.
    A,
    /// Output is the composition of transmitted symbols.
    B,
    /// Output is the common symbol, or an erasure when users disagree.
    Erasure,
    /// Binary channel: 1 iff at least `l` users send 1.
    Threshold(usize),
    /// Binary OR channel.
    Disjunctive,
    Custom,
}

impl ChannelKind {
    /// Parses `A`, `B`, `eras`, `thr:L` or `disj`. Custom channels are loaded
    /// through [`crate::io::read_channel`].
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "A" | "a" => Ok(Self::A),
            "B" | "b" => Ok(Self::B),
            "eras" | "erasure" => Ok(Self::Erasure),
            "disj" | "disjunctive" => Ok(Self::Disjunctive),
            other => {
                if let Some(l) = other.strip_prefix("thr:") {
                    let l = l
                        .parse()
                        .map_err(|_| Error::params(format!("bad threshold in '{other}'")))?;
                    Ok(Self::Threshold(l))
                } else {
                    Err(Error::params(format!("unknown channel '{other}'")))
                }
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::A => "A".into(),
            Self::B => "B".into(),
            Self::Erasure => "eras".into(),
            Self::Threshold(l) => format!("thr:{l}"),
            Self::Disjunctive => "disj".into(),
            Self::Custom => "custom".into(),
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// One output symbol. The variant is the channel-kind tag, so symbols of
/// different channels never compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutputSymbol {
    Subset(AlphabetSubset),
    Composition(Composition),
    Plain(u8),
    Erased,
    Bit(u8),
    Label(String),
}

impl fmt::Display for OutputSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Subset(s) => write!(f, "{s}"),
            Self::Composition(c) => write!(f, "{c}"),
            Self::Plain(a) => write!(f, "{a}"),
            Self::Erased => write!(f, "*"),
            Self::Bit(b) => write!(f, "{b}"),
            Self::Label(l) => write!(f, "{l}"),
        }
    }
}

impl Serialize for OutputSymbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub type OutputWord = Vec<OutputSymbol>;

#[derive(Debug, PartialEq, Eq)]
struct CustomTable {
    /// Label id per composition rank.
    outputs: Vec<u32>,
    labels: Vec<String>,
    declared_size: usize,
}

/// A validated symmetric channel for `s` users over a q-ary alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelSpec {
    q: usize,
    s: usize,
    kind: ChannelKind,
    custom: Option<Arc<CustomTable>>,
}

impl ChannelSpec {
    pub fn builtin(kind: ChannelKind, s: usize, q: usize) -> Result<Self> {
        crate::types::Alphabet::new(q)?;
        if s == 0 {
            return Err(Error::params("a channel needs at least one user"));
        }
        match kind {
            ChannelKind::Threshold(l) => {
                if q != 2 {
                    return Err(Error::params("threshold channel requires q = 2"));
                }
                if l == 0 || l > s {
                    return Err(Error::params(format!(
                        "threshold must satisfy 1 <= l <= s, got l={l}, s={s}"
                    )));
                }
            }
            ChannelKind::Disjunctive if q != 2 => {
                return Err(Error::params("disjunctive channel requires q = 2"));
            }
            ChannelKind::Custom => {
                return Err(Error::params(
                    "custom channels are built with validate_symmetric or from a file",
                ));
            }
            _ => {}
        }
        Ok(Self {
            q,
            s,
            kind,
            custom: None,
        })
    }

    /// Builds a custom channel from a composition-keyed table of labels.
    pub fn custom(
        s: usize,
        q: usize,
        table: &BTreeMap<Composition, String>,
        declared_size: Option<usize>,
    ) -> Result<Self> {
        crate::types::Alphabet::new(q)?;
        let all = compositions(q, s);
        let mut label_ids: BTreeMap<&str, u32> = BTreeMap::new();
        let mut labels = Vec::new();
        let mut outputs = Vec::with_capacity(all.len());
        for comp in &all {
            let label = table.get(comp).ok_or_else(|| {
                Error::params(format!("channel table has no entry for composition {comp}"))
            })?;
            let next = label_ids.len() as u32;
            let id = *label_ids.entry(label.as_str()).or_insert_with(|| {
                labels.push(label.clone());
                next
            });
            outputs.push(id);
        }
        if table.len() != all.len() {
            return Err(Error::params(
                "channel table has entries that are not compositions of weight s",
            ));
        }
        let declared_size = declared_size.unwrap_or(labels.len());
        if labels.len() > declared_size {
            return Err(Error::params(format!(
                "channel uses {} distinct outputs but declares |Z| = {declared_size}",
                labels.len()
            )));
        }
        Ok(Self {
            q,
            s,
            kind: ChannelKind::Custom,
            custom: Some(Arc::new(CustomTable {
                outputs,
                labels,
                declared_size,
            })),
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    /// Number of output symbols this channel can produce.
    pub fn output_alphabet_size(&self) -> u128 {
        match &self.custom {
            Some(t) => t.declared_size as u128,
            None => output_alphabet_size(self.kind, self.s, self.q)
                .expect("built-in channel parameters were validated"),
        }
    }

    fn check_composition(&self, input: &Composition) -> Result<()> {
        if input.q() != self.q || input.weight() != self.s {
            return Err(Error::DimensionMismatch(format!(
                "composition {input} does not have weight {} over {} symbols",
                self.s, self.q
            )));
        }
        Ok(())
    }

    /// Evaluates the channel on a composition.
    pub fn eval(&self, input: &Composition) -> Result<OutputSymbol> {
        self.check_composition(input)?;
        let counts = input.counts();
        Ok(match self.kind {
            ChannelKind::A => OutputSymbol::Subset(input.support()),
            ChannelKind::B => OutputSymbol::Composition(input.clone()),
            ChannelKind::Erasure => match counts.iter().position(|&c| c as usize == self.s) {
                Some(a) => OutputSymbol::Plain(a as u8),
                None => OutputSymbol::Erased,
            },
            ChannelKind::Threshold(l) => OutputSymbol::Bit(u8::from(counts[1] as usize >= l)),
            ChannelKind::Disjunctive => OutputSymbol::Bit(u8::from(counts[1] > 0)),
            ChannelKind::Custom => {
                let table = self.custom.as_ref().expect("custom channel has a table");
                let id = table.outputs[input.rank() as usize];
                OutputSymbol::Label(table.labels[id as usize].clone())
            }
        })
    }

    /// Compact key identifying the output for a word of `s` symbols. Equal
    /// keys within one channel mean equal outputs. The buffer may be reordered.
    pub fn key_of_word(&self, word: &mut [u8]) -> u128 {
        match self.kind {
            ChannelKind::A => word.iter().fold(0u128, |m, &a| m | 1u128 << a),
            ChannelKind::B => {
                word.sort_unstable();
                rank_sorted_multiset(word) as u128
            }
            ChannelKind::Erasure => {
                let first = word[0];
                if word.iter().all(|&a| a == first) {
                    first as u128
                } else {
                    self.q as u128
                }
            }
            ChannelKind::Threshold(l) => {
                u128::from(word.iter().filter(|&&a| a == 1).count() >= l)
            }
            ChannelKind::Disjunctive => u128::from(word.iter().any(|&a| a != 0)),
            ChannelKind::Custom => {
                word.sort_unstable();
                let table = self.custom.as_ref().expect("custom channel has a table");
                table.outputs[rank_sorted_multiset(word) as usize] as u128
            }
        }
    }

    pub(crate) fn check_code(&self, code: &Code) -> Result<()> {
        if code.q() != self.q {
            return Err(Error::DimensionMismatch(format!(
                "code alphabet q={} but channel alphabet q={}",
                code.q(),
                self.q
            )));
        }
        Ok(())
    }

    /// Output keys of a message (0-based indices, no validation).
    pub(crate) fn output_keys(&self, code: &Code, indices: &[usize], out: &mut Vec<u128>) {
        out.clear();
        let mut buf = vec![0u8; indices.len()];
        for row in 0..code.len() {
            for (b, &j) in buf.iter_mut().zip(indices) {
                *b = code.get(row, j);
            }
            out.push(self.key_of_word(&mut buf));
        }
    }
}

/// Evaluates `channel` on a composition.
pub fn eval_channel(channel: &ChannelSpec, input: &Composition) -> Result<OutputSymbol> {
    channel.eval(input)
}

/// The output word `z(e, X)` of a message.
pub fn output_word(channel: &ChannelSpec, code: &Code, message: &Message) -> Result<OutputWord> {
    channel.check_code(code)?;
    if message.len() != channel.s() {
        return Err(Error::DimensionMismatch(format!(
            "message has {} codewords but the channel has s={}",
            message.len(),
            channel.s()
        )));
    }
    code.check_message(message)?;
    (0..code.len())
        .map(|row| {
            let word: Vec<u8> = message.indices().iter().map(|&j| code.get(row, j)).collect();
            channel.eval(&type_of(&word, code.q())?)
        })
        .collect()
}

/// Size of the output alphabet of a built-in channel.
pub fn output_alphabet_size(kind: ChannelKind, s: usize, q: usize) -> Result<u128> {
    crate::types::Alphabet::new(q)?;
    if s == 0 {
        return Err(Error::params("s must be at least 1"));
    }
    match kind {
        ChannelKind::A => Ok((1..=s.min(q) as u64)
            .map(|k| binomial(q as u64, k))
            .sum()),
        ChannelKind::B => Ok(binomial((q + s - 1) as u64, s as u64)),
        ChannelKind::Erasure if s == 1 => Ok(q as u128),
        ChannelKind::Erasure => Ok(q as u128 + 1),
        ChannelKind::Threshold(l) if q == 2 && (1..=s).contains(&l) => Ok(2),
        ChannelKind::Disjunctive if q == 2 => Ok(2),
        ChannelKind::Custom => Err(Error::params(
            "a custom channel declares its own output alphabet",
        )),
        other => Err(Error::params(format!("invalid parameters for channel {other}"))),
    }
}

/// Checks that a word-keyed table is permutation invariant and converts it
/// to a composition-keyed channel. Every composition must be covered.
pub fn validate_symmetric(
    table: &[(Vec<u8>, String)],
    s: usize,
    q: usize,
) -> Result<ChannelSpec> {
    let mut entries: Vec<&(Vec<u8>, String)> = table.iter().collect();
    entries.sort();
    let mut by_type: BTreeMap<Composition, (&Vec<u8>, &String)> = BTreeMap::new();
    for (word, label) in entries {
        if word.len() != s {
            return Err(Error::DimensionMismatch(format!(
                "table word {word:?} has length {}, expected {s}",
                word.len()
            )));
        }
        let ty = type_of(word, q)?;
        match by_type.get(&ty) {
            Some((first, first_label)) if *first_label != label => {
                return Err(Error::NotSymmetric {
                    first: (*first).clone(),
                    second: word.clone(),
                });
            }
            Some(_) => {}
            None => {
                by_type.insert(ty, (word, label));
            }
        }
    }
    let table: BTreeMap<Composition, String> = by_type
        .into_iter()
        .map(|(c, (_, l))| (c, l.clone()))
        .collect();
    ChannelSpec::custom(s, q, &table, None)
}
