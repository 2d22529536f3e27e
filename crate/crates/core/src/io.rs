//! Text formats: code matrices, custom channel tables and subset output words.
//!
//! Code matrix: first line `q N t`, then `N` rows of `t` symbols. Channel
//! table: first line `q s |Z|`, then one `c_0 .. c_{q-1} -> label` line per
//! composition. Output word: one subset per line, e.g. `{0,2}`. Lines that
//! start with `#` are comments everywhere.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::channel::ChannelSpec;
use crate::error::{Error, Result};
use crate::types::{binomial, AlphabetSubset, Code, Composition};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(token: &str, line: usize) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("expected a non-negative integer, got '{token}'")))
}

pub fn parse_code(text: &str) -> Result<Code> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty code file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|tok| parse_usize(tok, hline))
        .collect::<Result<_>>()?;
    let [q, n, t] = dims[..] else {
        return Err(Error::parse(hline, "header must be 'q N t'"));
    };
    if n == 0 || t == 0 {
        return Err(Error::parse(hline, "N and t must be positive"));
    }
    if !(2..=crate::types::MAX_Q).contains(&q) {
        return Err(Error::parse(hline, format!("unsupported alphabet size {q}")));
    }
    let mut rows = Vec::with_capacity(n);
    for (lineno, line) in lines {
        if rows.len() == n {
            return Err(Error::parse(lineno, format!("more than N={n} rows")));
        }
        let row: Vec<u8> = line
            .split_whitespace()
            .map(|tok| {
                let a = parse_usize(tok, lineno)?;
                if a >= q {
                    Err(Error::parse(lineno, format!("symbol {a} is not below q={q}")))
                } else {
                    Ok(a as u8)
                }
            })
            .collect::<Result<_>>()?;
        if row.len() != t {
            return Err(Error::parse(
                lineno,
                format!("row has {} entries, expected t={t}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::parse(
            text.lines().count(),
            format!("found {} rows, expected N={n}", rows.len()),
        ));
    }
    Code::from_rows(q, &rows)
}

pub fn format_code(code: &Code) -> String {
    let mut out = format!("{} {} {}\n", code.q(), code.len(), code.size());
    for i in 0..code.len() {
        let row: Vec<String> = code.row(i).iter().map(|a| a.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn read_code(path: &Path) -> Result<Code> {
    parse_code(&std::fs::read_to_string(path)?)
}

pub fn write_code(path: &Path, code: &Code) -> Result<()> {
    std::fs::write(path, format_code(code))?;
    Ok(())
}

pub fn parse_channel(text: &str) -> Result<ChannelSpec> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty channel file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|tok| parse_usize(tok, hline))
        .collect::<Result<_>>()?;
    let [q, s, z] = dims[..] else {
        return Err(Error::parse(hline, "header must be 'q s |Z|'"));
    };
    if !(2..=crate::types::MAX_Q).contains(&q) || s == 0 {
        return Err(Error::parse(hline, "need q >= 2 and s >= 1"));
    }
    let mut table = BTreeMap::new();
    for (lineno, line) in lines {
        let (lhs, label) = line
            .split_once("->")
            .ok_or_else(|| Error::parse(lineno, "expected 'counts -> label'"))?;
        let label = label.trim();
        if label.is_empty() || label.contains(char::is_whitespace) {
            return Err(Error::parse(lineno, "label must be a single non-empty token"));
        }
        let counts: Vec<u32> = lhs
            .split_whitespace()
            .map(|tok| parse_usize(tok, lineno).map(|c| c as u32))
            .collect::<Result<_>>()?;
        if counts.len() != q {
            return Err(Error::parse(lineno, format!("expected {q} counts")));
        }
        let comp = Composition::new(counts).map_err(|e| Error::parse(lineno, e.to_string()))?;
        if comp.weight() != s {
            return Err(Error::parse(lineno, format!("composition {comp} has weight != {s}")));
        }
        if table.insert(comp.clone(), label.to_string()).is_some() {
            return Err(Error::parse(lineno, format!("composition {comp} listed twice")));
        }
    }
    let expected = binomial((q + s - 1) as u64, s as u64);
    if table.len() as u128 != expected {
        return Err(Error::parse(
            text.lines().count(),
            format!("found {} compositions, expected {expected}", table.len()),
        ));
    }
    ChannelSpec::custom(s, q, &table, Some(z))
}

pub fn read_channel(path: &Path) -> Result<ChannelSpec> {
    parse_channel(&std::fs::read_to_string(path)?)
}

/// Parses one subset per line: `{0,2}`, `0,2`, `0 2` or `{}`.
pub fn parse_subset_word(text: &str, q: usize) -> Result<Vec<AlphabetSubset>> {
    content_lines(text)
        .map(|(lineno, line)| {
            let inner = line.trim_start_matches('{').trim_end_matches('}');
            let members: Vec<u8> = inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|tok| !tok.is_empty())
                .map(|tok| {
                    let a = parse_usize(tok, lineno)?;
                    if a >= q {
                        Err(Error::parse(lineno, format!("symbol {a} is not below q={q}")))
                    } else {
                        Ok(a as u8)
                    }
                })
                .collect::<Result<_>>()?;
            AlphabetSubset::new(members, q).map_err(|e| Error::parse(lineno, e.to_string()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelKind;
    use crate::types::compositions;

    #[test]
    fn code_file_roundtrip() {
        let text = "# demo\n2 2 3\n0 0 1\n0 1 0\n";
        let code = parse_code(text).unwrap();
        assert_eq!(code.size(), 3);
        assert_eq!(code.column(1), &[0, 1]);
        assert_eq!(parse_code(&format_code(&code)).unwrap(), code);
    }

    #[test]
    fn code_file_is_strict() {
        assert!(parse_code("2 2 3\n0 0 1\n").is_err());
        assert!(parse_code("2 2 3\n0 0 1\n0 1\n").is_err());
        assert!(parse_code("2 1 2\n0 2\n").is_err());
        assert!(parse_code("2 1 2\n0 1\n1 1\n").is_err());
        assert!(parse_code("2 1\n0 1\n").is_err());
        assert!(parse_code("2 1 2\n0 x\n").is_err());
    }

    #[test]
    fn channel_file() {
        let text = "2 2 2\n2 0 -> zero\n1 1 -> one\n0 2 -> one\n";
        let ch = parse_channel(text).unwrap();
        let disj = ChannelSpec::builtin(ChannelKind::Disjunctive, 2, 2).unwrap();
        for c in compositions(2, 2) {
            let same = (ch.eval(&c).unwrap().to_string() == "zero")
                == (disj.eval(&c).unwrap().to_string() == "0");
            assert!(same);
        }
        assert_eq!(ch.output_alphabet_size(), 2);
        // missing, duplicate, bad weight
        assert!(parse_channel("2 2 2\n2 0 -> a\n1 1 -> b\n").is_err());
        assert!(parse_channel("2 2 2\n2 0 -> a\n2 0 -> a\n0 2 -> b\n").is_err());
        assert!(parse_channel("2 2 2\n2 0 -> a\n1 0 -> b\n0 2 -> b\n").is_err());
        // more labels than declared
        assert!(parse_channel("2 2 2\n2 0 -> a\n1 1 -> b\n0 2 -> c\n").is_err());
    }

    #[test]
    fn subset_word() {
        let z = parse_subset_word("{0,1}\n1\n{}\n0 2\n", 3).unwrap();
        assert_eq!(z.len(), 4);
        assert_eq!(z[0].members(), &[0, 1]);
        assert_eq!(z[1].members(), &[1]);
        assert!(z[2].is_empty());
        assert_eq!(z[3].members(), &[0, 2]);
        assert!(parse_subset_word("{3}\n", 3).is_err());
    }
}
