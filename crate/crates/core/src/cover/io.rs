use std::fmt::Write;

use thiserror::Error;

use super::{CoverData, CoverVertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverParseError {
    #[error("line {line}: malformed line: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: list of vertex {vertex} has size {size}, declared fold is {fold}")]
    FoldMismatch {
        line: usize,
        vertex: usize,
        size: usize,
        fold: usize,
    },
    #[error("missing `c <n> <k-or-*>` header")]
    MissingHeader,
}

fn malformed(line: usize, reason: impl Into<String>) -> CoverParseError {
    CoverParseError::Malformed {
        line,
        reason: reason.into(),
    }
}

fn numbers<const N: usize>(line: usize, fields: &[&str]) -> Result<[usize; N], CoverParseError> {
    if fields.len() != N {
        return Err(malformed(line, format!("expected {N} integers, found {}", fields.len())));
    }
    let mut out = [0; N];
    for (slot, field) in out.iter_mut().zip(fields) {
        *slot = field
            .parse()
            .map_err(|_| malformed(line, format!("`{field}` is not a non-negative integer")))?;
    }
    Ok(out)
}

/// Parses the cover text format:
///
/// ```text
/// c <n> <k-or-*>
/// L <u> <size>        one per base vertex
/// m <u> <i> <v> <j>   one per matched pair (u, i) ~ (v, j)
/// ```
///
/// `#` starts a comment. Only syntax is checked here; the axioms are checked by
/// [`validate`](super::validate).
pub fn parse_cover(text: &str) -> Result<CoverData, CoverParseError> {
    let mut data: Option<CoverData> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let tag = tokens.next().expect("non-empty line");
        let rest: Vec<&str> = tokens.collect();
        if tag == "c" {
            if data.is_some() {
                return Err(malformed(line, "duplicate header"));
            }
            if rest.len() != 2 {
                return Err(malformed(line, "header must be `c <n> <k-or-*>`"));
            }
            let [n] = numbers::<1>(line, &rest[..1])?;
            let fold = match rest[1] {
                "*" => None,
                k => Some(numbers::<1>(line, &[k])?[0]),
            };
            data = Some(CoverData {
                n,
                fold,
                ..CoverData::default()
            });
            continue;
        }
        let data = data
            .as_mut()
            .ok_or_else(|| malformed(line, "content before `c` header"))?;
        match tag {
            "L" => {
                let [vertex, size] = numbers::<2>(line, &rest)?;
                if let Some(fold) = data.fold {
                    if size != fold {
                        return Err(CoverParseError::FoldMismatch {
                            line,
                            vertex,
                            size,
                            fold,
                        });
                    }
                }
                data.lists.push((vertex, size));
            }
            "m" => {
                let [u, i, v, j] = numbers::<4>(line, &rest)?;
                data.pairs.push((CoverVertex::new(u, i), CoverVertex::new(v, j)));
            }
            other => return Err(malformed(line, format!("unknown line tag `{other}`"))),
        }
    }
    data.ok_or(CoverParseError::MissingHeader)
}

pub(super) fn write_cover(data: &CoverData) -> String {
    let mut out = String::new();
    match data.fold {
        Some(k) => writeln!(out, "c {} {k}", data.n),
        None => writeln!(out, "c {} *", data.n),
    }
    .expect("write to string");
    for (v, size) in &data.lists {
        writeln!(out, "L {v} {size}").expect("write to string");
    }
    for (x, y) in &data.pairs {
        writeln!(out, "m {} {} {} {}", x.vertex, x.slot, y.vertex, y.slot).expect("write to string");
    }
    out
}
