//! The `.rel` witness format: each atom's relation as explicit pairs.
//!
//! ```text
//! rel 0 0 1:
//! pair 0.0 0.1
//! pair 0.1 0.0
//! ```

use super::{BaseSet, CosetAlgebra, CosetAtomIndex, Relation};
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct RelError {
    pub line: usize,
    pub message: String,
}

pub fn write_rel(alg: &CosetAlgebra) -> String {
    let mut out = String::new();
    for (idx, rel) in alg.atoms.iter().zip(&alg.relations) {
        writeln!(out, "rel {} {} {}:", idx.x, idx.y, idx.alpha).unwrap();
        for (u, v) in rel.pairs() {
            writeln!(out, "pair {} {}", alg.base.label(u), alg.base.label(v)).unwrap();
        }
    }
    out
}

pub fn parse_rel(text: &str, base: &BaseSet) -> Result<Vec<(CosetAtomIndex, Relation)>, RelError> {
    let mut out: Vec<(CosetAtomIndex, Relation)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| RelError { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        match words[0] {
            "rel" => {
                let nums: Vec<usize> = words[1..]
                    .iter()
                    .map(|w| w.trim_end_matches(':').parse().map_err(|_| err(format!("bad index {w:?}"))))
                    .collect::<Result<_, _>>()?;
                if nums.len() != 3 || !content.ends_with(':') {
                    return Err(err("expected `rel <x> <y> <alpha>:`".into()));
                }
                out.push((CosetAtomIndex { x: nums[0], y: nums[1], alpha: nums[2] }, Relation::empty(base)));
            }
            "pair" => {
                let (_, rel) = out.last_mut().ok_or_else(|| err("`pair` before any `rel`".into()))?;
                if words.len() != 3 {
                    return Err(err("expected `pair <x.g> <y.h>`".into()));
                }
                let u = base.parse_label(words[1]).ok_or_else(|| err(format!("unknown base element {:?}", words[1])))?;
                let v = base.parse_label(words[2]).ok_or_else(|| err(format!("unknown base element {:?}", words[2])))?;
                rel.add_row(u, crate::bits::IndexSet::singleton(v));
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }
    Ok(out)
}
