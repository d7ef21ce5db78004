//! The `.ra` text format.
//!
//! ```text
//! # Re(2)
//! atoms 4
//! names e0 e1 p0_1 p1_0
//! converse 0 1 3 2
//! identity 0 1
//! cycle 0 0 0
//! ...
//! ```
//!
//! Each `cycle i j k` line records `k <= i;j`. Pairs without a line compose
//! to zero.

use super::{AtomSet, AtomStructure, StructureError};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RaFormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: StructureError },
}

fn syntax(line: usize, message: impl Into<String>) -> RaFormatError {
    RaFormatError::Syntax { line, message: message.into() }
}

struct Parsed {
    names: Vec<String>,
    converse: Vec<usize>,
    identity: AtomSet,
    table: Vec<AtomSet>,
    /// Line of each header keyword and each cycle triple, for diagnostics.
    lines: HashMap<&'static str, usize>,
    cycle_lines: HashMap<(usize, usize, usize), usize>,
}

fn parse(text: &str) -> Result<Parsed, RaFormatError> {
    let mut n: Option<usize> = None;
    let mut names: Option<Vec<String>> = None;
    let mut converse: Option<Vec<usize>> = None;
    let mut identity: Option<AtomSet> = None;
    let mut cycles: Vec<(usize, [usize; 3])> = Vec::new();
    let mut lines = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let keyword = words.next().unwrap();
        let rest: Vec<&str> = words.collect();
        let numbers = |rest: &[&str]| -> Result<Vec<usize>, RaFormatError> {
            rest.iter()
                .map(|w| w.parse::<usize>().map_err(|_| syntax(line, format!("expected an index, found {w:?}"))))
                .collect()
        };
        let key: &'static str = match keyword {
            "atoms" => "atoms",
            "names" => "names",
            "converse" => "converse",
            "identity" => "identity",
            "cycle" => "cycle",
            other => return Err(syntax(line, format!("unknown keyword {other:?}"))),
        };
        if key != "cycle" && lines.insert(key, line).is_some() {
            return Err(syntax(line, format!("duplicate `{key}` line")));
        }
        let count = || n.ok_or_else(|| syntax(line, "`atoms` must come first"));
        match key {
            "atoms" => {
                let v = numbers(&rest)?;
                if v.len() != 1 || v[0] == 0 {
                    return Err(syntax(line, "`atoms` takes one positive count"));
                }
                if v[0] > crate::bits::MAX_INDEX {
                    return Err(RaFormatError::Invalid { line, source: StructureError::TooManyAtoms(v[0]) });
                }
                n = Some(v[0]);
            }
            "names" => {
                let n = count()?;
                if rest.len() != n {
                    return Err(syntax(line, format!("expected {n} names, found {}", rest.len())));
                }
                names = Some(rest.iter().map(|s| s.to_string()).collect());
            }
            "converse" => {
                let n = count()?;
                let v = numbers(&rest)?;
                if v.len() != n {
                    return Err(syntax(line, format!("expected {n} converse entries, found {}", v.len())));
                }
                if let Some(&bad) = v.iter().find(|&&c| c >= n) {
                    return Err(syntax(line, format!("converse entry {bad} out of range")));
                }
                converse = Some(v);
            }
            "identity" => {
                let n = count()?;
                let v = numbers(&rest)?;
                if v.is_empty() {
                    return Err(syntax(line, "`identity` needs at least one atom"));
                }
                if let Some(&bad) = v.iter().find(|&&c| c >= n) {
                    return Err(syntax(line, format!("identity atom {bad} out of range")));
                }
                identity = Some(v.into_iter().collect());
            }
            _ => {
                let n = count()?;
                let v = numbers(&rest)?;
                if v.len() != 3 {
                    return Err(syntax(line, "`cycle` takes three atom indices"));
                }
                if let Some(&bad) = v.iter().find(|&&c| c >= n) {
                    return Err(syntax(line, format!("cycle atom {bad} out of range")));
                }
                cycles.push((line, [v[0], v[1], v[2]]));
            }
        }
    }

    let n = n.ok_or(RaFormatError::Missing("atoms"))?;
    let converse = converse.ok_or(RaFormatError::Missing("converse"))?;
    let identity = identity.ok_or(RaFormatError::Missing("identity"))?;
    let names = names.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
    let mut table = vec![AtomSet::EMPTY; n * n];
    let mut cycle_lines = HashMap::new();
    for (line, [i, j, k]) in cycles {
        table[i * n + j].insert(k);
        cycle_lines.entry((i, j, k)).or_insert(line);
    }
    Ok(Parsed { names, converse, identity, table, lines, cycle_lines })
}

fn line_of(p: &Parsed, err: &StructureError) -> usize {
    let header = |k| p.lines.get(k).copied().unwrap_or(0);
    match *err {
        StructureError::BadName(_) => header("names"),
        StructureError::NotInvolution { .. } | StructureError::ConverseRange { .. } => header("converse"),
        StructureError::IdentityNotSelfConverse { .. } | StructureError::IdentityRange(_) => header("identity"),
        StructureError::TriangleSymmetry { i, j, k } => p.cycle_lines.get(&(i, j, k)).copied().unwrap_or(0),
        _ => header("atoms"),
    }
}

/// Parses and validates a `.ra` document.
pub fn load_ra(text: &str) -> Result<AtomStructure, RaFormatError> {
    let s = load_ra_unchecked(text)?;
    if let Err(source) = s.validate() {
        let p = parse(text)?;
        return Err(RaFormatError::Invalid { line: line_of(&p, &source), source });
    }
    Ok(s)
}

/// Parses a `.ra` document checking only its shape, so that law violations
/// can be reported by the axiom verifier instead of rejected.
pub fn load_ra_unchecked(text: &str) -> Result<AtomStructure, RaFormatError> {
    let p = parse(text)?;
    AtomStructure::new_unchecked(p.names.clone(), p.converse.clone(), p.identity, p.table.clone())
        .map_err(|source| RaFormatError::Invalid { line: line_of(&p, &source), source })
}

pub fn write_ra(a: &AtomStructure) -> String {
    let n = a.atom_count();
    let join = |v: Vec<String>| v.join(" ");
    let mut out = String::new();
    out.push_str(&format!("atoms {n}\n"));
    out.push_str(&format!("names {}\n", a.names().join(" ")));
    out.push_str(&format!("converse {}\n", join(a.converse_map().iter().map(|c| c.to_string()).collect())));
    out.push_str(&format!("identity {}\n", join(a.identity_atoms().iter().map(|c| c.to_string()).collect())));
    for i in 0..n {
        for j in 0..n {
            for k in a.compose_atoms(i, j) {
                out.push_str(&format!("cycle {i} {j} {k}\n"));
            }
        }
    }
    out
}
