//! The `.gtr` group-triple format.
//!
//! ```text
//! indices 2
//! label 0 e0
//! group 0 cyclic 2
//! group 1 cyclic 2
//! eclass 0 1
//! H 0 1 0
//! K 0 1 0
//! phi 0 1 0:0 1:1
//! C 0 1 1 1
//! ```
//!
//! Every related pair needs `H`, `K` and `phi` lines; `phi` lists one
//! `source:target` representative pair per coset of `H`. `C` lines give a
//! representative of the shifting coset and default to the identity coset.
//! `label` lines are optional.

use super::{GroupTriple, PairData, TripleError};
use crate::bits::IndexSet;
use crate::group::{inline_expr, parse_group_expr, FiniteGroup, GroupRef, QuotientIso, Subgroup};
use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GtrError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: TripleError },
}

fn syntax(line: usize, message: impl Into<String>) -> GtrError {
    GtrError::Syntax { line, message: message.into() }
}

fn number(line: usize, w: Option<&&str>) -> Result<usize, GtrError> {
    let w = w.ok_or_else(|| syntax(line, "missing number"))?;
    w.parse().map_err(|_| syntax(line, format!("expected a number, found {w:?}")))
}

/// `table <path>` group references are handed to `resolve`.
pub fn parse_gtr(text: &str, resolve: &dyn Fn(&str) -> Result<FiniteGroup, String>) -> Result<GroupTriple, GtrError> {
    let mut count: Option<usize> = None;
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut groups: Vec<Option<GroupRef>> = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut subgroups: BTreeMap<(char, usize, usize), (usize, IndexSet)> = BTreeMap::new();
    let mut phis: BTreeMap<(usize, usize), (usize, Vec<(usize, usize)>)> = BTreeMap::new();
    let mut shifts: BTreeMap<(usize, usize, usize), (usize, usize)> = BTreeMap::new();
    let mut last = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        last = line;
        let words: Vec<&str> = content.split_whitespace().collect();
        let head = words[0];
        if head != "indices" && count.is_none() {
            return Err(syntax(line, "`indices` must come first"));
        }
        let n = count.unwrap_or(0);
        let index = |w: Option<&&str>| -> Result<usize, GtrError> {
            let i = number(line, w)?;
            if i >= n {
                return Err(syntax(line, format!("index {i} out of range")));
            }
            Ok(i)
        };
        match head {
            "indices" if count.is_none() => {
                let k = number(line, words.get(1))?;
                if k == 0 || words.len() != 2 {
                    return Err(syntax(line, "`indices` takes one positive count"));
                }
                count = Some(k);
                labels = vec![None; k];
                groups = vec![None; k];
            }
            "label" => {
                let x = index(words.get(1))?;
                let name = words.get(2).filter(|_| words.len() == 3).ok_or_else(|| syntax(line, "`label <x> <name>`"))?;
                labels[x] = Some(name.to_string());
            }
            "group" => {
                let x = index(words.get(1))?;
                if groups[x].is_some() {
                    return Err(syntax(line, format!("group {x} given twice")));
                }
                let (g, rest) = parse_group_expr(&words[2..], resolve).map_err(|m| syntax(line, m))?;
                if !rest.is_empty() {
                    return Err(syntax(line, "trailing words after group"));
                }
                groups[x] = Some(Arc::new(g));
            }
            "eclass" => {
                let class = words[1..].iter().map(|w| index(Some(w))).collect::<Result<Vec<_>, _>>()?;
                classes.push(class);
            }
            "H" | "K" => {
                let x = index(words.get(1))?;
                let y = index(words.get(2))?;
                let members: IndexSet = words[3..].iter().map(|w| number(line, Some(w))).collect::<Result<_, _>>()?;
                let key = (head.chars().next().unwrap(), x, y);
                if subgroups.insert(key, (line, members)).is_some() {
                    return Err(syntax(line, format!("{head} {x} {y} given twice")));
                }
            }
            "phi" => {
                let x = index(words.get(1))?;
                let y = index(words.get(2))?;
                let mut reps = Vec::new();
                for w in &words[3..] {
                    let (s, t) = w.split_once(':').ok_or_else(|| syntax(line, format!("expected s:t, found {w:?}")))?;
                    let s = s.parse().map_err(|_| syntax(line, format!("bad representative {s:?}")))?;
                    let t = t.parse().map_err(|_| syntax(line, format!("bad representative {t:?}")))?;
                    reps.push((s, t));
                }
                if phis.insert((x, y), (line, reps)).is_some() {
                    return Err(syntax(line, format!("phi {x} {y} given twice")));
                }
            }
            "C" => {
                let x = index(words.get(1))?;
                let y = index(words.get(2))?;
                let z = index(words.get(3))?;
                let r = number(line, words.get(4))?;
                if words.len() != 5 {
                    return Err(syntax(line, "`C <x> <y> <z> <representative>`"));
                }
                shifts.insert((x, y, z), (line, r));
            }
            other => return Err(syntax(line, format!("unknown directive {other:?}"))),
        }
    }
    count.ok_or_else(|| syntax(last, "missing `indices` line"))?;
    let groups: Vec<GroupRef> = groups
        .into_iter()
        .enumerate()
        .map(|(x, g)| g.ok_or_else(|| syntax(last, format!("missing group {x}"))))
        .collect::<Result<_, _>>()?;
    let labels: Vec<String> = labels.into_iter().enumerate().map(|(x, l)| l.unwrap_or_else(|| x.to_string())).collect();
    let mut pairs = BTreeMap::new();
    for (&(x, y), (line, reps)) in &phis {
        let line = *line;
        let invalid = |source| GtrError::Invalid { line, source };
        let sub = |c: char, g: &GroupRef| -> Result<Subgroup, GtrError> {
            let (l, members) = subgroups.get(&(c, x, y)).ok_or_else(|| syntax(line, format!("missing {c} {x} {y}")))?;
            if members.iter().any(|i| i >= g.order()) {
                return Err(syntax(*l, format!("{c} {x} {y} has out-of-range members")));
            }
            Subgroup::from_members(g, *members).ok_or_else(|| syntax(*l, format!("{c} {x} {y} is not a subgroup")))
        };
        let h = sub('H', &groups[x])?;
        let k = sub('K', &groups[y])?;
        let phi = QuotientIso::from_representatives(&h, &k, reps).map_err(|e| invalid(e.into()))?;
        pairs.insert((x, y), PairData { h, k, phi });
    }
    if let Some((&(c, x, y), (l, _))) = subgroups.iter().find(|(&(_, x, y), _)| !phis.contains_key(&(x, y))) {
        return Err(syntax(*l, format!("{c} {x} {y} without a phi line")));
    }
    let mut shift_sets = BTreeMap::new();
    let mut shift_lines = BTreeMap::new();
    for (&(x, y, z), &(line, r)) in &shifts {
        if r >= groups[x].order() {
            return Err(syntax(line, format!("representative {r} out of range")));
        }
        let hxy = pairs.get(&(x, y)).ok_or(GtrError::Invalid { line, source: TripleError::UnrelatedTriple(x, y, z) })?;
        let hxz = pairs.get(&(x, z)).ok_or(GtrError::Invalid { line, source: TripleError::UnrelatedTriple(x, y, z) })?;
        let m = hxy.h.product(&hxz.h).map_err(|e| GtrError::Invalid { line, source: e.into() })?;
        shift_sets.insert((x, y, z), groups[x].set_mul(IndexSet::singleton(r), m.members()));
        shift_lines.insert((x, y, z), line);
    }
    GroupTriple::new(groups, labels, classes, pairs, shift_sets).map_err(|source| {
        let line = match &source {
            TripleError::BadShift(x, y, z) | TripleError::UnrelatedTriple(x, y, z) => {
                shift_lines.get(&(*x, *y, *z)).copied().unwrap_or(last)
            }
            TripleError::UnrelatedPair(x, y) | TripleError::BadSubgroup(x, y) | TripleError::BadQuotient(x, y) => {
                phis.get(&(*x, *y)).map(|p| p.0).unwrap_or(last)
            }
            _ => last,
        };
        GtrError::Invalid { line, source }
    })
}

fn group_expr(g: &FiniteGroup) -> String {
    let n = g.order();
    if let Ok(c) = FiniteGroup::cyclic(n) {
        if c.same_table(g) {
            return format!("cyclic {n}");
        }
    }
    for d in 1..=4 {
        if let Ok(s) = FiniteGroup::symmetric(d) {
            if s.same_table(g) {
                return format!("symmetric {d}");
            }
        }
    }
    inline_expr(g)
}

fn members(s: IndexSet) -> String {
    s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_gtr(t: &GroupTriple) -> String {
    let mut out = format!("indices {}\n", t.len());
    for x in 0..t.len() {
        if t.label(x) != x.to_string() {
            writeln!(out, "label {x} {}", t.label(x)).unwrap();
        }
    }
    for x in 0..t.len() {
        writeln!(out, "group {x} {}", group_expr(t.group(x))).unwrap();
    }
    for class in t.classes() {
        writeln!(out, "eclass {}", members(class.iter().copied().collect())).unwrap();
    }
    for (x, y) in t.pairs() {
        let p = t.pair(x, y);
        writeln!(out, "H {x} {y} {}", members(p.h.members())).unwrap();
        writeln!(out, "K {x} {y} {}", members(p.k.members())).unwrap();
        let reps: Vec<String> = (0..p.phi.source().len())
            .map(|i| format!("{}:{}", p.phi.source().representative(i), p.phi.target().coset(p.phi.apply(i)).min().unwrap()))
            .collect();
        writeln!(out, "phi {x} {y} {}", reps.join(" ")).unwrap();
    }
    for ((x, y, z), c) in t.nontrivial_shifts() {
        writeln!(out, "C {x} {y} {z} {}", c.min().unwrap()).unwrap();
    }
    out
}
