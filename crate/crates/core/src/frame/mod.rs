//! Semi-scaffolds, scaffolds and the coset semi-frame of a measurable
//! algebra.
//!
//! A semi-scaffold picks one atom `a_xy` below each nonzero rectangle with
//! `a_xx = x` and `a_yx = a_xy˘`; it is a scaffold when moreover
//! `a_xz <= a_xy;a_yz`. From a semi-scaffold the stabilizers and quotient
//! isomorphisms of the chosen atoms, together with the shifting cosets,
//! form a group triple.

mod extract;
mod format;
mod triple;

pub use extract::{extract_semi_frame, shifting_coset_well_defined, Extraction};
pub use format::{parse_gtr, write_gtr, GtrError};
pub(crate) use triple::shift_compatible;
pub use triple::{verify_semi_frame, ConditionResult, FrameRecord, GroupTriple, PairData, SemiFrameReport, TripleError};

use crate::measure::{MeasureError, Measured};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("atom order must list each measurable atom exactly once")]
    BadOrder,
    #[error("rectangle of ({0},{1}) holds no atom")]
    EmptyRectangle(usize, usize),
    #[error("semi-scaffold entry for ({0},{1}) is invalid")]
    BadEntry(usize, usize),
    #[error("no coset of the stabilizer of a_xz lies below a_xy;a_yz for ({0},{1},{2})")]
    NoShiftingCoset(usize, usize, usize),
    #[error("extracted triple fails semi-frame condition {0}: {1}")]
    NotSemiFrame(&'static str, String),
    #[error(transparent)]
    Triple(#[from] TripleError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiScaffold {
    /// The measurable atoms in the chosen order.
    pub order: Vec<usize>,
    /// `a_xy` for every related pair, keyed by algebra atoms.
    pub entries: BTreeMap<(usize, usize), usize>,
    pub is_scaffold: bool,
}

impl SemiScaffold {
    pub fn entry(&self, x: usize, y: usize) -> usize {
        self.entries[&(x, y)]
    }

    /// Position of a measurable atom in the order.
    pub fn position(&self, x: usize) -> usize {
        self.order.iter().position(|&o| o == x).expect("atom in order")
    }
}

/// Outcome of the complete scaffold search.
#[derive(Clone, Debug)]
pub struct ScaffoldSearch {
    pub scaffold: Option<SemiScaffold>,
    /// Nodes of the backtracking tree visited.
    pub nodes: u64,
    /// Number of semi-scaffolds, the product of the rectangle sizes over
    /// ordered pairs `x<y`, as a decimal string since it can be huge.
    pub space: String,
}

fn resolve_order(m: &Measured, order: Option<&[usize]>) -> Result<Vec<usize>, FrameError> {
    let atoms: Vec<usize> = m.records.iter().map(|r| r.atom).collect();
    match order {
        None => Ok(atoms),
        Some(o) => {
            let mut sorted = o.to_vec();
            sorted.sort();
            if sorted != atoms {
                return Err(FrameError::BadOrder);
            }
            Ok(o.to_vec())
        }
    }
}

/// Pairs `x<y` in the order with `x E y`.
fn ordered_pairs(m: &Measured, order: &[usize]) -> Result<Vec<(usize, usize)>, FrameError> {
    let e = m.equivalence()?;
    let mut out = Vec::new();
    for (i, &x) in order.iter().enumerate() {
        for &y in &order[i + 1..] {
            if e.related(x, y) {
                out.push((x, y));
            }
        }
    }
    Ok(out)
}

fn complete(m: &Measured, order: Vec<usize>, upper: &BTreeMap<(usize, usize), usize>, is_scaffold: bool) -> SemiScaffold {
    let alg = m.algebra;
    let mut entries = BTreeMap::new();
    for &x in &order {
        entries.insert((x, x), x);
    }
    for (&(x, y), &a) in upper {
        entries.insert((x, y), a);
        entries.insert((y, x), alg.converse_atom(a));
    }
    SemiScaffold { order, entries, is_scaffold }
}

/// Checks the defining conditions of a semi-scaffold and recomputes the
/// scaffold flag over all related triples.
pub fn check_semi_scaffold(m: &Measured, s: &SemiScaffold) -> Result<bool, FrameError> {
    let alg = m.algebra;
    let e = m.equivalence()?;
    for &(x, y) in e.pairs() {
        let a = *s.entries.get(&(x, y)).ok_or(FrameError::BadEntry(x, y))?;
        let ok = m.rectangle(x, y).contains(a)
            && (x != y || a == x)
            && s.entries.get(&(y, x)) == Some(&alg.converse_atom(a));
        if !ok {
            return Err(FrameError::BadEntry(x, y));
        }
    }
    Ok(e.triples().into_iter().all(|(x, y, z)| {
        alg.compose_atoms(s.entry(x, y), s.entry(y, z)).contains(s.entry(x, z))
    }))
}

/// The least-atom semi-scaffold.
pub fn build_semi_scaffold(m: &Measured, order: Option<&[usize]>) -> Result<SemiScaffold, FrameError> {
    let order = resolve_order(m, order)?;
    let mut upper = BTreeMap::new();
    for (x, y) in ordered_pairs(m, &order)? {
        let a = m.rectangle(x, y).min().ok_or(FrameError::EmptyRectangle(x, y))?;
        upper.insert((x, y), a);
    }
    let mut s = complete(m, order, &upper, false);
    s.is_scaffold = check_semi_scaffold(m, &s)?;
    Ok(s)
}

/// Complete backtracking over atom choices for the pairs `x<y`, checking
/// `a_xz <= a_xy;a_yz` on ordered triples as soon as all three entries are
/// chosen. Returns the first scaffold in lexicographic choice order.
pub fn find_scaffold(m: &Measured, order: Option<&[usize]>) -> Result<ScaffoldSearch, FrameError> {
    let order = resolve_order(m, order)?;
    let pairs = ordered_pairs(m, &order)?;
    let alg = m.algebra;
    let pos = |x: usize| order.iter().position(|&o| o == x).unwrap();
    let slot: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let choices: Vec<Vec<usize>> = pairs.iter().map(|&(x, y)| m.rectangle(x, y).to_vec()).collect();
    // For each slot, the triples that become fully assigned with it.
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); pairs.len()];
    for &(x, y) in &pairs {
        for &(w, z) in &pairs {
            if w == y {
                if let Some(&xz) = slot.get(&(x, z)) {
                    let last = slot[&(x, y)].max(slot[&(y, z)]).max(xz);
                    checks[last].push((slot[&(x, y)], slot[&(y, z)], xz));
                }
            }
        }
    }
    debug_assert!(pairs.iter().all(|&(x, y)| pos(x) < pos(y)));
    let mut space = num_product(choices.iter().map(Vec::len));
    if pairs.is_empty() {
        space = "1".into();
    }
    let mut chosen = vec![0usize; pairs.len()];
    let mut nodes = 0u64;
    let found = backtrack(alg, &choices, &checks, 0, &mut chosen, &mut nodes);
    let scaffold = if found {
        let upper: BTreeMap<(usize, usize), usize> = pairs.iter().copied().zip(chosen.iter().copied()).collect();
        let s = complete(m, order, &upper, true);
        debug_assert!(check_semi_scaffold(m, &s).unwrap_or(false));
        Some(s)
    } else {
        None
    };
    Ok(ScaffoldSearch { scaffold, nodes, space })
}

fn backtrack(
    alg: &crate::ra::AtomStructure,
    choices: &[Vec<usize>],
    checks: &[Vec<(usize, usize, usize)>],
    i: usize,
    chosen: &mut Vec<usize>,
    nodes: &mut u64,
) -> bool {
    if i == choices.len() {
        return true;
    }
    for &a in &choices[i] {
        *nodes += 1;
        chosen[i] = a;
        let ok = checks[i].iter().all(|&(p, q, r)| alg.compose_atoms(chosen[p], chosen[q]).contains(chosen[r]));
        if ok && backtrack(alg, choices, checks, i + 1, chosen, nodes) {
            return true;
        }
    }
    false
}

/// Decimal product of small factors, without overflow.
fn num_product(factors: impl Iterator<Item = usize>) -> String {
    let mut digits = vec![1u32]; // little-endian base 10
    for f in factors {
        let mut carry = 0u64;
        for d in digits.iter_mut() {
            let v = *d as u64 * f as u64 + carry;
            *d = (v % 10) as u32;
            carry = v / 10;
        }
        while carry > 0 {
            digits.push((carry % 10) as u32);
            carry /= 10;
        }
    }
    while digits.len() > 1 && *digits.last().unwrap() == 0 {
        digits.pop();
    }
    digits.iter().rev().map(|d| char::from_digit(*d, 10).unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::ra::{complex_algebra, full_relation_algebra};

    #[test]
    fn semi_scaffold_examples() {
        let z3 = complex_algebra(&FiniteGroup::cyclic(3).unwrap());
        let m = Measured::new(&z3).unwrap();
        let s = build_semi_scaffold(&m, None).unwrap();
        assert_eq!(s.entries.len(), 1);
        assert_eq!(s.entry(0, 0), 0);
        assert!(s.is_scaffold);

        let re2 = full_relation_algebra(2);
        let m = Measured::new(&re2).unwrap();
        let s = build_semi_scaffold(&m, None).unwrap();
        assert_eq!(re2.name(s.entry(0, 1)), "p0_1");
        assert_eq!(re2.name(s.entry(1, 0)), "p1_0");
    }

    #[test]
    fn re3_scaffold() {
        let re3 = full_relation_algebra(3);
        let m = Measured::new(&re3).unwrap();
        let search = find_scaffold(&m, None).unwrap();
        let s = search.scaffold.unwrap();
        assert_eq!(re3.name(s.entry(0, 2)), "p0_2");
        assert_eq!(re3.name(s.entry(2, 1)), "p2_1");
        assert_eq!(search.space, "1");
        assert!(find_scaffold(&m, Some(&[2, 0, 1])).unwrap().scaffold.is_some());
        assert_eq!(find_scaffold(&m, Some(&[0, 1])).unwrap_err(), FrameError::BadOrder);
    }

    #[test]
    fn big_products() {
        assert_eq!(num_product([7usize, 11, 13].into_iter()), "1001");
        assert_eq!(num_product(std::iter::repeat_n(10usize, 25)), format!("1{}", "0".repeat(25)));
    }
}
