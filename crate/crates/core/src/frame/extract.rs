use super::{check_semi_scaffold, FrameError, GroupTriple, PairData, SemiScaffold};
use crate::bits::IndexSet;
use crate::frame::verify_semi_frame;
use crate::group::Side;
use crate::measure::Measured;
use crate::ra::AtomSet;
use std::collections::BTreeMap;

/// The semi-frame of a semi-scaffold together with the atom indexing
/// `a_{xy,α} = H_{xy,α};a_xy`.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub triple: GroupTriple,
    pub scaffold: SemiScaffold,
    /// For each algebra atom, its `(x, y, α)` with `x`, `y` positions in the
    /// scaffold order and `α` a coset index of `H_xy`.
    pub atom_index: Vec<(usize, usize, usize)>,
}

/// Cosets `ζ` of `H_xz` with `H_{xz,ζ};a_xz <= a_xy;a_yz`, with the
/// shifting coset `H_xy;H_{xz,ζ}` each one produces.
fn shifting_candidates(
    m: &Measured,
    s: &SemiScaffold,
    x: usize,
    y: usize,
    z: usize,
) -> Result<Vec<(usize, IndexSet)>, FrameError> {
    let alg = m.algebra;
    let (axy, ayz, axz) = (s.entry(x, y), s.entry(y, z), s.entry(x, z));
    let product = alg.compose_atoms(axy, ayz);
    let hxy = m.stabilizer_of(AtomSet::singleton(axy), x, y)?.left;
    let phi_xz = m.regular_iso(AtomSet::singleton(axz), x, z)?;
    let system = phi_xz.source();
    let g = &m.record(x)?.group;
    let mut out = Vec::new();
    for zeta in 0..system.len() {
        let t = m.translate_set(AtomSet::singleton(axz), system.representative(zeta), Side::Left, x, z)?;
        if t.is_subset(product) {
            out.push((zeta, g.set_mul(hxy.members(), system.coset(zeta))));
        }
    }
    Ok(out)
}

/// Every qualifying `ζ` yields the same shifting coset.
pub fn shifting_coset_well_defined(m: &Measured, s: &SemiScaffold, x: usize, y: usize, z: usize) -> Result<bool, FrameError> {
    let candidates = shifting_candidates(m, s, x, y, z)?;
    let first = candidates.first().ok_or(FrameError::NoShiftingCoset(x, y, z))?.1;
    Ok(candidates.iter().all(|&(_, c)| c == first))
}

pub fn extract_semi_frame(m: &Measured, s: &SemiScaffold) -> Result<Extraction, FrameError> {
    check_semi_scaffold(m, s)?;
    let alg = m.algebra;
    let pos: BTreeMap<usize, usize> = s.order.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let groups = s.order.iter().map(|&x| m.record(x).map(|r| r.group.clone())).collect::<Result<Vec<_>, _>>()?;
    let labels = s.order.iter().map(|&x| alg.name(x).to_string()).collect();
    let e = m.equivalence()?;
    let mut classes: Vec<Vec<usize>> = e
        .classes
        .iter()
        .map(|c| {
            let mut v: Vec<usize> = c.iter().map(|x| pos[x]).collect();
            v.sort();
            v
        })
        .collect();
    classes.sort();

    let mut pairs = BTreeMap::new();
    let mut atom_index = vec![(usize::MAX, 0, 0); alg.atom_count()];
    for &(x, y) in e.pairs() {
        let a = AtomSet::singleton(s.entry(x, y));
        let data = m.stabilizer_of(a, x, y)?;
        let phi = m.regular_iso(a, x, y)?;
        for alpha in 0..phi.source().len() {
            let t = m.translate_set(a, phi.source().representative(alpha), Side::Left, x, y)?;
            let atom = t.min().filter(|_| t.len() == 1).ok_or(FrameError::BadEntry(x, y))?;
            if atom_index[atom].0 != usize::MAX {
                return Err(FrameError::BadEntry(x, y));
            }
            atom_index[atom] = (pos[&x], pos[&y], alpha);
        }
        pairs.insert((pos[&x], pos[&y]), PairData { h: data.left, k: data.right, phi });
    }
    if atom_index.iter().any(|t| t.0 == usize::MAX) {
        return Err(FrameError::NotSemiFrame("partition", "some atom is not of the form H_{xy,α};a_xy".into()));
    }

    let mut shifts = BTreeMap::new();
    for (x, y, z) in e.triples() {
        let candidates = shifting_candidates(m, s, x, y, z)?;
        let c = candidates.first().ok_or(FrameError::NoShiftingCoset(x, y, z))?.1;
        shifts.insert((pos[&x], pos[&y], pos[&z]), c);
    }
    let triple = GroupTriple::new(groups, labels, classes, pairs, shifts)?;
    let report = verify_semi_frame(&triple);
    if let Some(c) = report.first_failure() {
        return Err(FrameError::NotSemiFrame(c.label, c.witness.clone().unwrap_or_default()));
    }
    Ok(Extraction { triple, scaffold: s.clone(), atom_index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{build_semi_scaffold, find_scaffold, FrameRecord};
    use crate::group::FiniteGroup;
    use crate::ra::{complex_algebra, full_relation_algebra};

    #[test]
    fn z3_extraction() {
        let z3 = complex_algebra(&FiniteGroup::cyclic(3).unwrap());
        let m = Measured::new(&z3).unwrap();
        let s = build_semi_scaffold(&m, None).unwrap();
        let ex = extract_semi_frame(&m, &s).unwrap();
        let t = &ex.triple;
        assert_eq!(t.len(), 1);
        assert!(t.group(0).same_table(&FiniteGroup::cyclic(3).unwrap()));
        assert_eq!(t.pair(0, 0).h.order(), 1);
        assert!(t.nontrivial_shifts().is_empty());
        assert_eq!(ex.atom_index, vec![(0, 0, 0), (0, 0, 1), (0, 0, 2)]);
        assert!(shifting_coset_well_defined(&m, &s, 0, 0, 0).unwrap());
        assert!(FrameRecord::new(ex.triple).frame);
    }

    #[test]
    fn re2_extraction_is_trivial() {
        let re2 = full_relation_algebra(2);
        let m = Measured::new(&re2).unwrap();
        let s = find_scaffold(&m, None).unwrap().scaffold.unwrap();
        let ex = extract_semi_frame(&m, &s).unwrap();
        for (x, y) in ex.triple.pairs() {
            assert_eq!(ex.triple.kappa(x, y), 1);
        }
        assert!(FrameRecord::new(ex.triple).frame);
    }

    #[test]
    fn s3_shifts_are_identity_under_a_scaffold() {
        let s3 = complex_algebra(&FiniteGroup::symmetric(3).unwrap());
        let m = Measured::new(&s3).unwrap();
        let s = find_scaffold(&m, None).unwrap().scaffold.unwrap();
        let ex = extract_semi_frame(&m, &s).unwrap();
        assert!(ex.triple.nontrivial_shifts().is_empty());
    }
}
