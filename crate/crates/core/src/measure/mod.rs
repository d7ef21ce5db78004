//! Measurable atoms, their permutation groups, stabilizers and regular
//! elements.
//!
//! A subidentity atom `x` is measurable when every atom below its square
//! `x;1;x` is functional. Those atoms then form a group `G_x` under relative
//! product. Elements below a rectangle `x;1;y` are studied through the left
//! and right translations by these groups.

mod decompose;
pub mod lemmas;
mod report;
mod stabilizer;

pub use decompose::Decomposition;
pub use report::census_report;
pub use stabilizer::StabilizerData;

use crate::bits::IndexSet;
use crate::group::{FiniteGroup, GroupError, GroupRef};
use crate::ra::{AtomSet, AtomStructure, Element, RaError};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("product of functional atoms {0} and {1} is not an atom")]
    ProductNotAtom(usize, usize),
    #[error("atoms below the square of {atom} do not form a group: {source}")]
    NotAGroup { atom: usize, source: GroupError },
    #[error("atom {0} is not a measurable atom")]
    NotMeasurable(usize),
    #[error("the element is zero")]
    Zero,
    #[error("element {element} is not below the rectangle of ({x},{y})")]
    OutsideRectangle { element: AtomSet, x: usize, y: usize },
    #[error("{0} is not a coset of the stabilizer")]
    NotStabilizerCoset(IndexSet),
    #[error("element is not regular")]
    NotRegular,
    #[error("stabilizer {0} is not normal")]
    NotNormal(IndexSet),
    #[error("stabilizer {0} is not a subgroup")]
    StabilizerNotSubgroup(IndexSet),
    #[error("no right coset matches the left translation by coset {0}")]
    NoMatchingCoset(usize),
    #[error("relation E is not an equivalence: {0}")]
    NotEquivalence(String),
    #[error("no atom lies below the rectangle of ({0},{1})")]
    EmptyRectangle(usize, usize),
    #[error("group error: {0}")]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ra(#[from] RaError),
}

/// A measurable atom and its group.
#[derive(Clone, Debug)]
pub struct MeasurableAtom {
    pub atom: usize,
    pub square: AtomSet,
    pub group: GroupRef,
    /// Group element index to algebra atom. Element 0 is `atom` itself; the
    /// rest follow in ascending atom order.
    pub atom_of: Vec<usize>,
}

impl MeasurableAtom {
    pub fn measure(&self) -> usize {
        self.group.order()
    }

    pub fn element_of(&self, atom: usize) -> Option<usize> {
        self.atom_of.iter().position(|&a| a == atom)
    }

    /// Atoms of a set of group elements.
    pub fn atoms(&self, elements: IndexSet) -> AtomSet {
        elements.iter().map(|g| self.atom_of[g]).collect()
    }

    /// Group elements of a set of atoms below the square.
    pub fn elements(&self, atoms: AtomSet) -> IndexSet {
        atoms.iter().filter_map(|a| self.element_of(a)).collect()
    }
}

/// Atoms `f` with `f˘;f <= 1'`.
pub fn functional_atoms(a: &AtomStructure) -> AtomSet {
    (0..a.atom_count())
        .filter(|&f| a.compose_atoms(a.converse_atom(f), f).is_subset(a.identity_atoms()))
        .collect()
}

/// Every measurable atom with its group, in ascending atom order.
pub fn measurable_atoms(a: &AtomStructure) -> Result<Vec<MeasurableAtom>, MeasureError> {
    let functional = functional_atoms(a);
    let mut out = Vec::new();
    for x in a.identity_atoms() {
        let xs = AtomSet::singleton(x);
        let square = a.rect(xs, xs);
        if !square.is_subset(functional) {
            continue;
        }
        let mut atom_of = vec![x];
        atom_of.extend(square.iter().filter(|&f| f != x));
        let m = atom_of.len();
        let mut table = vec![vec![0; m]; m];
        for (i, &f) in atom_of.iter().enumerate() {
            for (j, &g) in atom_of.iter().enumerate() {
                let p = a.compose_atoms(f, g);
                if p.len() != 1 {
                    return Err(MeasureError::ProductNotAtom(f, g));
                }
                let k = p.min().unwrap();
                table[i][j] = atom_of.iter().position(|&h| h == k).ok_or(MeasureError::ProductNotAtom(f, g))?;
            }
        }
        let labels = atom_of.iter().map(|&f| a.name(f).to_string()).collect();
        let group = FiniteGroup::from_table(&table, Some(labels))
            .map_err(|source| MeasureError::NotAGroup { atom: x, source })?;
        out.push(MeasurableAtom { atom: x, square, group: Arc::new(group), atom_of });
    }
    Ok(out)
}

/// True when the identity is the sum of measurable atoms.
pub fn is_measurable_algebra(a: &AtomStructure) -> bool {
    match measurable_atoms(a) {
        Ok(records) => records.iter().map(|r| r.atom).collect::<AtomSet>() == a.identity_atoms(),
        Err(_) => false,
    }
}

/// The relation `x E y` iff `x;1;y != 0` on the measurable atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceE {
    /// The index set `I`, ascending.
    pub index: Vec<usize>,
    /// Equivalence classes, each ascending, ordered by least member.
    pub classes: Vec<Vec<usize>>,
    related: Vec<(usize, usize)>,
}

impl EquivalenceE {
    pub fn related(&self, x: usize, y: usize) -> bool {
        self.related.binary_search(&(x, y)).is_ok()
    }

    /// All related pairs, lexicographic.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.related
    }

    /// All `(x,y,z)` with `x E y` and `y E z`.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for &(x, y) in &self.related {
            for &(w, z) in &self.related {
                if w == y {
                    out.push((x, y, z));
                }
            }
        }
        out
    }
}

pub fn equivalence_e(a: &AtomStructure, records: &[MeasurableAtom]) -> Result<EquivalenceE, MeasureError> {
    let index: Vec<usize> = records.iter().map(|r| r.atom).collect();
    let mut related = Vec::new();
    for &x in &index {
        for &y in &index {
            if !a.rect(AtomSet::singleton(x), AtomSet::singleton(y)).is_empty() {
                related.push((x, y));
            }
        }
    }
    let rel = |x, y| related.contains(&(x, y));
    for &x in &index {
        if !rel(x, x) {
            return Err(MeasureError::NotEquivalence(format!("{x} is not related to itself")));
        }
        for &y in &index {
            if rel(x, y) && !rel(y, x) {
                return Err(MeasureError::NotEquivalence(format!("({x},{y}) without ({y},{x})")));
            }
            for &z in &index {
                if rel(x, y) && rel(y, z) && !rel(x, z) {
                    return Err(MeasureError::NotEquivalence(format!("({x},{y}),({y},{z}) without ({x},{z})")));
                }
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &x in &index {
        if !classes.iter().any(|c| c.contains(&x)) {
            classes.push(index.iter().copied().filter(|&y| rel(x, y)).collect());
        }
    }
    related.sort();
    Ok(EquivalenceE { index, classes, related })
}

/// An algebra together with its measurable atoms; the stabilizer and
/// regularity operations hang off this.
#[derive(Clone, Debug)]
pub struct Measured<'a> {
    pub algebra: &'a AtomStructure,
    pub records: Vec<MeasurableAtom>,
}

impl<'a> Measured<'a> {
    pub fn new(algebra: &'a AtomStructure) -> Result<Measured<'a>, MeasureError> {
        Ok(Measured { algebra, records: measurable_atoms(algebra)? })
    }

    pub fn record(&self, x: usize) -> Result<&MeasurableAtom, MeasureError> {
        self.records.iter().find(|r| r.atom == x).ok_or(MeasureError::NotMeasurable(x))
    }

    pub fn is_measurable(&self) -> bool {
        self.records.iter().map(|r| r.atom).collect::<AtomSet>() == self.algebra.identity_atoms()
    }

    pub fn equivalence(&self) -> Result<EquivalenceE, MeasureError> {
        equivalence_e(self.algebra, &self.records)
    }

    pub fn rectangle(&self, x: usize, y: usize) -> AtomSet {
        self.algebra.rect(AtomSet::singleton(x), AtomSet::singleton(y))
    }

    fn own(&self, e: &Element) -> Result<AtomSet, MeasureError> {
        Ok(self.algebra.atoms_below(e)?)
    }

    pub fn stabilizer_data(&self, a: &Element, x: usize, y: usize) -> Result<StabilizerData, MeasureError> {
        self.stabilizer_of(self.own(a)?, x, y)
    }

    /// Left (`f;a`, `f` in `G_x`) or right (`a;g`, `g` in `G_y`) translation
    /// by a single group element.
    pub fn translate(&self, a: &Element, g: usize, side: crate::group::Side, x: usize, y: usize) -> Result<Element, MeasureError> {
        let set = self.translate_set(self.own(a)?, g, side, x, y)?;
        Ok(self.algebra.element(set)?)
    }

    /// Translation by a whole stabilizer coset, which acts as one element.
    pub fn translate_by_coset(
        &self,
        a: &Element,
        coset: IndexSet,
        side: crate::group::Side,
        x: usize,
        y: usize,
    ) -> Result<Element, MeasureError> {
        let set = self.translate_coset_set(self.own(a)?, coset, side, x, y)?;
        Ok(self.algebra.element(set)?)
    }

    pub fn quotient_iso_of_regular(&self, a: &Element, x: usize, y: usize) -> Result<crate::group::QuotientIso, MeasureError> {
        self.regular_iso(self.own(a)?, x, y)
    }

    pub fn find_left_regular_below(&self, a: &Element, x: usize, y: usize) -> Result<Element, MeasureError> {
        let set = self.left_regular_below(self.own(a)?, x, y)?;
        Ok(self.algebra.element(set)?)
    }

    pub fn regular_decomposition(&self, b: &Element, x: usize, y: usize) -> Result<Option<Decomposition>, MeasureError> {
        self.decompose(self.own(b)?, x, y, None)
    }

    /// As [`Self::regular_decomposition`], with a caller-chosen atom below
    /// the rectangle as the base of the translations.
    pub fn regular_decomposition_with(
        &self,
        b: &Element,
        x: usize,
        y: usize,
        atom: usize,
    ) -> Result<Option<Decomposition>, MeasureError> {
        self.decompose(self.own(b)?, x, y, Some(atom))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ra::{complex_algebra, disjoint_union, full_relation_algebra};

    #[test]
    fn functional_atom_examples() {
        assert_eq!(functional_atoms(&full_relation_algebra(2)).len(), 4);
        let z3 = complex_algebra(&FiniteGroup::cyclic(3).unwrap());
        assert_eq!(functional_atoms(&z3).len(), 3);
    }

    #[test]
    fn measurable_examples() {
        let re2 = full_relation_algebra(2);
        let recs = measurable_atoms(&re2).unwrap();
        assert_eq!(recs.iter().map(|r| (r.atom, r.measure())).collect::<Vec<_>>(), vec![(0, 1), (1, 1)]);
        let z3 = complex_algebra(&FiniteGroup::cyclic(3).unwrap());
        let recs = measurable_atoms(&z3).unwrap();
        assert_eq!(recs.len(), 1);
        assert!(recs[0].group.same_table(&FiniteGroup::cyclic(3).unwrap()));
        assert!(is_measurable_algebra(&complex_algebra(&FiniteGroup::symmetric(3).unwrap())));
    }

    /// Identity and diversity on three points: the diversity atom is not
    /// functional, so the identity atom is not measurable.
    pub(crate) fn diversity_three() -> AtomStructure {
        let e = AtomSet::singleton(0);
        let d = AtomSet::singleton(1);
        let table = vec![e, d, d, e.union(d)];
        AtomStructure::new(vec!["e".into(), "d".into()], vec![0, 1], e, table).unwrap()
    }

    #[test]
    fn non_functional_square_is_not_measurable() {
        let a = diversity_three();
        assert_eq!(functional_atoms(&a), AtomSet::singleton(0));
        assert!(measurable_atoms(&a).unwrap().is_empty());
        assert!(!is_measurable_algebra(&a));
        let re1 = full_relation_algebra(1);
        let mixed = disjoint_union(&re1, &a);
        assert_eq!(measurable_atoms(&mixed).unwrap().len(), 1);
        assert!(!is_measurable_algebra(&mixed));
    }

    #[test]
    fn equivalence_examples() {
        let z3 = complex_algebra(&FiniteGroup::cyclic(3).unwrap());
        let m = Measured::new(&z3).unwrap();
        assert_eq!(m.equivalence().unwrap().pairs(), [(0, 0)]);
        let re2 = full_relation_algebra(2);
        let m = Measured::new(&re2).unwrap();
        assert!(m.equivalence().unwrap().related(0, 1));
        let z2 = complex_algebra(&FiniteGroup::cyclic(2).unwrap());
        let p = disjoint_union(&z2, &z2);
        let m = Measured::new(&p).unwrap();
        assert_eq!(m.equivalence().unwrap().classes, vec![vec![0], vec![2]]);
    }
}
