//! Finite relation algebras presented by their atoms.
//!
//! An [`AtomStructure`] holds the converse permutation, the identity atoms and
//! a dense composition table. Elements are sets of atoms; every operation is
//! the atomwise union dictated by complete distributivity.

mod axioms;
mod elements;
mod format;
mod library;

pub use axioms::{verify_ra_axioms, AxiomReport, CheckConfig, CheckMode, Coverage, Law, LawVerdict, Witness};
pub use elements::ElementTable;
pub use format::{load_ra, load_ra_unchecked, write_ra, RaFormatError};
pub use library::{complex_algebra, disjoint_union, full_relation_algebra};

use crate::bits::{IndexSet, MAX_INDEX};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

/// A set of atom indices.
pub type AtomSet = IndexSet;

static NEXT_STRUCTURE_ID: AtomicU64 = AtomicU64::new(1);

/// Identity of one constructed structure. Clones share it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StructureId(u64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("structure needs at least one atom")]
    NoAtoms,
    #[error("{0} atoms exceeds the limit of {MAX_INDEX}")]
    TooManyAtoms(usize),
    #[error("expected {expected} names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("atom name {0:?} is empty, repeated or contains whitespace")]
    BadName(String),
    #[error("converse map has {got} entries for {expected} atoms")]
    ConverseLength { expected: usize, got: usize },
    #[error("converse of atom {atom} is {image}, out of range")]
    ConverseRange { atom: usize, image: usize },
    #[error("converse is not an involution: atom {atom} maps to {image} which maps to {back}")]
    NotInvolution { atom: usize, image: usize, back: usize },
    #[error("identity atom set is empty")]
    NoIdentity,
    #[error("identity atom {0} is out of range")]
    IdentityRange(usize),
    #[error("identity atom {atom} is not self-converse (converse is {image})")]
    IdentityNotSelfConverse { atom: usize, image: usize },
    #[error("composition table has {got} entries, expected {expected}")]
    TableShape { expected: usize, got: usize },
    #[error("composition ({i},{j}) names an atom out of range")]
    TableRange { i: usize, j: usize },
    #[error("triangle symmetry fails at ({i},{j},{k}): {k} <= {i};{j} but a rotation is missing")]
    TriangleSymmetry { i: usize, j: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RaError {
    #[error("elements belong to different structures")]
    StructureMismatch,
    #[error("atom set {0} is out of range for this structure")]
    OutOfRange(AtomSet),
    #[error("argument {0} is not below the identity")]
    NotSubidentity(AtomSet),
}

/// A finite relation algebra given by its atoms.
#[derive(Clone)]
pub struct AtomStructure {
    id: StructureId,
    names: Vec<String>,
    converse: Vec<usize>,
    identity: AtomSet,
    table: Vec<AtomSet>,
}

impl fmt::Debug for AtomStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AtomStructure")
            .field("names", &self.names)
            .field("converse", &self.converse)
            .field("identity", &self.identity)
            .finish_non_exhaustive()
    }
}

/// An element of one particular structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    structure: StructureId,
    atoms: AtomSet,
}

impl Element {
    pub fn structure(&self) -> StructureId {
        self.structure
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }
}

impl AtomStructure {
    /// Builds a structure and checks every invariant: involutive converse,
    /// self-converse identity atoms and Peircean triangle symmetry.
    pub fn new(
        names: Vec<String>,
        converse: Vec<usize>,
        identity: AtomSet,
        table: Vec<AtomSet>,
    ) -> Result<Self, StructureError> {
        let s = Self::new_unchecked(names, converse, identity, table)?;
        s.validate()?;
        Ok(s)
    }

    /// Builds a structure checking only its shape (sizes and ranges). The
    /// result may violate the relation algebra laws; this is how broken
    /// tables reach the axiom verifier.
    pub fn new_unchecked(
        names: Vec<String>,
        converse: Vec<usize>,
        identity: AtomSet,
        table: Vec<AtomSet>,
    ) -> Result<Self, StructureError> {
        let n = names.len();
        if n == 0 {
            return Err(StructureError::NoAtoms);
        }
        if n > MAX_INDEX {
            return Err(StructureError::TooManyAtoms(n));
        }
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if name.is_empty() || name.chars().any(char::is_whitespace) || !seen.insert(name.as_str()) {
                return Err(StructureError::BadName(name.clone()));
            }
        }
        if converse.len() != n {
            return Err(StructureError::ConverseLength { expected: n, got: converse.len() });
        }
        if let Some((atom, &image)) = converse.iter().enumerate().find(|(_, &c)| c >= n) {
            return Err(StructureError::ConverseRange { atom, image });
        }
        if identity.is_empty() {
            return Err(StructureError::NoIdentity);
        }
        if let Some(bad) = identity.difference(AtomSet::full(n)).min() {
            return Err(StructureError::IdentityRange(bad));
        }
        if table.len() != n * n {
            return Err(StructureError::TableShape { expected: n * n, got: table.len() });
        }
        let all = AtomSet::full(n);
        for i in 0..n {
            for j in 0..n {
                if !table[i * n + j].is_subset(all) {
                    return Err(StructureError::TableRange { i, j });
                }
            }
        }
        Ok(AtomStructure {
            id: StructureId(NEXT_STRUCTURE_ID.fetch_add(1, Ordering::Relaxed)),
            names,
            converse,
            identity,
            table,
        })
    }

    /// Checks the load-time invariants, reporting the first violation.
    pub fn validate(&self) -> Result<(), StructureError> {
        let n = self.atom_count();
        for a in 0..n {
            let image = self.converse[a];
            let back = self.converse[image];
            if back != a {
                return Err(StructureError::NotInvolution { atom: a, image, back });
            }
        }
        for e in self.identity {
            if self.converse[e] != e {
                return Err(StructureError::IdentityNotSelfConverse { atom: e, image: self.converse[e] });
            }
        }
        if let Some((i, j, k)) = self.triangle_violation() {
            return Err(StructureError::TriangleSymmetry { i, j, k });
        }
        Ok(())
    }

    /// First `(i,j,k)` with `k <= i;j` whose Peircean rotations are missing.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.atom_count();
        for i in 0..n {
            for j in 0..n {
                for k in self.compose_atoms(i, j) {
                    let left = self.compose_atoms(self.converse[i], k).contains(j);
                    let right = self.compose_atoms(k, self.converse[j]).contains(i);
                    if !(left && right) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn id(&self) -> StructureId {
        self.id
    }

    pub fn atom_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, atom: usize) -> &str {
        &self.names[atom]
    }

    pub fn atom_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn converse_atom(&self, atom: usize) -> usize {
        self.converse[atom]
    }

    pub fn converse_map(&self) -> &[usize] {
        &self.converse
    }

    pub fn identity_atoms(&self) -> AtomSet {
        self.identity
    }

    pub fn all_atoms(&self) -> AtomSet {
        AtomSet::full(self.atom_count())
    }

    pub fn compose_atoms(&self, i: usize, j: usize) -> AtomSet {
        self.table[i * self.atom_count() + j]
    }

    // Raw set operations. Callers are responsible for staying inside one
    // structure; the checked API below is the public face.

    pub fn compose(&self, a: AtomSet, b: AtomSet) -> AtomSet {
        let mut out = AtomSet::EMPTY;
        for i in a {
            for j in b {
                out = out.union(self.compose_atoms(i, j));
            }
        }
        out
    }

    pub fn converse_set(&self, a: AtomSet) -> AtomSet {
        a.iter().map(|i| self.converse[i]).collect()
    }

    pub fn complement_set(&self, a: AtomSet) -> AtomSet {
        a.complement(self.atom_count())
    }

    /// `x;1;y` on raw sets.
    pub fn rect(&self, x: AtomSet, y: AtomSet) -> AtomSet {
        self.compose(self.compose(x, self.all_atoms()), y)
    }

    /// Wraps a raw set as an element of this structure.
    pub fn element(&self, atoms: AtomSet) -> Result<Element, RaError> {
        if !atoms.is_subset(self.all_atoms()) {
            return Err(RaError::OutOfRange(atoms));
        }
        Ok(Element { structure: self.id, atoms })
    }

    pub fn atom(&self, i: usize) -> Element {
        assert!(i < self.atom_count(), "atom {i} out of range");
        Element { structure: self.id, atoms: AtomSet::singleton(i) }
    }

    pub fn zero(&self) -> Element {
        Element { structure: self.id, atoms: AtomSet::EMPTY }
    }

    pub fn unit(&self) -> Element {
        Element { structure: self.id, atoms: self.all_atoms() }
    }

    pub fn identity(&self) -> Element {
        Element { structure: self.id, atoms: self.identity }
    }

    fn own(&self, e: &Element) -> Result<AtomSet, RaError> {
        if e.structure != self.id {
            return Err(RaError::StructureMismatch);
        }
        Ok(e.atoms)
    }

    pub fn atoms_below(&self, e: &Element) -> Result<AtomSet, RaError> {
        self.own(e)
    }

    pub fn relative_product(&self, a: &Element, b: &Element) -> Result<Element, RaError> {
        let atoms = self.compose(self.own(a)?, self.own(b)?);
        Ok(Element { structure: self.id, atoms })
    }

    pub fn converse_of(&self, a: &Element) -> Result<Element, RaError> {
        let atoms = self.converse_set(self.own(a)?);
        Ok(Element { structure: self.id, atoms })
    }

    pub fn join(&self, a: &Element, b: &Element) -> Result<Element, RaError> {
        let atoms = self.own(a)?.union(self.own(b)?);
        Ok(Element { structure: self.id, atoms })
    }

    pub fn meet(&self, a: &Element, b: &Element) -> Result<Element, RaError> {
        let atoms = self.own(a)?.intersection(self.own(b)?);
        Ok(Element { structure: self.id, atoms })
    }

    pub fn complement(&self, a: &Element) -> Result<Element, RaError> {
        let atoms = self.complement_set(self.own(a)?);
        Ok(Element { structure: self.id, atoms })
    }

    /// `x;1;y` for subidentity elements `x`, `y`.
    pub fn rectangle(&self, x: &Element, y: &Element) -> Result<Element, RaError> {
        let (xs, ys) = (self.own(x)?, self.own(y)?);
        for s in [xs, ys] {
            if !s.is_subset(self.identity) {
                return Err(RaError::NotSubidentity(s));
            }
        }
        Ok(Element { structure: self.id, atoms: self.rect(xs, ys) })
    }

    /// Renders an atom set with atom names, ascending by index.
    pub fn format_set(&self, a: AtomSet) -> String {
        let names: Vec<&str> = a.iter().map(|i| self.name(i)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Relabels atoms: atom `i` becomes atom `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<AtomStructure, StructureError> {
        let n = self.atom_count();
        assert_eq!(perm.len(), n, "permutation length");
        let map = |s: AtomSet| -> AtomSet { s.iter().map(|i| perm[i]).collect() };
        let mut names = vec![String::new(); n];
        let mut converse = vec![0; n];
        let mut table = vec![AtomSet::EMPTY; n * n];
        for i in 0..n {
            names[perm[i]] = self.names[i].clone();
            converse[perm[i]] = perm[self.converse[i]];
            for j in 0..n {
                table[perm[i] * n + perm[j]] = map(self.compose_atoms(i, j));
            }
        }
        AtomStructure::new_unchecked(names, converse, map(self.identity), table)
    }

    /// True when both structures have identical tables, names aside.
    pub fn same_table(&self, other: &AtomStructure) -> bool {
        self.converse == other.converse && self.identity == other.identity && self.table == other.table
    }
}
