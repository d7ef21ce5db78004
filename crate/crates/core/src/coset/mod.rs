//! Coset relation algebras built from group triples.
//!
//! The base set is the disjoint union of the groups `G_x`, with elements
//! labelled `x.g`. Each related pair `(x,y)` and coset index `α` of `H_xy`
//! gives an atomic relation `R_{xy,α}`. Composition of atoms is the shifted
//! product `⊗`, computed on cosets alone; the concrete relations are kept
//! for cross-checking against genuine relational composition.

mod generate;
mod relation;
mod witness;

pub use generate::{catalog, generate_triples, quotient_isos, GenBounds, GenOutcome, GenStats, Generated};
pub use relation::{BaseSet, Relation};
pub use witness::{parse_rel, write_rel, RelError};

use crate::bits::{IndexSet, MAX_INDEX};
use crate::frame::{verify_semi_frame, FrameRecord, GroupTriple};
use crate::group::GroupError;
use crate::ra::{AtomSet, AtomStructure, StructureError};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetError {
    #[error("not a semi-frame: condition {0} fails: {1}")]
    NotSemiFrame(&'static str, String),
    #[error("the triple is not a frame")]
    NotFrame,
    #[error("base set has {0} elements, more than the supported 64")]
    BaseTooLarge(usize),
    #[error("the triple yields {0} atoms, more than the supported 64")]
    TooManyAtoms(usize),
    #[error("composition of {0} and {1} is not a union of atomic relations")]
    NotAtomic(String, String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// An atom `R_{xy,α}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CosetAtomIndex {
    pub x: usize,
    pub y: usize,
    pub alpha: usize,
}

impl fmt::Display for CosetAtomIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}_{}_{}", self.x, self.y, self.alpha)
    }
}

/// A built algebra together with the concrete relation of every atom.
#[derive(Clone, Debug)]
pub struct CosetAlgebra {
    pub structure: AtomStructure,
    pub base: BaseSet,
    pub atoms: Vec<CosetAtomIndex>,
    pub relations: Vec<Relation>,
}

impl CosetAlgebra {
    pub fn atom_of(&self, idx: CosetAtomIndex) -> Option<usize> {
        self.atoms.binary_search(&idx).ok()
    }

    /// Union of the relations of a set of atoms.
    pub fn realize(&self, atoms: AtomSet) -> Relation {
        atoms.iter().fold(Relation::empty(&self.base), |acc, a| acc.union(&self.relations[a]))
    }

    /// The atoms whose relations make up `r`, if `r` is such a union.
    pub fn atoms_of(&self, r: &Relation) -> Option<AtomSet> {
        let mut atoms = AtomSet::EMPTY;
        let mut covered = Relation::empty(&self.base);
        for (i, rel) in self.relations.iter().enumerate() {
            if rel.is_subset(r) {
                atoms.insert(i);
                covered = covered.union(rel);
            } else if !rel.is_disjoint(r) {
                return None;
            }
        }
        (covered == *r).then_some(atoms)
    }
}

pub fn base_set(f: &GroupTriple) -> Result<BaseSet, CosetError> {
    let sizes: Vec<usize> = (0..f.len()).map(|x| f.group(x).order()).collect();
    let total: usize = sizes.iter().sum();
    if total > MAX_INDEX {
        return Err(CosetError::BaseTooLarge(total));
    }
    Ok(BaseSet::new(sizes))
}

/// `H_{xy,α}`, the `α`-th coset in the source system of `φ_xy`.
fn h_coset(f: &GroupTriple, x: usize, y: usize, alpha: usize) -> IndexSet {
    f.pair(x, y).phi.source().coset(alpha)
}

/// `K_{xy,α} = φ_xy(H_{xy,α})`.
fn k_coset(f: &GroupTriple, x: usize, y: usize, alpha: usize) -> IndexSet {
    let phi = &f.pair(x, y).phi;
    phi.target().coset(phi.apply(alpha))
}

/// `R_{xy,α} = ⋃_ξ H_{xy,ξ} × (K_{xy,ξ}·K_{xy,α})`.
pub fn atomic_relation(f: &GroupTriple, base: &BaseSet, idx: CosetAtomIndex) -> Relation {
    let CosetAtomIndex { x, y, alpha } = idx;
    let gy = f.group(y);
    let ka = k_coset(f, x, y, alpha);
    let mut r = Relation::empty(base);
    for xi in 0..f.pair(x, y).phi.source().len() {
        let targets = gy.set_mul(k_coset(f, x, y, xi), ka);
        let row: IndexSet = targets.iter().map(|h| base.element(y, h)).collect();
        for g in h_coset(f, x, y, xi) {
            r.add_row(base.element(x, g), row);
        }
    }
    r
}

/// All atom indices in lexicographic order.
pub fn atom_indices(f: &GroupTriple) -> Vec<CosetAtomIndex> {
    f.pairs()
        .flat_map(|(x, y)| (0..f.kappa(x, y)).map(move |alpha| CosetAtomIndex { x, y, alpha }))
        .collect()
}

/// `R_{xy,α} ⊗ R_{yz,β}` as a set of coset indices of `H_xz`.
pub fn otimes(f: &GroupTriple, a: CosetAtomIndex, b: CosetAtomIndex) -> Vec<usize> {
    if a.y != b.x {
        return Vec::new();
    }
    let (x, y, z) = (a.x, a.y, b.y);
    let gx = f.group(x);
    let gy = f.group(y);
    let middle = gy.set_mul(k_coset(f, x, y, a.alpha), h_coset(f, y, z, b.alpha));
    let pulled = f.pair(x, y).phi.preimage(middle);
    let shifted = gx.set_mul(pulled, f.shift(x, y, z));
    let target = f.pair(x, z).phi.source();
    (0..target.len()).filter(|&g| target.coset(g).is_subset(shifted)).collect()
}

/// The converse atom: `R_{xy,α}˘ = R_{yx,β}` with `H_{yx,β} = φ_xy[H_{xy,α}⁻¹]`.
pub fn converse_index(f: &GroupTriple, a: CosetAtomIndex) -> Result<CosetAtomIndex, CosetError> {
    let gx = f.group(a.x);
    let image = f.pair(a.x, a.y).phi.image(gx.set_inverse(h_coset(f, a.x, a.y, a.alpha)));
    let beta = f.pair(a.y, a.x).phi.source().index_of(image).ok_or(GroupError::BadCosets)?;
    Ok(CosetAtomIndex { x: a.y, y: a.x, alpha: beta })
}

fn require_semi_frame(f: &GroupTriple) -> Result<(), CosetError> {
    if let Some(c) = verify_semi_frame(f).first_failure() {
        return Err(CosetError::NotSemiFrame(c.label, c.witness.clone().unwrap_or_default()));
    }
    Ok(())
}

/// Atoms, names, converse, identity and concrete relations shared by both
/// builders.
fn skeleton(f: &GroupTriple) -> Result<(BaseSet, Vec<CosetAtomIndex>, Vec<usize>, AtomSet, Vec<Relation>), CosetError> {
    let base = base_set(f)?;
    let atoms = atom_indices(f);
    if atoms.len() > MAX_INDEX {
        return Err(CosetError::TooManyAtoms(atoms.len()));
    }
    let position = |i: CosetAtomIndex| atoms.binary_search(&i).expect("atom index in range");
    let converse =
        atoms.iter().map(|&a| converse_index(f, a).map(position)).collect::<Result<Vec<_>, _>>()?;
    let identity: AtomSet = (0..f.len()).map(|x| position(CosetAtomIndex { x, y: x, alpha: 0 })).collect();
    let relations = atoms.iter().map(|&a| atomic_relation(f, &base, a)).collect();
    Ok((base, atoms, converse, identity, relations))
}

/// The coset algebra `C[F]` with composition `⊗`. The result need not
/// satisfy the relation algebra laws; callers check.
pub fn build_coset_algebra(f: &GroupTriple) -> Result<CosetAlgebra, CosetError> {
    require_semi_frame(f)?;
    let (base, atoms, converse, identity, relations) = skeleton(f)?;
    let n = atoms.len();
    let mut table = vec![AtomSet::EMPTY; n * n];
    for (i, &a) in atoms.iter().enumerate() {
        for (j, &b) in atoms.iter().enumerate() {
            if a.y != b.x {
                continue;
            }
            table[i * n + j] = otimes(f, a, b)
                .into_iter()
                .map(|gamma| atoms.binary_search(&CosetAtomIndex { x: a.x, y: b.y, alpha: gamma }).unwrap())
                .collect();
        }
    }
    let names = atoms.iter().map(|a| a.to_string()).collect();
    let structure = AtomStructure::new_unchecked(names, converse, identity, table)?;
    Ok(CosetAlgebra { structure, base, atoms, relations })
}

/// The group relation algebra `G[F]` of a frame, composed as genuine
/// relations.
pub fn build_group_algebra(f: &FrameRecord) -> Result<CosetAlgebra, CosetError> {
    if !f.frame {
        return Err(CosetError::NotFrame);
    }
    let t = &f.triple;
    require_semi_frame(t)?;
    let (base, atoms, converse, identity, relations) = skeleton(t)?;
    let n = atoms.len();
    let names: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
    let mut partial = CosetAlgebra {
        structure: AtomStructure::new_unchecked(names.clone(), converse.clone(), identity, vec![AtomSet::EMPTY; n * n])?,
        base,
        atoms,
        relations,
    };
    let mut table = vec![AtomSet::EMPTY; n * n];
    for i in 0..n {
        for j in 0..n {
            let r = partial.relations[i].compose(&partial.relations[j]);
            table[i * n + j] = partial
                .atoms_of(&r)
                .ok_or_else(|| CosetError::NotAtomic(names[i].clone(), names[j].clone()))?;
        }
    }
    partial.structure = AtomStructure::new_unchecked(names, converse, identity, table)?;
    Ok(partial)
}

/// One atom pair where `⊗` and relational composition differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub left: CosetAtomIndex,
    pub right: CosetAtomIndex,
    pub otimes: AtomSet,
    /// `None` when the composite is not a union of atomic relations.
    pub composition: Option<AtomSet>,
}

impl Discrepancy {
    pub fn render(&self, alg: &CosetAlgebra) -> String {
        let comp = match self.composition {
            Some(s) => alg.structure.format_set(s),
            None => "not a union of atoms".to_string(),
        };
        format!("{} ; {}: otimes {} composition {}", self.left, self.right, alg.structure.format_set(self.otimes), comp)
    }
}

/// Compares `⊗` with relational composition of the atomic relations over
/// every atom pair.
pub fn compare_otimes_composition(alg: &CosetAlgebra) -> Vec<Discrepancy> {
    let n = alg.atoms.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let r = alg.relations[i].compose(&alg.relations[j]);
            let composition = alg.atoms_of(&r);
            let otimes = alg.structure.compose_atoms(i, j);
            if composition != Some(otimes) {
                out.push(Discrepancy { left: alg.atoms[i], right: alg.atoms[j], otimes, composition });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
