use super::{MeasureError, Measured};
use crate::bits::IndexSet;
use crate::group::{CosetSystem, Side, Subgroup};
use crate::ra::AtomSet;

/// `b = Σ M_γ;a`: an atom `a`, a subgroup `M` of `G_x` containing `L_a`,
/// and the index `γ` of a coset `M;g` in its canonical system. These are the
/// cosets that make `Σ M;g;a = Σ M;(g;a)` a sum over a translation of `a`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub atom: usize,
    pub subgroup: Subgroup,
    pub coset: usize,
}

impl Decomposition {
    pub fn coset_members(&self) -> IndexSet {
        CosetSystem::new(&self.subgroup, Side::Right).coset(self.coset)
    }
}

impl Measured<'_> {
    /// `Σ {g;a : g in set}` for group elements of `G_x`.
    pub fn sum_of_translates(&self, a: AtomSet, set: IndexSet, x: usize, y: usize) -> Result<AtomSet, MeasureError> {
        let mut out = AtomSet::EMPTY;
        for g in set {
            out = out.union(self.translate_set(a, g, Side::Left, x, y)?);
        }
        Ok(out)
    }

    /// `None` when `b` is not regular. The subgroup is found by searching
    /// every subgroup of `G_x` that contains the stabilizer of the atom, not
    /// by reading off `L_b`, so comparing the two is a real check.
    pub fn decompose(
        &self,
        b: AtomSet,
        x: usize,
        y: usize,
        atom: Option<usize>,
    ) -> Result<Option<Decomposition>, MeasureError> {
        let rect = self.rectangle(x, y);
        if rect.is_empty() {
            return Err(MeasureError::EmptyRectangle(x, y));
        }
        let data = self.stabilizer_of(b, x, y)?;
        if !data.is_regular() {
            return Ok(None);
        }
        let a = atom.unwrap_or_else(|| b.min().unwrap());
        if !rect.contains(a) {
            return Err(MeasureError::OutsideRectangle { element: AtomSet::singleton(a), x, y });
        }
        let base = AtomSet::singleton(a);
        let la = self.stabilizer_of(base, x, y)?.left;
        let group = &self.record(x)?.group;
        for m in Subgroup::all(group) {
            if !la.members().is_subset(m.members()) {
                continue;
            }
            let system = CosetSystem::new(&m, Side::Right);
            for gamma in 0..system.len() {
                if self.sum_of_translates(base, system.coset(gamma), x, y)? == b {
                    return Ok(Some(Decomposition { atom: a, subgroup: m, coset: gamma }));
                }
            }
        }
        Err(MeasureError::NotRegular)
    }
}
