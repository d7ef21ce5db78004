use super::{CosetSystem, GroupError, Side, Subgroup};
use crate::bits::IndexSet;
use std::fmt;

/// An isomorphism `G/H → G'/K` between quotients by normal subgroups, given
/// as a map from source coset indices to target coset indices.
#[derive(Clone)]
pub struct QuotientIso {
    source: CosetSystem,
    target: CosetSystem,
    map: Vec<usize>,
}

impl fmt::Debug for QuotientIso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

impl QuotientIso {
    /// Builds and fully checks an isomorphism.
    pub fn new(source: CosetSystem, target: CosetSystem, map: Vec<usize>) -> Result<QuotientIso, GroupError> {
        for sys in [&source, &target] {
            if !sys.subgroup().is_normal() {
                return Err(GroupError::NotNormal(sys.subgroup().members()));
            }
        }
        let k = source.len();
        if map.len() != k || target.len() != k {
            return Err(GroupError::NotBijective);
        }
        let mut hit = vec![false; k];
        for &t in &map {
            if t >= k || hit[t] {
                return Err(GroupError::NotBijective);
            }
            hit[t] = true;
        }
        if map[0] != 0 {
            return Err(GroupError::IdentityCosetMoved(map[0]));
        }
        let iso = QuotientIso { source, target, map };
        if let Err((i, j)) = iso.verify() {
            return Err(GroupError::NotHomomorphism(i, j));
        }
        Ok(iso)
    }

    /// Builds from `(source representative, target representative)` pairs,
    /// one per source coset, over canonical coset systems of `h` and `k`.
    pub fn from_representatives(h: &Subgroup, k: &Subgroup, pairs: &[(usize, usize)]) -> Result<QuotientIso, GroupError> {
        let source = CosetSystem::new(h, Side::Left);
        let target = CosetSystem::new(k, Side::Left);
        let mut map = vec![usize::MAX; source.len()];
        for &(s, t) in pairs {
            if s >= h.group().order() {
                return Err(GroupError::RepresentativeRange(s));
            }
            if t >= k.group().order() {
                return Err(GroupError::RepresentativeRange(t));
            }
            let i = source.coset_of(s);
            if map[i] != usize::MAX {
                return Err(GroupError::NotBijective);
            }
            map[i] = target.coset_of(t);
        }
        if map.contains(&usize::MAX) {
            return Err(GroupError::NotBijective);
        }
        QuotientIso::new(source, target, map)
    }

    /// The identity automorphism of a quotient.
    pub fn identity(system: &CosetSystem) -> Result<QuotientIso, GroupError> {
        QuotientIso::new(system.clone(), system.clone(), (0..system.len()).collect())
    }

    /// `L_ξ ↦ L_η⁻¹·L_ξ·L_η` on the quotient by a normal subgroup.
    pub fn inner_automorphism(system: &CosetSystem, eta: usize) -> Result<QuotientIso, GroupError> {
        let inv = system.inverse(eta);
        let map = (0..system.len()).map(|xi| system.product(system.product(inv, xi), eta)).collect();
        QuotientIso::new(system.clone(), system.clone(), map)
    }

    /// Homomorphism check; on failure returns a pair of source cosets whose
    /// product is not preserved.
    pub fn verify(&self) -> Result<(), (usize, usize)> {
        let k = self.source.len();
        for i in 0..k {
            for j in 0..k {
                let left = self.map[self.source.product(i, j)];
                let right = self.target.product(self.map[i], self.map[j]);
                if left != right {
                    return Err((i, j));
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &CosetSystem {
        &self.source
    }

    pub fn target(&self) -> &CosetSystem {
        &self.target
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Image of a source coset given as a set.
    pub fn apply_set(&self, coset: IndexSet) -> Option<IndexSet> {
        self.source.index_of(coset).map(|i| self.target.coset(self.map[i]))
    }

    /// `φ[X]` for a union `X` of source cosets.
    pub fn image(&self, set: IndexSet) -> IndexSet {
        self.source
            .indices_within(set)
            .into_iter()
            .fold(IndexSet::EMPTY, |acc, i| acc.union(self.target.coset(self.map[i])))
    }

    /// `φ⁻¹[Y]` for a union `Y` of target cosets.
    pub fn preimage(&self, set: IndexSet) -> IndexSet {
        (0..self.source.len())
            .filter(|&i| self.target.coset(self.map[i]).is_subset(set))
            .fold(IndexSet::EMPTY, |acc, i| acc.union(self.source.coset(i)))
    }

    pub fn inverse(&self) -> QuotientIso {
        let mut map = vec![0; self.map.len()];
        for (i, &t) in self.map.iter().enumerate() {
            map[t] = i;
        }
        QuotientIso { source: self.target.clone(), target: self.source.clone(), map }
    }

    /// Relational composition `self | next`: apply `self` first.
    pub fn then(&self, next: &QuotientIso) -> Result<QuotientIso, GroupError> {
        let mut map = Vec::with_capacity(self.map.len());
        for &t in &self.map {
            let mid = next.source.index_of(self.target.coset(t)).ok_or(GroupError::QuotientMismatch)?;
            map.push(next.map[mid]);
        }
        if next.source.len() != self.target.len() {
            return Err(GroupError::QuotientMismatch);
        }
        QuotientIso::new(self.source.clone(), next.target.clone(), map)
    }

    /// The map as sorted `(source coset, target coset)` set pairs, which is
    /// independent of how either side is indexed.
    pub fn pairs(&self) -> Vec<(IndexSet, IndexSet)> {
        let mut v: Vec<(IndexSet, IndexSet)> =
            (0..self.map.len()).map(|i| (self.source.coset(i), self.target.coset(self.map[i]))).collect();
        v.sort();
        v
    }

    pub fn same_map(&self, other: &QuotientIso) -> bool {
        self.pairs() == other.pairs()
    }

    /// The isomorphism induced on `G/M` for a normal `M ⊇ H`: each `M`-coset
    /// goes to the union of the images of the `H`-cosets inside it.
    pub fn induce_on_coarser(&self, m: &Subgroup) -> Result<QuotientIso, GroupError> {
        let h = self.source.subgroup();
        if !h.members().is_subset(m.members()) {
            return Err(GroupError::NotCoarser(m.members()));
        }
        if !m.is_normal() {
            return Err(GroupError::NotNormal(m.members()));
        }
        let n_set = self.image(m.members());
        let n = Subgroup::from_members(self.target.group(), n_set)
            .filter(Subgroup::is_normal)
            .ok_or(GroupError::ImageNotSubgroup(n_set))?;
        let coarse_source = CosetSystem::new(m, Side::Left);
        let coarse_target = CosetSystem::new(&n, Side::Left);
        let mut map = Vec::with_capacity(coarse_source.len());
        for eta in 0..coarse_source.len() {
            let img = self.image(coarse_source.coset(eta));
            map.push(coarse_target.index_of(img).ok_or(GroupError::ImageNotCoset(eta))?);
        }
        QuotientIso::new(coarse_source, coarse_target, map)
    }
}
