use super::{FiniteGroup, GroupError, GroupRef, Subgroup};
use crate::bits::IndexSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Cosets `g·H`.
    Left,
    /// Cosets `H·g`.
    Right,
}

/// An indexed list of the cosets of one subgroup, coset 0 being the
/// subgroup itself.
#[derive(Clone, PartialEq)]
pub struct CosetSystem {
    subgroup: Subgroup,
    side: Side,
    cosets: Vec<IndexSet>,
    coset_of: Vec<usize>,
}

impl fmt::Debug for CosetSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.cosets.iter()).finish()
    }
}

impl CosetSystem {
    /// The canonical system: cosets ordered by least member.
    pub fn new(subgroup: &Subgroup, side: Side) -> CosetSystem {
        let g = subgroup.group();
        let mut cosets = Vec::new();
        let mut covered = IndexSet::EMPTY;
        for x in 0..g.order() {
            if covered.contains(x) {
                continue;
            }
            let c = match side {
                Side::Left => g.set_mul(IndexSet::singleton(x), subgroup.members()),
                Side::Right => g.set_mul(subgroup.members(), IndexSet::singleton(x)),
            };
            covered = covered.union(c);
            cosets.push(c);
        }
        Self::from_cosets(subgroup, side, cosets).expect("canonical cosets are valid")
    }

    /// A system in a caller-chosen order. The list must partition the group
    /// into cosets on the given side, with the subgroup first.
    pub fn from_cosets(subgroup: &Subgroup, side: Side, cosets: Vec<IndexSet>) -> Result<CosetSystem, GroupError> {
        let g = subgroup.group();
        if cosets.first() != Some(&subgroup.members()) {
            return Err(GroupError::BadCosets);
        }
        let mut coset_of = vec![usize::MAX; g.order()];
        for (i, &c) in cosets.iter().enumerate() {
            let Some(rep) = c.min() else { return Err(GroupError::BadCosets) };
            let expected = match side {
                Side::Left => g.set_mul(IndexSet::singleton(rep), subgroup.members()),
                Side::Right => g.set_mul(subgroup.members(), IndexSet::singleton(rep)),
            };
            if expected != c {
                return Err(GroupError::BadCosets);
            }
            for x in c {
                if x >= g.order() || coset_of[x] != usize::MAX {
                    return Err(GroupError::BadCosets);
                }
                coset_of[x] = i;
            }
        }
        if coset_of.contains(&usize::MAX) {
            return Err(GroupError::BadCosets);
        }
        Ok(CosetSystem { subgroup: subgroup.clone(), side, cosets, coset_of })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn group(&self) -> &GroupRef {
        self.subgroup.group()
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn coset(&self, i: usize) -> IndexSet {
        self.cosets[i]
    }

    pub fn cosets(&self) -> &[IndexSet] {
        &self.cosets
    }

    /// Least member of coset `i`.
    pub fn representative(&self, i: usize) -> usize {
        self.cosets[i].min().unwrap()
    }

    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    pub fn index_of(&self, set: IndexSet) -> Option<usize> {
        set.min().map(|m| self.coset_of[m]).filter(|&i| self.cosets[i] == set)
    }

    /// Index of the coset product `C_i·C_j` (normal subgroups only).
    pub fn product(&self, i: usize, j: usize) -> usize {
        let g = self.group();
        self.coset_of[g.mul(self.representative(i), self.representative(j))]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.coset_of[self.group().inverse(self.representative(i))]
    }

    /// Indices of the cosets contained in `set`, which must be a union of
    /// cosets.
    pub fn indices_within(&self, set: IndexSet) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.cosets[i].is_subset(set)).collect()
    }

    /// The quotient as a labeled group, coset `i` becoming element `i`.
    pub fn quotient_group(&self) -> Result<FiniteGroup, GroupError> {
        if !self.subgroup.is_normal() {
            return Err(GroupError::NotNormal(self.subgroup.members()));
        }
        let k = self.len();
        let table: Vec<Vec<usize>> = (0..k).map(|i| (0..k).map(|j| self.product(i, j)).collect()).collect();
        let labels = (0..k).map(|i| self.group().label(self.representative(i))).collect();
        FiniteGroup::from_table(&table, Some(labels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn coset_examples() {
        let z4: GroupRef = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let whole = CosetSystem::new(&Subgroup::whole(&z4), Side::Left);
        assert_eq!(whole.len(), 1);
        let h = Subgroup::generated(&z4, IndexSet::singleton(2)).unwrap();
        let sys = CosetSystem::new(&h, Side::Left);
        assert_eq!(sys.cosets(), [IndexSet::from_iter([0, 2]), IndexSet::from_iter([1, 3])]);
        let s3: GroupRef = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let a3 = Subgroup::all_normal(&s3).into_iter().find(|s| s.order() == 3).unwrap();
        let sys = CosetSystem::new(&a3, Side::Left);
        assert_eq!(sys.len(), 2);
        assert!(sys.cosets().iter().all(|c| c.len() == 3));
    }

    #[test]
    fn left_and_right_quotients_agree_for_normal_subgroups() {
        for g in [FiniteGroup::symmetric(3).unwrap(), FiniteGroup::symmetric(4).unwrap(), FiniteGroup::cyclic(6).unwrap()] {
            let g: GroupRef = Arc::new(g);
            for h in Subgroup::all_normal(&g) {
                let l = CosetSystem::new(&h, Side::Left).quotient_group().unwrap();
                let r = CosetSystem::new(&h, Side::Right).quotient_group().unwrap();
                assert!(l.same_table(&r));
                assert_eq!(l.labels(), r.labels());
            }
        }
    }

    #[test]
    fn rejects_orders_without_subgroup_first() {
        let z4: GroupRef = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let h = Subgroup::generated(&z4, IndexSet::singleton(2)).unwrap();
        let swapped = vec![IndexSet::from_iter([1, 3]), IndexSet::from_iter([0, 2])];
        assert_eq!(CosetSystem::from_cosets(&h, Side::Left, swapped), Err(GroupError::BadCosets));
    }
}
