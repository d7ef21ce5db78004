//! Finite groups as explicit multiplication tables, with subgroups, coset
//! systems and isomorphisms between quotients.

mod coset;
mod format;
mod quotient;

pub use coset::{CosetSystem, Side};
pub use format::{inline_expr, parse_group_expr, parse_grp, write_grp, GroupFormatError};
pub use quotient::QuotientIso;

use crate::bits::{IndexSet, MAX_INDEX};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub type GroupRef = Arc<FiniteGroup>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order {0} is outside 1..=64")]
    Order(usize),
    #[error("table row {row} has {got} entries, expected {expected}")]
    TableShape { row: usize, expected: usize, got: usize },
    #[error("table entry ({i},{j}) = {value} is out of range")]
    TableRange { i: usize, j: usize, value: usize },
    #[error("multiplication is not associative at ({i},{j},{k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("symmetric group S{0} is not supported (n must be 1..=4)")]
    SymmetricDegree(usize),
    #[error("product order {0} exceeds 64")]
    ProductTooLarge(usize),
    #[error("element {0} is out of range")]
    ElementRange(usize),
    #[error("subgroup {0} is not normal")]
    NotNormal(IndexSet),
    #[error("product set {0} is not a subgroup")]
    ProductNotSubgroup(IndexSet),
    #[error("subgroups belong to different groups")]
    ParentMismatch,
    #[error("cosets do not partition the group with the subgroup first")]
    BadCosets,
    #[error("coset map is not a bijection")]
    NotBijective,
    #[error("coset map sends the identity coset to coset {0}")]
    IdentityCosetMoved(usize),
    #[error("coset products not preserved at cosets ({0},{1})")]
    NotHomomorphism(usize, usize),
    #[error("representative {0} does not lie in any listed coset")]
    RepresentativeRange(usize),
    #[error("{0} does not contain the source subgroup")]
    NotCoarser(IndexSet),
    #[error("image {0} of the coarser subgroup is not a normal subgroup of the target")]
    ImageNotSubgroup(IndexSet),
    #[error("images of the block of coset {0} do not form a single target coset")]
    ImageNotCoset(usize),
    #[error("composition needs matching middle quotients")]
    QuotientMismatch,
}

/// A finite group with a dense multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("order", &self.order).field("identity", &self.identity).finish()
    }
}

impl FiniteGroup {
    /// Validates a Cayley table and derives identity and inverses.
    pub fn from_table(table: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<FiniteGroup, GroupError> {
        let m = table.len();
        if m == 0 || m > MAX_INDEX {
            return Err(GroupError::Order(m));
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != m {
                return Err(GroupError::TableShape { row, expected: m, got: r.len() });
            }
            if let Some((j, &value)) = r.iter().enumerate().find(|(_, &v)| v >= m) {
                return Err(GroupError::TableRange { i: row, j, value });
            }
        }
        if let Some(l) = &labels {
            if l.len() != m {
                return Err(GroupError::LabelCount { expected: m, got: l.len() });
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    if table[table[i][j]][k] != table[i][table[j][k]] {
                        return Err(GroupError::NotAssociative { i, j, k });
                    }
                }
            }
        }
        let identity = (0..m)
            .find(|&e| (0..m).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(m);
        for g in 0..m {
            let h = (0..m)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or(GroupError::NoInverse(g))?;
            inverse.push(h);
        }
        Ok(FiniteGroup { order: m, mul: table.concat(), identity, inverse, labels })
    }

    /// `Z_n` with labels `0..n-1`.
    pub fn cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
        if n == 0 || n > MAX_INDEX {
            return Err(GroupError::Order(n));
        }
        let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroup::from_table(&table, None)
    }

    /// `S_n` for `n <= 4`. Elements are permutations of `1..=n` in one-line
    /// notation, listed lexicographically (identity first). The product
    /// `s·t` applies `s` first, matching relational composition.
    pub fn symmetric(n: usize) -> Result<FiniteGroup, GroupError> {
        if !(1..=4).contains(&n) {
            return Err(GroupError::SymmetricDegree(n));
        }
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|s| perms.iter().map(|t| index(&(0..n).map(|i| t[s[i]]).collect())).collect())
            .collect();
        let labels = perms.iter().map(|p| p.iter().map(|&i| char::from(b'1' + i as u8)).collect()).collect();
        FiniteGroup::from_table(&table, Some(labels))
    }

    /// The dihedral group of order `2n`: element `r^i s^j` at index `2i + j`,
    /// with `s r = r⁻¹ s`.
    pub fn dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
        if n == 0 || 2 * n > MAX_INDEX {
            return Err(GroupError::Order(2 * n));
        }
        let m = 2 * n;
        let table: Vec<Vec<usize>> = (0..m)
            .map(|x| {
                let (a, b) = (x / 2, x % 2);
                (0..m)
                    .map(|y| {
                        let (c, d) = (y / 2, y % 2);
                        let turn = if b == 0 { c } else { n - c };
                        2 * ((a + turn) % n) + (b + d) % 2
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(&table, None)
    }

    /// The quaternion group: `1 i j k` at indices `0..4`, their negatives at
    /// `4..8`.
    pub fn quaternion() -> FiniteGroup {
        // Unit products: UNIT[p][q] = (sign flip, unit) of p·q.
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"].iter().map(|s| s.to_string()).collect();
        let table: Vec<Vec<usize>> = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (flip, u) = UNIT[x % 4][y % 4];
                        ((x / 4 + y / 4 + flip) % 2) * 4 + u
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(&table, Some(labels)).expect("quaternion table")
    }

    /// `G × H`, element `(g,h)` at index `g·|H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
        let m = g.order * h.order;
        if m > MAX_INDEX {
            return Err(GroupError::ProductTooLarge(m));
        }
        let table: Vec<Vec<usize>> = (0..m)
            .map(|x| {
                (0..m)
                    .map(|y| g.mul(x / h.order, y / h.order) * h.order + h.mul(x % h.order, y % h.order))
                    .collect()
            })
            .collect();
        let labels = (0..m).map(|x| format!("({},{})", g.label(x / h.order), h.label(x % h.order))).collect();
        FiniteGroup::from_table(&table, Some(labels))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn elements(&self) -> IndexSet {
        IndexSet::full(self.order)
    }

    /// `{a·b : a ∈ A, b ∈ B}`.
    pub fn set_mul(&self, a: IndexSet, b: IndexSet) -> IndexSet {
        let mut out = IndexSet::EMPTY;
        for x in a {
            for y in b {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    pub fn set_inverse(&self, a: IndexSet) -> IndexSet {
        a.iter().map(|x| self.inverse(x)).collect()
    }

    /// `g⁻¹·a·g`.
    pub fn conjugate(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(self.inverse(g), a), g)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_subgroup_set(&self, s: IndexSet) -> bool {
        s.contains(self.identity) && self.set_mul(s, s).is_subset(s) && self.set_inverse(s).is_subset(s)
    }

    pub fn closure(&self, generators: IndexSet) -> IndexSet {
        let mut s = IndexSet::singleton(self.identity).union(generators);
        loop {
            let next = s.union(self.set_mul(s, s)).union(self.set_inverse(s));
            if next == s {
                return s;
            }
            s = next;
        }
    }

    pub fn is_normal_set(&self, s: IndexSet) -> bool {
        (0..self.order).all(|g| s.iter().all(|h| s.contains(self.conjugate(h, g))))
    }

    pub fn center(&self) -> IndexSet {
        (0..self.order).filter(|&a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a))).collect()
    }

    /// Every subgroup, as member sets in ascending bit order.
    pub fn subgroup_sets(&self) -> Vec<IndexSet> {
        let mut found: BTreeSet<IndexSet> = BTreeSet::new();
        let mut frontier = vec![self.closure(IndexSet::EMPTY)];
        found.insert(frontier[0]);
        while let Some(s) = frontier.pop() {
            for g in self.elements().difference(s) {
                let t = self.closure(s.union(IndexSet::singleton(g)));
                if found.insert(t) {
                    frontier.push(t);
                }
            }
        }
        found.into_iter().collect()
    }

    /// Relabel-free equality of tables.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !prefix.contains(&i) {
                prefix.push(i);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// A subgroup of a shared parent group.
#[derive(Clone)]
pub struct Subgroup {
    group: GroupRef,
    members: IndexSet,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{}", self.members)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && (Arc::ptr_eq(&self.group, &other.group) || self.group.same_table(&other.group))
    }
}

impl Subgroup {
    /// The subgroup generated by `generators`.
    pub fn generated(group: &GroupRef, generators: IndexSet) -> Result<Subgroup, GroupError> {
        if let Some(bad) = generators.difference(group.elements()).min() {
            return Err(GroupError::ElementRange(bad));
        }
        Ok(Subgroup { group: group.clone(), members: group.closure(generators) })
    }

    /// Wraps a set already known to be a subgroup.
    pub fn from_members(group: &GroupRef, members: IndexSet) -> Option<Subgroup> {
        (members.is_subset(group.elements()) && group.is_subgroup_set(members))
            .then(|| Subgroup { group: group.clone(), members })
    }

    pub fn trivial(group: &GroupRef) -> Subgroup {
        Subgroup { group: group.clone(), members: IndexSet::singleton(group.identity()) }
    }

    pub fn whole(group: &GroupRef) -> Subgroup {
        Subgroup { group: group.clone(), members: group.elements() }
    }

    pub fn all(group: &GroupRef) -> Vec<Subgroup> {
        group.subgroup_sets().into_iter().map(|m| Subgroup { group: group.clone(), members: m }).collect()
    }

    pub fn all_normal(group: &GroupRef) -> Vec<Subgroup> {
        Self::all(group).into_iter().filter(Subgroup::is_normal).collect()
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn members(&self) -> IndexSet {
        self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.group.order() / self.order()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.contains(g)
    }

    pub fn is_normal(&self) -> bool {
        self.group.is_normal_set(self.members)
    }

    /// `H·K`, which is a subgroup whenever one factor is normal.
    pub fn product(&self, other: &Subgroup) -> Result<Subgroup, GroupError> {
        if !(Arc::ptr_eq(&self.group, &other.group) || self.group == other.group) {
            return Err(GroupError::ParentMismatch);
        }
        let set = self.group.set_mul(self.members, other.members);
        if !self.group.is_subgroup_set(set) {
            return Err(GroupError::ProductNotSubgroup(set));
        }
        Ok(Subgroup { group: self.group.clone(), members: set })
    }
}

/// `product_subgroup(H, K)`.
pub fn product_subgroup(h: &Subgroup, k: &Subgroup) -> Result<Subgroup, GroupError> {
    h.product(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(g: FiniteGroup) -> GroupRef {
        Arc::new(g)
    }

    fn involutions(g: &FiniteGroup) -> usize {
        (0..g.order()).filter(|&x| x != g.identity() && g.mul(x, x) == g.identity()).count()
    }

    #[test]
    fn order_eight_nonabelian_groups() {
        let d4 = arc(FiniteGroup::dihedral(4).unwrap());
        let q8 = arc(FiniteGroup::quaternion());
        for g in [&d4, &q8] {
            assert_eq!(g.order(), 8);
            assert!(!g.is_abelian());
            assert_eq!(g.center().len(), 2);
        }
        // Reflections plus the half turn; Q8 has only -1.
        assert_eq!(involutions(&d4), 5);
        assert_eq!(involutions(&q8), 1);
        assert!(Subgroup::all(&q8).iter().all(Subgroup::is_normal));
        assert_eq!(Subgroup::all(&d4).len(), 10);
        assert_eq!(Subgroup::all_normal(&d4).len(), 6);
        assert!(FiniteGroup::dihedral(3).unwrap().same_table(&FiniteGroup::dihedral(3).unwrap()));
        assert_eq!(involutions(&FiniteGroup::dihedral(3).unwrap()), involutions(&FiniteGroup::symmetric(3).unwrap()));
    }

    #[test]
    fn make_group_examples() {
        let z1 = FiniteGroup::from_table(&[vec![0]], None).unwrap();
        assert_eq!(z1.order(), 1);
        let z3 = FiniteGroup::from_table(&[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]], None).unwrap();
        assert!(z3.same_table(&FiniteGroup::cyclic(3).unwrap()));
        assert_eq!(z3.inverse(1), 2);
        // Z4 with one entry disturbed.
        let mut t = FiniteGroup::cyclic(4).unwrap().table();
        t[1][1] = 3;
        t[1][2] = 2;
        assert!(matches!(FiniteGroup::from_table(&t, None), Err(GroupError::NotAssociative { .. })));
    }

    #[test]
    fn symmetric_groups() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.identity(), 0);
        assert_eq!(s3.label(0), "123");
        assert!(!s3.is_abelian());
        assert_eq!(FiniteGroup::symmetric(4).unwrap().order(), 24);
        assert!(FiniteGroup::symmetric(5).is_err());
    }

    #[test]
    fn subgroup_examples() {
        let z4 = arc(FiniteGroup::cyclic(4).unwrap());
        assert_eq!(Subgroup::generated(&z4, IndexSet::EMPTY).unwrap().members(), IndexSet::singleton(0));
        assert_eq!(Subgroup::generated(&z4, IndexSet::singleton(2)).unwrap().members().to_vec(), vec![0, 2]);
        let s3 = arc(FiniteGroup::symmetric(3).unwrap());
        // "231" is a 3-cycle.
        let c = (0..6).find(|&g| s3.label(g) == "231").unwrap();
        let a3 = Subgroup::generated(&s3, IndexSet::singleton(c)).unwrap();
        assert_eq!(a3.order(), 3);
        assert!(a3.is_normal());
        let t = (0..6).find(|&g| s3.label(g) == "213").unwrap();
        assert!(!Subgroup::generated(&s3, IndexSet::singleton(t)).unwrap().is_normal());
        assert!(Subgroup::trivial(&s3).is_normal());
        assert_eq!(Subgroup::all(&s3).len(), 6);
        assert_eq!(Subgroup::all_normal(&s3).len(), 3);
    }

    #[test]
    fn product_examples() {
        let z4 = arc(FiniteGroup::cyclic(4).unwrap());
        let h = Subgroup::generated(&z4, IndexSet::singleton(2)).unwrap();
        assert_eq!(h.product(&Subgroup::trivial(&z4)).unwrap(), h);
        assert_eq!(h.product(&Subgroup::whole(&z4)).unwrap(), Subgroup::whole(&z4));
        let z6 = arc(FiniteGroup::cyclic(6).unwrap());
        let a = Subgroup::generated(&z6, IndexSet::singleton(3)).unwrap();
        let b = Subgroup::generated(&z6, IndexSet::singleton(2)).unwrap();
        assert_eq!(a.product(&b).unwrap(), Subgroup::whole(&z6));
        // Two distinct order-2 subgroups of S3 multiply to a 4-element set.
        let s3 = arc(FiniteGroup::symmetric(3).unwrap());
        let t1 = Subgroup::generated(&s3, IndexSet::singleton(1)).unwrap();
        let t2 = Subgroup::generated(&s3, IndexSet::singleton(2)).unwrap();
        assert!(matches!(t1.product(&t2), Err(GroupError::ProductNotSubgroup(_))));
    }

    #[test]
    fn normal_products_commute() {
        for g in [FiniteGroup::symmetric(4).unwrap(), FiniteGroup::direct_product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(4).unwrap()).unwrap()] {
            let g = arc(g);
            let normals = Subgroup::all_normal(&g);
            for h in &normals {
                for k in &normals {
                    assert_eq!(h.product(k).unwrap(), k.product(h).unwrap());
                }
            }
        }
    }
}
