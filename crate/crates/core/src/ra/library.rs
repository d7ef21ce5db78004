//! Stock structures: full set relation algebras, group complex algebras and
//! disjoint unions (direct products).

use super::{AtomSet, AtomStructure};
use crate::group::FiniteGroup;

/// `Re(n)`, all relations on an `n`-point set. Atoms are the singleton
/// relations `{(i,j)}`: diagonal atoms `e<i>` first, then `p<i>_<j>` in
/// lexicographic order.
pub fn full_relation_algebra(n: usize) -> AtomStructure {
    assert!((1..=8).contains(&n), "Re(n) supports 1 <= n <= 8");
    let mut pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                pairs.push((i, j));
            }
        }
    }
    let index = |p: (usize, usize)| pairs.iter().position(|&q| q == p).unwrap();
    let m = pairs.len();
    let names = pairs
        .iter()
        .map(|&(i, j)| if i == j { format!("e{i}") } else { format!("p{i}_{j}") })
        .collect();
    let converse = pairs.iter().map(|&(i, j)| index((j, i))).collect();
    let mut table = vec![AtomSet::EMPTY; m * m];
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for (b, &(k, l)) in pairs.iter().enumerate() {
            if j == k {
                table[a * m + b] = AtomSet::singleton(index((i, l)));
            }
        }
    }
    AtomStructure::new(names, converse, AtomSet::full(n), table).expect("Re(n) is a relation algebra")
}

/// `Cm(G)`, the complex algebra of a group: atoms are the group elements,
/// composition is the group product and converse is inversion.
pub fn complex_algebra(group: &FiniteGroup) -> AtomStructure {
    let m = group.order();
    let names = (0..m).map(|g| group.label(g)).collect();
    let converse = (0..m).map(|g| group.inverse(g)).collect();
    let mut table = vec![AtomSet::EMPTY; m * m];
    for g in 0..m {
        for h in 0..m {
            table[g * m + h] = AtomSet::singleton(group.mul(g, h));
        }
    }
    AtomStructure::new(names, converse, AtomSet::singleton(group.identity()), table)
        .expect("group complex algebras are relation algebras")
}

/// Direct product of two algebras, presented as the disjoint union of their
/// atom structures. Atoms of `a` come first; names are prefixed `L.`/`R.`.
pub fn disjoint_union(a: &AtomStructure, b: &AtomStructure) -> AtomStructure {
    let (n, m) = (a.atom_count(), b.atom_count());
    let t = n + m;
    let shift = |s: AtomSet| -> AtomSet { s.iter().map(|i| i + n).collect() };
    let names = a
        .names()
        .iter()
        .map(|s| format!("L.{s}"))
        .chain(b.names().iter().map(|s| format!("R.{s}")))
        .collect();
    let converse = a
        .converse_map()
        .iter()
        .copied()
        .chain(b.converse_map().iter().map(|&c| c + n))
        .collect();
    let mut table = vec![AtomSet::EMPTY; t * t];
    for i in 0..n {
        for j in 0..n {
            table[i * t + j] = a.compose_atoms(i, j);
        }
    }
    for i in 0..m {
        for j in 0..m {
            table[(i + n) * t + j + n] = shift(b.compose_atoms(i, j));
        }
    }
    let identity = a.identity_atoms().union(shift(b.identity_atoms()));
    AtomStructure::new_unchecked(names, converse, identity, table).expect("shape is preserved")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: compose the singleton relations directly as sets of pairs.
    #[test]
    fn re3_matches_pair_composition() {
        let a = full_relation_algebra(3);
        let pair = |name: &str| -> (usize, usize) {
            let d: Vec<usize> = name.chars().filter_map(|c| c.to_digit(10)).map(|d| d as usize).collect();
            if d.len() == 1 { (d[0], d[0]) } else { (d[0], d[1]) }
        };
        for i in 0..9 {
            for j in 0..9 {
                let (p, q) = (pair(a.name(i)), pair(a.name(j)));
                let expected: Vec<(usize, usize)> = if p.1 == q.0 { vec![(p.0, q.1)] } else { vec![] };
                let got: Vec<(usize, usize)> = a.compose_atoms(i, j).iter().map(|k| pair(a.name(k))).collect();
                assert_eq!(got, expected);
            }
        }
    }

    #[test]
    fn products_are_block_diagonal() {
        let z2 = complex_algebra(&FiniteGroup::cyclic(2).unwrap());
        let p = disjoint_union(&z2, &z2);
        p.validate().unwrap();
        assert_eq!(p.atom_count(), 4);
        assert!(p.compose_atoms(0, 2).is_empty());
        assert_eq!(p.identity_atoms().to_vec(), vec![0, 2]);
    }
}
