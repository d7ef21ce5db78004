use super::*;
use crate::frame::{build_semi_scaffold, extract_semi_frame, parse_gtr, FrameRecord};
use crate::group::FiniteGroup;
use crate::measure::Measured;
use crate::ra::{complex_algebra, disjoint_union, full_relation_algebra, verify_ra_axioms, CheckConfig};

fn triple(text: &str) -> GroupTriple {
    parse_gtr(text, &|_| Err("no files".to_string())).unwrap()
}

const Z3: &str = "indices 1\ngroup 0 cyclic 3\neclass 0\nH 0 0 0\nK 0 0 0\nphi 0 0 0:0 1:1 2:2\n";

/// Two copies of `Z_4` glued along the quotient by `{0,2}`.
const Z4_FRAME: &str = "indices 2\ngroup 0 cyclic 4\ngroup 1 cyclic 4\neclass 0 1\n\
    H 0 0 0\nK 0 0 0\nphi 0 0 0:0 1:1 2:2 3:3\nH 1 1 0\nK 1 1 0\nphi 1 1 0:0 1:1 2:2 3:3\n\
    H 0 1 0 2\nK 0 1 0 2\nphi 0 1 0:0 1:1\nH 1 0 0 2\nK 1 0 0 2\nphi 1 0 0:0 1:1\n";

fn idx(x: usize, y: usize, alpha: usize) -> CosetAtomIndex {
    CosetAtomIndex { x, y, alpha }
}

#[test]
fn atomic_relations_of_z3() {
    let f = triple(Z3);
    let base = base_set(&f).unwrap();
    assert_eq!(atomic_relation(&f, &base, idx(0, 0, 0)), Relation::identity(&base));
    let shift: Vec<(usize, usize)> = atomic_relation(&f, &base, idx(0, 0, 1)).pairs().collect();
    assert_eq!(shift, vec![(0, 1), (1, 2), (2, 0)]);
    assert_eq!(base.label(2), "0.2");
}

#[test]
fn trivial_groups_give_full_blocks() {
    let one = "indices 2\ngroup 0 cyclic 1\ngroup 1 cyclic 1\neclass 0 1\n\
        H 0 0 0\nK 0 0 0\nphi 0 0 0:0\nH 0 1 0\nK 0 1 0\nphi 0 1 0:0\n\
        H 1 0 0\nK 1 0 0\nphi 1 0 0:0\nH 1 1 0\nK 1 1 0\nphi 1 1 0:0\n";
    let f = triple(one);
    let alg = build_coset_algebra(&f).unwrap();
    let base = base_set(&f).unwrap();
    assert_eq!(atomic_relation(&f, &base, idx(0, 1, 0)).pairs().collect::<Vec<_>>(), vec![(0, 1)]);
    // r0_0_0, r0_1_0, r1_0_0, r1_1_0 against e0, e1, p0_1, p1_0.
    assert!(alg.structure.permuted(&[0, 2, 3, 1]).unwrap().same_table(&full_relation_algebra(2)));

    let split = "indices 2\ngroup 0 cyclic 1\ngroup 1 cyclic 1\neclass 0\neclass 1\n\
        H 0 0 0\nK 0 0 0\nphi 0 0 0:0\nH 1 1 0\nK 1 1 0\nphi 1 1 0:0\n";
    let alg = build_coset_algebra(&triple(split)).unwrap();
    let re1 = full_relation_algebra(1);
    assert!(alg.structure.same_table(&disjoint_union(&re1, &re1)));
}

#[test]
fn relation_invariants() {
    for text in [Z3, Z4_FRAME] {
        let f = triple(text);
        let alg = build_coset_algebra(&f).unwrap();
        let base = &alg.base;
        for (x, y) in f.pairs() {
            let block: Vec<usize> = (0..alg.atoms.len()).filter(|&i| alg.atoms[i].x == x && alg.atoms[i].y == y).collect();
            let mut union = Relation::empty(base);
            for (n, &i) in block.iter().enumerate() {
                for &j in &block[..n] {
                    assert!(alg.relations[i].is_disjoint(&alg.relations[j]));
                }
                union = union.union(&alg.relations[i]);
            }
            let full = Relation::from_pairs(base, base.block(x).iter().flat_map(|u| base.block(y).iter().map(move |v| (u, v))));
            assert_eq!(union, full);
        }
        for i in 0..alg.atoms.len() {
            let c = alg.structure.converse_atom(i);
            assert_eq!(alg.relations[i].converse(), alg.relations[c]);
            let id = alg.realize(alg.structure.identity_atoms());
            assert_eq!(id, Relation::identity(base));
            assert_eq!(id.compose(&alg.relations[i]), alg.relations[i]);
            assert_eq!(alg.relations[i].compose(&id), alg.relations[i]);
        }
    }
}

#[test]
fn frames_compose_genuinely() {
    let re3 = full_relation_algebra(3);
    let m = Measured::new(&re3).unwrap();
    let extracted = extract_semi_frame(&m, &build_semi_scaffold(&m, None).unwrap()).unwrap().triple;
    for f in [triple(Z3), triple(Z4_FRAME), extracted] {
        let record = FrameRecord::new(f.clone());
        assert!(record.frame);
        let coset = build_coset_algebra(&f).unwrap();
        assert!(compare_otimes_composition(&coset).is_empty());
        let group = build_group_algebra(&record).unwrap();
        assert!(group.structure.same_table(&coset.structure));
        assert!(verify_ra_axioms(&group.structure, &CheckConfig::default()).passed());
    }
    let z4 = build_coset_algebra(&triple(Z4_FRAME)).unwrap();
    assert_eq!((z4.atoms.len(), z4.base.len()), (12, 8));
}

#[test]
fn z2_frame_is_its_complex_algebra() {
    let f = triple("indices 1\ngroup 0 cyclic 2\neclass 0\nH 0 0 0\nK 0 0 0\nphi 0 0 0:0 1:1\n");
    let g = build_group_algebra(&FrameRecord::new(f)).unwrap();
    assert!(g.structure.same_table(&complex_algebra(&FiniteGroup::cyclic(2).unwrap())));
}

#[test]
fn shifted_products_differ_from_composition() {
    let z2 = triple("indices 1\ngroup 0 cyclic 2\neclass 0\nH 0 0 0\nK 0 0 0\nphi 0 0 0:0 1:1\nC 0 0 0 1\n");
    let q8 = triple(
        "indices 1\ngroup 0 quaternion\neclass 0\nH 0 0 0\nK 0 0 0\n\
         phi 0 0 0:0 1:1 2:2 3:3 4:4 5:5 6:6 7:7\nC 0 0 0 4\n",
    );
    for f in [z2, q8] {
        let record = FrameRecord::new(f.clone());
        assert!(!record.frame);
        assert_eq!(build_group_algebra(&record).unwrap_err(), CosetError::NotFrame);
        let alg = build_coset_algebra(&f).unwrap();
        let diffs = compare_otimes_composition(&alg);
        // Every product is moved by the central shift.
        assert_eq!(diffs.len(), alg.atoms.len() * alg.atoms.len());
        assert_eq!(diffs[0].render(&alg), format!("r0_0_0 ; r0_0_0: otimes {{{}}} composition {{r0_0_0}}", alg.atoms[alg.atoms.len() / 2]));
        assert!(!verify_ra_axioms(&alg.structure, &CheckConfig::default()).passed());
    }
}

#[test]
fn non_semi_frames_are_rejected() {
    let twisted = triple("indices 1\ngroup 0 cyclic 3\neclass 0\nH 0 0 0\nK 0 0 0\nphi 0 0 0:0 1:2 2:1\n");
    assert!(matches!(build_coset_algebra(&twisted), Err(CosetError::NotSemiFrame("i", _))));
}

#[test]
fn rel_round_trip() {
    let alg = build_coset_algebra(&triple(Z4_FRAME)).unwrap();
    let text = write_rel(&alg);
    assert!(text.starts_with("rel 0 0 0:\npair 0.0 0.0\n"));
    let back = parse_rel(&text, &alg.base).unwrap();
    assert_eq!(back.len(), alg.atoms.len());
    for ((i, r), (j, s)) in back.iter().zip(alg.atoms.iter().zip(&alg.relations)) {
        assert_eq!((i, r), (j, s));
    }
    assert_eq!(parse_rel("pair 0.0 0.0\n", &alg.base).unwrap_err().line, 1);
    assert_eq!(parse_rel("rel 0 0 0:\npair 0.0 2.0\n", &alg.base).unwrap_err().line, 2);
}

fn center_size(g: &FiniteGroup) -> usize {
    (0..g.order()).filter(|&a| (0..g.order()).all(|b| g.mul(a, b) == g.mul(b, a))).count()
}

#[test]
fn single_index_generation() {
    let bounds = GenBounds { indices: 1, max_order: 3, ..GenBounds::default() };
    let mut ra = Vec::new();
    let stats = generate_triples(&bounds, &mut |g| {
        if g.outcome == GenOutcome::Ra {
            ra.push(g);
        }
        true
    });
    // Semi-frames: H trivial, φ the identity and C central.
    let expected: usize = catalog(3).iter().map(|(_, g)| center_size(g)).sum();
    assert_eq!(stats.semi_frames as usize, expected);
    assert_eq!(ra.len(), 3);
    for (g, n) in ra.iter().zip(1..) {
        assert!(g.algebra.structure.same_table(&complex_algebra(&FiniteGroup::cyclic(n).unwrap())));
    }
}

#[test]
fn two_index_generation() {
    let bounds = GenBounds { indices: 2, max_order: 1, ..GenBounds::default() };
    let mut found = Vec::new();
    let stats = generate_triples(&bounds, &mut |g| {
        found.push(g);
        true
    });
    assert_eq!(found.len(), 1);
    assert_eq!(stats.inconsistent, 0);
    assert!(found[0].algebra.structure.permuted(&[0, 2, 3, 1]).unwrap().same_table(&full_relation_algebra(2)));

    let bounds = GenBounds { indices: 2, max_order: 4, ..GenBounds::default() };
    let mut count = 0;
    let stats = generate_triples(&bounds, &mut |g| {
        assert!(crate::frame::verify_semi_frame(&g.triple).passed());
        assert!(FrameRecord::new(g.triple).frame);
        count += 1;
        true
    });
    assert_eq!(stats.inconsistent, 0);
    assert_eq!(stats.emitted, count);
    assert!(count > 5);
}

#[test]
fn quotient_iso_counts() {
    let arc = |g: FiniteGroup| std::sync::Arc::new(g);
    let z2sq = arc(FiniteGroup::direct_product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(2).unwrap()).unwrap());
    let t = crate::group::Subgroup::trivial(&z2sq);
    // Aut(Z2 x Z2) = GL(2,2) has order 6; Aut(Z8) has order 4, Aut(S3) order 6.
    assert_eq!(quotient_isos(&t, &t).len(), 6);
    let z8 = arc(FiniteGroup::cyclic(8).unwrap());
    let t8 = crate::group::Subgroup::trivial(&z8);
    assert_eq!(quotient_isos(&t8, &t8).len(), 4);
    let s3 = arc(FiniteGroup::symmetric(3).unwrap());
    let t3 = crate::group::Subgroup::trivial(&s3);
    assert_eq!(quotient_isos(&t3, &t3).len(), 6);
}
