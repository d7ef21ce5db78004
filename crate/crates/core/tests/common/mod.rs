//! Fixture catalog shared by the integration tests.
#![allow(dead_code)]

use cosetra::coset::build_group_algebra;
use cosetra::frame::{parse_gtr, FrameRecord, GroupTriple};
use cosetra::group::FiniteGroup;
use cosetra::ra::{complex_algebra, disjoint_union, full_relation_algebra, load_ra, load_ra_unchecked, AtomSet, AtomStructure, Law};
use std::path::PathBuf;

pub fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn read(name: &str) -> String {
    let p = dir().join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn cm(g: FiniteGroup) -> AtomStructure {
    complex_algebra(&g)
}

pub fn cyclic(n: usize) -> AtomStructure {
    cm(FiniteGroup::cyclic(n).unwrap())
}

/// Algebras written straight from the library constructors.
pub fn library() -> Vec<(&'static str, AtomStructure)> {
    vec![
        ("re2.ra", full_relation_algebra(2)),
        ("re3.ra", full_relation_algebra(3)),
        ("cm_z2.ra", cyclic(2)),
        ("cm_z3.ra", cyclic(3)),
        ("cm_z4.ra", cyclic(4)),
        ("cm_s3.ra", cm(FiniteGroup::symmetric(3).unwrap())),
        ("blocks_z2.ra", disjoint_union(&cyclic(2), &cyclic(2))),
    ]
}

/// Group frames kept as `.gtr`, each with its group algebra kept as `.ra`.
pub const FRAMES: [&str; 2] = ["frame_z4", "frame_s3"];

pub fn triple(stem: &str) -> GroupTriple {
    parse_gtr(&read(&format!("{stem}.gtr")), &|_| Err("no group files".into())).unwrap()
}

pub fn frame_algebra(stem: &str) -> AtomStructure {
    build_group_algebra(&FrameRecord::new(triple(stem))).unwrap().structure
}

/// A broken table, the law it is built to break and the atoms of the
/// expected witness.
pub struct Mutation {
    pub file: &'static str,
    pub note: &'static str,
    pub law: Law,
    pub witness: [usize; 3],
    pub algebra: AtomStructure,
}

fn mutate(base: &AtomStructure, converse: Option<Vec<usize>>, edits: &[((usize, usize), &[usize])]) -> AtomStructure {
    let n = base.atom_count();
    let mut table: Vec<AtomSet> = (0..n * n).map(|c| base.compose_atoms(c / n, c % n)).collect();
    for &((i, j), set) in edits {
        table[i * n + j] = set.iter().copied().collect();
    }
    let converse = converse.unwrap_or_else(|| base.converse_map().to_vec());
    AtomStructure::new_unchecked(base.names().to_vec(), converse, base.identity_atoms(), table).unwrap()
}

pub fn mutations() -> Vec<Mutation> {
    let z2 = cyclic(2);
    let z3 = cyclic(3);
    let s3 = cm(FiniteGroup::symmetric(3).unwrap());
    vec![
        Mutation {
            file: "mut_assoc.ra",
            note: "Cm(Z3) with 1;1 = 1 instead of 2",
            law: Law::R4,
            witness: [1, 1, 2],
            algebra: mutate(&z3, None, &[((1, 1), &[1])]),
        },
        Mutation {
            file: "mut_identity.ra",
            note: "Cm(Z2) with 1;0 empty",
            law: Law::R5,
            witness: [1, 0, 1],
            algebra: mutate(&z2, None, &[((1, 0), &[])]),
        },
        Mutation {
            file: "mut_involution.ra",
            note: "Cm(Z3) with converse 0 2 2",
            law: Law::R6,
            witness: [1, 2, 2],
            algebra: mutate(&z3, Some(vec![0, 2, 2]), &[]),
        },
        Mutation {
            file: "mut_converse_product.ra",
            note: "Cm(S3) with every atom self-converse",
            law: Law::R7,
            witness: [1, 2, 3],
            algebra: mutate(&s3, Some((0..6).collect()), &[]),
        },
        Mutation {
            file: "mut_cycle.ra",
            note: "Cm(Z3) with 1;2 empty",
            law: Law::R11,
            witness: [1, 2, 0],
            algebra: mutate(&z3, None, &[((1, 2), &[])]),
        },
    ]
}

pub fn mutation_text(m: &Mutation) -> String {
    format!("# {}\n{}", m.note, cosetra::ra::write_ra(&m.algebra))
}

/// Every well-formed fixture algebra, by file name.
pub fn algebras() -> Vec<(String, AtomStructure)> {
    let mut out: Vec<(String, AtomStructure)> = library().into_iter().map(|(f, _)| (f.to_string(), load_ra(&read(f)).unwrap())).collect();
    for stem in FRAMES {
        let f = format!("{stem}.ra");
        let a = load_ra(&read(&f)).unwrap();
        out.push((f, a));
    }
    out
}

pub fn load_mutation(m: &Mutation) -> AtomStructure {
    load_ra_unchecked(&read(m.file)).unwrap()
}
