//! Keeps the files under `fixtures/` in step with the code that defines
//! them. Run with `COSETRA_BLESS=1` to rewrite them.

mod common;

use common::*;
use cosetra::ra::{load_ra, verify_ra_axioms, write_ra, CheckConfig, Witness};

fn sync(name: &str, expected: &str) {
    let path = dir().join(name);
    if std::env::var_os("COSETRA_BLESS").is_some() {
        std::fs::write(&path, expected).unwrap();
    }
    let found = std::fs::read_to_string(&path).unwrap_or_default();
    assert_eq!(found, expected, "{name} is stale; rerun with COSETRA_BLESS=1");
}

#[test]
fn library_fixtures_match_constructors() {
    for (file, a) in library() {
        sync(file, &write_ra(&a));
        assert!(load_ra(&read(file)).unwrap().same_table(&a));
    }
}

#[test]
fn frame_fixtures_match_their_group_algebras() {
    for stem in FRAMES {
        let a = frame_algebra(stem);
        sync(&format!("{stem}.ra"), &write_ra(&a));
    }
}

#[test]
fn mutation_fixtures_break_their_law() {
    for m in mutations() {
        sync(m.file, &mutation_text(&m));
        let a = load_mutation(&m);
        let report = verify_ra_axioms(&a, &CheckConfig::default());
        let v = report.verdict(m.law);
        assert!(!v.passed, "{} passes {}", m.file, m.law.name());
        assert_eq!(v.witness, Some(Witness::Atoms(m.witness.to_vec())), "{}", m.file);
        // The strict loader refuses every one of them.
        assert!(load_ra(&read(m.file)).is_err());
    }
}
