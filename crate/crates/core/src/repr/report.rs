use super::{IsoReport, PeirceanReport, RepresentabilityVerdict, RoundtripReport};
use crate::frame::{Extraction, GroupTriple};
use crate::ra::AtomStructure;
use std::fmt::Write;

fn frame_summary(out: &mut String, a: &AtomStructure, ext: &Extraction) {
    let f: &GroupTriple = &ext.triple;
    let s = &ext.scaffold;
    let order: Vec<&str> = s.order.iter().map(|&x| a.name(x)).collect();
    writeln!(out, "order: {}", order.join(" ")).unwrap();
    for (&(x, y), &atom) in &s.entries {
        if s.position(x) < s.position(y) {
            writeln!(out, "scaffold: {} {} {}", a.name(x), a.name(y), a.name(atom)).unwrap();
        }
    }
    writeln!(out, "is-scaffold: {}", s.is_scaffold).unwrap();
    for x in 0..f.len() {
        writeln!(out, "group: {} order {}", f.label(x), f.group(x).order()).unwrap();
    }
    for (x, y) in f.pairs() {
        writeln!(out, "kappa: {} {} {}", x, y, f.kappa(x, y)).unwrap();
    }
    for ((x, y, z), coset) in f.nontrivial_shifts() {
        let rep = coset.min().expect("cosets are nonempty");
        writeln!(out, "shift: {x} {y} {z} {}", f.group(x).label(rep)).unwrap();
    }
}

fn checks(out: &mut String, a: &AtomStructure, p: &PeirceanReport, iso: &IsoReport) {
    match &p.witness {
        None => writeln!(out, "peircean: pass ({} triples)", p.triples).unwrap(),
        Some(w) => writeln!(out, "peircean: fail {}", w.render(a)).unwrap(),
    }
    match &iso.failure {
        None => writeln!(out, "isomorphism: pass ({})", iso.coverage).unwrap(),
        Some(f) => writeln!(out, "isomorphism: fail {f} ({})", iso.coverage).unwrap(),
    }
}

pub fn render_roundtrip(a: &AtomStructure, r: &RoundtripReport) -> String {
    let mut out = String::new();
    writeln!(out, "atoms: {}", a.atom_count()).unwrap();
    frame_summary(&mut out, a, &r.extraction);
    writeln!(out, "coset-atoms: {}", r.algebra.atoms.len()).unwrap();
    writeln!(out, "base: {}", r.algebra.base.len()).unwrap();
    checks(&mut out, a, &r.peircean, &r.iso);
    writeln!(out, "verdict: {}", if r.passed() { "isomorphic" } else { "not-isomorphic" }).unwrap();
    out
}

/// `witness` names the file the caller wrote the witness relations to.
pub fn render_verdict(a: &AtomStructure, v: &RepresentabilityVerdict, witness: Option<&str>) -> String {
    let mut out = String::new();
    writeln!(out, "verdict: {}", v.kind()).unwrap();
    match v {
        RepresentabilityVerdict::NotMeasurable => {}
        RepresentabilityVerdict::GroupRepresentable(w) => {
            writeln!(out, "search-nodes: {}", w.nodes).unwrap();
            writeln!(out, "search-space: {}", w.space).unwrap();
            frame_summary(&mut out, a, &w.extraction);
            writeln!(out, "base: {}", w.algebra.base.len()).unwrap();
            checks(&mut out, a, &w.peircean, &w.iso);
            match w.invalid_pair {
                None => writeln!(out, "witness-relations: validated").unwrap(),
                Some((x, y)) => writeln!(out, "witness-relations: fail at {} ; {}", a.name(x), a.name(y)).unwrap(),
            }
        }
        RepresentabilityVerdict::CosetOnly(w) => {
            writeln!(out, "search-nodes: {}", w.nodes).unwrap();
            writeln!(out, "search-space: {} (exhausted)", w.space).unwrap();
            let r = &w.roundtrip;
            frame_summary(&mut out, a, &r.extraction);
            writeln!(out, "base: {}", r.algebra.base.len()).unwrap();
            checks(&mut out, a, &r.peircean, &r.iso);
        }
    }
    if let Some(path) = witness {
        writeln!(out, "witness-file: {path}").unwrap();
    }
    out
}
