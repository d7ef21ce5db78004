use super::lemmas::SuiteConfig;
use super::{MeasureError, Measured};
use crate::ra::AtomSet;
use std::fmt::Write;

/// Line-oriented `key: value` census: measurable atoms and measures,
/// E-classes, atom counts per rectangle and a count of regular elements.
/// Rectangles above the configured limit are counted over their atoms only.
pub fn census_report(m: &Measured, config: &SuiteConfig) -> Result<String, MeasureError> {
    let alg = m.algebra;
    let mut out = String::new();
    let names = |s: &[usize]| s.iter().map(|&i| alg.name(i)).collect::<Vec<_>>().join(" ");
    writeln!(out, "atoms: {}", alg.atom_count()).unwrap();
    writeln!(out, "measurable-algebra: {}", m.is_measurable()).unwrap();
    let unmeasured: Vec<usize> = alg.identity_atoms().iter().filter(|&x| m.record(x).is_err()).collect();
    if !unmeasured.is_empty() {
        writeln!(out, "not-measurable: {}", names(&unmeasured)).unwrap();
    }
    for r in &m.records {
        writeln!(out, "\nmeasurable: {}", alg.name(r.atom)).unwrap();
        writeln!(out, "measure: {}", r.measure()).unwrap();
        writeln!(out, "group: {}", names(&r.atom_of)).unwrap();
        writeln!(out, "abelian: {}", r.group.is_abelian()).unwrap();
    }
    if m.records.is_empty() {
        return Ok(out);
    }
    let e = m.equivalence()?;
    writeln!(out).unwrap();
    for class in &e.classes {
        writeln!(out, "class: {}", names(class)).unwrap();
    }
    for &(x, y) in e.pairs() {
        let rect = m.rectangle(x, y);
        writeln!(out, "\npair: {} {}", alg.name(x), alg.name(y)).unwrap();
        writeln!(out, "kappa: {}", rect.len()).unwrap();
        let (mut total, mut left, mut regular, mut normal) = (0u64, 0u64, 0u64, 0u64);
        let exhaustive = rect.len() <= config.exhaustive_limit;
        let mask = rect.bits();
        let mut visit = |a: AtomSet| -> Result<(), MeasureError> {
            let d = m.stabilizer_of(a, x, y)?;
            total += 1;
            left += d.left_regular as u64;
            regular += d.is_regular() as u64;
            normal += (d.is_regular() && d.normal_stabilizers()) as u64;
            Ok(())
        };
        if exhaustive {
            let mut s = mask;
            while s != 0 {
                visit(AtomSet::from_bits(s))?;
                s = (s - 1) & mask;
            }
        } else {
            for a in rect {
                visit(AtomSet::singleton(a))?;
            }
        }
        writeln!(out, "scope: {}", if exhaustive { "all-elements" } else { "atoms-only" }).unwrap();
        writeln!(out, "elements: {total}").unwrap();
        writeln!(out, "left-regular: {left}").unwrap();
        writeln!(out, "regular: {regular}").unwrap();
        writeln!(out, "regular-normal: {normal}").unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ra::full_relation_algebra;

    #[test]
    fn re2_census() {
        let re2 = full_relation_algebra(2);
        let m = Measured::new(&re2).unwrap();
        let text = census_report(&m, &SuiteConfig::default()).unwrap();
        assert!(text.contains("measurable-algebra: true"));
        assert!(text.contains("class: e0 e1"));
        assert_eq!(text.matches("kappa: 1").count(), 4);
        assert_eq!(text.matches("measure: 1").count(), 2);
    }
}
