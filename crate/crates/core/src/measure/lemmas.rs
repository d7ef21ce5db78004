//! Executable checks of the structural facts about stabilizers, regular
//! elements and quotient isomorphisms, run over every element below every
//! rectangle of an algebra (or a seeded sample when a rectangle is large).

use super::{MeasureError, Measured, StabilizerData};
use crate::bits::IndexSet;
use crate::group::{CosetSystem, QuotientIso, Side};
use crate::ra::AtomSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Rectangles with at most this many atoms are enumerated in full.
    pub exhaustive_limit: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { exhaustive_limit: 12, samples: 2048, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaOutcome {
    pub name: &'static str,
    pub cases: u64,
    pub failure: Option<String>,
}

impl LemmaOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub outcomes: Vec<LemmaOutcome>,
    /// False when some rectangle was sampled rather than enumerated.
    pub exhaustive: bool,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(LemmaOutcome::passed)
    }

    pub fn outcome(&self, name: &str) -> Option<&LemmaOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }
}

pub const LEMMAS: [&str; 14] = [
    "regularity-sides",
    "first-partition",
    "atomic-partition",
    "second-partition",
    "first-product",
    "second-product",
    "translation",
    "translation-meet",
    "translated-quotient",
    "identity-and-converse",
    "refinement",
    "atom-products",
    "left-regular-below",
    "regular-decomposition",
];

struct Tally {
    outcomes: Vec<LemmaOutcome>,
}

impl Tally {
    fn case(&mut self, name: &'static str, ok: bool, message: impl FnOnce() -> String) {
        let o = self.outcomes.iter_mut().find(|o| o.name == name).expect("known lemma");
        o.cases += 1;
        if !ok && o.failure.is_none() {
            o.failure = Some(message());
        }
    }
}

/// Nonzero elements below `rect`, all of them or a seeded sample that always
/// includes the atoms and `rect` itself.
fn elements_below(rect: AtomSet, config: &SuiteConfig, stream: u64) -> (Vec<AtomSet>, bool) {
    let atoms = rect.to_vec();
    if atoms.len() <= config.exhaustive_limit {
        let mask = rect.bits();
        let mut out = Vec::new();
        let mut s = mask;
        while s != 0 {
            out.push(AtomSet::from_bits(s));
            s = (s - 1) & mask;
        }
        out.sort();
        return (out, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream);
    let mut set: BTreeSet<AtomSet> = atoms.iter().map(|&a| AtomSet::singleton(a)).collect();
    set.insert(rect);
    while set.len() < config.samples {
        let pick: AtomSet = atoms.iter().copied().filter(|_| rng.gen::<bool>()).collect();
        if !pick.is_empty() {
            set.insert(pick);
        }
    }
    (set.into_iter().collect(), false)
}

pub fn run_suite(m: &Measured, config: &SuiteConfig) -> Result<SuiteReport, MeasureError> {
    let mut t = Tally {
        outcomes: LEMMAS.iter().map(|&name| LemmaOutcome { name, cases: 0, failure: None }).collect(),
    };
    let alg = m.algebra;
    let e = m.equivalence()?;
    let mut exhaustive = true;
    for (stream, &(x, y)) in e.pairs().iter().enumerate() {
        let rect = m.rectangle(x, y);
        let (elements, full) = elements_below(rect, config, stream as u64);
        exhaustive &= full;
        let gx = m.record(x)?.group.clone();
        let gy = m.record(y)?.group.clone();
        let data: Vec<StabilizerData> = elements.iter().map(|&a| m.stabilizer_of(a, x, y)).collect::<Result<_, _>>()?;
        let show = |a: AtomSet| alg.format_set(a);

        for d in &data {
            let a = d.element;
            t.case("regularity-sides", d.left_regular == d.right_regular, || {
                format!("{} at ({x},{y}) is regular on one side only", show(a))
            });

            // The finder returns a nonzero left-regular element below a.
            let b = m.left_regular_below(a, x, y)?;
            let ok = !b.is_empty() && b.is_subset(a) && m.stabilizer_of(b, x, y)?.left_regular;
            t.case("left-regular-below", ok, || format!("finder returned {} below {}", show(b), show(a)));

            let dec = m.decompose(a, x, y, None)?;
            match dec {
                None => t.case("regular-decomposition", !d.is_regular(), || {
                    format!("regular {} has no decomposition", show(a))
                }),
                Some(dec) => {
                    let coset = dec.coset_members();
                    let sum = m.sum_of_translates(AtomSet::singleton(dec.atom), coset, x, y)?;
                    let ok = d.is_regular() && sum == a && dec.subgroup.members() == d.left.members();
                    t.case("regular-decomposition", ok, || {
                        format!("{} decomposed with subgroup {} but has stabilizer {}", show(a), dec.subgroup.members(), d.left.members())
                    });
                    if d.is_regular() {
                        for base in rect {
                            let other = m.decompose(a, x, y, Some(base))?;
                            let ok = other.is_some_and(|o| o.subgroup.members() == d.left.members());
                            t.case("regular-decomposition", ok, || {
                                format!("{} based at atom {} disagrees on the subgroup", show(a), alg.name(base))
                            });
                        }
                    }
                }
            }

            if !d.left_regular {
                continue;
            }
            let left = CosetSystem::new(&d.left, Side::Left);
            let translates: Vec<AtomSet> =
                (0..left.len()).map(|i| m.translate_set(a, left.representative(i), Side::Left, x, y)).collect::<Result<_, _>>()?;
            let mut union = AtomSet::EMPTY;
            let mut disjoint = true;
            for &s in &translates {
                disjoint &= !s.is_empty() && s.is_disjoint(union);
                union = union.union(s);
            }
            t.case("first-partition", disjoint && union == rect, || {
                format!("translations of {} do not partition the rectangle", show(a))
            });

            for f in 0..gx.order() {
                let fa = m.translate_set(a, f, Side::Left, x, y)?;
                let expected = gx.set_mul(gx.set_mul(IndexSet::singleton(f), d.left.members()), IndexSet::singleton(gx.inverse(f)));
                let df = m.stabilizer_of(fa, x, y)?;
                t.case("translation", df.left_regular && df.left.members() == expected, || {
                    format!("left translation of {} by {} has stabilizer {}", show(a), gx.label(f), df.left.members())
                });
            }
            for g in 0..gy.order() {
                let ag = m.translate_set(a, g, Side::Right, x, y)?;
                let dg = m.stabilizer_of(ag, x, y)?;
                t.case("translation", dg.left_regular && dg.left.members() == d.left.members(), || {
                    format!("right translation of {} by {} changes the left stabilizer", show(a), gy.label(g))
                });
            }

            if a.len() == 1 {
                let singles: BTreeSet<AtomSet> = rect.iter().map(AtomSet::singleton).collect();
                let got: BTreeSet<AtomSet> = translates.iter().copied().collect();
                t.case("atomic-partition", got == singles && translates.len() == rect.len(), || {
                    format!("translations of atom {} are not the atoms of the rectangle", show(a))
                });
            }

            if d.is_regular() && d.normal_stabilizers() {
                let phi = m.regular_iso(a, x, y)?;
                for f in 0..gx.order() {
                    let fa = m.translate_set(a, f, Side::Left, x, y)?;
                    for g in 0..gy.order() {
                        let ag = m.translate_set(a, g, Side::Right, x, y)?;
                        t.case("translation-meet", fa.is_disjoint(ag) != (fa == ag), || {
                            format!("{} translated by {} and {} breaks the meet criterion", show(a), gx.label(f), gy.label(g))
                        });
                    }
                }
                for eta in 0..left.len() {
                    let b = translates[eta];
                    let tau = QuotientIso::inner_automorphism(phi.source(), eta)?;
                    let expected = tau.then(&phi)?;
                    let got = m.regular_iso(b, x, y)?;
                    t.case("translated-quotient", got.same_map(&expected), || {
                        format!("quotient of the translation of {} by coset {eta} is not the conjugated one", show(a))
                    });
                }
                let conv = alg.converse_set(a);
                let dc = m.stabilizer_of(conv, y, x)?;
                let ok = dc.left.members() == d.right.members()
                    && dc.right.members() == d.left.members()
                    && m.regular_iso(conv, y, x)?.same_map(&phi.inverse());
                t.case("identity-and-converse", ok, || format!("quotient of the converse of {} is not inverse", show(a)));
            }
        }

        // Pairs of left-regular elements.
        let regular: Vec<&StabilizerData> = data.iter().filter(|d| d.left_regular).collect();
        for da in &regular {
            for db in &regular {
                let (a, b) = (da.element, db.element);
                let ab = a.intersection(b);
                if !ab.is_empty() {
                    let dab = m.stabilizer_of(ab, x, y)?;
                    let ok = dab.left_regular && dab.left.members() == da.left.members().intersection(db.left.members());
                    t.case("first-product", ok, || format!("meet of {} and {} breaks the product rule", show(a), show(b)));
                }
                if a.is_subset(b) {
                    second_partition(m, &mut t, da, db)?;
                    if da.is_regular() && db.is_regular() && da.normal_stabilizers() && db.normal_stabilizers() {
                        let ok = da.left.members().is_subset(db.left.members())
                            && da.right.members().is_subset(db.right.members())
                            && m.regular_iso(a, x, y)?.induce_on_coarser(&db.left)?.same_map(&m.regular_iso(b, x, y)?);
                        t.case("refinement", ok, || format!("quotient of {} does not refine to that of {}", show(a), show(b)));
                    }
                }
                if da.left.is_normal() && db.left.is_normal() {
                    second_product(m, &mut t, da, db)?;
                }
            }
        }
    }

    for r in &m.records {
        let phi = m.regular_iso(AtomSet::singleton(r.atom), r.atom, r.atom)?;
        let ok = phi.source().len() == r.measure() && phi.pairs().iter().all(|(s, t)| s == t);
        t.case("identity-and-converse", ok, || format!("quotient of atom {} is not the identity", alg.name(r.atom)));
    }

    for (x, y, z) in e.triples() {
        atom_products(m, &mut t, x, y, z)?;
    }
    Ok(SuiteReport { outcomes: t.outcomes, exhaustive })
}

fn second_partition(m: &Measured, t: &mut Tally, da: &StabilizerData, db: &StabilizerData) -> Result<(), MeasureError> {
    let (x, y) = (da.x, da.y);
    let (a, b) = (da.element, db.element);
    let coarse = CosetSystem::new(&db.left, Side::Left);
    let fine = CosetSystem::new(&da.left, Side::Left);
    let mut ok = da.left.members().is_subset(db.left.members());
    for eta in 0..coarse.len() {
        let whole = m.translate_set(b, coarse.representative(eta), Side::Left, x, y)?;
        let mut union = AtomSet::EMPTY;
        for xi in fine.indices_within(coarse.coset(eta)) {
            let part = m.translate_set(a, fine.representative(xi), Side::Left, x, y)?;
            ok &= part.is_disjoint(union);
            union = union.union(part);
        }
        ok &= union == whole;
    }
    t.case("second-partition", ok, || {
        format!("translations of {} do not partition those of {}", m.algebra.format_set(a), m.algebra.format_set(b))
    });
    Ok(())
}

fn second_product(m: &Measured, t: &mut Tally, da: &StabilizerData, db: &StabilizerData) -> Result<(), MeasureError> {
    let alg = m.algebra;
    let (x, y) = (da.x, da.y);
    let (a, b) = (da.element, db.element);
    let aab = alg.compose(alg.compose(a, alg.converse_set(a)), b);
    let bba = alg.compose(alg.compose(b, alg.converse_set(b)), a);
    let ab = a.intersection(b);
    t.case("second-product", ab.is_empty() != (aab == bba), || {
        format!("meet of {} and {} disagrees with the mixed products", alg.format_set(a), alg.format_set(b))
    });
    if ab.is_empty() {
        return Ok(());
    }
    let g = &m.record(x)?.group;
    let product = g.set_mul(da.left.members(), db.left.members());
    let mut ok = m.stabilizer_of(bba, x, y)?.left.members() == product;
    let sa = CosetSystem::new(&da.left, Side::Left);
    let sb = CosetSystem::new(&db.left, Side::Left);
    let mut union = AtomSet::EMPTY;
    for xi in sa.indices_within(product) {
        for eta in sb.indices_within(product) {
            let common = sa.coset(xi).intersection(sb.coset(eta));
            let lhs = m.sum_of_translates(ab, common, x, y)?;
            let rhs = m
                .translate_set(a, sa.representative(xi), Side::Left, x, y)?
                .intersection(m.translate_set(b, sb.representative(eta), Side::Left, x, y)?);
            ok &= lhs == rhs;
            union = union.union(lhs);
        }
    }
    ok &= union == bba;
    t.case("second-product", ok, || {
        format!("translations of the meet of {} and {} do not match", alg.format_set(a), alg.format_set(b))
    });
    Ok(())
}

/// Stabilizers and quotients of products of atoms over a triple.
fn atom_products(m: &Measured, t: &mut Tally, x: usize, y: usize, z: usize) -> Result<(), MeasureError> {
    let alg = m.algebra;
    let gy = m.record(y)?.group.clone();
    let gx = m.record(x)?.group.clone();
    let gz = m.record(z)?.group.clone();
    for a in m.rectangle(x, y) {
        let a_set = AtomSet::singleton(a);
        let da = m.stabilizer_of(a_set, x, y)?;
        let phi_a = m.regular_iso(a_set, x, y)?;
        for b in m.rectangle(y, z) {
            let b_set = AtomSet::singleton(b);
            let db = m.stabilizer_of(b_set, y, z)?;
            let phi_b = m.regular_iso(b_set, y, z)?;
            let middle = gy.set_mul(da.right.members(), db.left.members());
            let ab = alg.compose(a_set, b_set);
            let dab = m.stabilizer_of(ab, x, z)?;
            let mut ok = dab.is_regular()
                && dab.normal_stabilizers()
                && dab.left.members() == phi_a.preimage(middle)
                && dab.right.members() == phi_b.image(middle);
            if ok {
                let composed = phi_a.induce_on_coarser(&dab.left)?.then(&phi_b.induce_on_coarser(
                    &crate::group::Subgroup::from_members(&gy, middle).ok_or(MeasureError::StabilizerNotSubgroup(middle))?,
                )?)?;
                ok = composed.same_map(&m.regular_iso(ab, x, z)?);
            }
            for c in m.rectangle(x, z) {
                let c_set = AtomSet::singleton(c);
                let dc = m.stabilizer_of(c_set, x, z)?;
                let phi_c = m.regular_iso(c_set, x, z)?;
                let lalc = gx.set_mul(da.left.members(), dc.left.members());
                let rbrc = gz.set_mul(db.right.members(), dc.right.members());
                ok &= phi_a.image(lalc) == middle
                    && phi_b.image(middle) == rbrc
                    && phi_c.image(lalc) == rbrc
                    && dab.left.members() == lalc
                    && dab.right.members() == rbrc;
            }
            t.case("atom-products", ok, || {
                format!("product of atoms {} and {} breaks the stabilizer rules", alg.name(a), alg.name(b))
            });
        }
    }
    Ok(())
}
