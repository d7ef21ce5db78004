//! Invariants checked on random relabelings, random elements and randomly
//! drawn group triples.

mod common;

use common::*;
use cosetra::coset::{build_group_algebra, compare_otimes_composition, generate_triples, GenBounds, GenOutcome};
use cosetra::frame::FrameRecord;
use cosetra::group::FiniteGroup;
use cosetra::measure::Measured;
use cosetra::ra::{verify_ra_axioms, AtomSet, AtomStructure, CheckConfig, CheckMode};
use cosetra::repr::{decide_representable, roundtrip, verify_isomorphism, verify_peircean, AtomBijection, IsoConfig, ReprConfig};
use proptest::prelude::*;
use proptest::sample::Index;

fn small_fixtures() -> Vec<(String, AtomStructure)> {
    algebras().into_iter().filter(|(_, a)| a.atom_count() <= 12).collect()
}

/// A fixture with at most 12 atoms and a permutation of its atoms.
fn relabeled() -> impl Strategy<Value = (String, AtomStructure, Vec<usize>)> {
    let fixtures = small_fixtures();
    (0..fixtures.len()).prop_flat_map(move |i| {
        let (name, a) = fixtures[i].clone();
        let perm: Vec<usize> = (0..a.atom_count()).collect();
        (Just(name), Just(a), Just(perm).prop_shuffle())
    })
}

fn measures(a: &AtomStructure) -> Vec<usize> {
    let mut v: Vec<usize> = Measured::new(a).unwrap().records.iter().map(|r| r.measure()).collect();
    v.sort();
    v
}

/// A nonzero element below some rectangle, picked by two indices.
fn below_rectangle(m: &Measured, pair: Index, bits: u64) -> (usize, usize, AtomSet) {
    let pairs = m.equivalence().unwrap().pairs().to_vec();
    let (x, y) = pairs[pair.index(pairs.len())];
    let rect: Vec<usize> = m.rectangle(x, y).iter().collect();
    let mut set: AtomSet = rect.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &t)| t).collect();
    if set.is_empty() {
        set.insert(rect[0]);
    }
    (x, y, set)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn verdicts_survive_relabeling((name, a, perm) in relabeled()) {
        let b = a.permuted(&perm).unwrap();
        let atom_level = CheckConfig { mode: CheckMode::AtomLevel, ..CheckConfig::default() };
        prop_assert!(verify_ra_axioms(&b, &atom_level).passed(), "{name}");
        prop_assert_eq!(measures(&a), measures(&b));
        let config = ReprConfig::default();
        let before = decide_representable(&a, &config).unwrap();
        let after = decide_representable(&b, &config).unwrap();
        prop_assert_eq!(before.kind(), after.kind(), "{}", name);
    }

    #[test]
    fn round_trip_survives_relabeling((name, a, perm) in relabeled()) {
        let b = a.permuted(&perm).unwrap();
        let r = roundtrip(&b, &ReprConfig::default()).unwrap();
        prop_assert!(r.passed(), "{name}");
        prop_assert_eq!(r.algebra.structure.atom_count(), a.atom_count());
    }

    /// The Peircean test on atoms and the full isomorphism test agree on
    /// every atom bijection, isomorphism or not.
    #[test]
    fn peircean_check_decides_isomorphism((_name, a, perm) in relabeled()) {
        let t = AtomBijection::new(a.clone(), a, perm).unwrap();
        let peircean = verify_peircean(&t, 1).passed();
        let iso = verify_isomorphism(&t, &IsoConfig::default()).passed();
        prop_assert_eq!(peircean, iso);
    }

    #[test]
    fn regular_elements_decompose(g in 0..3usize, pair in any::<Index>(), bits in any::<u64>()) {
        let group = [FiniteGroup::dihedral(4).unwrap(), FiniteGroup::quaternion(), FiniteGroup::cyclic(6).unwrap()][g].clone();
        let a = cm(group);
        let m = Measured::new(&a).unwrap();
        let (x, y, set) = below_rectangle(&m, pair, bits);
        let el = a.element(set).unwrap();
        let b = a.atoms_below(&m.find_left_regular_below(&el, x, y).unwrap()).unwrap();
        prop_assert!(!b.is_empty() && b.is_subset(set));
        prop_assert!(m.stabilizer_of(b, x, y).unwrap().left_regular);
        let data = m.stabilizer_of(set, x, y).unwrap();
        match m.regular_decomposition(&el, x, y).unwrap() {
            None => prop_assert!(!data.is_regular()),
            Some(d) => {
                let sum = m.sum_of_translates(AtomSet::singleton(d.atom), d.coset_members(), x, y).unwrap();
                prop_assert_eq!(sum, set);
                prop_assert_eq!(d.subgroup.members(), data.left.members());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Randomly drawn two-index triples: the built algebra round-trips, and
    /// frames compose as relations and are group representable.
    #[test]
    fn generated_triples_round_trip(seed in any::<u64>()) {
        let bounds = GenBounds { indices: 2, max_order: 4, sample: Some((seed, 1)), ..GenBounds::default() };
        let mut drawn = Vec::new();
        generate_triples(&bounds, &mut |g| {
            drawn.push(g);
            true
        });
        for g in drawn.into_iter().filter(|g| g.outcome == GenOutcome::Ra) {
            let a = &g.algebra.structure;
            prop_assert!(roundtrip(a, &ReprConfig::default()).unwrap().passed());
            let record = FrameRecord::new(g.triple.clone());
            if record.frame {
                let built = build_group_algebra(&record).unwrap();
                prop_assert!(compare_otimes_composition(&built).is_empty());
                prop_assert_eq!(decide_representable(a, &ReprConfig::default()).unwrap().kind(), "group_representable");
            }
        }
    }
}
