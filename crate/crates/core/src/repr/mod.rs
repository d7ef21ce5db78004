//! Representation checking: the atom bijection between an algebra and its
//! coset algebra, the Peircean preservation test, the full isomorphism test
//! and the scaffold-based representability decision.
//!
//! All inputs are finite, so "essentially isomorphic" is plain isomorphism
//! and no completion is ever formed.

mod decide;
mod report;

pub use decide::{
    decide_representable, roundtrip, validate_witness, CosetOnlyWitness, GroupWitness, ReprConfig, RepresentabilityVerdict,
    RoundtripError, RoundtripReport, Stage,
};
pub use report::{render_roundtrip, render_verdict};

use crate::coset::CosetAlgebra;
use crate::frame::Extraction;
use crate::measure::Measured;
use crate::parallel;
use crate::ra::{AtomSet, AtomStructure, Coverage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fmt;

/// Seed of the pseudorandom pairs drawn when the isomorphism check samples.
pub const DEFAULT_SEED: u64 = 0;

/// Random element pairs added to the deterministic sample.
pub const RANDOM_PAIRS: usize = 1000;

/// A bijection `θ` from the atoms of `source` onto the atoms of `target`,
/// extended to elements by `ψ(X) = ⋃ θ[X]`.
#[derive(Clone, Debug)]
pub struct AtomBijection {
    pub source: AtomStructure,
    pub target: AtomStructure,
    theta: Vec<usize>,
    // ψ one byte of the source set at a time.
    chunks: Vec<[u64; 256]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotABijection(pub String);

impl fmt::Display for NotABijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not an atom bijection: {}", self.0)
    }
}

impl std::error::Error for NotABijection {}

impl AtomBijection {
    pub fn new(source: AtomStructure, target: AtomStructure, theta: Vec<usize>) -> Result<Self, NotABijection> {
        let n = source.atom_count();
        if theta.len() != n || target.atom_count() != n {
            return Err(NotABijection(format!("{} source atoms, {} targets, {} images", n, target.atom_count(), theta.len())));
        }
        let mut seen = AtomSet::EMPTY;
        for (a, &t) in theta.iter().enumerate() {
            if t >= n || seen.contains(t) {
                return Err(NotABijection(format!("image of {} repeats or is out of range", source.name(a))));
            }
            seen.insert(t);
        }
        let chunks = (0..n.div_ceil(8))
            .map(|c| {
                let mut table = [0u64; 256];
                for byte in 1..256usize {
                    let low = byte.trailing_zeros() as usize;
                    let atom = c * 8 + low;
                    let bit = if atom < n { 1u64 << theta[atom] } else { 0 };
                    table[byte] = table[byte & (byte - 1)] | bit;
                }
                table
            })
            .collect();
        Ok(AtomBijection { source, target, theta, chunks })
    }

    pub fn identity(a: &AtomStructure) -> Self {
        Self::new(a.clone(), a.clone(), (0..a.atom_count()).collect()).expect("identity is a bijection")
    }

    /// `θ(a_{xy,α}) = R_{xy,α}` for an extraction and the coset algebra
    /// built from its triple.
    pub fn from_extraction(source: &AtomStructure, ext: &Extraction, alg: &CosetAlgebra) -> Result<Self, NotABijection> {
        let theta = ext
            .atom_index
            .iter()
            .enumerate()
            .map(|(a, &(x, y, alpha))| {
                alg.atom_of(crate::coset::CosetAtomIndex { x, y, alpha })
                    .ok_or_else(|| NotABijection(format!("no coset atom r{x}_{y}_{alpha} for {}", source.name(a))))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(source.clone(), alg.structure.clone(), theta)
    }

    pub fn theta(&self) -> &[usize] {
        &self.theta
    }

    pub fn apply(&self, atom: usize) -> usize {
        self.theta[atom]
    }

    pub fn psi(&self, x: AtomSet) -> AtomSet {
        let bits = x.bits();
        let out = self.chunks.iter().enumerate().fold(0u64, |acc, (c, t)| acc | t[(bits >> (8 * c) & 0xff) as usize]);
        AtomSet::from_bits(out)
    }

    /// The same bijection with the images of two source atoms exchanged.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut theta = self.theta.clone();
        theta.swap(a, b);
        Self::new(self.source.clone(), self.target.clone(), theta).expect("a swap keeps a bijection")
    }
}

/// The first atom-level failure of Peircean preservation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeirceanWitness {
    /// `c <= a;b` and `θc <= θa;θb` disagree.
    Product { a: usize, b: usize, c: usize },
    /// `c <= a˘` and `θc <= (θa)˘` disagree.
    Converse { a: usize, c: usize },
    /// `c <= 1'` and `θc <= 1'` disagree.
    Identity { c: usize },
}

impl PeirceanWitness {
    pub fn render(&self, a: &AtomStructure) -> String {
        match *self {
            PeirceanWitness::Product { a: x, b: y, c: z } => {
                format!("product {} ; {} against {}", a.name(x), a.name(y), a.name(z))
            }
            PeirceanWitness::Converse { a: x, c: z } => format!("converse of {} against {}", a.name(x), a.name(z)),
            PeirceanWitness::Identity { c } => format!("identity against {}", a.name(c)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeirceanReport {
    pub witness: Option<PeirceanWitness>,
    /// Atom triples compared.
    pub triples: u64,
}

impl PeirceanReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks the three Peircean conditions over every atom, pair and triple.
/// The triple loop fans out over the first atom.
pub fn verify_peircean(t: &AtomBijection, threads: usize) -> PeirceanReport {
    let (s, c) = (&t.source, &t.target);
    let n = s.atom_count();
    let triples = (n * n * n) as u64;
    let id_s = s.identity_atoms();
    let id_t = c.identity_atoms();
    if let Some(z) = (0..n).find(|&z| id_s.contains(z) != id_t.contains(t.apply(z))) {
        return PeirceanReport { witness: Some(PeirceanWitness::Identity { c: z }), triples };
    }
    for a in 0..n {
        for z in 0..n {
            if (s.converse_atom(a) == z) != (c.converse_atom(t.apply(a)) == t.apply(z)) {
                return PeirceanReport { witness: Some(PeirceanWitness::Converse { a, c: z }), triples };
            }
        }
    }
    let witness = parallel::first_hit(n as u64, threads, |a| {
        let a = a as usize;
        (0..n).find_map(|b| {
            let left = s.compose_atoms(a, b);
            let right = c.compose_atoms(t.apply(a), t.apply(b));
            (t.psi(left) != right).then(|| {
                let z = (0..n).find(|&z| left.contains(z) != right.contains(t.apply(z))).expect("sets differ");
                PeirceanWitness::Product { a, b, c: z }
            })
        })
    });
    PeirceanReport { witness, triples }
}

#[derive(Clone, Copy, Debug)]
pub struct IsoConfig {
    /// Largest source atom count checked over all element pairs.
    pub threshold: usize,
    pub seed: u64,
    pub random_pairs: usize,
    pub threads: usize,
}

impl Default for IsoConfig {
    fn default() -> Self {
        IsoConfig { threshold: 12, seed: DEFAULT_SEED, random_pairs: RANDOM_PAIRS, threads: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoReport {
    pub coverage: Coverage,
    /// The first operation found not preserved, with its arguments.
    pub failure: Option<String>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Ceiling for the exhaustive loop, whatever the configured threshold:
/// `4^16` pairs is already several seconds.
const EXHAUSTIVE_CAP: usize = 16;

/// Confirms that `ψ` preserves join, complement, relative product, converse
/// and identity. `θ` is a bijection on atoms, so `ψ` is a bijection on
/// elements by construction. Exhaustive over all element pairs up to the
/// threshold, otherwise over the sample described at [`sample_elements`]
/// plus seeded random pairs.
pub fn verify_isomorphism(t: &AtomBijection, config: &IsoConfig) -> IsoReport {
    let n = t.source.atom_count();
    let (s, c) = (&t.source, &t.target);
    let fmt = |x: AtomSet| s.format_set(x);
    if t.psi(s.identity_atoms()) != c.identity_atoms() {
        return IsoReport { coverage: Coverage::Exhaustive(0), failure: Some("identity".into()) };
    }
    if n <= config.threshold.min(EXHAUSTIVE_CAP) {
        let size = 1u64 << n;
        let failure = parallel::first_hit(size, config.threads, |x| exhaustive_row(t, AtomSet::from_bits(x)));
        let failure = failure.map(|(op, x, y)| format!("{op} at {} and {}", fmt(x), fmt(y)));
        return IsoReport { coverage: Coverage::Exhaustive(size * size), failure };
    }
    let elements = sample_elements(s);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let full = s.all_atoms().bits();
    let random: Vec<(AtomSet, AtomSet)> = (0..config.random_pairs)
        .map(|_| (AtomSet::from_bits(rng.gen::<u64>() & full), AtomSet::from_bits(rng.gen::<u64>() & full)))
        .collect();
    let pairs = elements.len() * elements.len() + random.len();
    let check = |x: AtomSet, y: AtomSet| pair_failure(t, x, y).map(|op| format!("{op} at {} and {}", fmt(x), fmt(y)));
    let failure = parallel::first_hit(elements.len() as u64, config.threads, |i| {
        let x = elements[i as usize];
        elements.iter().find_map(|&y| check(x, y))
    })
    .or_else(|| random.iter().find_map(|&(x, y)| check(x, y)));
    IsoReport { coverage: Coverage::Sampled(pairs as u64), failure }
}

fn pair_failure(t: &AtomBijection, x: AtomSet, y: AtomSet) -> Option<&'static str> {
    let (s, c) = (&t.source, &t.target);
    let (px, py) = (t.psi(x), t.psi(y));
    if t.psi(x.union(y)) != px.union(py) {
        Some("join")
    } else if t.psi(s.complement_set(x)) != c.complement_set(px) {
        Some("complement")
    } else if t.psi(s.converse_set(x)) != c.converse_set(px) {
        Some("converse")
    } else if t.psi(s.compose(x, y)) != c.compose(px, py) {
        Some("product")
    } else {
        None
    }
}

/// Every `y` against a fixed `x`. Products `x;y` are built incrementally by
/// peeling the lowest atom off `y`, on both sides at once.
fn exhaustive_row(t: &AtomBijection, x: AtomSet) -> Option<(&'static str, AtomSet, AtomSet)> {
    let (s, c) = (&t.source, &t.target);
    let n = s.atom_count();
    let px = t.psi(x);
    if t.psi(s.complement_set(x)) != c.complement_set(px) {
        return Some(("complement", x, x));
    }
    if t.psi(s.converse_set(x)) != c.converse_set(px) {
        return Some(("converse", x, x));
    }
    let row_s: Vec<u64> = (0..n).map(|j| s.compose(x, AtomSet::singleton(j)).bits()).collect();
    let row_t: Vec<u64> = (0..n).map(|j| c.compose(px, AtomSet::singleton(t.apply(j))).bits()).collect();
    let size = 1usize << n;
    let mut prod_s = vec![0u64; size];
    let mut prod_t = vec![0u64; size];
    for y in 1..size {
        let low = y.trailing_zeros() as usize;
        let rest = y & (y - 1);
        prod_s[y] = prod_s[rest] | row_s[low];
        prod_t[y] = prod_t[rest] | row_t[low];
    }
    (0..size).find_map(|y| {
        let ys = AtomSet::from_bits(y as u64);
        if t.psi(x.union(ys)) != px.union(t.psi(ys)) {
            Some(("join", x, ys))
        } else if t.psi(AtomSet::from_bits(prod_s[y])) != AtomSet::from_bits(prod_t[y]) {
            Some(("product", x, ys))
        } else {
            None
        }
    })
}

/// The deterministic part of the large-instance sample: every atom, every
/// nonzero rectangle `x;1;y` and, when the algebra is measurable, every
/// regular element below a rectangle (each is a sum of translates of an atom
/// over a coset `M;g`, so they are enumerated from atoms and subgroups).
pub fn sample_elements(a: &AtomStructure) -> Vec<AtomSet> {
    let mut out: BTreeSet<AtomSet> = (0..a.atom_count()).map(AtomSet::singleton).collect();
    let ids: Vec<usize> = a.identity_atoms().to_vec();
    for &x in &ids {
        for &y in &ids {
            let r = a.rect(AtomSet::singleton(x), AtomSet::singleton(y));
            if !r.is_empty() {
                out.insert(r);
            }
        }
    }
    if let Ok(m) = Measured::new(a) {
        if m.is_measurable() {
            out.extend(regular_elements(&m));
        }
    }
    out.into_iter().collect()
}

fn regular_elements(m: &Measured) -> BTreeSet<AtomSet> {
    use crate::group::{CosetSystem, Side, Subgroup};
    let mut out = BTreeSet::new();
    let Ok(e) = m.equivalence() else { return out };
    for &(x, y) in e.pairs() {
        let Ok(rec) = m.record(x) else { continue };
        let subgroups = Subgroup::all(&rec.group);
        for a in m.rectangle(x, y) {
            let base = AtomSet::singleton(a);
            let Ok(la) = m.stabilizer_of(base, x, y) else { continue };
            for sub in subgroups.iter().filter(|s| la.left.members().is_subset(s.members())) {
                let system = CosetSystem::new(sub, Side::Right);
                for gamma in 0..system.len() {
                    if let Ok(b) = m.sum_of_translates(base, system.coset(gamma), x, y) {
                        out.insert(b);
                    }
                }
            }
        }
    }
    out
}
