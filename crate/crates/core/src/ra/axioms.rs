//! The relation algebra axioms, checked literally.
//!
//! Atom-level checks are always exhaustive. Element-level checks evaluate
//! the equational axioms on actual elements: exhaustive up to the configured
//! thresholds, otherwise on a fixed-seed sample.

use super::elements::ElementTable;
use super::{AtomSet, AtomStructure};
use crate::parallel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Law {
    /// `r + s = s + r`
    R1,
    /// `r + (s + t) = (r + s) + t`
    R2,
    /// Huntington's law.
    R3,
    /// Associativity of `;`.
    R4,
    /// `r;1' = r`
    R5,
    /// `r˘˘ = r`
    R6,
    /// `(r;s)˘ = s˘;r˘`
    R7,
    /// `(r + s);t = r;t + s;t`
    R8,
    /// `(r + s)˘ = r˘ + s˘`
    R9,
    /// Tarski's law `r˘;−(r;s) + −s = −s`.
    R10,
    /// The cycle law `(r;s)·t = 0` iff `(r˘;t)·s = 0`.
    R11,
    /// All three Peircean rotations of every atom triangle.
    Peircean,
}

impl Law {
    pub const ALL: [Law; 12] = [
        Law::R1,
        Law::R2,
        Law::R3,
        Law::R4,
        Law::R5,
        Law::R6,
        Law::R7,
        Law::R8,
        Law::R9,
        Law::R10,
        Law::R11,
        Law::Peircean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::R1 => "R1",
            Law::R2 => "R2",
            Law::R3 => "R3",
            Law::R4 => "R4",
            Law::R5 => "R5",
            Law::R6 => "R6",
            Law::R7 => "R7",
            Law::R8 => "R8",
            Law::R9 => "R9",
            Law::R10 => "R10",
            Law::R11 => "R11",
            Law::Peircean => "peircean",
        }
    }

    fn arity(self) -> u32 {
        match self {
            Law::R5 | Law::R6 => 1,
            Law::R1 | Law::R3 | Law::R7 | Law::R9 | Law::R10 => 2,
            Law::R2 | Law::R4 | Law::R8 | Law::R11 | Law::Peircean => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Atoms(Vec<usize>),
    Elements(Vec<AtomSet>),
}

impl Witness {
    pub fn render(&self, a: &AtomStructure) -> String {
        match self {
            Witness::Atoms(v) => {
                let names: Vec<&str> = v.iter().map(|&i| a.name(i)).collect();
                format!("atoms ({})", names.join(", "))
            }
            Witness::Elements(v) => {
                let sets: Vec<String> = v.iter().map(|&s| a.format_set(s)).collect();
                format!("elements ({})", sets.join(", "))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    AtomLevel,
    ElementLevel,
}

/// How element-level checks are run.
#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    pub mode: CheckMode,
    /// Unary and binary laws are exhaustive up to this many atoms.
    pub threshold: usize,
    /// Ternary laws are exhaustive up to this many atoms (`8^n` triples).
    pub ternary_limit: usize,
    /// Tuples drawn per law when a check is not exhaustive.
    pub samples: u64,
    pub seed: u64,
    pub threads: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            mode: CheckMode::ElementLevel,
            threshold: 12,
            ternary_limit: 8,
            samples: 200_000,
            seed: 0,
            threads: 1,
        }
    }
}

/// How much of the element space a law was checked on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    /// Holds by the way elements are represented; nothing to evaluate.
    ByConstruction,
    AtomsOnly,
    Exhaustive(u64),
    Sampled(u64),
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coverage::ByConstruction => write!(f, "by construction"),
            Coverage::AtomsOnly => write!(f, "atoms"),
            Coverage::Exhaustive(k) => write!(f, "exhaustive {k}"),
            Coverage::Sampled(k) => write!(f, "sampled {k}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LawVerdict {
    pub law: Law,
    pub passed: bool,
    pub witness: Option<Witness>,
    pub coverage: Coverage,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub mode: CheckMode,
    pub verdicts: Vec<LawVerdict>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, law: Law) -> &LawVerdict {
        self.verdicts.iter().find(|v| v.law == law).expect("every law has a verdict")
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawVerdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }
}

pub fn verify_ra_axioms(a: &AtomStructure, config: &CheckConfig) -> AxiomReport {
    let atom_witness = |law| atom_level(a, law);
    let table = match config.mode {
        CheckMode::ElementLevel => ElementTable::new(a),
        CheckMode::AtomLevel => None,
    };
    let ops = Ops { a, table: table.as_ref() };
    let verdicts = Law::ALL
        .iter()
        .map(|&law| {
            let from_atoms = atom_witness(law);
            let atom_coverage = match law {
                Law::R1 | Law::R2 | Law::R3 | Law::R8 | Law::R9 => Coverage::ByConstruction,
                _ => Coverage::AtomsOnly,
            };
            if config.mode == CheckMode::AtomLevel || from_atoms.is_some() || law == Law::Peircean {
                return LawVerdict { law, passed: from_atoms.is_none(), witness: from_atoms, coverage: atom_coverage };
            }
            let (witness, coverage) = element_level(&ops, law, config);
            LawVerdict { law, passed: witness.is_none(), witness, coverage }
        })
        .collect();
    AxiomReport { mode: config.mode, verdicts }
}

fn atom_level(a: &AtomStructure, law: Law) -> Option<Witness> {
    let n = a.atom_count();
    let one = AtomSet::singleton;
    let triples = || (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))));
    let found = match law {
        Law::R1 | Law::R2 | Law::R3 | Law::R8 | Law::R9 => None,
        Law::R4 => triples().find_map(|(i, j, k)| {
            let left = a.compose(a.compose_atoms(i, j), one(k));
            let right = a.compose(one(i), a.compose_atoms(j, k));
            (left != right).then(|| vec![i, j, k])
        }),
        Law::R5 => (0..n).find_map(|i| {
            let got = a.compose(one(i), a.identity_atoms());
            if let Some(k) = got.difference(one(i)).min() {
                let e = a.identity_atoms().iter().find(|&e| a.compose_atoms(i, e).contains(k)).unwrap();
                Some(vec![i, e, k])
            } else if !got.contains(i) {
                Some(vec![i, a.identity_atoms().min().unwrap(), i])
            } else {
                None
            }
        }),
        Law::R6 => (0..n).find_map(|i| {
            let c = a.converse_atom(i);
            let cc = a.converse_atom(c);
            (cc != i).then(|| vec![i, c, cc])
        }),
        Law::R7 => (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find_map(|(i, j)| {
            let left = a.converse_set(a.compose_atoms(i, j));
            let right = a.compose_atoms(a.converse_atom(j), a.converse_atom(i));
            let diff = left.difference(right).union(right.difference(left));
            diff.min().map(|k| vec![i, j, k])
        }),
        Law::R10 => (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find_map(|(i, j)| {
            // r˘;−(r;s) must miss s; a witness c sits in −(r;s) with s ≤ r˘;c.
            let outside = a.complement_set(a.compose_atoms(i, j));
            let ci = a.converse_atom(i);
            outside.iter().find(|&c| a.compose_atoms(ci, c).contains(j)).map(|c| vec![i, j, c])
        }),
        Law::R11 => triples().find_map(|(i, j, k)| {
            let left = a.compose_atoms(i, j).contains(k);
            let right = a.compose_atoms(a.converse_atom(i), k).contains(j);
            (left != right).then(|| vec![i, j, k])
        }),
        Law::Peircean => triples().find_map(|(i, j, k)| {
            let p = a.compose_atoms(i, j).contains(k);
            let q = a.compose_atoms(a.converse_atom(i), k).contains(j);
            let r = a.compose_atoms(k, a.converse_atom(j)).contains(i);
            (p != q || q != r).then(|| vec![i, j, k])
        }),
    };
    found.map(Witness::Atoms)
}

struct Ops<'a> {
    a: &'a AtomStructure,
    table: Option<&'a ElementTable>,
}

impl Ops<'_> {
    fn comp(&self, x: AtomSet, y: AtomSet) -> AtomSet {
        match self.table {
            Some(t) => t.compose(x, y),
            None => self.a.compose(x, y),
        }
    }

    fn conv(&self, x: AtomSet) -> AtomSet {
        match self.table {
            Some(t) => t.converse(x),
            None => self.a.converse_set(x),
        }
    }

    fn neg(&self, x: AtomSet) -> AtomSet {
        self.a.complement_set(x)
    }

    /// Evaluates one law on a tuple; `true` means it holds.
    fn holds(&self, law: Law, t: &[AtomSet]) -> bool {
        match law {
            Law::R1 => t[0].union(t[1]) == t[1].union(t[0]),
            Law::R2 => t[0].union(t[1].union(t[2])) == t[0].union(t[1]).union(t[2]),
            Law::R3 => {
                let (r, s) = (t[0], t[1]);
                let lhs = self.neg(self.neg(r).union(s)).union(self.neg(self.neg(r).union(self.neg(s))));
                lhs == r
            }
            Law::R4 => self.comp(t[0], self.comp(t[1], t[2])) == self.comp(self.comp(t[0], t[1]), t[2]),
            Law::R5 => self.comp(t[0], self.a.identity_atoms()) == t[0],
            Law::R6 => self.conv(self.conv(t[0])) == t[0],
            Law::R7 => self.conv(self.comp(t[0], t[1])) == self.comp(self.conv(t[1]), self.conv(t[0])),
            Law::R8 => self.comp(t[0].union(t[1]), t[2]) == self.comp(t[0], t[2]).union(self.comp(t[1], t[2])),
            Law::R9 => self.conv(t[0].union(t[1])) == self.conv(t[0]).union(self.conv(t[1])),
            Law::R10 => {
                let (r, s) = (t[0], t[1]);
                let lhs = self.comp(self.conv(r), self.neg(self.comp(r, s))).union(self.neg(s));
                lhs == self.neg(s)
            }
            Law::R11 => {
                let left = self.comp(t[0], t[1]).is_disjoint(t[2]);
                let right = self.comp(self.conv(t[0]), t[2]).is_disjoint(t[1]);
                left == right
            }
            Law::Peircean => true,
        }
    }
}

fn element_level(ops: &Ops, law: Law, config: &CheckConfig) -> (Option<Witness>, Coverage) {
    let n = ops.a.atom_count() as u32;
    let arity = law.arity();
    let limit = if arity == 3 { config.ternary_limit.min(config.threshold) } else { config.threshold };
    let mask = (1u64 << n.min(63)) - 1;
    if (n as usize) <= limit {
        let total = 1u64 << (n * arity);
        let hit = parallel::first_hit(total, config.threads, |code| {
            let mut tuple = [AtomSet::EMPTY; 3];
            for (i, p) in (0..arity).rev().enumerate() {
                tuple[i] = AtomSet::from_bits(code >> (p * n) & mask);
            }
            (!ops.holds(law, &tuple)).then(|| tuple[..arity as usize].to_vec())
        });
        (hit.map(Witness::Elements), Coverage::Exhaustive(total))
    } else {
        let all = ops.a.all_atoms().bits();
        let hit = parallel::first_hit(config.samples, config.threads, |idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(idx);
            let tuple: Vec<AtomSet> = (0..arity).map(|_| AtomSet::from_bits(rng.gen::<u64>() & all)).collect();
            (!ops.holds(law, &tuple)).then_some(tuple)
        });
        (hit.map(Witness::Elements), Coverage::Sampled(config.samples))
    }
}
