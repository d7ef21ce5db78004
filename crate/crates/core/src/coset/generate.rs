//! Deterministic enumeration of group triples and their coset algebras.
//!
//! With one index every ingredient is enumerated directly: normal
//! subgroups `H`, `K`, quotient isomorphisms `φ` and shifting cosets `C`,
//! filtered by the semi-frame conditions. With more indices all `G_x` are
//! one catalog group, and `C_xyz` is enumerated only for increasing
//! triples `x<y<z`: the remaining orderings are forced by the Peircean
//! symmetry of the atom table, so the table is closed under rotations,
//! kept only if it satisfies the relation algebra axioms, and the complete
//! triple is then re-extracted from the algebra.

use super::{atom_indices, build_coset_algebra, converse_index, otimes, CosetAlgebra, CosetAtomIndex, CosetError};
use crate::bits::IndexSet;
use crate::frame::{check_semi_scaffold, extract_semi_frame, shift_compatible, GroupTriple, PairData, SemiScaffold};
use crate::group::{CosetSystem, FiniteGroup, GroupRef, QuotientIso, Side, Subgroup};
use crate::measure::Measured;
use crate::ra::{verify_ra_axioms, AtomSet, AtomStructure, CheckConfig, CheckMode};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Named groups of order at most `max_order`, ordered by order.
pub fn catalog(max_order: usize) -> Vec<(String, GroupRef)> {
    let cyclic = |n| FiniteGroup::cyclic(n).expect("small cyclic group");
    let product = |a: &FiniteGroup, b: &FiniteGroup| FiniteGroup::direct_product(a, b).expect("small product");
    let z2 = cyclic(2);
    let groups: Vec<(&str, FiniteGroup)> = vec![
        ("Z1", cyclic(1)),
        ("Z2", z2.clone()),
        ("Z3", cyclic(3)),
        ("Z4", cyclic(4)),
        ("Z2xZ2", product(&z2, &z2)),
        ("Z5", cyclic(5)),
        ("Z6", cyclic(6)),
        ("S3", FiniteGroup::symmetric(3).expect("S3")),
        ("Z7", cyclic(7)),
        ("Z8", cyclic(8)),
        ("Z2xZ4", product(&z2, &cyclic(4))),
        ("Z2xZ2xZ2", product(&product(&z2, &z2), &z2)),
        ("D4", FiniteGroup::dihedral(4).expect("D4")),
        ("Q8", FiniteGroup::quaternion()),
    ];
    groups
        .into_iter()
        .filter(|(_, g)| g.order() <= max_order)
        .map(|(name, g)| (name.to_string(), Arc::new(g)))
        .collect()
}

/// Every isomorphism `G/H → G'/K` between the canonical left coset
/// systems, in lexicographic order of the coset map.
pub fn quotient_isos(h: &Subgroup, k: &Subgroup) -> Vec<QuotientIso> {
    let source = CosetSystem::new(h, Side::Left);
    let target = CosetSystem::new(k, Side::Left);
    let n = source.len();
    if target.len() != n || !h.is_normal() || !k.is_normal() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    map[0] = 0;
    let mut used = vec![false; n];
    used[0] = true;
    fn go(i: usize, map: &mut Vec<usize>, used: &mut Vec<bool>, s: &CosetSystem, t: &CosetSystem, out: &mut Vec<QuotientIso>) {
        let n = map.len();
        if i == n {
            if let Ok(iso) = QuotientIso::new(s.clone(), t.clone(), map.clone()) {
                out.push(iso);
            }
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            map[i] = v;
            // Products of already mapped cosets must be respected.
            let consistent = (0..=i).all(|a| {
                (0..=i).all(|b| {
                    let p = s.product(a, b);
                    p > i || map[p] == t.product(map[a], map[b])
                })
            });
            if consistent {
                used[v] = true;
                go(i + 1, map, used, s, t, out);
                used[v] = false;
            }
            map[i] = usize::MAX;
        }
    }
    go(1, &mut map, &mut used, &source, &target, &mut out);
    out
}

#[derive(Clone, Debug)]
pub struct GenBounds {
    pub indices: usize,
    pub max_order: usize,
    /// Restrict to these catalog names.
    pub groups: Option<Vec<String>>,
    /// Check the built algebra against the axioms. Always on with more
    /// than one index, where the triple is recovered from the algebra.
    pub check_axioms: bool,
    /// Stop after this many emitted triples.
    pub limit: Option<usize>,
    /// Instead of exhaustive enumeration, run this many randomized descents,
    /// each emitting at most one triple.
    pub sample: Option<(u64, usize)>,
}

impl Default for GenBounds {
    fn default() -> Self {
        GenBounds { indices: 1, max_order: 3, groups: None, check_axioms: true, limit: None, sample: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenOutcome {
    /// The built algebra satisfies the axioms.
    Ra,
    /// A semi-frame whose algebra fails the named law.
    NotRa(String),
    Unchecked,
}

#[derive(Clone, Debug)]
pub struct Generated {
    /// Catalog name of the group.
    pub group: String,
    pub triple: GroupTriple,
    pub algebra: CosetAlgebra,
    pub outcome: GenOutcome,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GenStats {
    /// Complete candidate assignments examined.
    pub candidates: u64,
    pub semi_frames: u64,
    pub emitted: u64,
    /// Closed tables whose re-extracted triple did not rebuild them; always
    /// zero unless something is broken.
    pub inconsistent: u64,
}

struct Run<'s> {
    bounds: GenBounds,
    rng: Option<ChaCha8Rng>,
    stats: GenStats,
    sink: &'s mut dyn FnMut(Generated) -> bool,
    stopped: bool,
    /// Set when a randomized descent has emitted its triple.
    landed: bool,
}

impl Run<'_> {
    fn order(&mut self, n: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..n).collect();
        if let Some(rng) = self.rng.as_mut() {
            v.shuffle(rng);
        }
        v
    }

    fn done(&self) -> bool {
        self.stopped || self.landed
    }

    fn emit(&mut self, g: Generated) {
        self.stats.emitted += 1;
        self.landed = self.rng.is_some();
        if !(self.sink)(g) || self.bounds.limit.is_some_and(|l| self.stats.emitted as usize >= l) {
            self.stopped = true;
        }
    }
}

fn axiom_outcome(a: &AtomStructure) -> GenOutcome {
    let config = CheckConfig { mode: CheckMode::AtomLevel, ..CheckConfig::default() };
    match verify_ra_axioms(a, &config).failures().next() {
        None => GenOutcome::Ra,
        Some(v) => GenOutcome::NotRa(v.law.name().to_string()),
    }
}

/// Enumerates triples within the bounds, passing each to `sink` until it
/// returns `false`.
pub fn generate_triples(bounds: &GenBounds, sink: &mut dyn FnMut(Generated) -> bool) -> GenStats {
    let groups: Vec<(String, GroupRef)> = catalog(bounds.max_order)
        .into_iter()
        .filter(|(name, _)| bounds.groups.as_ref().is_none_or(|g| g.contains(name)))
        .collect();
    let rng = bounds.sample.map(|(seed, _)| ChaCha8Rng::seed_from_u64(seed));
    let mut run = Run { bounds: bounds.clone(), rng, stats: GenStats::default(), sink, stopped: false, landed: false };
    let attempts = bounds.sample.map_or(1, |(_, n)| n);
    for _ in 0..attempts {
        let picks = run.order(groups.len());
        for gi in picks {
            let (name, g) = &groups[gi];
            run.landed = false;
            if bounds.indices <= 1 {
                single_index(&mut run, name, g);
            } else {
                Search::new(&mut run, name, g, bounds.indices).pairs(0);
            }
            if run.done() {
                break;
            }
        }
        if run.stopped {
            break;
        }
    }
    run.stats
}

fn single_index(run: &mut Run, name: &str, g: &GroupRef) {
    let normal = Subgroup::all_normal(g);
    for hi in run.order(normal.len()) {
        for ki in run.order(normal.len()) {
            let (h, k) = (&normal[hi], &normal[ki]);
            if h.order() != k.order() {
                continue;
            }
            let isos = quotient_isos(h, k);
            for pi in run.order(isos.len()) {
                let cosets = CosetSystem::new(h, Side::Left);
                for ci in run.order(cosets.len()) {
                    run.stats.candidates += 1;
                    let pair = PairData { h: h.clone(), k: k.clone(), phi: isos[pi].clone() };
                    let shifts = BTreeMap::from([((0, 0, 0), cosets.coset(ci))]);
                    let Ok(triple) = GroupTriple::new(
                        vec![g.clone()],
                        vec!["0".to_string()],
                        vec![vec![0]],
                        BTreeMap::from([((0, 0), pair)]),
                        shifts,
                    ) else {
                        continue;
                    };
                    let Ok(algebra) = build_coset_algebra(&triple) else { continue };
                    run.stats.semi_frames += 1;
                    let outcome =
                        if run.bounds.check_axioms { axiom_outcome(&algebra.structure) } else { GenOutcome::Unchecked };
                    run.emit(Generated { group: name.to_string(), triple, algebra, outcome });
                    if run.done() {
                        return;
                    }
                }
            }
        }
    }
}

/// Backtracking over `H_xy` (all ordered pairs), then `φ_xy` (`x<y`), then
/// `C_xyz` (`x<y<z`).
struct Search<'r, 's> {
    run: &'r mut Run<'s>,
    name: String,
    group: GroupRef,
    k: usize,
    normal: Vec<Subgroup>,
    /// Ordered pairs `x≠y`, each `(x,y)` directly followed by `(y,x)`.
    order: Vec<(usize, usize)>,
    h: BTreeMap<(usize, usize), Subgroup>,
    phi: BTreeMap<(usize, usize), PairData>,
    shifts: BTreeMap<(usize, usize, usize), IndexSet>,
}

impl<'r, 's> Search<'r, 's> {
    fn new(run: &'r mut Run<'s>, name: &str, group: &GroupRef, k: usize) -> Self {
        let mut order = Vec::new();
        for y in 1..k {
            for x in 0..y {
                order.push((x, y));
                order.push((y, x));
            }
        }
        Search {
            run,
            name: name.to_string(),
            group: group.clone(),
            k,
            normal: Subgroup::all_normal(group),
            order,
            h: BTreeMap::new(),
            phi: BTreeMap::new(),
            shifts: BTreeMap::new(),
        }
    }

    fn sub(&self, x: usize, y: usize) -> Subgroup {
        if x == y {
            Subgroup::trivial(&self.group)
        } else {
            self.h[&(x, y)].clone()
        }
    }

    /// Orders of `H_xy·H_xz` and `H_yx·H_yz` agree on every triple whose
    /// subgroups are all assigned; a necessary form of condition (iii).
    fn orders_agree(&self) -> bool {
        let known = |x: usize, y: usize| x == y || self.h.contains_key(&(x, y));
        for x in 0..self.k {
            for y in 0..self.k {
                for z in 0..self.k {
                    if !(known(x, y) && known(x, z) && known(y, x) && known(y, z)) {
                        continue;
                    }
                    let gx = self.group.set_mul(self.sub(x, y).members(), self.sub(x, z).members());
                    let gy = self.group.set_mul(self.sub(y, x).members(), self.sub(y, z).members());
                    if gx.len() != gy.len() {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn pairs(&mut self, i: usize) {
        if i == self.order.len() {
            return self.isos(0);
        }
        let (x, y) = self.order[i];
        for si in self.run.order(self.normal.len()) {
            let s = self.normal[si].clone();
            if i % 2 == 1 && s.order() != self.h[&(y, x)].order() {
                continue;
            }
            self.h.insert((x, y), s);
            if self.orders_agree() {
                self.pairs(i + 1);
            }
            self.h.remove(&(x, y));
            if self.run.done() {
                return;
            }
        }
    }

    fn pair_data(&self, x: usize, y: usize) -> Option<PairData> {
        if x == y {
            let t = Subgroup::trivial(&self.group);
            let phi = QuotientIso::identity(&CosetSystem::new(&t, Side::Left)).ok()?;
            return Some(PairData { h: t.clone(), k: t, phi });
        }
        if let Some(p) = self.phi.get(&(x, y)) {
            return Some(p.clone());
        }
        let p = self.phi.get(&(y, x))?;
        Some(PairData { h: p.k.clone(), k: p.h.clone(), phi: p.phi.inverse() })
    }

    /// Condition (iii) on every triple whose maps are known, and (iv) on
    /// those whose shifting coset is forced to be the identity coset.
    fn maps_consistent(&self) -> bool {
        for x in 0..self.k {
            for y in 0..self.k {
                let Some(pxy) = self.pair_data(x, y) else { continue };
                for z in 0..self.k {
                    let (Some(pxz), Some(pyz)) = (self.pair_data(x, z), self.pair_data(y, z)) else { continue };
                    let m = self.group.set_mul(pxy.h.members(), pxz.h.members());
                    let n = self.group.set_mul(pxy.k.members(), pyz.h.members());
                    if pxy.phi.image(m) != n {
                        return false;
                    }
                    let degenerate = x == y || y == z || x == z;
                    if degenerate && !shift_compatible(&pxy, &pxz, &pyz, m).unwrap_or(false) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn isos(&mut self, i: usize) {
        let upper: Vec<(usize, usize)> = self.order.iter().copied().filter(|&(x, y)| x < y).collect();
        if i == upper.len() {
            return self.shift_choices(0);
        }
        let (x, y) = upper[i];
        let (h, k) = (self.h[&(x, y)].clone(), self.h[&(y, x)].clone());
        let isos = quotient_isos(&h, &k);
        for pi in self.run.order(isos.len()) {
            self.phi.insert((x, y), PairData { h: h.clone(), k: k.clone(), phi: isos[pi].clone() });
            if self.maps_consistent() {
                self.isos(i + 1);
            }
            self.phi.remove(&(x, y));
            if self.run.done() {
                return;
            }
        }
    }

    fn increasing_triples(&self) -> Vec<(usize, usize, usize)> {
        let mut v = Vec::new();
        for x in 0..self.k {
            for y in x + 1..self.k {
                for z in y + 1..self.k {
                    v.push((x, y, z));
                }
            }
        }
        v
    }

    fn shift_choices(&mut self, i: usize) {
        let triples = self.increasing_triples();
        if i == triples.len() {
            return self.finish();
        }
        let (x, y, z) = triples[i];
        let (pxy, pxz, pyz) = (self.pair_data(x, y).unwrap(), self.pair_data(x, z).unwrap(), self.pair_data(y, z).unwrap());
        let Ok(m) = pxy.h.product(&pxz.h) else { return };
        let cosets = CosetSystem::new(&m, Side::Left);
        for ci in self.run.order(cosets.len()) {
            let c = cosets.coset(ci);
            if !shift_compatible(&pxy, &pxz, &pyz, c).unwrap_or(false) {
                continue;
            }
            self.shifts.insert((x, y, z), c);
            self.shift_choices(i + 1);
            self.shifts.remove(&(x, y, z));
            if self.run.done() {
                return;
            }
        }
    }

    fn finish(&mut self) {
        self.run.stats.candidates += 1;
        let Some(partial) = self.partial_triple() else { return };
        let Ok(structure) = closed_structure(&partial) else { return };
        if axiom_outcome(&structure) != GenOutcome::Ra {
            return;
        }
        let (triple, algebra) = match recover(&structure, &partial) {
            Ok(found) => found,
            Err(_) => {
                self.run.stats.inconsistent += 1;
                return;
            }
        };
        self.run.stats.semi_frames += 1;
        let g = Generated { group: self.name.clone(), triple, algebra, outcome: GenOutcome::Ra };
        self.run.emit(g);
    }

    fn partial_triple(&self) -> Option<GroupTriple> {
        let mut pairs = BTreeMap::new();
        for x in 0..self.k {
            for y in 0..self.k {
                pairs.insert((x, y), self.pair_data(x, y)?);
            }
        }
        GroupTriple::new(
            vec![self.group.clone(); self.k],
            (0..self.k).map(|x| x.to_string()).collect(),
            vec![(0..self.k).collect()],
            pairs,
            self.shifts.clone(),
        )
        .ok()
    }
}

/// The atom table given by `⊗` on increasing and degenerate triples, closed
/// under Peircean rotations.
fn closed_structure(f: &GroupTriple) -> Result<AtomStructure, CosetError> {
    let atoms = atom_indices(f);
    let n = atoms.len();
    if n > crate::bits::MAX_INDEX {
        return Err(CosetError::TooManyAtoms(n));
    }
    let pos = |a: CosetAtomIndex| atoms.binary_search(&a).expect("atom in range");
    let converse = atoms.iter().map(|&a| converse_index(f, a).map(pos)).collect::<Result<Vec<_>, _>>()?;
    let mut table = vec![AtomSet::EMPTY; n * n];
    for (i, &a) in atoms.iter().enumerate() {
        for (j, &b) in atoms.iter().enumerate() {
            let (x, y, z) = (a.x, a.y, b.y);
            let distinct = x != y && y != z && x != z;
            if a.y != b.x || (distinct && !(x < y && y < z)) {
                continue;
            }
            table[i * n + j] =
                otimes(f, a, b).into_iter().map(|gamma| pos(CosetAtomIndex { x, y: z, alpha: gamma })).collect();
        }
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                for c in table[i * n + j] {
                    // c ≤ i;j gives j ≤ i˘;c and i ≤ c;j˘.
                    for (p, q, r) in [(converse[i], c, j), (c, converse[j], i)] {
                        if !table[p * n + q].contains(r) {
                            table[p * n + q].insert(r);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let names = atoms.iter().map(|a| a.to_string()).collect();
    let identity: AtomSet = (0..f.len()).map(|x| pos(CosetAtomIndex { x, y: x, alpha: 0 })).collect();
    Ok(AtomStructure::new_unchecked(names, converse, identity, table)?)
}

/// Re-extracts the full triple from a closed structure using the base atoms
/// `R_{xy,0}` as semi-scaffold, and rebuilds its coset algebra, which must
/// reproduce the structure exactly.
fn recover(structure: &AtomStructure, partial: &GroupTriple) -> Result<(GroupTriple, CosetAlgebra), CosetError> {
    let atoms = atom_indices(partial);
    let pos = |a: CosetAtomIndex| atoms.binary_search(&a).expect("atom in range");
    let k = partial.len();
    let ids: Vec<usize> = (0..k).map(|x| pos(CosetAtomIndex { x, y: x, alpha: 0 })).collect();
    let mut entries = BTreeMap::new();
    for x in 0..k {
        for y in 0..k {
            entries.insert((ids[x], ids[y]), pos(CosetAtomIndex { x, y, alpha: 0 }));
        }
    }
    let m = Measured::new(structure).map_err(|e| CosetError::Inconsistent(e.to_string()))?;
    let mut s = SemiScaffold { order: ids.clone(), entries, is_scaffold: false };
    s.is_scaffold = check_semi_scaffold(&m, &s).map_err(|e| CosetError::Inconsistent(e.to_string()))?;
    let ex = extract_semi_frame(&m, &s).map_err(|e| CosetError::Inconsistent(e.to_string()))?;
    let algebra = build_coset_algebra(&ex.triple)?;
    let perm: Vec<usize> = ex
        .atom_index
        .iter()
        .map(|&(x, y, alpha)| algebra.atom_of(CosetAtomIndex { x, y, alpha }).expect("extracted atom"))
        .collect();
    if !structure.permuted(&perm)?.same_table(&algebra.structure) {
        return Err(CosetError::Inconsistent("rebuilt algebra differs from the closed table".into()));
    }
    Ok((ex.triple, algebra))
}
