use crate::bits::IndexSet;
use crate::group::{CosetSystem, GroupError, GroupRef, QuotientIso, Side, Subgroup};
use std::collections::BTreeMap;
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TripleError {
    #[error("classes do not partition the indices 0..{0}")]
    BadClasses(usize),
    #[error("missing data for pair ({0},{1})")]
    MissingPair(usize, usize),
    #[error("data given for unrelated pair ({0},{1})")]
    UnrelatedPair(usize, usize),
    #[error("H or K of pair ({0},{1}) is not a normal subgroup of the right group")]
    BadSubgroup(usize, usize),
    #[error("quotient map of pair ({0},{1}) does not go from G/H to G/K")]
    BadQuotient(usize, usize),
    #[error("shifting coset for ({0},{1},{2}) is not a coset of the product subgroup")]
    BadShift(usize, usize, usize),
    #[error("shifting coset given for a triple outside E_3: ({0},{1},{2})")]
    UnrelatedTriple(usize, usize, usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `H_xy`, `K_xy` and `φ_xy` for one related pair.
#[derive(Clone, Debug)]
pub struct PairData {
    pub h: Subgroup,
    pub k: Subgroup,
    pub phi: QuotientIso,
}

/// Groups `G_x`, the relation `E` as classes, the pair data and the
/// shifting cosets `C_xyz`. Indices are `0..groups.len()`.
#[derive(Clone, Debug)]
pub struct GroupTriple {
    groups: Vec<GroupRef>,
    labels: Vec<String>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    pairs: BTreeMap<(usize, usize), PairData>,
    shifts: BTreeMap<(usize, usize, usize), IndexSet>,
}

impl GroupTriple {
    /// Structural validation only; the semi-frame conditions are checked by
    /// [`verify_semi_frame`]. Shifting cosets not listed default to the
    /// identity coset.
    pub fn new(
        groups: Vec<GroupRef>,
        labels: Vec<String>,
        classes: Vec<Vec<usize>>,
        pairs: BTreeMap<(usize, usize), PairData>,
        shifts: BTreeMap<(usize, usize, usize), IndexSet>,
    ) -> Result<GroupTriple, TripleError> {
        let n = groups.len();
        if labels.len() != n {
            return Err(TripleError::BadClasses(n));
        }
        let mut class_of = vec![usize::MAX; n];
        for (c, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(TripleError::BadClasses(n));
            }
            for &x in class {
                if x >= n || class_of[x] != usize::MAX {
                    return Err(TripleError::BadClasses(n));
                }
                class_of[x] = c;
            }
        }
        if class_of.contains(&usize::MAX) {
            return Err(TripleError::BadClasses(n));
        }
        for &(x, y) in pairs.keys() {
            if x >= n || y >= n || class_of[x] != class_of[y] {
                return Err(TripleError::UnrelatedPair(x, y));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if class_of[x] != class_of[y] {
                    continue;
                }
                let p = pairs.get(&(x, y)).ok_or(TripleError::MissingPair(x, y))?;
                let ok = p.h.group().same_table(&groups[x])
                    && p.k.group().same_table(&groups[y])
                    && p.h.is_normal()
                    && p.k.is_normal();
                if !ok {
                    return Err(TripleError::BadSubgroup(x, y));
                }
                let ok = p.phi.source().subgroup().members() == p.h.members()
                    && p.phi.target().subgroup().members() == p.k.members()
                    && p.phi.source().group().same_table(&groups[x])
                    && p.phi.target().group().same_table(&groups[y]);
                if !ok {
                    return Err(TripleError::BadQuotient(x, y));
                }
            }
        }
        let triple = GroupTriple { groups, labels, classes, class_of, pairs, shifts: BTreeMap::new() };
        let mut checked = BTreeMap::new();
        for ((x, y, z), c) in shifts {
            if x >= n || y >= n || z >= n || !triple.related(x, y) || !triple.related(y, z) {
                return Err(TripleError::UnrelatedTriple(x, y, z));
            }
            let m = triple.product_subgroup(x, y, z)?;
            if CosetSystem::new(&m, Side::Left).index_of(c).is_none() {
                return Err(TripleError::BadShift(x, y, z));
            }
            checked.insert((x, y, z), c);
        }
        Ok(GroupTriple { shifts: checked, ..triple })
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn group(&self, x: usize) -> &GroupRef {
        &self.groups[x]
    }

    pub fn groups(&self) -> &[GroupRef] {
        &self.groups
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    /// Related pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.keys().copied()
    }

    pub fn pair(&self, x: usize, y: usize) -> &PairData {
        &self.pairs[&(x, y)]
    }

    /// Triples `(x,y,z)` with `x E y` and `y E z`, lexicographic.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (x, y) in self.pairs() {
            for z in 0..self.len() {
                if self.related(y, z) {
                    out.push((x, y, z));
                }
            }
        }
        out
    }

    /// `κ_xy`, the number of cosets of `H_xy`.
    pub fn kappa(&self, x: usize, y: usize) -> usize {
        self.pair(x, y).phi.source().len()
    }

    /// `H_xy·H_xz` as a subgroup of `G_x`.
    pub fn product_subgroup(&self, x: usize, y: usize, z: usize) -> Result<Subgroup, GroupError> {
        self.pair(x, y).h.product(&self.pair(x, z).h)
    }

    /// `C_xyz`, defaulting to the identity coset `H_xy·H_xz`.
    pub fn shift(&self, x: usize, y: usize, z: usize) -> IndexSet {
        match self.shifts.get(&(x, y, z)) {
            Some(&c) => c,
            None => self.product_subgroup(x, y, z).expect("normal subgroups").members(),
        }
    }

    /// Shifting cosets that differ from the identity coset.
    pub fn nontrivial_shifts(&self) -> Vec<((usize, usize, usize), IndexSet)> {
        self.triples()
            .into_iter()
            .filter_map(|t| {
                let c = self.shift(t.0, t.1, t.2);
                let m = self.product_subgroup(t.0, t.1, t.2).expect("normal subgroups").members();
                (c != m).then_some((t, c))
            })
            .collect()
    }

    pub fn with_shift(&self, x: usize, y: usize, z: usize, coset: IndexSet) -> Result<GroupTriple, TripleError> {
        let mut shifts = self.shifts.clone();
        shifts.insert((x, y, z), coset);
        GroupTriple::new(self.groups.clone(), self.labels.clone(), self.classes.clone(), self.pairs.clone(), shifts)
    }

    pub fn with_pair(&self, x: usize, y: usize, data: PairData) -> Result<GroupTriple, TripleError> {
        let mut pairs = self.pairs.clone();
        pairs.insert((x, y), data);
        GroupTriple::new(self.groups.clone(), self.labels.clone(), self.classes.clone(), pairs, self.shifts.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionResult {
    pub label: &'static str,
    pub checked: usize,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiFrameReport {
    pub conditions: Vec<ConditionResult>,
}

impl SemiFrameReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.witness.is_none())
    }

    pub fn first_failure(&self) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.witness.is_some())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.conditions {
            match &c.witness {
                None => writeln!(out, "condition {}: pass ({} checked)", c.label, c.checked).unwrap(),
                Some(w) => writeln!(out, "condition {}: FAIL {}", c.label, w).unwrap(),
            }
        }
        out
    }
}

struct Cond {
    label: &'static str,
    checked: usize,
    witness: Option<String>,
}

impl Cond {
    fn new(label: &'static str) -> Self {
        Cond { label, checked: 0, witness: None }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn done(self) -> ConditionResult {
        ConditionResult { label: self.label, checked: self.checked, witness: self.witness }
    }
}

/// The four semi-frame conditions, each with its first failing witness.
pub fn verify_semi_frame(f: &GroupTriple) -> SemiFrameReport {
    let mut c1 = Cond::new("i");
    let mut c2 = Cond::new("ii");
    let mut c3 = Cond::new("iii");
    let mut c4 = Cond::new("iv");
    for x in 0..f.len() {
        let p = f.pair(x, x);
        let ok = p.h.order() == 1 && p.k.order() == 1 && p.phi.pairs().iter().all(|(s, t)| s == t);
        c1.check(ok, || format!("phi_{x}{x} is not the identity automorphism"));
    }
    for (x, y) in f.pairs() {
        let ok = f.pair(y, x).phi.same_map(&f.pair(x, y).phi.inverse());
        c2.check(ok, || format!("phi_{y}{x} is not the inverse of phi_{x}{y}"));
    }
    for (x, y, z) in f.triples() {
        let gx = f.group(x);
        let gy = f.group(y);
        let (pxy, pxz, pyz) = (f.pair(x, y), f.pair(x, z), f.pair(y, z));
        let m = gx.set_mul(pxy.h.members(), pxz.h.members());
        let n = gy.set_mul(pxy.k.members(), pyz.h.members());
        let image = pxy.phi.image(m);
        c3.check(image == n, || format!("({x},{y},{z}): phi_{x}{y}[H{x}{y}.H{x}{z}] = {image}, expected {n}"));
        if image != n {
            continue;
        }
        c4.check(condition_four(f, x, y, z).unwrap_or(false), || {
            format!("({x},{y},{z}): induced maps disagree with the inner automorphism of C = {}", f.shift(x, y, z))
        });
    }
    SemiFrameReport { conditions: vec![c1.done(), c2.done(), c3.done(), c4.done()] }
}

/// `φ̂_xy | φ̂_yz = τ | φ̂_xz` on `G_x/(H_xy·H_xz)`, with `τ` conjugation by
/// `C_xyz`.
pub(crate) fn condition_four(f: &GroupTriple, x: usize, y: usize, z: usize) -> Result<bool, GroupError> {
    shift_compatible(f.pair(x, y), f.pair(x, z), f.pair(y, z), f.shift(x, y, z))
}

/// Condition (iv) for one triple given its three pairs and shifting coset.
pub(crate) fn shift_compatible(pxy: &PairData, pxz: &PairData, pyz: &PairData, c: IndexSet) -> Result<bool, GroupError> {
    let m = pxy.h.product(&pxz.h)?;
    let n = pxy.k.product(&pyz.h)?;
    let hat_xy = pxy.phi.induce_on_coarser(&m)?;
    let hat_yz = pyz.phi.induce_on_coarser(&n)?;
    let hat_xz = pxz.phi.induce_on_coarser(&m)?;
    let eta = hat_xz.source().index_of(c).ok_or(GroupError::BadCosets)?;
    let tau = QuotientIso::inner_automorphism(hat_xz.source(), eta)?;
    Ok(hat_xy.then(&hat_yz)?.same_map(&tau.then(&hat_xz)?))
}

/// A group triple together with the frame flag: every shifting coset is
/// the identity coset and the induced maps compose exactly.
#[derive(Clone, Debug)]
pub struct FrameRecord {
    pub triple: GroupTriple,
    pub frame: bool,
}

impl FrameRecord {
    pub fn new(triple: GroupTriple) -> FrameRecord {
        let frame = triple.nontrivial_shifts().is_empty()
            && triple.triples().into_iter().all(|(x, y, z)| condition_four(&triple, x, y, z).unwrap_or(false));
        FrameRecord { triple, frame }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::parse_gtr;

    fn triple(text: &str) -> GroupTriple {
        parse_gtr(text, &|_| Err("no files".to_string())).unwrap()
    }

    fn failing(t: &GroupTriple) -> Option<&'static str> {
        verify_semi_frame(t).first_failure().map(|c| c.label)
    }

    #[test]
    fn identity_condition() {
        let good = triple("indices 1\ngroup 0 cyclic 3\neclass 0\nH 0 0 0\nK 0 0 0\nphi 0 0 0:0 1:1 2:2\n");
        assert!(verify_semi_frame(&good).passed());
        let twisted = triple("indices 1\ngroup 0 cyclic 3\neclass 0\nH 0 0 0\nK 0 0 0\nphi 0 0 0:0 1:2 2:1\n");
        assert_eq!(failing(&twisted), Some("i"));
    }

    #[test]
    fn converse_condition() {
        let head = "indices 2\ngroup 0 cyclic 3\ngroup 1 cyclic 3\neclass 0 1\n\
                    H 0 0 0\nK 0 0 0\nphi 0 0 0:0 1:1 2:2\nH 1 1 0\nK 1 1 0\nphi 1 1 0:0 1:1 2:2\n\
                    H 0 1 0\nK 0 1 0\nphi 0 1 0:0 1:2 2:1\nH 1 0 0\nK 1 0 0\n";
        let good = triple(&format!("{head}phi 1 0 0:0 1:2 2:1\n"));
        assert!(verify_semi_frame(&good).passed());
        let bad = triple(&format!("{head}phi 1 0 0:0 1:1 2:2\n"));
        assert_eq!(failing(&bad), Some("ii"));
        let report = verify_semi_frame(&bad);
        assert_eq!(report.conditions[1].witness.as_deref(), Some("phi_10 is not the inverse of phi_01"));
    }

    #[test]
    fn shift_condition_needs_central_cosets() {
        let base = "indices 1\ngroup 0 symmetric 3\neclass 0\nH 0 0 0\nK 0 0 0\nphi 0 0 0:0 1:1 2:2 3:3 4:4 5:5\n";
        assert!(verify_semi_frame(&triple(base)).passed());
        let t = triple(&format!("{base}C 0 0 0 1\n"));
        assert_eq!(failing(&t), Some("iv"));
        assert!(!FrameRecord::new(t).frame);
        // An abelian quotient makes every shift act trivially.
        let z2 = triple("indices 1\ngroup 0 cyclic 2\neclass 0\nH 0 0 0\nK 0 0 0\nphi 0 0 0:0 1:1\nC 0 0 0 1\n");
        assert!(verify_semi_frame(&z2).passed());
        assert!(!FrameRecord::new(z2).frame);
    }
}
