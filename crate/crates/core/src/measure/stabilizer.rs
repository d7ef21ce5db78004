use super::{MeasureError, Measured};
use crate::bits::IndexSet;
use crate::group::{CosetSystem, QuotientIso, Side, Subgroup};
use crate::ra::AtomSet;

/// Stabilizers and the sets `X_a`, `Y_a` of an element below a rectangle.
/// Group-valued fields hold element indices of `G_x` or `G_y`.
#[derive(Clone, Debug)]
pub struct StabilizerData {
    pub element: AtomSet,
    pub x: usize,
    pub y: usize,
    pub left: Subgroup,
    pub right: Subgroup,
    /// Elements of `G_x` below `a;a˘`.
    pub x_set: IndexSet,
    /// Elements of `G_y` below `a˘;a`.
    pub y_set: IndexSet,
    pub left_regular: bool,
    pub right_regular: bool,
}

impl StabilizerData {
    pub fn is_regular(&self) -> bool {
        self.left_regular && self.right_regular
    }

    pub fn normal_stabilizers(&self) -> bool {
        self.left.is_normal() && self.right.is_normal()
    }
}

impl Measured<'_> {
    /// Checks `0 < a <= x;1;y` with both atoms measurable.
    pub fn check_below(&self, a: AtomSet, x: usize, y: usize) -> Result<(), MeasureError> {
        self.record(x)?;
        self.record(y)?;
        if a.is_empty() {
            return Err(MeasureError::Zero);
        }
        if !a.is_subset(self.rectangle(x, y)) {
            return Err(MeasureError::OutsideRectangle { element: a, x, y });
        }
        Ok(())
    }

    pub fn stabilizer_of(&self, a: AtomSet, x: usize, y: usize) -> Result<StabilizerData, MeasureError> {
        self.check_below(a, x, y)?;
        let alg = self.algebra;
        let (gx, gy) = (self.record(x)?, self.record(y)?);
        let left_set: IndexSet =
            (0..gx.measure()).filter(|&f| alg.compose(AtomSet::singleton(gx.atom_of[f]), a) == a).collect();
        let right_set: IndexSet =
            (0..gy.measure()).filter(|&g| alg.compose(a, AtomSet::singleton(gy.atom_of[g])) == a).collect();
        let left = Subgroup::from_members(&gx.group, left_set).ok_or(MeasureError::StabilizerNotSubgroup(left_set))?;
        let right = Subgroup::from_members(&gy.group, right_set).ok_or(MeasureError::StabilizerNotSubgroup(right_set))?;
        let conv = alg.converse_set(a);
        let x_set = gx.elements(alg.compose(a, conv));
        let y_set = gy.elements(alg.compose(conv, a));
        Ok(StabilizerData {
            element: a,
            x,
            y,
            left_regular: x_set == left_set,
            right_regular: y_set == right_set,
            left,
            right,
            x_set,
            y_set,
        })
    }

    pub fn translate_set(&self, a: AtomSet, g: usize, side: Side, x: usize, y: usize) -> Result<AtomSet, MeasureError> {
        self.check_below(a, x, y)?;
        let alg = self.algebra;
        match side {
            Side::Left => {
                let r = self.record(x)?;
                let f = *r.atom_of.get(g).ok_or(crate::group::GroupError::ElementRange(g))?;
                Ok(alg.compose(AtomSet::singleton(f), a))
            }
            Side::Right => {
                let r = self.record(y)?;
                let f = *r.atom_of.get(g).ok_or(crate::group::GroupError::ElementRange(g))?;
                Ok(alg.compose(a, AtomSet::singleton(f)))
            }
        }
    }

    /// Translation by a coset of the stabilizer on the given side: left
    /// cosets `f·L_a` or right cosets `R_a·g`.
    pub fn translate_coset_set(
        &self,
        a: AtomSet,
        coset: IndexSet,
        side: Side,
        x: usize,
        y: usize,
    ) -> Result<AtomSet, MeasureError> {
        let data = self.stabilizer_of(a, x, y)?;
        let stab = match side {
            Side::Left => &data.left,
            Side::Right => &data.right,
        };
        let system = CosetSystem::new(stab, side);
        let i = system.index_of(coset).ok_or(MeasureError::NotStabilizerCoset(coset))?;
        self.translate_set(a, system.representative(i), side, x, y)
    }

    /// The canonical quotient isomorphism `L_ξ ↦ R_ξ` of a regular element
    /// with normal stabilizers. The source is the canonical left system of
    /// `L_a`; the target lists the right cosets of `R_a` so that
    /// `L_ξ;a = a;R_ξ`.
    pub fn regular_iso(&self, a: AtomSet, x: usize, y: usize) -> Result<QuotientIso, MeasureError> {
        let data = self.stabilizer_of(a, x, y)?;
        if !data.is_regular() {
            return Err(MeasureError::NotRegular);
        }
        for s in [&data.left, &data.right] {
            if !s.is_normal() {
                return Err(MeasureError::NotNormal(s.members()));
            }
        }
        let left = CosetSystem::new(&data.left, Side::Left);
        let right = CosetSystem::new(&data.right, Side::Right);
        let mut aligned = Vec::with_capacity(left.len());
        for xi in 0..left.len() {
            let image = self.translate_set(a, left.representative(xi), Side::Left, x, y)?;
            let mut found = None;
            for eta in 0..right.len() {
                if self.translate_set(a, right.representative(eta), Side::Right, x, y)? == image {
                    found = Some(right.coset(eta));
                    break;
                }
            }
            aligned.push(found.ok_or(MeasureError::NoMatchingCoset(xi))?);
        }
        let target = CosetSystem::from_cosets(&data.right, Side::Right, aligned)?;
        let k = left.len();
        Ok(QuotientIso::new(left, target, (0..k).collect())?)
    }

    /// The maximal-`Z` construction: among unions `Z` of left cosets of
    /// `L_a` inside `X_a` that contain the identity and have `∏ f;a != 0`,
    /// pick one of largest size and return the product. Ties go to the
    /// lexicographically first choice of cosets.
    pub fn left_regular_below(&self, a: AtomSet, x: usize, y: usize) -> Result<AtomSet, MeasureError> {
        let data = self.stabilizer_of(a, x, y)?;
        let system = CosetSystem::new(&data.left, Side::Left);
        let mut translates = Vec::new();
        for i in system.indices_within(data.x_set) {
            if i != 0 {
                translates.push(self.translate_set(a, system.representative(i), Side::Left, x, y)?);
            }
        }
        let mut best = (0usize, a);
        search_meets(&translates, 0, a, 0, &mut best);
        Ok(best.1)
    }
}

/// Branch and bound over subsets of `items` whose meet with `acc` stays
/// nonzero, maximizing the number of chosen items.
fn search_meets(items: &[AtomSet], i: usize, acc: AtomSet, chosen: usize, best: &mut (usize, AtomSet)) {
    if chosen > best.0 {
        *best = (chosen, acc);
    }
    if i == items.len() || chosen + (items.len() - i) <= best.0 {
        return;
    }
    let with = acc.intersection(items[i]);
    if !with.is_empty() {
        search_meets(items, i + 1, with, chosen + 1, best);
    }
    search_meets(items, i + 1, acc, chosen, best);
}
