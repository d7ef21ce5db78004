use crate::bits::IndexSet;

/// The disjoint union of the groups `G_x`, element `g` of `G_x` labelled
/// `x.g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseSet {
    offsets: Vec<usize>,
    sizes: Vec<usize>,
}

impl BaseSet {
    pub fn new(sizes: Vec<usize>) -> BaseSet {
        let offsets = sizes
            .iter()
            .scan(0, |acc, &s| {
                let o = *acc;
                *acc += s;
                Some(o)
            })
            .collect();
        BaseSet { offsets, sizes }
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn element(&self, x: usize, g: usize) -> usize {
        debug_assert!(g < self.sizes[x]);
        self.offsets[x] + g
    }

    /// `(x, g)` of a base element.
    pub fn split(&self, u: usize) -> (usize, usize) {
        let x = self.offsets.iter().rposition(|&o| o <= u).expect("base element in range");
        (x, u - self.offsets[x])
    }

    pub fn label(&self, u: usize) -> String {
        let (x, g) = self.split(u);
        format!("{x}.{g}")
    }

    pub fn parse_label(&self, s: &str) -> Option<usize> {
        let (x, g) = s.split_once('.')?;
        let (x, g): (usize, usize) = (x.parse().ok()?, g.parse().ok()?);
        (x < self.sizes.len() && g < self.sizes[x]).then(|| self.element(x, g))
    }

    /// All elements of `G_x`.
    pub fn block(&self, x: usize) -> IndexSet {
        (self.offsets[x]..self.offsets[x] + self.sizes[x]).collect()
    }
}

/// A binary relation on a base set, stored as one row of successors per
/// element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    rows: Vec<IndexSet>,
}

impl Relation {
    pub fn empty(base: &BaseSet) -> Relation {
        Relation { rows: vec![IndexSet::EMPTY; base.len()] }
    }

    pub fn identity(base: &BaseSet) -> Relation {
        Relation { rows: (0..base.len()).map(IndexSet::singleton).collect() }
    }

    pub fn from_pairs(base: &BaseSet, pairs: impl IntoIterator<Item = (usize, usize)>) -> Relation {
        let mut r = Relation::empty(base);
        for (u, v) in pairs {
            r.rows[u].insert(v);
        }
        r
    }

    pub fn add_row(&mut self, u: usize, targets: IndexSet) {
        self.rows[u] = self.rows[u].union(targets);
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn row(&self, u: usize) -> IndexSet {
        self.rows[u]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(u, r)| r.iter().map(move |v| (u, v)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation { rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a.union(*b)).collect() }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(*b))
    }

    pub fn is_disjoint(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_disjoint(*b))
    }

    /// Relational composition: `u (r;s) w` iff `u r v` and `v s w` for some `v`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().fold(IndexSet::EMPTY, |acc, v| acc.union(other.rows[v])))
            .collect();
        Relation { rows }
    }

    pub fn converse(&self) -> Relation {
        let mut rows = vec![IndexSet::EMPTY; self.rows.len()];
        for (u, v) in self.pairs() {
            rows[v].insert(u);
        }
        Relation { rows }
    }
}
