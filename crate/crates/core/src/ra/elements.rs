use super::{AtomSet, AtomStructure};

/// Largest atom count for which a full element composition table is built
/// (`4^12` entries of two bytes, 32 MiB).
pub const TABLE_LIMIT: usize = 12;

/// Precomputed `a;b` for every pair of elements of a small structure, and
/// `a˘` for every element.
///
/// Built with two lookups per entry by peeling the lowest atom off the left
/// argument, so construction is linear in the table size.
pub struct ElementTable {
    n: usize,
    products: Vec<u16>,
    converses: Vec<u16>,
}

impl ElementTable {
    pub fn new(a: &AtomStructure) -> Option<ElementTable> {
        let n = a.atom_count();
        if n > TABLE_LIMIT {
            return None;
        }
        let size = 1usize << n;
        // rows[i][b] = {i};b
        let mut rows = vec![0u16; n * size];
        for i in 0..n {
            let row = &mut rows[i * size..(i + 1) * size];
            for b in 1..size {
                let low = b.trailing_zeros() as usize;
                row[b] = row[b & (b - 1)] | a.compose_atoms(i, low).bits() as u16;
            }
        }
        let mut products = vec![0u16; size * size];
        for x in 1..size {
            let low = x.trailing_zeros() as usize;
            let rest = x & (x - 1);
            for b in 0..size {
                products[x * size + b] = products[rest * size + b] | rows[low * size + b];
            }
        }
        let mut converses = vec![0u16; size];
        for x in 1..size {
            converses[x] = converses[x & (x - 1)] | 1 << a.converse_atom(x.trailing_zeros() as usize);
        }
        Some(ElementTable { n, products, converses })
    }

    pub fn atom_count(&self) -> usize {
        self.n
    }

    pub fn compose(&self, a: AtomSet, b: AtomSet) -> AtomSet {
        let idx = (a.bits() as usize) << self.n | b.bits() as usize;
        AtomSet::from_bits(self.products[idx] as u64)
    }

    pub fn converse(&self, a: AtomSet) -> AtomSet {
        AtomSet::from_bits(self.converses[a.bits() as usize] as u64)
    }
}
