//! Partitions of an index set (edge partitions for pretrains and chains).

use serde::{Deserialize, Serialize};

/// Disjoint-set forest with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn into_partition(mut self) -> Partition {
        let labels: Vec<usize> = (0..self.parent.len()).map(|i| self.find(i)).collect();
        Partition::from_labels(&labels)
    }
}

/// A partition of `0..len`, stored as a class id per element.
///
/// Class ids are canonical: classes are numbered in order of their least element,
/// so two partitions are equal iff they have the same blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    class: Vec<usize>,
    count: usize,
}

impl Partition {
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut seen = std::collections::HashMap::new();
        let mut class = Vec::with_capacity(labels.len());
        for l in labels {
            let next = seen.len();
            let id = *seen.entry(l.clone()).or_insert(next);
            class.push(id);
        }
        Partition { count: seen.len(), class }
    }

    /// Builds a partition from explicit blocks; every element must occur exactly once.
    pub fn from_blocks(len: usize, blocks: &[Vec<usize>]) -> Option<Self> {
        let mut label = vec![usize::MAX; len];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= len || label[x] != usize::MAX {
                    return None;
                }
                label[x] = b;
            }
        }
        if label.iter().any(|&l| l == usize::MAX) {
            return None;
        }
        Some(Partition::from_labels(&label))
    }

    /// Every element in its own class.
    pub fn discrete(len: usize) -> Self {
        Partition { class: (0..len).collect(), count: len }
    }

    /// One class containing everything (no classes when `len == 0`).
    pub fn single(len: usize) -> Self {
        Partition { class: vec![0; len], count: usize::from(len > 0) }
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.count
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.class
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.class[a] == self.class[b]
    }

    /// Blocks in class-id order, each sorted ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (x, &c) in self.class.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    pub fn block(&self, c: usize) -> Vec<usize> {
        (0..self.class.len()).filter(|&x| self.class[x] == c).collect()
    }

    /// True iff every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.len() != coarser.len() {
            return false;
        }
        let mut image = vec![usize::MAX; self.count];
        for (x, &c) in self.class.iter().enumerate() {
            let d = coarser.class[x];
            if image[c] == usize::MAX {
                image[c] = d;
            } else if image[c] != d {
                return false;
            }
        }
        true
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &Partition) -> Partition {
        assert_eq!(self.len(), other.len());
        let mut uf = UnionFind::new(self.len());
        let mut first_a = vec![usize::MAX; self.count];
        let mut first_b = vec![usize::MAX; other.count];
        for x in 0..self.len() {
            let (a, b) = (self.class[x], other.class[x]);
            if first_a[a] == usize::MAX {
                first_a[a] = x;
            } else {
                uf.union(first_a[a], x);
            }
            if first_b[b] == usize::MAX {
                first_b[b] = x;
            } else {
                uf.union(first_b[b], x);
            }
        }
        uf.into_partition()
    }

    /// Coarsest common refinement.
    pub fn meet(&self, other: &Partition) -> Partition {
        let labels: Vec<(usize, usize)> =
            (0..self.len()).map(|x| (self.class[x], other.class[x])).collect();
        Partition::from_labels(&labels)
    }

    /// The partition induced on `elems`; element `elems[i]` becomes `i`.
    pub fn restrict(&self, elems: &[usize]) -> Partition {
        let labels: Vec<usize> = elems.iter().map(|&x| self.class[x]).collect();
        Partition::from_labels(&labels)
    }

    /// Pulls back along `map`: element `i` of the result goes to `map[i]`.
    pub fn pullback(&self, map: &[usize]) -> Partition {
        self.restrict(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_labels() {
        let p = Partition::from_labels(&[7, 3, 7, 1]);
        assert_eq!(p.labels(), &[0, 1, 0, 2]);
        assert_eq!(p.num_classes(), 3);
        assert_eq!(p.blocks(), vec![vec![0, 2], vec![1], vec![3]]);
    }

    #[test]
    fn refinement_and_join() {
        let fine = Partition::from_labels(&[0, 0, 1, 2]);
        let coarse = Partition::from_labels(&[0, 0, 1, 1]);
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
        let a = Partition::from_labels(&[0, 0, 1, 2]);
        let b = Partition::from_labels(&[0, 1, 1, 2]);
        assert_eq!(a.join(&b), Partition::from_labels(&[0, 0, 0, 1]));
        assert_eq!(a.meet(&b), Partition::discrete(4));
    }

    #[test]
    fn blocks_roundtrip() {
        let p = Partition::from_blocks(4, &[vec![3, 1], vec![0, 2]]).unwrap();
        assert_eq!(p.labels(), &[0, 1, 0, 1]);
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_none());
        assert!(Partition::from_blocks(2, &[vec![0, 1], vec![1]]).is_none());
        assert_eq!(Partition::single(0).num_classes(), 0);
    }
}
