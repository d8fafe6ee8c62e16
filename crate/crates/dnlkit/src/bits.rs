//! Fixed-width bit sets over a dense vertex range 0..n.
//!
//! Everything in this library is intersection-counting-bound, so subsets of
//! the ground set are stored as u64 blocks and combined blockwise.

use serde::{Deserialize, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VSet {
    n: usize,
    blocks: Vec<u64>,
}

impl VSet {
    pub fn empty(n: usize) -> Self {
        VSet {
            n,
            blocks: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn singleton(n: usize, v: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(v);
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        let mut s = Self::empty(n);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {} out of range 0..{}", v, self.n);
        self.blocks[v / 64] |= 1u64 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        assert!(v < self.n);
        self.blocks[v / 64] &= !(1u64 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.blocks[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn union(&self, other: &VSet) -> VSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersect(&self, other: &VSet) -> VSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &VSet) -> VSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> VSet {
        let mut out = self.clone();
        for b in &mut out.blocks {
            *b = !*b;
        }
        out.mask_tail();
        out
    }

    pub fn intersection_size(&self, other: &VSet) -> usize {
        assert_eq!(self.n, other.n, "ground-set mismatch");
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_disjoint(&self, other: &VSet) -> bool {
        assert_eq!(self.n, other.n, "ground-set mismatch");
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &VSet) -> bool {
        assert_eq!(self.n, other.n, "ground-set mismatch");
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.contains(v))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    fn zip_with(&self, other: &VSet, f: impl Fn(u64, u64) -> u64) -> VSet {
        assert_eq!(self.n, other.n, "ground-set mismatch");
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(&a, &b)| f(a, b))
            .collect();
        let mut out = VSet { n: self.n, blocks };
        out.mask_tail();
        out
    }

    fn mask_tail(&mut self) {
        let tail = self.n % 64;
        if tail != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }
}

impl std::fmt::Debug for VSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

// Serialized as a plain sorted index list; the ground size travels with the
// enclosing structure, so deserialization goes through the owner.
impl Serialize for VSet {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(ser)
    }
}

/// Raw index list as it appears in JSON; rebind to a ground set with
/// [`VSet::from_iter`] after the owner's ground_size is known.
pub fn vset_from_indices<'de, D>(n: usize, de: D) -> Result<VSet, D::Error>
where
    D: serde::Deserializer<'de>,
{
    let idx = Vec::<usize>::deserialize(de)?;
    if let Some(&bad) = idx.iter().find(|&&v| v >= n) {
        return Err(serde::de::Error::custom(format!(
            "vertex {} out of range 0..{}",
            bad, n
        )));
    }
    Ok(VSet::from_iter(n, idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = VSet::from_iter(70, [0, 3, 69]);
        let b = VSet::from_iter(70, [3, 69, 5]);
        assert_eq!(a.intersect(&b).to_vec(), vec![3, 69]);
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.difference(&b).to_vec(), vec![0]);
        assert_eq!(a.intersection_size(&b), 2);
        assert!(!a.is_disjoint(&b));
        assert_eq!(a.complement().len(), 67);
        assert!(a.complement().intersect(&a).is_empty());
    }

    #[test]
    fn tail_masking() {
        let a = VSet::empty(3).complement();
        assert_eq!(a.to_vec(), vec![0, 1, 2]);
        assert_eq!(VSet::full(3), a);
    }
}
