//! Lattice points of `Z^d` and compact sets of ray indices.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest number of rays a fan may carry; ray sets are stored as a `u128` mask.
pub const MAX_RAYS: usize = 128;

/// A point of the lattice `N = Z^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Self(alloc::vec![0; dim])
    }

    /// The `i`-th standard basis vector of `Z^dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = 1;
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Nonzero with coprime coordinates.
    pub fn is_primitive(&self) -> bool {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c)) == 1
    }

    pub fn checked_neg(&self) -> Result<Self> {
        self.0
            .iter()
            .map(|c| c.checked_neg().ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Sum of the given vectors, failing if a coordinate leaves `i64`.
    pub fn checked_sum<'a, I>(dim: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a LatticeVector>,
    {
        let mut acc = alloc::vec![0i128; dim];
        for v in vectors {
            for (a, &c) in acc.iter_mut().zip(v.coords()) {
                *a = a.checked_add(c as i128).ok_or(Error::Overflow)?;
            }
        }
        acc.into_iter()
            .map(|a| i64::try_from(a).map_err(|_| Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// `sum_j coeffs[j] * vectors[j]`.
    pub fn checked_combination(dim: usize, terms: &[(&LatticeVector, i64)]) -> Result<Self> {
        let mut acc = alloc::vec![0i128; dim];
        for &(v, k) in terms {
            for (a, &c) in acc.iter_mut().zip(v.coords()) {
                let t = (c as i128).checked_mul(k as i128).ok_or(Error::Overflow)?;
                *a = a.checked_add(t).ok_or(Error::Overflow)?;
            }
        }
        acc.into_iter()
            .map(|a| i64::try_from(a).map_err(|_| Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A set of ray indices below [`MAX_RAYS`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RaySet(u128);

impl RaySet {
    pub const EMPTY: RaySet = RaySet(0);

    #[inline]
    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_RAYS);
        Self(1u128 << i)
    }

    /// Indices must be below [`MAX_RAYS`].
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices.into_iter().fold(Self::EMPTY, |s, i| s.with(i))
    }

    /// All indices `0..n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_RAYS);
        if n == MAX_RAYS {
            Self(u128::MAX)
        } else {
            Self((1u128 << n) - 1)
        }
    }

    #[inline]
    pub(crate) const fn from_bits(bits: u128) -> Self {
        Self(bits)
    }

    #[inline]
    pub fn bits(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < MAX_RAYS && self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        debug_assert!(i < MAX_RAYS);
        Self(self.0 | 1u128 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        Self(self.0 & !(1u128 << i))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: RaySet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn union(self, other: RaySet) -> Self {
        Self(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: RaySet) -> Self {
        Self(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: RaySet) -> Self {
        Self(self.0 & !other.0)
    }

    #[inline]
    pub fn is_disjoint(self, other: RaySet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> RaySetIter {
        RaySetIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic comparison of the sorted index lists.
    pub fn lex_cmp(self, other: RaySet) -> core::cmp::Ordering {
        self.iter().cmp(other.iter())
    }

    /// Applies a ray renumbering.
    pub fn map(self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_indices(self.iter().map(f))
    }
}

impl fmt::Debug for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for RaySet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Self::from_indices(iter)
    }
}

impl IntoIterator for RaySet {
    type Item = usize;
    type IntoIter = RaySetIter;
    fn into_iter(self) -> RaySetIter {
        self.iter()
    }
}

pub struct RaySetIter(u128);

impl Iterator for RaySetIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for RaySetIter {}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn primitivity() {
        assert!(LatticeVector::new(vec![1, 0]).is_primitive());
        assert!(LatticeVector::new(vec![-3, 2]).is_primitive());
        assert!(!LatticeVector::new(vec![2, 4]).is_primitive());
        assert!(!LatticeVector::new(vec![0, 0]).is_primitive());
    }

    #[test]
    fn sum_overflow_is_reported() {
        let a = LatticeVector::new(vec![i64::MAX]);
        assert_eq!(
            LatticeVector::checked_sum(1, [&a, &a]),
            Err(Error::Overflow)
        );
    }

    #[test]
    fn ray_set_basics() {
        let s = RaySet::from_indices([3, 0, 7]);
        assert_eq!(s.to_vec(), vec![0, 3, 7]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.max(), Some(7));
        assert!(RaySet::from_indices([0, 7]).is_subset(s));
        assert!(!s.contains(1));
        assert_eq!(s.without(3).to_vec(), vec![0, 7]);
        assert_eq!(RaySet::full(128).len(), 128);
        assert_eq!(
            RaySet::from_indices([0, 5]).lex_cmp(RaySet::from_indices([1, 2])),
            core::cmp::Ordering::Less
        );
    }
}
