//! Fixed-width bitmask representation of k-subsets of `[n]`.
//!
//! Element `e` (1-based) is stored in bit `e - 1`. For sets of equal size,
//! numeric comparison of masks coincides with colex order.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ground size.
pub const MAX_GROUND: u32 = 64;

#[inline]
pub(crate) fn ground_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn check_ground(n: u32) -> Result<()> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::GroundTooLarge(n));
    }
    Ok(())
}

/// Iterates the 1-based elements of a mask in ascending order.
#[derive(Clone, Copy)]
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(tz + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

#[inline]
pub fn elements(mask: u64) -> Elements {
    Elements(mask)
}

/// Builds a mask from 1-based elements, validating range against `n`.
/// Order and duplicates are not checked here.
pub fn mask_of(elems: &[u32], n: u32) -> Result<u64> {
    check_ground(n)?;
    let mut m = 0u64;
    for &e in elems {
        if e == 0 || e > n {
            return Err(Error::OutOfRange { elem: e, ground: n });
        }
        m |= 1u64 << (e - 1);
    }
    Ok(m)
}

/// A k-element subset of `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct KSet {
    mask: u64,
    ground: u32,
}

impl KSet {
    /// Builds a set from strictly ascending 1-based elements.
    pub fn new(elems: &[u32], n: u32) -> Result<Self> {
        check_ground(n)?;
        if elems.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut mask = 0u64;
        let mut prev = 0u32;
        for &e in elems {
            if e == 0 || e > n {
                return Err(Error::OutOfRange { elem: e, ground: n });
            }
            if e == prev {
                return Err(Error::DuplicateElement(e));
            }
            if e < prev {
                return Err(Error::NotAscending(e));
            }
            mask |= 1u64 << (e - 1);
            prev = e;
        }
        Ok(KSet { mask, ground: n })
    }

    /// Wraps a raw mask. The caller guarantees `mask` fits in `[n]`.
    #[inline]
    pub fn from_mask(mask: u64, ground: u32) -> Self {
        debug_assert!(ground <= MAX_GROUND && mask & !ground_mask(ground) == 0);
        KSet { mask, ground }
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn ground(&self) -> u32 {
        self.ground
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.mask.count_ones()
    }

    #[inline]
    pub fn contains(&self, e: u32) -> bool {
        (1..=64).contains(&e) && self.mask >> (e - 1) & 1 == 1
    }

    /// Elements in ascending order `a_1 < ... < a_k`.
    pub fn elements(&self) -> Elements {
        elements(self.mask)
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.elements().collect()
    }

    /// Colex comparison (largest differing element decides).
    pub fn colex_cmp(&self, other: &KSet) -> Ordering {
        self.mask.cmp(&other.mask)
    }
}

/// `make_set` from the operation list: alias of [`KSet::new`].
pub fn make_set(elems: &[u32], n: u32) -> Result<KSet> {
    KSet::new(elems, n)
}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Coordinatewise comparison of the sorted element vectors of two equal-size masks.
#[inline]
pub(crate) fn precedes_mask(g: u64, f: u64) -> bool {
    let mut a = g;
    let mut b = f;
    // a_j(G) <= a_j(F) for every j: compare the j-th lowest bits pairwise.
    while a != 0 {
        let ga = a.trailing_zeros();
        let fb = b.trailing_zeros();
        if ga > fb {
            return false;
        }
        a &= a - 1;
        b &= b - 1;
    }
    true
}

/// `G ≺_s F`: the j-th smallest element of `G` is at most the j-th smallest of `F`
/// for every j. Reflexive.
pub fn precedes(g: &KSet, f: &KSet) -> Result<bool> {
    if g.ground != f.ground || g.k() != f.k() {
        return Err(Error::Mismatch(format!(
            "{g} (k={}, n={}) vs {f} (k={}, n={})",
            g.k(),
            g.ground,
            f.k(),
            f.ground
        )));
    }
    Ok(precedes_mask(g.mask, f.mask))
}

/// A pair `(G, F)` with the per-coordinate comparison `a_j(G) <= a_j(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftOrderCertificate {
    pub lower: KSet,
    pub upper: KSet,
    pub coordinates: Vec<(u32, u32)>,
}

impl ShiftOrderCertificate {
    pub fn new(lower: KSet, upper: KSet) -> Result<Self> {
        precedes(&lower, &upper)?;
        let coordinates = lower.elements().zip(upper.elements()).collect();
        Ok(ShiftOrderCertificate {
            lower,
            upper,
            coordinates,
        })
    }

    pub fn is_valid(&self) -> bool {
        self.coordinates.iter().all(|&(a, b)| a <= b)
    }
}

/// All k-subsets of `[n]` as masks, in colex (= ascending numeric) order.
pub fn all_ksets(n: u32, k: u32) -> Vec<u64> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 0 {
        out.push(0);
        return out;
    }
    if k == 64 {
        out.push(u64::MAX);
        return out;
    }
    let limit = ground_mask(n);
    let mut m: u64 = (1u64 << k) - 1;
    loop {
        out.push(m);
        // Gosper's hack: next integer with the same popcount.
        let c = m & m.wrapping_neg();
        let r = m.wrapping_add(c);
        if r == 0 {
            break;
        }
        let next = (((r ^ m) >> 2) / c) | r;
        if next > limit || next < m {
            break;
        }
        m = next;
    }
    out
}
