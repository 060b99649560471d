//! The candidate k-sets for the shifted search, in colex order.

use super::bits::{Bits, CAPACITY};
use crate::catalog::{in_shifted_union, ParamQuad};
use crate::error::{Error, Result};
use crate::kset::all_ksets;
use crate::shift::immediate_successors;

/// Candidates with their `≺_s`-up-sets. The candidate set is itself
/// `≺_s`-downward closed, so every predecessor of a candidate is a candidate.
pub struct Universe {
    pub n: u32,
    pub k: u32,
    pub masks: Vec<u64>,
    /// `upset[i]`: candidates `j` with `masks[i] ≺_s masks[j]`, including `i`.
    pub upset: Vec<Bits>,
    /// `suffix[i]`: candidate indices `>= i` (length `len + 1`).
    pub suffix: Vec<Bits>,
    pub restricted: bool,
}

impl Universe {
    /// All k-sets, or only those inside `∪_i A(p + is, r + i)` when `restrict`.
    pub fn new(pq: &ParamQuad, restrict: bool) -> Result<Self> {
        let masks: Vec<u64> = all_ksets(pq.n, pq.k)
            .into_iter()
            .filter(|&m| !restrict || in_shifted_union(m, pq))
            .collect();
        if masks.len() > CAPACITY {
            return Err(Error::TooLarge(format!(
                "{} candidate sets exceed the search capacity of {CAPACITY}",
                masks.len()
            )));
        }
        let len = masks.len();
        let mut upset = vec![Bits::zero(); len];
        for i in (0..len).rev() {
            let mut b = Bits::zero();
            b.set(i);
            for succ in immediate_successors(masks[i], pq.n) {
                // Successors are larger in colex, so already processed.
                if let Ok(j) = masks.binary_search(&succ) {
                    let uj = upset[j];
                    b.or_assign(&uj);
                }
            }
            upset[i] = b;
        }
        let suffix = (0..=len).map(|i| Bits::range(i, len)).collect();
        Ok(Universe {
            n: pq.n,
            k: pq.k,
            masks,
            upset,
            suffix,
            restricted: restrict,
        })
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.masks.binary_search(&mask).ok()
    }
}
