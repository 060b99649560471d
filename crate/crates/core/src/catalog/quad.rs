use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The unique `(p, r)` with `q = (k - r)s + p`, `1 <= r <= k`, `r <= p <= s + r - 2`.
pub fn decompose_q(k: u32, s: u32, q: u32) -> Result<(u32, u32)> {
    if s < 2 || k < 1 || q < k || q >= s * k {
        return Err(Error::NoDecomposition { k, s, q });
    }
    // Ranges for r = k, k-1, ..., 1 tile [k, sk-1] from below.
    for r in (1..=k).rev() {
        let base = (k - r) * s;
        if q >= base + r && q <= base + s + r - 2 {
            return Ok((q - base, r));
        }
    }
    Err(Error::NoDecomposition { k, s, q })
}

/// A problem instance `(n, k, s, q)` together with its decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParamQuad {
    pub n: u32,
    pub k: u32,
    pub s: u32,
    pub q: u32,
    pub p: u32,
    pub r: u32,
}

impl ParamQuad {
    /// Validates `n > q >= k`, `q < sk`, `s >= 2`, `n <= 64`.
    pub fn new(n: u32, k: u32, s: u32, q: u32) -> Result<Self> {
        if k < 1 || s < 2 {
            return Err(Error::InvalidParameter(format!(
                "(n={n}, k={k}, s={s}, q={q}) needs k >= 1 and s >= 2"
            )));
        }
        let (p, r) = decompose_q(k, s, q)?;
        if n <= q {
            return Err(Error::InvalidParameter(format!(
                "(n={n}, k={k}, s={s}, q={q}) violates n > q"
            )));
        }
        if n > crate::kset::MAX_GROUND {
            return Err(Error::GroundTooLarge(n));
        }
        Ok(ParamQuad { n, k, s, q, p, r })
    }

    pub fn key(&self) -> (u32, u32, u32, u32) {
        (self.n, self.k, self.s, self.q)
    }
}

impl fmt::Display for ParamQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, k={}, s={}, q={})", self.n, self.k, self.s, self.q)
    }
}
