//! Exact binomial coefficients from a memoized Pascal triangle.

use std::sync::OnceLock;

const ROWS: usize = 129;

fn table() -> &'static Vec<Vec<u128>> {
    static TABLE: OnceLock<Vec<Vec<u128>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t: Vec<Vec<u128>> = Vec::with_capacity(ROWS);
        for n in 0..ROWS {
            let mut row = vec![1u128; n + 1];
            for k in 1..n {
                row[k] = t[n - 1][k - 1] + t[n - 1][k];
            }
            t.push(row);
        }
        t
    })
}

/// `C(n, k)`, zero when `k > n`. Panics for `n > 128` (beyond desk scale).
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    assert!((n as usize) < ROWS, "binom({n}, {k}) beyond the precomputed table");
    table()[n as usize][k as usize]
}

/// `C(n, k)` for signed `n`, with `C(n, k) = 0` whenever `n < k` (including `n < 0`).
pub fn binom_i(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    binom(n as u64, k as u64)
}
