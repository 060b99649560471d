//! Exhaustive search over all subfamilies of `([n] choose k)`.
//!
//! Deliberately independent of the shifting machinery: no shifting, no
//! union profile, no seeding. Used to validate the shifted search.

use std::time::Instant;

use super::{SearchOutcome, SearchStatus};
use crate::binom::binom;
use crate::catalog::ParamQuad;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::kset::all_ksets;

/// Largest `C(n, k)` accepted by [`exact_m_bruteforce`].
pub const BRUTE_LIMIT: u128 = 24;

struct Brute {
    sets: Vec<u64>,
    q: u32,
    s: usize,
    chosen: Vec<u64>,
    best: Vec<u64>,
    nodes: u64,
}

impl Brute {
    /// `levels[j]` holds every union of `j + 1` chosen members, repetition allowed.
    fn go(&mut self, i: usize, levels: &[Vec<u64>]) {
        self.nodes += 1;
        if self.chosen.len() + (self.sets.len() - i) <= self.best.len() {
            return;
        }
        if i == self.sets.len() {
            self.best = self.chosen.clone();
            return;
        }
        let g = self.sets[i];
        if let Some(next) = self.extend(levels, g) {
            self.chosen.push(g);
            self.go(i + 1, &next);
            self.chosen.pop();
        }
        self.go(i + 1, levels);
    }

    /// Union levels after adding `g`, or `None` if some `s` members would
    /// then span more than `q` elements.
    fn extend(&self, levels: &[Vec<u64>], g: u64) -> Option<Vec<Vec<u64>>> {
        let mut next: Vec<Vec<u64>> = Vec::with_capacity(self.s);
        for j in 0..self.s {
            let mut lv = levels[j].clone();
            if j == 0 {
                lv.push(g);
            } else {
                lv.extend(next[j - 1].iter().map(|&u| u | g));
            }
            lv.sort_unstable();
            lv.dedup();
            next.push(lv);
        }
        if next[self.s - 1].iter().any(|u| u.count_ones() > self.q) {
            None
        } else {
            Some(next)
        }
    }
}

/// `m(n, k, s, q)` over all families. Requires `C(n, k) <= 24`.
pub fn exact_m_bruteforce(pq: &ParamQuad) -> Result<SearchOutcome> {
    let total = binom(pq.n as u64, pq.k as u64);
    if total > BRUTE_LIMIT {
        return Err(Error::TooLarge(format!(
            "C({}, {}) = {total} exceeds the brute-force limit {BRUTE_LIMIT}",
            pq.n, pq.k
        )));
    }
    let start = Instant::now();
    let mut b = Brute {
        sets: all_ksets(pq.n, pq.k),
        q: pq.q,
        s: pq.s as usize,
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
    };
    let levels = vec![Vec::new(); b.s];
    b.go(0, &levels);
    Ok(SearchOutcome {
        value: b.best.len() as u64,
        witness: Family::from_masks(pq.n, pq.k, b.best)?,
        nodes: b.nodes,
        elapsed: start.elapsed(),
        status: SearchStatus::ProvedOptimal,
        checkpoint: None,
    })
}
