//! Exact decision oracles for the structural properties of a family.

use crate::error::{Error, Result};
use crate::family::Family;
use crate::profile::UnionProfile;

/// Largest union of `min(s, |G|)` members; 0 for the empty family.
///
/// Repeated choices never enlarge a union, so this also answers the
/// with-repetition form of the question.
pub fn max_union(g: &Family, s: u32) -> Result<u32> {
    if s < 1 {
        return Err(Error::InvalidParameter("max_union needs s >= 1".into()));
    }
    if g.is_empty() {
        return Ok(0);
    }
    let depth = (s as usize).min(g.len());
    let cap = g.support().count_ones();
    let mut p = UnionProfile::new(depth);
    for &m in g.masks() {
        p.insert(m);
        if p.max_popcount(depth) == cap {
            return Ok(cap);
        }
    }
    Ok(p.max_popcount(depth))
}

/// Property `U(s, q)`: any `s` members (repetition allowed) span at most `q` elements.
#[allow(non_snake_case)]
pub fn has_U(g: &Family, s: u32, q: u32) -> Result<bool> {
    if s < 1 {
        return Err(Error::InvalidParameter("has_U needs s >= 1".into()));
    }
    if g.is_empty() {
        return Ok(true);
    }
    if s == 1 {
        return Ok(g.k() <= q);
    }
    let depth = (s - 1) as usize;
    let mut p = UnionProfile::new(depth);
    for &m in g.masks() {
        // A new violation must involve the newcomer.
        if p.max_with(m, depth) > q {
            return Ok(false);
        }
        p.insert(m);
    }
    Ok(true)
}

/// Maximum number of pairwise disjoint members (exact branch and bound).
pub fn matching_number(g: &Family) -> usize {
    if g.is_empty() {
        return 0;
    }
    if g.k() == 0 {
        return 1;
    }
    let mut cands: Vec<u64> = g.masks().to_vec();
    // Smallest minimum element first; ties in colex order.
    cands.sort_by_key(|&m| (m.trailing_zeros(), m));
    let k = g.k();
    let ceiling = (g.support().count_ones() / k) as usize;
    let mut best = 0usize;
    matching_rec(&cands, 0, k, ceiling, &mut best);
    best
}

fn matching_rec(cands: &[u64], cur: usize, k: u32, ceiling: usize, best: &mut usize) {
    if *best >= ceiling {
        return;
    }
    if cands.is_empty() {
        *best = (*best).max(cur);
        return;
    }
    let support = cands.iter().fold(0u64, |a, &m| a | m);
    let bound = cur + cands.len().min((support.count_ones() / k) as usize);
    if bound <= *best {
        return;
    }
    let f = cands[0];
    let rest: Vec<u64> = cands[1..].iter().copied().filter(|&m| m & f == 0).collect();
    matching_rec(&rest, cur + 1, k, ceiling, best);
    matching_rec(&cands[1..], cur, k, ceiling, best);
}

/// Every two members share at least `t` elements.
pub fn is_t_intersecting(g: &Family, t: u32) -> Result<bool> {
    if t < 1 || t > g.k() {
        return Err(Error::InvalidParameter(format!(
            "t={t} outside [1, k={}]",
            g.k()
        )));
    }
    let m = g.masks();
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[i + 1..] {
            if (a & b).count_ones() < t {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// No choice of one member per family is pairwise disjoint. Repeated
/// families in the list are allowed.
pub fn are_cross_dependent(families: &[&Family]) -> Result<bool> {
    let first = families
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty family list".into()))?;
    for f in families {
        if f.ground() != first.ground() || f.k() != first.k() {
            return Err(Error::Mismatch("families differ in ground or k".into()));
        }
    }
    let mut order: Vec<&[u64]> = families.iter().map(|f| f.masks()).collect();
    order.sort_by_key(|m| m.len());
    Ok(!transversal_exists(&order, 0))
}

fn transversal_exists(order: &[&[u64]], used: u64) -> bool {
    match order.split_first() {
        None => true,
        Some((head, tail)) => head
            .iter()
            .any(|&m| m & used == 0 && transversal_exists(tail, used | m)),
    }
}

/// Outcome of the two equivalences `U(2, 2k-t) ⇔ t-intersecting` and
/// `U(s+1, (s+1)k-1) ⇔ ν ≤ s`, evaluated independently on one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UEquivalenceReport {
    pub t_intersecting: bool,
    pub has_u_pair: bool,
    pub matching_number: usize,
    pub has_u_matching: bool,
}

impl UEquivalenceReport {
    pub fn intersecting_equivalence_holds(&self) -> bool {
        self.t_intersecting == self.has_u_pair
    }

    pub fn matching_equivalence_holds(&self, s: u32) -> bool {
        (self.matching_number <= s as usize) == self.has_u_matching
    }
}

pub fn u_equivalences_check(g: &Family, s: u32, t: u32) -> Result<UEquivalenceReport> {
    let k = g.k();
    if s < 1 {
        return Err(Error::InvalidParameter("s must be >= 1".into()));
    }
    let t_intersecting = is_t_intersecting(g, t)?;
    Ok(UEquivalenceReport {
        t_intersecting,
        has_u_pair: has_U(g, 2, 2 * k - t)?,
        matching_number: matching_number(g),
        has_u_matching: has_U(g, s + 1, (s + 1) * k - 1)?,
    })
}

/// `ν(G) ≤ s ⇒ s·|∂G| ≥ |G|`. `None` when the hypothesis fails.
pub fn shadow_matching_inequality(g: &Family, s: u32) -> Result<Option<bool>> {
    if matching_number(g) > s as usize {
        return Ok(None);
    }
    let shadow = g.shadow()?;
    Ok(Some(s as usize * shadow.len() >= g.len()))
}
