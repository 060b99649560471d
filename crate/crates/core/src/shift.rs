//! The shifting partial order and `(i, j)`-compressions.

use crate::error::{Error, Result};
use crate::family::Family;
use crate::kset::{ground_mask, KSet};

/// Immediate `≺_s`-predecessors of `m`: one element `a` replaced by `a - 1`
/// when `a - 1` is free.
#[inline]
pub fn immediate_predecessors(m: u64) -> impl Iterator<Item = u64> {
    let movable = m & !(m << 1) & !1;
    crate::kset::elements(movable).map(move |e| {
        let b = e - 1;
        m ^ (0b11u64 << (b - 1))
    })
}

/// Immediate `≺_s`-successors of `m` within `[n]`.
#[inline]
pub fn immediate_successors(m: u64, n: u32) -> impl Iterator<Item = u64> {
    let gm = ground_mask(n);
    let movable = m & !(m >> 1) & (gm >> 1);
    crate::kset::elements(movable).map(move |e| {
        let b = e - 1;
        m ^ (0b11u64 << b)
    })
}

fn check_pair(i: u32, j: u32, n: u32) -> Result<()> {
    if i == 0 || i >= j || j > n {
        return Err(Error::BadShiftPair { i, j });
    }
    Ok(())
}

#[inline]
fn shift_mask(m: u64, i: u32, j: u32) -> u64 {
    let bi = 1u64 << (i - 1);
    let bj = 1u64 << (j - 1);
    if m & bj != 0 && m & bi == 0 {
        m ^ bi ^ bj
    } else {
        m
    }
}

/// Replaces `j` by `i` in `F` when `j ∈ F` and `i ∉ F`.
pub fn shift_pair(f: &KSet, i: u32, j: u32) -> Result<KSet> {
    check_pair(i, j, f.ground())?;
    Ok(KSet::from_mask(shift_mask(f.mask(), i, j), f.ground()))
}

/// The family compression `S_ij`: each member is shifted unless its image is
/// already a member.
pub fn shift_family(g: &Family, i: u32, j: u32) -> Result<Family> {
    check_pair(i, j, g.ground())?;
    Ok(shift_family_inner(g, i, j).0)
}

fn shift_family_inner(g: &Family, i: u32, j: u32) -> (Family, bool) {
    let mut changed = false;
    let mut out: Vec<u64> = g
        .masks()
        .iter()
        .map(|&m| {
            let img = shift_mask(m, i, j);
            if img != m && !g.contains_mask(img) {
                changed = true;
                img
            } else {
                m
            }
        })
        .collect();
    if changed {
        out.sort_unstable();
    }
    (Family::from_sorted_unchecked(g.ground(), g.k(), out), changed)
}

/// Applies `S_ij` in lexicographic sweeps over `i < j` until a sweep changes
/// nothing.
pub fn fully_shift(g: &Family) -> Family {
    let n = g.ground();
    let mut cur = g.clone();
    loop {
        let mut any = false;
        for i in 1..n {
            for j in i + 1..=n {
                let (next, changed) = shift_family_inner(&cur, i, j);
                if changed {
                    any = true;
                    cur = next;
                }
            }
        }
        if !any {
            return cur;
        }
    }
}

/// Whether `g` is downward closed under `≺_s`. Checking immediate
/// predecessors suffices.
pub fn is_shifted(g: &Family) -> bool {
    g.masks()
        .iter()
        .all(|&m| immediate_predecessors(m).all(|p| g.contains_mask(p)))
}

/// The `≺_s`-down-closure of `g` in `[n]`.
pub fn down_closure(g: &Family) -> Family {
    let mut seen: std::collections::BTreeSet<u64> = g.masks().iter().copied().collect();
    let mut stack: Vec<u64> = g.masks().to_vec();
    while let Some(m) = stack.pop() {
        for p in immediate_predecessors(m) {
            if seen.insert(p) {
                stack.push(p);
            }
        }
    }
    Family::from_sorted_unchecked(g.ground(), g.k(), seen.into_iter().collect())
}
