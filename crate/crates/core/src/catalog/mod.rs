//! Closed-form constructions, cardinalities and theorem-derived bounds.

mod crossovers;
mod ledger;
mod quad;

pub use crossovers::{k3_crossovers, CrossoverReport};
pub use ledger::{BoundKind, BoundRecord, Ledger, Provenance};
pub use quad::{decompose_q, ParamQuad};

use num_rational::Ratio;

use crate::binom::binom;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::kset::{all_ksets, check_ground, ground_mask};

fn check_a(p: u32, r: u32, n: u32, k: u32) -> Result<()> {
    check_ground(n)?;
    if r > p || p > n || r > k || k > n {
        return Err(Error::InvalidParameter(format!(
            "A(p={p}, r={r}, n={n}, k={k}) needs 0 <= r <= p <= n and r <= k <= n"
        )));
    }
    Ok(())
}

/// `A(p, r, n, k)`: all k-subsets of `[n]` meeting `[p]` in at least `r` elements.
pub fn a_family(p: u32, r: u32, n: u32, k: u32) -> Result<Family> {
    check_a(p, r, n, k)?;
    let head = ground_mask(p.min(64));
    let head = if p == 0 { 0 } else { head };
    Family::from_masks(
        n,
        k,
        all_ksets(n, k).into_iter().filter(|m| (m & head).count_ones() >= r),
    )
}

/// `|A(p, r, n, k)| = Σ_{i=r}^{k} C(p, i)·C(n-p, k-i)`.
pub fn a_size(p: u32, r: u32, n: u32, k: u32) -> Result<u64> {
    check_a(p, r, n, k)?;
    let total: u128 = (r..=k)
        .map(|i| binom(p as u64, i as u64) * binom((n - p) as u64, (k - i) as u64))
        .sum();
    u64::try_from(total).map_err(|_| Error::TooLarge(format!("|A({p},{r},{n},{k})|")))
}

/// Membership in `A(p, r)` for a raw mask.
#[inline]
pub fn in_a(mask: u64, p: u32, r: u32) -> bool {
    let head = if p == 0 { 0 } else { ground_mask(p) };
    (mask & head).count_ones() >= r
}

/// One candidate family of the conjectured value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub i: u32,
    pub p: u32,
    pub r: u32,
    pub size: u64,
}

/// The candidates `A(p + is, r + i)`, `0 <= i <= k - r`, for an instance.
pub fn candidates(pq: &ParamQuad) -> Vec<Candidate> {
    (0..=pq.k - pq.r)
        .map(|i| {
            let p = pq.p + i * pq.s;
            let r = pq.r + i;
            Candidate {
                i,
                p,
                r,
                size: a_size(p, r, pq.n, pq.k).expect("p + is <= q < n"),
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ConjectureValue {
    pub record: BoundRecord,
    /// Index `i` of the first largest candidate.
    pub argmax: u32,
    pub candidates: Vec<Candidate>,
}

impl ConjectureValue {
    pub fn value(&self) -> u64 {
        self.record.value
    }

    pub fn best(&self) -> &Candidate {
        &self.candidates[self.argmax as usize]
    }

    /// The maximizing family itself.
    pub fn family(&self, pq: &ParamQuad) -> Family {
        let c = self.best();
        a_family(c.p, c.r, pq.n, pq.k).expect("candidate parameters are valid")
    }
}

/// `max_i |A(p + is, r + i)|`. Every candidate is `U(s, q)`, so this is a
/// lower bound.
pub fn conjecture_value(pq: &ParamQuad) -> ConjectureValue {
    let cands = candidates(pq);
    let mut argmax = 0usize;
    for (idx, c) in cands.iter().enumerate() {
        if c.size > cands[argmax].size {
            argmax = idx;
        }
    }
    let best = &cands[argmax];
    let record = BoundRecord::new(
        pq,
        best.size,
        BoundKind::Lower,
        Provenance::ConstructionA,
        format!(
            "max over i of |A(p+is, r+i)|; argmax i={} gives A({},{})",
            best.i, best.p, best.r
        ),
    );
    ConjectureValue {
        record,
        argmax: argmax as u32,
        candidates: cands,
    }
}

/// Whether `mask` lies in `∪_i A(p + is, r + i)`, the region every shifted
/// `U(s, q)` family is confined to.
pub fn in_shifted_union(mask: u64, pq: &ParamQuad) -> bool {
    (0..=pq.k - pq.r).any(|i| in_a(mask, pq.p + i * pq.s, pq.r + i))
}

/// `Σ_i |A(p + is, r + i)|`, an upper bound via shifted containment.
pub fn shifted_union_upper(pq: &ParamQuad) -> BoundRecord {
    let total: u64 = candidates(pq).iter().map(|c| c.size).sum();
    BoundRecord::new(
        pq,
        total,
        BoundKind::Upper,
        Provenance::ShiftedUnionSum,
        "shifted families lie in the union of the A(p+is, r+i); sum of their sizes",
    )
}

/// `f(s, p, r) = s(s+1) · Σ_{j=0}^{r-1} s^{r-1-j} C(p, j) / C(p, r)`, exactly.
pub fn f_threshold(s: u32, p: u32, r: u32) -> Result<Ratio<u128>> {
    if r < 1 || r > p {
        return Err(Error::InvalidParameter(format!(
            "f(s={s}, p={p}, r={r}) needs 1 <= r <= p"
        )));
    }
    let s128 = s as u128;
    let sum: u128 = (0..r)
        .map(|j| s128.pow(r - 1 - j) * binom(p as u64, j as u64))
        .sum();
    Ok(Ratio::new(s128 * (s128 + 1) * sum, binom(p as u64, r as u64)))
}

/// The displayed length threshold `p + 1 + (s + f(s, p, r))(k - r)`.
pub fn union_theorem_threshold(k: u32, s: u32, p: u32, r: u32) -> Result<Ratio<u128>> {
    let f = f_threshold(s, p, r)?;
    let base = Ratio::from_integer((p + 1) as u128);
    Ok(base + (Ratio::from_integer(s as u128) + f) * Ratio::from_integer((k - r) as u128))
}

/// For `U(s+1, (k-r)(s+1) + p)`: when `n` clears the threshold, `m = |A(p, r)|`.
pub fn thmsunion_bound(n: u32, k: u32, s: u32, p: u32, r: u32) -> Result<Option<BoundRecord>> {
    if s < 1 || r < 1 || r > k || p < r || p > s + r - 1 {
        return Err(Error::InvalidParameter(format!(
            "union theorem needs 1 <= r <= k, r <= p <= s+r-1 (s={s}, p={p}, r={r}, k={k})"
        )));
    }
    let threshold = union_theorem_threshold(k, s, p, r)?;
    if Ratio::from_integer(n as u128) < threshold {
        return Ok(None);
    }
    let q = (k - r) * (s + 1) + p;
    let pq = match ParamQuad::new(n, k, s + 1, q) {
        Ok(pq) => pq,
        Err(_) => return Ok(None),
    };
    debug_assert_eq!((pq.p, pq.r), (p, r));
    let value = a_size(p, r, n, k)?;
    Ok(Some(BoundRecord::new(
        &pq,
        value,
        BoundKind::Exact,
        Provenance::TheoremUnion,
        format!("union theorem: n >= p+1+(s+f)(k-r) = {threshold} gives m = |A({p},{r})|"),
    )))
}

/// The star form: `U(s+1, k + s(k-1))` with `n > s(s+2)k` gives `m = C(n-1, k-1)`.
pub fn star_theorem_bound(n: u32, k: u32, s: u32) -> Option<BoundRecord> {
    if s < 1 || k < 1 {
        return None;
    }
    let q = k + s * (k - 1);
    let pq = ParamQuad::new(n, k, s + 1, q).ok()?;
    if (n as u64) <= (s as u64) * (s as u64 + 2) * k as u64 {
        return None;
    }
    Some(BoundRecord::new(
        &pq,
        binom(n as u64 - 1, k as u64 - 1) as u64,
        BoundKind::Exact,
        Provenance::TheoremStar,
        format!("star theorem: n > s(s+2)k = {} gives m = C(n-1, k-1)", s * (s + 2) * k),
    ))
}

/// Every theorem-derived record that applies to `pq`. The hierarchy lift
/// consults `lookup` for an exact value one step down.
pub fn special_case_bounds_with(
    pq: &ParamQuad,
    lookup: &dyn Fn(&ParamQuad) -> Option<u64>,
) -> Vec<BoundRecord> {
    let (n, k, s, q) = (pq.n, pq.k, pq.s, pq.q);
    let mut out = Vec::new();
    let a = |p: u32, r: u32| a_size(p, r, n, k).expect("valid A parameters");

    if q <= k + s - 2 {
        out.push(BoundRecord::new(
            pq,
            binom(q as u64, k as u64) as u64,
            BoundKind::Exact,
            Provenance::SmallQClaim,
            "small-q claim: m = C(q, k) for k <= q <= k+s-2",
        ));
    }

    if k == 2 && q > s {
        let r = q - s;
        if r >= 1 && r < s && n > s + r {
            let v = a(r, 1).max(a(s + r, 2));
            out.push(BoundRecord::new(
                pq,
                v,
                BoundKind::Exact,
                Provenance::TheoremK2,
                format!("k=2 theorem: m = max{{|A({r},1)|, |A({},2)|}}", s + r),
            ));
        }
    }

    if k >= 2 && q + 3 >= s + k {
        let t = q + 3 - s - k;
        if (2..=s).contains(&t) {
            let v = a(q, k).max(a(t + k - 3, k - 1));
            out.push(BoundRecord::new(
                pq,
                v,
                BoundKind::Exact,
                Provenance::TheoremSmallQ,
                format!(
                    "q = s+t+k-3 with t={t}: m = max{{|A({q},{k})|, |A({},{})|}}",
                    t + k - 3,
                    k - 1
                ),
            ));
        }
    }

    if k == 3 && q == 2 * s + 1 && n <= 3 * s && s >= 10 {
        out.push(BoundRecord::new(
            pq,
            a(2 * s + 1, 3),
            BoundKind::Exact,
            Provenance::TheoremF3,
            "k=3, q=2s+1, n <= 3s, s >= 10: m = C(2s+1, 3)",
        ));
    }

    if k == 3 && q > 2 * s {
        let t = q - 2 * s;
        let (n64, s64, t64) = (n as u64, s as u64, t as u64);
        if t < s && 5 * (s64 + t64) <= n64 && 3 * t64 * n64 <= (s64 + t64) * (s64 + t64) {
            out.push(BoundRecord::new(
                pq,
                a(s + t, 2),
                BoundKind::Exact,
                Provenance::TheoremF2,
                format!("k=3, q=2s+t, 5(s+t) <= n <= (s+t)^2/(3t): m = |A({},2)|", s + t),
            ));
        }
    }

    if k == 3 && s == 3 && q == 7 {
        let v = a(1, 1).max(a(4, 2)).max(a(7, 3));
        out.push(BoundRecord::new(
            pq,
            v,
            BoundKind::Exact,
            Provenance::TheoremK3S3Q7,
            "k=s=3, q=7: m = max{|A(1,1)|, |A(4,2)|, |A(7,3)|}, extremal families unique",
        ));
    }

    // Union theorem with property U(s, q), i.e. its parameter is s - 1.
    if let Ok(Some(rec)) = thmsunion_bound(n, k, s - 1, pq.p, pq.r) {
        out.push(rec);
    }
    if pq.p == 1 && pq.r == 1 {
        if let Some(rec) = star_theorem_bound(n, k, s - 1) {
            out.push(rec);
        }
    }

    // Hierarchy lift from (n-1, q-1) when that value equals |A(p-1, 1)|.
    if pq.r == 1 && pq.p >= 2 {
        if let Ok(below) = ParamQuad::new(n - 1, k, s, q - 1) {
            let pl = pq.p - 1;
            let expected = binom((n - 1) as u64, k as u64) - binom((n - 1 - pl) as u64, k as u64);
            if lookup(&below) == Some(expected as u64) {
                let v = binom(n as u64, k as u64) - binom((n - 1 - pl) as u64, k as u64);
                out.push(BoundRecord::new(
                    pq,
                    v as u64,
                    BoundKind::Exact,
                    Provenance::HierarchyLift,
                    format!(
                        "hierarchy lift from m({}, {k}, {s}, {}) = C(n-1,k) - C(n-1-{pl},k)",
                        n - 1,
                        q - 1
                    ),
                ));
            }
        }
    }

    out
}

/// [`special_case_bounds_with`] using the catalog's own exact values for the lift.
pub fn special_case_bounds(pq: &ParamQuad) -> Vec<BoundRecord> {
    special_case_bounds_with(pq, &catalog_exact)
}

fn catalog_exact(pq: &ParamQuad) -> Option<u64> {
    special_case_bounds(pq)
        .into_iter()
        .find(|r| r.kind == BoundKind::Exact)
        .map(|r| r.value)
}

/// Conjectured lower bound, containment upper bound and every applicable theorem.
pub fn all_bounds(pq: &ParamQuad) -> Vec<BoundRecord> {
    let mut v = vec![conjecture_value(pq).record, shifted_union_upper(pq)];
    v.extend(special_case_bounds(pq));
    v
}

/// Numeric comparison of `|A(s+p, 2)|` against `|A(p, 1)|` next to the rough
/// range `n < s²k/(4p)`. Reported only, nothing is asserted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpnessReport {
    pub two_level: u64,
    pub star_like: u64,
    pub two_level_larger: bool,
    pub in_rough_range: bool,
}

pub fn sharpness_report(n: u32, k: u32, s: u32, p: u32) -> Result<SharpnessReport> {
    let two_level = a_size(s + p, 2, n, k)?;
    let star_like = a_size(p, 1, n, k)?;
    Ok(SharpnessReport {
        two_level,
        star_like,
        two_level_larger: two_level > star_like,
        in_rough_range: 4 * (n as u64) * (p as u64) < (s as u64) * (s as u64) * (k as u64),
    })
}
