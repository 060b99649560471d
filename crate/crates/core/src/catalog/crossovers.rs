//! Sizes and pairwise differences of the three k = 3 candidates
//! `F1 = A(t,1)`, `F2 = A(s+t,2)`, `F3 = A(2s+t,3)` for `U(s, 2s+t)`.

use super::a_family;
use crate::binom::binom;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossoverReport {
    pub n: u32,
    pub s: u32,
    pub t: u32,
    /// `|F1|, |F2|, |F3|` from the explicit families.
    pub sizes: [u64; 3],
    /// `|F1\F2|, |F2\F1|, |F2\F3|, |F3\F2|` by closed form.
    pub diffs_formula: [u64; 4],
    /// The same four differences counted on the explicit families.
    pub diffs_constructed: [u64; 4],
    /// 1-based indices of the largest families.
    pub maximal: Vec<usize>,
    pub f3_at_least_f2: bool,
    /// The closed-form criterion `3(s+1)(n-3s) <= (s-1)(s-2)`, meaningful for t = 1.
    pub f3_criterion: Option<bool>,
}

impl CrossoverReport {
    pub fn formulas_agree(&self) -> bool {
        self.diffs_formula == self.diffs_constructed
    }
}

fn c(n: u64, k: u64) -> u64 {
    binom(n, k) as u64
}

pub fn k3_crossovers(n: u32, s: u32, t: u32) -> Result<CrossoverReport> {
    if t < 1 || s <= t {
        return Err(Error::InvalidParameter(format!("need s > t >= 1 (s={s}, t={t})")));
    }
    if n <= 2 * s + t {
        return Err(Error::InvalidParameter(format!(
            "n={n} too small: families need n > 2s+t = {}",
            2 * s + t
        )));
    }
    let f1 = a_family(t, 1, n, 3)?;
    let f2 = a_family(s + t, 2, n, 3)?;
    let f3 = a_family(2 * s + t, 3, n, 3)?;
    let minus = |a: &crate::family::Family, b: &crate::family::Family| {
        a.masks().iter().filter(|&&m| !b.contains_mask(m)).count() as u64
    };
    let (n64, s64, t64) = (n as u64, s as u64, t as u64);
    let diffs_formula = [
        t64 * c(n64 - s64 - t64, 2),
        c(s64, 2) * (n64 - s64 - t64) + c(s64, 3),
        c(s64 + t64, 2) * (n64 - 2 * s64 - t64),
        c(s64, 3) + (s64 + t64) * c(s64, 2),
    ];
    let diffs_constructed = [
        minus(&f1, &f2),
        minus(&f2, &f1),
        minus(&f2, &f3),
        minus(&f3, &f2),
    ];
    let sizes = [f1.len() as u64, f2.len() as u64, f3.len() as u64];
    let top = *sizes.iter().max().unwrap();
    let maximal = (0..3).filter(|&i| sizes[i] == top).map(|i| i + 1).collect();
    let f3_criterion = (t == 1).then(|| {
        let lhs = 3 * (s as i64 + 1) * (n as i64 - 3 * s as i64);
        let rhs = (s as i64 - 1) * (s as i64 - 2);
        lhs <= rhs
    });
    Ok(CrossoverReport {
        n,
        s,
        t,
        sizes,
        diffs_formula,
        diffs_constructed,
        maximal,
        f3_at_least_f2: sizes[2] >= sizes[1],
        f3_criterion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_n12() {
        let r = k3_crossovers(12, 3, 1).unwrap();
        assert_eq!(r.sizes, [55, 52, 35]);
        assert_eq!(r.maximal, vec![1]);
        assert!(r.formulas_agree());
    }

    #[test]
    fn degenerate_guard() {
        assert!(k3_crossovers(4, 3, 1).is_err());
        assert!(k3_crossovers(7, 3, 1).is_err());
        assert!(k3_crossovers(20, 2, 2).is_err());
        assert!(k3_crossovers(20, 3, 0).is_err());
    }

    #[test]
    fn crossover_criterion_and_formulas() {
        for s in 2..=8 {
            for t in 1..=2 {
                if s <= t {
                    continue;
                }
                for n in 2 * s + t + 1..=30 {
                    let r = k3_crossovers(n, s, t).unwrap();
                    assert!(r.formulas_agree(), "n={n} s={s} t={t}: {r:?}");
                    if let Some(crit) = r.f3_criterion {
                        assert_eq!(crit, r.f3_at_least_f2, "n={n} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn f3_criterion_wide_sweep() {
        for s in 2..=12 {
            for n in 2 * s + 2..=40 {
                let r = k3_crossovers(n, s, 1).unwrap();
                assert_eq!(r.f3_criterion, Some(r.f3_at_least_f2), "n={n} s={s}");
                assert!(r.formulas_agree());
            }
        }
    }
}
