//! Uniform families over a shared ground set, with the plain-text file format.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kset::{check_ground, elements, ground_mask, mask_of, KSet};

/// A duplicate-free k-uniform family on `[ground]`, stored sorted in colex order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    ground: u32,
    k: u32,
    members: Vec<u64>,
}

impl Family {
    pub fn empty(ground: u32, k: u32) -> Result<Self> {
        check_ground(ground)?;
        if k > ground {
            return Err(Error::InvalidParameter(format!("k={k} exceeds ground {ground}")));
        }
        Ok(Family {
            ground,
            k,
            members: Vec::new(),
        })
    }

    /// Builds a family from raw masks; duplicates are merged.
    pub fn from_masks<I: IntoIterator<Item = u64>>(ground: u32, k: u32, masks: I) -> Result<Self> {
        let mut f = Family::empty(ground, k)?;
        let gm = ground_mask(ground);
        for m in masks {
            if m & !gm != 0 {
                let elem = 64 - m.leading_zeros();
                return Err(Error::OutOfRange { elem, ground });
            }
            if m.count_ones() != k {
                return Err(Error::Mismatch(format!(
                    "member {:?} has {} elements, family is {k}-uniform",
                    elements(m).collect::<Vec<_>>(),
                    m.count_ones()
                )));
            }
            f.members.push(m);
        }
        f.members.sort_unstable();
        f.members.dedup();
        Ok(f)
    }

    pub fn from_sets<I: IntoIterator<Item = KSet>>(ground: u32, k: u32, sets: I) -> Result<Self> {
        let mut masks = Vec::new();
        for s in sets {
            if s.ground() != ground {
                return Err(Error::Mismatch(format!(
                    "member {s} has ground {}, family ground is {ground}",
                    s.ground()
                )));
            }
            masks.push(s.mask());
        }
        Family::from_masks(ground, k, masks)
    }

    /// Convenience constructor from element lists.
    pub fn from_lists(ground: u32, k: u32, lists: &[&[u32]]) -> Result<Self> {
        let sets = lists
            .iter()
            .map(|l| KSet::new(l, ground))
            .collect::<Result<Vec<_>>>()?;
        Family::from_sets(ground, k, sets)
    }

    /// All k-subsets of `[ground]`.
    pub fn complete(ground: u32, k: u32) -> Result<Self> {
        check_ground(ground)?;
        Family::from_masks(ground, k, crate::kset::all_ksets(ground, k))
    }

    #[inline]
    pub(crate) fn from_sorted_unchecked(ground: u32, k: u32, members: Vec<u64>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Family { ground, k, members }
    }

    #[inline]
    pub fn ground(&self) -> u32 {
        self.ground
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Member masks in colex order.
    #[inline]
    pub fn masks(&self) -> &[u64] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = KSet> + '_ {
        self.members.iter().map(move |&m| KSet::from_mask(m, self.ground))
    }

    #[inline]
    pub fn contains_mask(&self, m: u64) -> bool {
        self.members.binary_search(&m).is_ok()
    }

    pub fn contains(&self, s: &KSet) -> bool {
        s.ground() == self.ground && self.contains_mask(s.mask())
    }

    /// Union of all members.
    pub fn support(&self) -> u64 {
        self.members.iter().fold(0, |acc, m| acc | m)
    }

    pub fn to_lists(&self) -> Vec<Vec<u32>> {
        self.members.iter().map(|&m| elements(m).collect()).collect()
    }

    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.members.iter().all(|&m| other.contains_mask(m))
    }

    /// Same members viewed on a larger ground set.
    pub fn with_ground(&self, ground: u32) -> Result<Family> {
        check_ground(ground)?;
        Family::from_masks(ground, self.k, self.members.iter().copied())
    }

    /// The `(k-1)`-shadow: all `(k-1)`-subsets of members.
    pub fn shadow(&self) -> Result<Family> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("shadow of a 0-uniform family".into()));
        }
        let mut out = Vec::with_capacity(self.members.len() * self.k as usize);
        for &m in &self.members {
            let mut rest = m;
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                out.push(m & !low);
                rest &= rest - 1;
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(Family::from_sorted_unchecked(self.ground, self.k - 1, out))
    }

    /// `{F \ X : F ∈ G, F ∩ X = B}` on the original labels.
    pub fn link(&self, b: &[u32], x: &[u32]) -> Result<Family> {
        let bm = mask_of(b, self.ground)?;
        let xm = mask_of(x, self.ground)?;
        self.link_mask(bm, xm)
    }

    pub fn link_mask(&self, b: u64, x: u64) -> Result<Family> {
        if b & !x != 0 {
            return Err(Error::InvalidParameter("link: B is not a subset of X".into()));
        }
        let k = self.k - b.count_ones().min(self.k);
        let members = self
            .members
            .iter()
            .filter(|&&m| m & x == b)
            .map(|&m| m & !x)
            .collect::<Vec<_>>();
        let mut members = members;
        members.sort_unstable();
        members.dedup();
        Ok(Family::from_sorted_unchecked(self.ground, k, members))
    }

    /// Re-indexes onto `[ground - |removed|]`, mapping the surviving
    /// elements order-preservingly. Members must avoid `removed`.
    pub fn relabel_without(&self, removed: u64) -> Result<Family> {
        if self.members.iter().any(|m| m & removed != 0) {
            return Err(Error::InvalidParameter(
                "relabel: members meet the removed elements".into(),
            ));
        }
        let kept: Vec<u32> = (1..=self.ground)
            .filter(|e| removed >> (e - 1) & 1 == 0)
            .collect();
        let new_ground = kept.len() as u32;
        check_ground(new_ground)?;
        let masks = self.members.iter().map(|&m| {
            let mut out = 0u64;
            for (idx, &e) in kept.iter().enumerate() {
                if m >> (e - 1) & 1 == 1 {
                    out |= 1 << idx;
                }
            }
            out
        });
        Family::from_masks(new_ground, self.k, masks)
    }

    /// Renders the family in the text format.
    pub fn to_text(&self) -> String {
        let mut s = format!("ground={} k={}\n", self.ground, self.k);
        for m in &self.members {
            let line = elements(*m).map(|e| e.to_string()).collect::<Vec<_>>().join(",");
            s.push_str(&line);
            s.push('\n');
        }
        s
    }

    /// Parses the text format: a `ground=<n> k=<k>` header, then one set per
    /// line as ascending comma-separated integers. Blank lines and `#`
    /// comments are ignored.
    pub fn parse_text(text: &str) -> Result<Family> {
        let mut header: Option<(u32, u32)> = None;
        let mut masks = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: line_no, msg };
            match header {
                None => header = Some(parse_header(line).map_err(perr)?),
                Some((n, k)) => {
                    let elems = line
                        .split(',')
                        .map(|t| {
                            t.trim()
                                .parse::<u32>()
                                .map_err(|_| format!("bad integer {:?}", t.trim()))
                        })
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(perr)?;
                    let set = KSet::new(&elems, n).map_err(|e| perr(e.to_string()))?;
                    if set.k() != k {
                        return Err(perr(format!("expected {k} elements, found {}", set.k())));
                    }
                    masks.push(set.mask());
                }
            }
        }
        let (n, k) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header `ground=<n> k=<k>`".into(),
        })?;
        let before = masks.len();
        let fam = Family::from_masks(n, k, masks)?;
        if fam.len() != before {
            return Err(Error::Parse {
                line: 0,
                msg: "duplicate member".into(),
            });
        }
        Ok(fam)
    }
}

fn parse_header(line: &str) -> std::result::Result<(u32, u32), String> {
    let mut n = None;
    let mut k = None;
    for tok in line.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| format!("expected header `ground=<n> k=<k>`, got {line:?}"))?;
        let v: u32 = val.parse().map_err(|_| format!("bad header value {val:?}"))?;
        match key {
            "ground" => n = Some(v),
            "k" => k = Some(v),
            other => return Err(format!("unknown header key {other:?}")),
        }
    }
    match (n, k) {
        (Some(n), Some(k)) if (1..=64).contains(&n) && k <= n => Ok((n, k)),
        (Some(_), Some(_)) => Err("header values out of range".into()),
        _ => Err(format!("expected header `ground=<n> k=<k>`, got {line:?}")),
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::parse_text(s)
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family(n={}, k={}, ", self.ground, self.k)?;
        f.debug_list().entries(self.iter()).finish()?;
        write!(f, ")")
    }
}
