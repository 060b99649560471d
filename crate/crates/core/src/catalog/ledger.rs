//! Provenance-tagged bound records and the per-instance ledger.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::quad::ParamQuad;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
    Exact,
}

impl BoundKind {
    pub fn is_lower(self) -> bool {
        matches!(self, BoundKind::Lower | BoundKind::Exact)
    }

    pub fn is_upper(self) -> bool {
        matches!(self, BoundKind::Upper | BoundKind::Exact)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
            BoundKind::Exact => "exact",
        }
    }
}

/// Where a bound comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Largest `A(p + is, r + i)` candidate.
    ConstructionA,
    SmallQClaim,
    TheoremK2,
    TheoremSmallQ,
    TheoremUnion,
    TheoremStar,
    TheoremF3,
    TheoremF2,
    TheoremK3S3Q7,
    HierarchyLift,
    ShiftedUnionSum,
    Search,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::ConstructionA => "construction_a",
            Provenance::SmallQClaim => "small_q_claim",
            Provenance::TheoremK2 => "theorem_k2",
            Provenance::TheoremSmallQ => "theorem_small_q",
            Provenance::TheoremUnion => "theorem_union",
            Provenance::TheoremStar => "theorem_star",
            Provenance::TheoremF3 => "theorem_f3",
            Provenance::TheoremF2 => "theorem_f2",
            Provenance::TheoremK3S3Q7 => "theorem_k3_s3_q7",
            Provenance::HierarchyLift => "hierarchy_lift",
            Provenance::ShiftedUnionSum => "shifted_union_sum",
            Provenance::Search => "search",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value for `m(n, k, s, q)` with its kind and source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub n: u32,
    pub k: u32,
    pub s: u32,
    pub q: u32,
    pub p: u32,
    pub r: u32,
    pub value: u64,
    pub kind: BoundKind,
    pub provenance: Provenance,
    pub citation: String,
}

impl BoundRecord {
    pub fn new(
        pq: &ParamQuad,
        value: u64,
        kind: BoundKind,
        provenance: Provenance,
        citation: impl Into<String>,
    ) -> Self {
        BoundRecord {
            n: pq.n,
            k: pq.k,
            s: pq.s,
            q: pq.q,
            p: pq.p,
            r: pq.r,
            value,
            kind,
            provenance,
            citation: citation.into(),
        }
    }

    pub fn key(&self) -> (u32, u32, u32, u32) {
        (self.n, self.k, self.s, self.q)
    }
}

/// Records grouped per instance. Adding a record that contradicts an
/// existing one (a lower bound above an upper bound, or two different exact
/// values) is a hard error naming both sources.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Ledger {
    entries: BTreeMap<(u32, u32, u32, u32), Vec<BoundRecord>>,
}

impl Ledger {
    pub fn new() -> Self {
        Ledger::default()
    }

    pub fn add(&mut self, rec: BoundRecord) -> Result<()> {
        let list = self.entries.entry(rec.key()).or_default();
        for other in list.iter() {
            check_pair(other, &rec)?;
            check_pair(&rec, other)?;
        }
        if !list.contains(&rec) {
            list.push(rec);
        }
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = BoundRecord>>(&mut self, recs: I) -> Result<()> {
        for r in recs {
            self.add(r)?;
        }
        Ok(())
    }

    pub fn records(&self, key: (u32, u32, u32, u32)) -> &[BoundRecord] {
        self.entries.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = &BoundRecord> {
        self.entries.values().flatten()
    }

    pub fn best_lower(&self, key: (u32, u32, u32, u32)) -> Option<&BoundRecord> {
        self.records(key)
            .iter()
            .filter(|r| r.kind.is_lower())
            .max_by_key(|r| r.value)
    }

    pub fn best_upper(&self, key: (u32, u32, u32, u32)) -> Option<&BoundRecord> {
        self.records(key)
            .iter()
            .filter(|r| r.kind.is_upper())
            .min_by_key(|r| r.value)
    }

    pub fn exact(&self, key: (u32, u32, u32, u32)) -> Option<u64> {
        self.records(key)
            .iter()
            .find(|r| r.kind == BoundKind::Exact)
            .map(|r| r.value)
    }

    pub fn to_json(&self) -> Result<String> {
        let all: Vec<&BoundRecord> = self.iter().collect();
        Ok(serde_json::to_string_pretty(&all)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "k", "s", "q", "p", "r", "value", "kind", "provenance", "citation"])
            .map_err(|e| Error::Format(e.to_string()))?;
        for r in self.iter() {
            w.write_record([
                r.n.to_string(),
                r.k.to_string(),
                r.s.to_string(),
                r.q.to_string(),
                r.p.to_string(),
                r.r.to_string(),
                r.value.to_string(),
                r.kind.as_str().to_string(),
                r.provenance.as_str().to_string(),
                r.citation.clone(),
            ])
            .map_err(|e| Error::Format(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
    }
}

fn check_pair(lo: &BoundRecord, hi: &BoundRecord) -> Result<()> {
    if lo.kind.is_lower() && hi.kind.is_upper() && lo.value > hi.value {
        return Err(Error::InconsistentBounds {
            quad: format!("(n={}, k={}, s={}, q={})", lo.n, lo.k, lo.s, lo.q),
            lower: lo.value as u128,
            lower_source: format!("{} {}", lo.provenance, lo.kind.as_str()),
            upper: hi.value as u128,
            upper_source: format!("{} {}", hi.provenance, hi.kind.as_str()),
        });
    }
    Ok(())
}
