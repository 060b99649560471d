//! Campaign execution: one output row per instance (or per bound).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use super::cache::{ResultCache, SearchSummary};
use crate::catalog::{
    all_bounds, conjecture_value, decompose_q, in_shifted_union, BoundKind, BoundRecord,
    ParamQuad, Provenance,
};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::properties::{has_U, matching_number, max_union};
use crate::search::{
    enumerate_maximum_families, exact_m_bruteforce, exact_m_shifted_with, Checkpoint,
    SearchBudget, SearchOptions, SearchStatus,
};
use crate::shift::is_shifted;

/// A list of values given as `A..B` (inclusive), `A..=B`, `A,B,C` or `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeList(pub Vec<u32>);

impl FromStr for RangeList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::InvalidParameter(format!("bad range {s:?}: {what}"));
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad("not a number"));
        let s = s.trim();
        let mut out = Vec::new();
        for part in s.split(',') {
            if let Some((a, b)) = part.split_once("..") {
                let b = b.strip_prefix('=').unwrap_or(b);
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(bad("empty interval"));
                }
                out.extend(a..=b);
            } else {
                out.push(num(part)?);
            }
        }
        Ok(RangeList(out))
    }
}

impl fmt::Display for RangeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct Campaign {
    pub n: Vec<u32>,
    pub k: Vec<u32>,
    pub s: Vec<u32>,
    pub q: Vec<u32>,
    pub budget: SearchBudget,
    pub threads: usize,
    /// Drop invalid parameter combinations instead of reporting them.
    pub skip_invalid: bool,
    pub witness_dir: Option<PathBuf>,
    pub checkpoint_dir: Option<PathBuf>,
}

impl Campaign {
    pub fn new(n: Vec<u32>, k: Vec<u32>, s: Vec<u32>, q: Vec<u32>) -> Self {
        Campaign {
            n,
            k,
            s,
            q,
            budget: SearchBudget::unlimited(),
            threads: 1,
            skip_invalid: false,
            witness_dir: None,
            checkpoint_dir: None,
        }
    }

    /// Every combination in `n, k, s, q` order, with invalid ones as errors.
    pub fn quads(&self) -> Vec<std::result::Result<ParamQuad, Row>> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &k in &self.k {
                for &s in &self.s {
                    for &q in &self.q {
                        match ParamQuad::new(n, k, s, q) {
                            Ok(pq) => out.push(Ok(pq)),
                            Err(_) if self.skip_invalid => {}
                            Err(e) => out.push(Err(Row::error(n, k, s, q, &e))),
                        }
                    }
                }
            }
        }
        out
    }
}

/// One output line. The same rows back both CSV and JSON output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub n: u32,
    pub k: u32,
    pub s: u32,
    pub q: u32,
    pub p: Option<u32>,
    pub r: Option<u32>,
    pub value: Option<u64>,
    pub kind: Option<String>,
    pub provenance: Option<String>,
    pub status: String,
    pub nodes: Option<u64>,
    pub elapsed_ms: Option<u64>,
    pub citation: String,
    pub note: String,
}

impl Row {
    fn error(n: u32, k: u32, s: u32, q: u32, e: &Error) -> Self {
        Row {
            n,
            k,
            s,
            q,
            p: None,
            r: None,
            value: None,
            kind: None,
            provenance: None,
            status: "error".into(),
            nodes: None,
            elapsed_ms: None,
            citation: String::new(),
            note: e.to_string(),
        }
    }

    fn quad_error(pq: &ParamQuad, e: &Error) -> Self {
        let mut row = Row::error(pq.n, pq.k, pq.s, pq.q, e);
        row.p = Some(pq.p);
        row.r = Some(pq.r);
        row
    }

    fn bound(rec: &BoundRecord) -> Self {
        Row {
            n: rec.n,
            k: rec.k,
            s: rec.s,
            q: rec.q,
            p: Some(rec.p),
            r: Some(rec.r),
            value: Some(rec.value),
            kind: Some(rec.kind.as_str().into()),
            provenance: Some(rec.provenance.as_str().into()),
            status: "bound".into(),
            nodes: None,
            elapsed_ms: None,
            citation: rec.citation.clone(),
            note: String::new(),
        }
    }

    fn search(pq: &ParamQuad, s: &SearchSummary, cached: bool) -> Self {
        let kind = if s.status == SearchStatus::ProvedOptimal {
            BoundKind::Exact
        } else {
            BoundKind::Lower
        };
        Row {
            n: pq.n,
            k: pq.k,
            s: pq.s,
            q: pq.q,
            p: Some(pq.p),
            r: Some(pq.r),
            value: Some(s.value),
            kind: Some(kind.as_str().into()),
            provenance: Some(Provenance::Search.as_str().into()),
            status: s.status.as_str().into(),
            nodes: Some(if cached { 0 } else { s.nodes }),
            elapsed_ms: Some(if cached { 0 } else { s.elapsed_ms }),
            citation: SEARCH_CITATION.into(),
            note: if cached { "cached".into() } else { String::new() },
        }
    }
}

const SEARCH_CITATION: &str = "exhaustive branch and bound over shifted families";

/// Bound rows for every valid quad; invalid quads yield one error row each.
pub fn cmd_bounds(c: &Campaign, cache: &mut ResultCache) -> Vec<Row> {
    let mut rows = Vec::new();
    for item in c.quads() {
        match item {
            Ok(pq) => {
                for rec in all_bounds(&pq) {
                    cache.merge_record(&pq, &rec);
                    rows.push(Row::bound(&rec));
                }
            }
            Err(row) => rows.push(row),
        }
    }
    rows
}

fn file_stem(pq: &ParamQuad) -> String {
    format!("n{}_k{}_s{}_q{}", pq.n, pq.k, pq.s, pq.q)
}

fn write_family(dir: &Path, name: &str, fam: &Family) -> Result<String> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, fam.to_text())?;
    Ok(path.display().to_string())
}

fn family_of_lists(pq: &ParamQuad, lists: &[Vec<u32>]) -> Result<Family> {
    let refs: Vec<&[u32]> = lists.iter().map(Vec::as_slice).collect();
    Family::from_lists(pq.n, pq.k, &refs)
}

/// Exact value for one quad, served from the cache when already proved.
fn solve(c: &Campaign, cache: &mut ResultCache, pq: &ParamQuad) -> Result<(SearchSummary, bool)> {
    if let Some(s) = cache.proved(pq) {
        return Ok((s.clone(), true));
    }
    let ckpt_path = c
        .checkpoint_dir
        .as_ref()
        .map(|d| d.join(format!("checkpoint_{}.json", file_stem(pq))));
    let mut opts = SearchOptions {
        threads: c.threads,
        ..Default::default()
    };
    if let Some(p) = ckpt_path.as_ref().filter(|p| p.exists()) {
        opts.resume = Some(Checkpoint::from_json(&std::fs::read_to_string(p)?)?);
    }
    let out = exact_m_shifted_with(pq, c.budget, &opts)?;
    if let Some(p) = &ckpt_path {
        match &out.checkpoint {
            Some(cp) => {
                std::fs::create_dir_all(p.parent().unwrap_or(Path::new(".")))?;
                std::fs::write(p, cp.to_json()?)?;
            }
            None if p.exists() => std::fs::remove_file(p)?,
            None => {}
        }
    }
    let summary = SearchSummary::from_outcome(&out);
    let kind = if out.status == SearchStatus::ProvedOptimal {
        BoundKind::Exact
    } else {
        BoundKind::Lower
    };
    cache.merge_record(pq, &BoundRecord::new(pq, out.value, kind, Provenance::Search, SEARCH_CITATION));
    cache.merge_search(pq, &summary);
    Ok((summary, false))
}

fn solve_row(c: &Campaign, cache: &mut ResultCache, pq: &ParamQuad) -> (Row, Option<SearchSummary>) {
    match solve(c, cache, pq) {
        Ok((s, cached)) => {
            let mut row = Row::search(pq, &s, cached);
            if let Some(dir) = &c.witness_dir {
                let written = family_of_lists(pq, &s.witness)
                    .and_then(|f| write_family(dir, &format!("witness_{}.txt", file_stem(pq)), &f));
                let note = match written {
                    Ok(path) => path,
                    Err(e) => format!("witness not written: {e}"),
                };
                row.note = if row.note.is_empty() { note } else { format!("{}; {note}", row.note) };
            }
            (row, Some(s))
        }
        Err(e) => (Row::quad_error(pq, &e), None),
    }
}

/// Exact search for each quad, merging results into the cache.
pub fn cmd_exact(c: &Campaign, cache: &mut ResultCache) -> Vec<Row> {
    c.quads()
        .into_iter()
        .map(|item| match item {
            Ok(pq) => solve_row(c, cache, &pq).0,
            Err(row) => row,
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    /// Search optimum equals the constructed value.
    Confirmed,
    /// Search value differs from the constructed value.
    Refuted,
    /// Search stopped before proving optimality without beating the construction.
    Open,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Confirmed => "CONFIRMED",
            Verdict::Refuted => "REFUTED",
            Verdict::Open => "OPEN",
        }
    }
}

pub fn verdict(conjectured: u64, value: u64, status: SearchStatus) -> Verdict {
    if value > conjectured {
        Verdict::Refuted
    } else if status != SearchStatus::ProvedOptimal {
        Verdict::Open
    } else if value == conjectured {
        Verdict::Confirmed
    } else {
        Verdict::Refuted
    }
}

/// Compares exact values with the construction. The second component is
/// true when any quad is refuted.
pub fn cmd_verify(c: &Campaign, cache: &mut ResultCache) -> (Vec<Row>, bool) {
    cmd_verify_with(c, cache, &|pq| conjecture_value(pq).value())
}

/// [`cmd_verify`] against an arbitrary claimed value per quad.
pub fn cmd_verify_with(
    c: &Campaign,
    cache: &mut ResultCache,
    claimed: &dyn Fn(&ParamQuad) -> u64,
) -> (Vec<Row>, bool) {
    let mut rows = Vec::new();
    let mut refuted = false;
    for item in c.quads() {
        let pq = match item {
            Ok(pq) => pq,
            Err(row) => {
                rows.push(row);
                continue;
            }
        };
        let (mut row, summary) = solve_row(c, cache, &pq);
        if let Some(s) = summary {
            let conj = claimed(&pq);
            let v = verdict(conj, s.value, s.status);
            let mut note = format!("{} (construction {conj})", v.as_str());
            if v == Verdict::Refuted {
                refuted = true;
                note.push_str(&format!("; witness {:?}", s.witness));
            }
            if !row.note.is_empty() {
                note = format!("{note}; {}", row.note);
            }
            row.note = note;
        }
        rows.push(row);
    }
    (rows, refuted)
}

/// Runs the unrestricted brute-force oracle next to the shifted search.
/// The second component is true when any quad disagrees.
pub fn cmd_oracle(c: &Campaign) -> (Vec<Row>, bool) {
    let mut rows = Vec::new();
    let mut mismatch = false;
    for item in c.quads() {
        let pq = match item {
            Ok(pq) => pq,
            Err(row) => {
                rows.push(row);
                continue;
            }
        };
        let start = Instant::now();
        let res = exact_m_bruteforce(&pq).and_then(|b| {
            exact_m_shifted_with(&pq, SearchBudget::unlimited(), &SearchOptions::default())
                .map(|sh| (b, sh))
        });
        match res {
            Ok((b, sh)) => {
                let agree = b.value == sh.value;
                mismatch |= !agree;
                let summary = SearchSummary::from_outcome(&b);
                let mut row = Row::search(&pq, &summary, false);
                row.provenance = Some("bruteforce".into());
                row.citation = "exhaustive search over all families".into();
                row.elapsed_ms = Some(start.elapsed().as_millis() as u64);
                row.note = if agree {
                    format!("agrees with shifted search ({})", sh.value)
                } else {
                    format!("DISAGREES with shifted search ({})", sh.value)
                };
                rows.push(row);
            }
            Err(e) => rows.push(Row::quad_error(&pq, &e)),
        }
    }
    (rows, mismatch)
}

/// One row per maximum shifted family.
pub fn cmd_ties(c: &Campaign) -> Vec<Row> {
    let mut rows = Vec::new();
    for item in c.quads() {
        let pq = match item {
            Ok(pq) => pq,
            Err(row) => {
                rows.push(row);
                continue;
            }
        };
        let start = Instant::now();
        match enumerate_maximum_families(&pq, c.budget) {
            Ok(m) => {
                let total = m.families.len();
                for (i, fam) in m.families.iter().enumerate() {
                    let summary = SearchSummary {
                        value: m.value,
                        status: SearchStatus::ProvedOptimal,
                        nodes: m.nodes,
                        elapsed_ms: start.elapsed().as_millis() as u64,
                        witness: fam.to_lists(),
                        version: super::cache::WORKBENCH_VERSION.into(),
                    };
                    let mut row = Row::search(&pq, &summary, false);
                    row.note = format!("maximum family {} of {total}", i + 1);
                    if let Some(dir) = &c.witness_dir {
                        let name = format!("tie_{}_{}.txt", file_stem(&pq), i + 1);
                        match write_family(dir, &name, fam) {
                            Ok(path) => row.note.push_str(&format!("; {path}")),
                            Err(e) => row.note.push_str(&format!("; not written: {e}")),
                        }
                    }
                    rows.push(row);
                }
            }
            Err(e) => rows.push(Row::quad_error(&pq, &e)),
        }
    }
    rows
}

/// Properties of a user-supplied family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub n: u32,
    pub k: u32,
    pub size: usize,
    pub s: u32,
    pub q: u32,
    pub has_u: bool,
    pub max_union: u32,
    pub matching_number: usize,
    pub shifted: bool,
    /// `(p, r)` when `q` decomposes for this `k` and `s`.
    pub decomposition: Option<(u32, u32)>,
    /// Whether every member lies in `∪_i A(p + is, r + i)`.
    pub contained_in_union: Option<bool>,
}

impl fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ground      {}", self.n)?;
        writeln!(f, "k           {}", self.k)?;
        writeln!(f, "size        {}", self.size)?;
        writeln!(f, "U({},{})      {}", self.s, self.q, if self.has_u { "holds" } else { "fails" })?;
        writeln!(f, "max union   {}", self.max_union)?;
        writeln!(f, "matching    {}", self.matching_number)?;
        writeln!(f, "shifted     {}", if self.shifted { "yes" } else { "no" })?;
        match (self.decomposition, self.contained_in_union) {
            (Some((p, r)), Some(c)) => writeln!(
                f,
                "p={p} r={r}     {} the union of A(p+is, r+i)",
                if c { "contained in" } else { "not contained in" }
            ),
            _ => writeln!(f, "p, r        no decomposition"),
        }
    }
}

pub fn check_family(fam: &Family, s: u32, q: u32) -> Result<FamilyReport> {
    let decomposition = decompose_q(fam.k(), s, q).ok();
    let contained_in_union = decomposition.map(|(p, r)| {
        let pq = ParamQuad { n: fam.ground(), k: fam.k(), s, q, p, r };
        fam.masks().iter().all(|&m| in_shifted_union(m, &pq))
    });
    Ok(FamilyReport {
        n: fam.ground(),
        k: fam.k(),
        size: fam.len(),
        s,
        q,
        has_u: has_U(fam, s, q)?,
        max_union: max_union(fam, s)?,
        matching_number: matching_number(fam),
        shifted: is_shifted(fam),
        decomposition,
        contained_in_union,
    })
}

pub fn cmd_check_family(path: &Path, s: u32, q: u32) -> Result<FamilyReport> {
    let text = std::fs::read_to_string(path)?;
    let fam = Family::parse_text(&text)?;
    check_family(&fam, s, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("8..14".parse::<RangeList>().unwrap().0, (8..=14).collect::<Vec<_>>());
        assert_eq!("3..=5".parse::<RangeList>().unwrap().0, vec![3, 4, 5]);
        assert_eq!("7".parse::<RangeList>().unwrap().0, vec![7]);
        assert_eq!("1,4..5,9".parse::<RangeList>().unwrap().0, vec![1, 4, 5, 9]);
        assert!("5..3".parse::<RangeList>().is_err());
        assert!("x".parse::<RangeList>().is_err());
    }

    #[test]
    fn bounds_k3_s3_q7_rows() {
        let c = Campaign::new((8..=14).collect(), vec![3], vec![3], vec![7]);
        let rows = cmd_bounds(&c, &mut ResultCache::in_memory());
        let exact: Vec<(u32, u64)> = rows
            .iter()
            .filter(|r| r.kind.as_deref() == Some("exact"))
            .map(|r| (r.n, r.value.unwrap()))
            .collect();
        for (n, v) in [(8, 35), (9, 35), (10, 40), (11, 46), (12, 55)] {
            assert!(exact.contains(&(n, v)), "n={n}");
        }
        let ns: std::collections::BTreeSet<u32> = rows.iter().map(|r| r.n).collect();
        assert_eq!(ns.len(), 7);
    }

    #[test]
    fn bounds_small_q_and_bad_q() {
        let c = Campaign::new(vec![20], vec![3], vec![4], vec![5]);
        let rows = cmd_bounds(&c, &mut ResultCache::in_memory());
        assert!(rows.iter().any(|r| r.kind.as_deref() == Some("exact") && r.value == Some(10)));
        let c = Campaign::new(vec![20], vec![3], vec![3], vec![9]);
        let rows = cmd_bounds(&c, &mut ResultCache::in_memory());
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].status, "error");
        assert!(rows[0].note.contains("no decomposition"));
    }

    #[test]
    fn exact_then_cached() {
        let mut cache = ResultCache::in_memory();
        let c = Campaign::new(vec![8], vec![3], vec![3], vec![7]);
        let first = cmd_exact(&c, &mut cache);
        assert_eq!(first[0].value, Some(35));
        assert_eq!(first[0].status, "proved-optimal");
        let again = cmd_exact(&c, &mut cache);
        assert_eq!(again[0].value, Some(35));
        assert_eq!(again[0].nodes, Some(0));
        assert_eq!(again[0].note, "cached");
    }

    #[test]
    fn target_stop() {
        let mut c = Campaign::new(vec![8], vec![3], vec![3], vec![7]);
        c.budget = SearchBudget::unlimited().with_target(35);
        let rows = cmd_exact(&c, &mut ResultCache::in_memory());
        assert_eq!(rows[0].status, "target-reached");
        assert_eq!(rows[0].value, Some(35));
    }

    #[test]
    fn verdicts() {
        assert_eq!(verdict(35, 35, SearchStatus::ProvedOptimal), Verdict::Confirmed);
        assert_eq!(verdict(34, 35, SearchStatus::ProvedOptimal), Verdict::Refuted);
        assert_eq!(verdict(34, 35, SearchStatus::BudgetExhausted), Verdict::Refuted);
        assert_eq!(verdict(35, 35, SearchStatus::BudgetExhausted), Verdict::Open);
        assert_eq!(verdict(36, 35, SearchStatus::ProvedOptimal), Verdict::Refuted);
    }

    #[test]
    fn corrupted_claim_is_refuted() {
        let c = Campaign::new(vec![9], vec![3], vec![3], vec![7]);
        let (rows, refuted) =
            cmd_verify_with(&c, &mut ResultCache::in_memory(), &|pq| conjecture_value(pq).value() - 1);
        assert!(refuted);
        assert!(rows[0].note.starts_with("REFUTED"));
        assert!(rows[0].note.contains("witness"));
        let (_, refuted) = cmd_verify(&c, &mut ResultCache::in_memory());
        assert!(!refuted);
    }

    #[test]
    fn check_family_reports() {
        let f = crate::catalog::a_family(4, 2, 10, 3).unwrap();
        let rep = check_family(&f, 3, 7).unwrap();
        assert!(rep.has_u && rep.shifted);
        assert_eq!(rep.size, 40);
        assert_eq!(rep.contained_in_union, Some(true));
        let rep = check_family(&Family::complete(8, 3).unwrap(), 3, 7).unwrap();
        assert!(!rep.has_u);
    }
}
