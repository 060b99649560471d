//! Persistent JSON cache of best-known results per instance.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::catalog::{BoundRecord, ParamQuad};
use crate::error::{Error, Result};
use crate::search::{SearchOutcome, SearchStatus};

pub const WORKBENCH_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Summary of one search run as stored in the cache.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub value: u64,
    pub status: SearchStatus,
    pub nodes: u64,
    pub elapsed_ms: u64,
    pub witness: Vec<Vec<u32>>,
    /// Workbench version that produced the result.
    pub version: String,
}

impl SearchSummary {
    pub fn from_outcome(o: &SearchOutcome) -> Self {
        SearchSummary {
            value: o.value,
            status: o.status,
            nodes: o.nodes,
            elapsed_ms: o.elapsed.as_millis() as u64,
            witness: o.witness.to_lists(),
            version: WORKBENCH_VERSION.to_string(),
        }
    }

    fn proved(&self) -> bool {
        self.status == SearchStatus::ProvedOptimal
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub lower: Option<BoundRecord>,
    pub upper: Option<BoundRecord>,
    pub search: Option<SearchSummary>,
}

impl CacheEntry {
    /// Merges a bound. Returns whether anything changed.
    pub fn merge_record(&mut self, rec: &BoundRecord) -> bool {
        let mut changed = false;
        if rec.kind.is_lower() && self.lower.as_ref().is_none_or(|l| rec.value > l.value) {
            self.lower = Some(rec.clone());
            changed = true;
        }
        if rec.kind.is_upper() && self.upper.as_ref().is_none_or(|u| rec.value < u.value) {
            self.upper = Some(rec.clone());
            changed = true;
        }
        changed
    }

    /// Merges a search result. A proved optimum is never replaced by an
    /// unproved one, and unproved results only replace lower values.
    pub fn merge_search(&mut self, s: &SearchSummary) -> bool {
        let replace = match &self.search {
            None => true,
            Some(old) if old.proved() => s.proved() && old.version != s.version,
            Some(old) => s.proved() || s.value > old.value,
        };
        if replace {
            self.search = Some(s.clone());
        }
        replace
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct CacheFile {
    version: String,
    entries: BTreeMap<String, CacheEntry>,
}

/// The cache file together with an exclusive advisory lock on `<path>.lock`.
#[derive(Debug)]
pub struct ResultCache {
    path: Option<PathBuf>,
    data: CacheFile,
    _lock: Option<File>,
    dirty: bool,
}

fn key_of(pq: &ParamQuad) -> String {
    format!("{},{},{},{}", pq.n, pq.k, pq.s, pq.q)
}

impl ResultCache {
    /// A cache that is never written to disk.
    pub fn in_memory() -> Self {
        ResultCache {
            path: None,
            data: CacheFile {
                version: WORKBENCH_VERSION.to_string(),
                entries: BTreeMap::new(),
            },
            _lock: None,
            dirty: false,
        }
    }

    /// Opens (or creates) the cache at `path`, failing if another process
    /// holds its lock.
    pub fn open(path: &Path) -> Result<Self> {
        let mut lock_path = path.as_os_str().to_owned();
        lock_path.push(".lock");
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(PathBuf::from(lock_path))?;
        lock.try_lock().map_err(|e| {
            Error::Io(format!("cache {} is locked by another campaign: {e}", path.display()))
        })?;
        let data = if path.exists() {
            let text = std::fs::read_to_string(path)?;
            let data: CacheFile = serde_json::from_str(&text)?;
            if data.version != WORKBENCH_VERSION {
                eprintln!(
                    "warning: cache {} was written by version {} (this is {}); cached exact values will be recomputed",
                    path.display(),
                    data.version,
                    WORKBENCH_VERSION
                );
            }
            data
        } else {
            CacheFile {
                version: WORKBENCH_VERSION.to_string(),
                entries: BTreeMap::new(),
            }
        };
        Ok(ResultCache {
            path: Some(path.to_path_buf()),
            data,
            _lock: Some(lock),
            dirty: false,
        })
    }

    pub fn entry(&self, pq: &ParamQuad) -> Option<&CacheEntry> {
        self.data.entries.get(&key_of(pq))
    }

    pub fn len(&self) -> usize {
        self.data.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.entries.is_empty()
    }

    /// A proved optimum from this workbench version, if cached.
    pub fn proved(&self, pq: &ParamQuad) -> Option<&SearchSummary> {
        self.entry(pq)?
            .search
            .as_ref()
            .filter(|s| s.proved() && s.version == WORKBENCH_VERSION)
    }

    pub fn merge_record(&mut self, pq: &ParamQuad, rec: &BoundRecord) {
        let e = self.data.entries.entry(key_of(pq)).or_default();
        self.dirty |= e.merge_record(rec);
    }

    pub fn merge_search(&mut self, pq: &ParamQuad, s: &SearchSummary) {
        let e = self.data.entries.entry(key_of(pq)).or_default();
        self.dirty |= e.merge_search(s);
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.data)?)
    }

    /// Writes the cache if it changed. The file is replaced atomically.
    pub fn save(&mut self) -> Result<()> {
        let Some(path) = &self.path else { return Ok(()) };
        if !self.dirty && path.exists() {
            return Ok(());
        }
        self.data.version = WORKBENCH_VERSION.to_string();
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        std::fs::write(&tmp, self.to_json()?)?;
        std::fs::rename(&tmp, path)?;
        self.dirty = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{BoundKind, Provenance};

    fn rec(pq: &ParamQuad, v: u64, kind: BoundKind) -> BoundRecord {
        BoundRecord::new(pq, v, kind, Provenance::Search, "test")
    }

    fn summary(v: u64, status: SearchStatus) -> SearchSummary {
        SearchSummary {
            value: v,
            status,
            nodes: 1,
            elapsed_ms: 0,
            witness: vec![],
            version: WORKBENCH_VERSION.into(),
        }
    }

    #[test]
    fn merge_never_degrades() {
        let pq = ParamQuad::new(10, 3, 3, 7).unwrap();
        let mut e = CacheEntry::default();
        assert!(e.merge_record(&rec(&pq, 35, BoundKind::Lower)));
        assert!(!e.merge_record(&rec(&pq, 30, BoundKind::Lower)));
        assert!(e.merge_record(&rec(&pq, 40, BoundKind::Lower)));
        assert!(e.merge_record(&rec(&pq, 65, BoundKind::Upper)));
        assert!(!e.merge_record(&rec(&pq, 70, BoundKind::Upper)));
        assert!(e.merge_record(&rec(&pq, 40, BoundKind::Exact)));
        assert_eq!(e.lower.as_ref().unwrap().value, 40);
        assert_eq!(e.upper.as_ref().unwrap().value, 40);
        assert!(!e.merge_record(&rec(&pq, 40, BoundKind::Exact)));

        assert!(e.merge_search(&summary(38, SearchStatus::BudgetExhausted)));
        assert!(!e.merge_search(&summary(37, SearchStatus::BudgetExhausted)));
        assert!(e.merge_search(&summary(40, SearchStatus::ProvedOptimal)));
        assert!(!e.merge_search(&summary(39, SearchStatus::BudgetExhausted)));
        assert!(!e.merge_search(&summary(40, SearchStatus::ProvedOptimal)));
        assert_eq!(e.search.as_ref().unwrap().value, 40);
    }

    #[test]
    fn roundtrip_and_lock() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        let pq = ParamQuad::new(8, 3, 3, 7).unwrap();
        {
            let mut c = ResultCache::open(&path).unwrap();
            assert!(ResultCache::open(&path).is_err());
            c.merge_search(&pq, &summary(35, SearchStatus::ProvedOptimal));
            c.save().unwrap();
        }
        let c = ResultCache::open(&path).unwrap();
        assert_eq!(c.proved(&pq).unwrap().value, 35);
    }

    #[test]
    fn stale_version_not_served() {
        let mut c = ResultCache::in_memory();
        let pq = ParamQuad::new(8, 3, 3, 7).unwrap();
        let mut s = summary(35, SearchStatus::ProvedOptimal);
        s.version = "0.0.0-old".into();
        c.merge_search(&pq, &s);
        assert!(c.proved(&pq).is_none());
        c.merge_search(&pq, &summary(35, SearchStatus::ProvedOptimal));
        assert!(c.proved(&pq).is_some());
    }
}
