//! Exact computation of `m(n, k, s, q)`.
//!
//! [`exact_m_shifted`] searches down-sets of the shifting order inside the
//! containment region `∪_i A(p + is, r + i)`; shifting preserves `U(s, q)`,
//! so its optimum is `m(n, k, s, q)`. [`exact_m_bruteforce`] searches all
//! families of tiny instances without any reduction and serves as an oracle.

mod bits;
mod brute;
mod shifted;
mod universe;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::family::Family;

pub use brute::exact_m_bruteforce;
pub use shifted::{
    enumerate_maximum_families, exact_m_shifted, exact_m_shifted_with, MaximumFamilies,
    SearchOptions,
};
pub use universe::Universe;

/// Limits for one search run. `None` means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
    /// Stop as soon as a family of at least this size is known.
    pub target: Option<u64>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget::default()
    }

    pub fn nodes(n: u64) -> Self {
        SearchBudget {
            max_nodes: Some(n),
            ..Default::default()
        }
    }

    pub fn with_target(mut self, target: u64) -> Self {
        self.target = Some(target);
        self
    }

    pub fn with_time(mut self, t: Duration) -> Self {
        self.max_time = Some(t);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    ProvedOptimal,
    /// Stopped by a node or time limit; `value` is a certified lower bound.
    BudgetExhausted,
    /// Stopped once the target size was reached; `value` is a lower bound.
    TargetReached,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::ProvedOptimal => "proved-optimal",
            SearchStatus::BudgetExhausted => "budget-exhausted",
            SearchStatus::TargetReached => "target-reached",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub value: u64,
    pub witness: Family,
    pub nodes: u64,
    pub elapsed: Duration,
    pub status: SearchStatus,
    /// Resume point when a single-threaded run stops on its budget.
    pub checkpoint: Option<Checkpoint>,
}

/// Resumable state of an interrupted single-threaded search.
///
/// `decided_prefix` has one character per candidate (colex order) decided on
/// the path to the interrupted node: `1` included, `0` excluded. Subtrees that
/// precede this path in search order are complete.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u32,
    pub k: u32,
    pub s: u32,
    pub q: u32,
    pub restricted: bool,
    pub universe_size: usize,
    pub decided_prefix: String,
    pub best_value: u64,
    pub best_witness: Vec<Vec<u32>>,
    pub nodes: u64,
}

impl Checkpoint {
    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
