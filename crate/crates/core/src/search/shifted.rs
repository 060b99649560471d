//! Branch and bound over shifted families.
//!
//! Candidates are visited in colex order, a linear extension of `≺_s`, so
//! every predecessor of a candidate is decided before it. The `alive` bitset
//! holds candidates that may still be included: excluding a candidate kills
//! its up-set, and including one kills every later candidate whose union with
//! some `s - 1` included members would exceed `q` (again with its up-set).
//! A candidate reached while alive therefore has all its predecessors
//! included, and the included sets always form a shifted `U(s, q)` family.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use super::bits::Bits;
use super::universe::Universe;
use super::{Checkpoint, SearchBudget, SearchOutcome, SearchStatus};
use crate::catalog::{conjecture_value, ParamQuad};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::kset::elements;
use crate::profile::UnionProfile;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Restrict candidates to the containment region `∪_i A(p + is, r + i)`.
    pub restrict_universe: bool,
    /// Start from the conjectured construction as the incumbent.
    pub seed: bool,
    /// Worker threads; 1 gives reproducible node counts and checkpoints.
    pub threads: usize,
    pub resume: Option<Checkpoint>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            restrict_universe: true,
            seed: true,
            threads: 1,
            resume: None,
        }
    }
}

/// All shifted `U(s, q)` families of maximum size.
#[derive(Clone, Debug)]
pub struct MaximumFamilies {
    pub value: u64,
    pub families: Vec<Family>,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stop {
    Budget,
    Target,
}

struct Shared {
    best: AtomicU64,
    nodes: AtomicU64,
    stop: AtomicBool,
    target_hit: AtomicBool,
    witness: Mutex<Vec<u64>>,
}

struct Task {
    index: usize,
    alive: Bits,
    included: Vec<usize>,
    branch_depth: usize,
}

struct Searcher<'a> {
    uni: &'a Universe,
    q: u32,
    k: u32,
    profile: UnionProfile,
    included: Vec<usize>,
    best: u64,
    best_witness: Vec<u64>,
    nodes: u64,
    flushed_nodes: u64,
    budget: SearchBudget,
    start: Instant,
    stopped: Option<Stop>,
    stop_point: Option<(usize, Vec<usize>)>,
    exclude_first: bool,
    ties: Option<Vec<Vec<u64>>>,
    tops: Vec<u64>,
    shared: Option<&'a Shared>,
    split: Option<(usize, Vec<Task>)>,
}

impl<'a> Searcher<'a> {
    fn new(uni: &'a Universe, pq: &ParamQuad, budget: SearchBudget, start: Instant) -> Self {
        Searcher {
            uni,
            q: pq.q,
            k: pq.k,
            profile: UnionProfile::new((pq.s - 1) as usize),
            included: Vec::new(),
            best: 0,
            best_witness: Vec::new(),
            nodes: 0,
            flushed_nodes: 0,
            budget,
            start,
            stopped: None,
            stop_point: None,
            exclude_first: true,
            ties: None,
            tops: Vec::new(),
            shared: None,
            split: None,
        }
    }

    #[inline]
    fn current_best(&self) -> u64 {
        match self.shared {
            Some(sh) => self.best.max(sh.best.load(Ordering::Relaxed)),
            None => self.best,
        }
    }

    fn total_nodes(&mut self) -> u64 {
        match self.shared {
            Some(sh) => {
                let delta = self.nodes - self.flushed_nodes;
                self.flushed_nodes = self.nodes;
                sh.nodes.fetch_add(delta, Ordering::Relaxed) + delta
            }
            None => self.nodes,
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if let Some(sh) = self.shared {
            if sh.stop.load(Ordering::Relaxed) {
                return true;
            }
        }
        let check_now = self.nodes & 0x3ff == 0;
        if let Some(max) = self.budget.max_nodes {
            let total = if self.shared.is_some() {
                if !check_now {
                    return false;
                }
                self.total_nodes()
            } else {
                self.nodes
            };
            if total > max {
                return true;
            }
        }
        if check_now {
            if let Some(t) = self.budget.max_time {
                if self.start.elapsed() >= t {
                    return true;
                }
            }
        }
        false
    }

    fn halt(&mut self, why: Stop, index: usize) {
        self.stopped = Some(why);
        if why == Stop::Budget && self.stop_point.is_none() {
            self.stop_point = Some((index, self.included.clone()));
        }
        if let Some(sh) = self.shared {
            sh.stop.store(true, Ordering::Relaxed);
            if why == Stop::Target {
                sh.target_hit.store(true, Ordering::Relaxed);
            }
        }
    }

    fn record_improvement(&mut self) {
        let size = self.included.len() as u64;
        if size <= self.current_best() {
            return;
        }
        self.best = size;
        let fam: Vec<u64> = self.included.iter().map(|&i| self.uni.masks[i]).collect();
        match self.shared {
            Some(sh) => {
                let mut w = sh.witness.lock().expect("witness lock");
                if sh.best.fetch_max(size, Ordering::Relaxed) < size {
                    *w = fam;
                }
            }
            None => self.best_witness = fam,
        }
        if let Some(t) = self.budget.target {
            if size >= t {
                self.halt(Stop::Target, 0);
            }
        }
    }

    fn dfs(&mut self, i: usize, alive: Bits, branch_depth: usize, guide: Option<&[bool]>) {
        if self.stopped.is_some() {
            return;
        }
        self.nodes += 1;
        if self.out_of_budget() {
            self.halt(Stop::Budget, i);
            return;
        }
        let size = self.included.len();
        let bound = (size + alive.count_and(&self.uni.suffix[i])) as u64;
        let best = self.current_best();
        let pruned = if self.ties.is_some() { bound < best } else { bound <= best };
        if pruned {
            return;
        }
        let Some(j) = alive.next_from(i) else {
            if let Some(ties) = self.ties.as_mut() {
                let size = size as u64;
                if size > self.best {
                    self.best = size;
                    ties.clear();
                }
                if size == self.best {
                    ties.push(self.included.iter().map(|&x| self.uni.masks[x]).collect());
                }
            }
            return;
        };
        if let Some((depth, tasks)) = self.split.as_mut() {
            if branch_depth == *depth {
                tasks.push(Task {
                    index: j,
                    alive,
                    included: self.included.clone(),
                    branch_depth,
                });
                return;
            }
        }
        let order = if self.exclude_first { [false, true] } else { [true, false] };
        match guide.filter(|g| j < g.len()) {
            Some(g) => {
                let b = g[j];
                self.branch(j, alive, b, branch_depth, Some(g));
                if b == order[0] {
                    self.branch(j, alive, order[1], branch_depth, None);
                }
            }
            None => {
                for b in order {
                    self.branch(j, alive, b, branch_depth, None);
                }
            }
        }
    }

    fn branch(&mut self, j: usize, alive: Bits, include: bool, bd: usize, guide: Option<&[bool]>) {
        if self.stopped.is_some() {
            return;
        }
        let uni = self.uni;
        if !include {
            let mut a = alive;
            a.and_not_assign(&uni.upset[j]);
            self.dfs(j + 1, a, bd + 1, guide);
            return;
        }
        let f = uni.masks[j];
        let mark = self.profile.mark();
        let mut tops = std::mem::take(&mut self.tops);
        tops.clear();
        self.profile.insert_scoped(f, |m| tops.push(m));
        let mut a = alive;
        let slack = self.q - self.k;
        for &m in &tops {
            if m.count_ones() <= slack {
                continue;
            }
            let later = a.and(&uni.suffix[j + 1]);
            for g in later.iter_from(j + 1) {
                if a.get(g) && (uni.masks[g] | m).count_ones() > self.q {
                    a.and_not_assign(&uni.upset[g]);
                }
            }
        }
        self.tops = tops;
        self.included.push(j);
        if self.ties.is_none() {
            self.record_improvement();
        }
        self.dfs(j + 1, a, bd + 1, guide);
        self.included.pop();
        self.profile.rollback(&mark);
    }

    fn load_included(&mut self, included: &[usize]) {
        for &x in included {
            self.profile.insert_scoped(self.uni.masks[x], |_| {});
            self.included.push(x);
        }
    }
}

fn full_alive(uni: &Universe) -> Bits {
    uni.suffix[0]
}

fn family_of(pq: &ParamQuad, masks: Vec<u64>) -> Family {
    Family::from_masks(pq.n, pq.k, masks).expect("search families are valid")
}

fn checkpoint_of(pq: &ParamQuad, uni: &Universe, s: &Searcher<'_>, best: u64, witness: &[u64]) -> Option<Checkpoint> {
    let (index, included) = s.stop_point.as_ref()?;
    let mut bits = vec![b'0'; *index];
    for &x in included {
        if x < *index {
            bits[x] = b'1';
        }
    }
    Some(Checkpoint {
        n: pq.n,
        k: pq.k,
        s: pq.s,
        q: pq.q,
        restricted: uni.restricted,
        universe_size: uni.len(),
        decided_prefix: String::from_utf8(bits).expect("ascii"),
        best_value: best,
        best_witness: witness.iter().map(|&m| elements(m).collect()).collect(),
        nodes: s.nodes,
    })
}

/// `m(n, k, s, q)` by search over shifted families with default options.
pub fn exact_m_shifted(pq: &ParamQuad, budget: SearchBudget) -> Result<SearchOutcome> {
    exact_m_shifted_with(pq, budget, &SearchOptions::default())
}

pub fn exact_m_shifted_with(
    pq: &ParamQuad,
    budget: SearchBudget,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    let start = Instant::now();
    let uni = Universe::new(pq, opts.restrict_universe)?;

    let (mut best, mut witness) = if opts.seed {
        let cv = conjecture_value(pq);
        (cv.value(), cv.family(pq).masks().to_vec())
    } else {
        (0, Vec::new())
    };
    let mut guide: Option<Vec<bool>> = None;
    let mut base_nodes = 0;
    if let Some(cp) = &opts.resume {
        if (cp.n, cp.k, cp.s, cp.q) != (pq.n, pq.k, pq.s, pq.q)
            || cp.restricted != uni.restricted
            || cp.universe_size != uni.len()
        {
            return Err(Error::InvalidParameter(
                "checkpoint does not match this instance".into(),
            ));
        }
        if cp.decided_prefix.len() > uni.len() || cp.decided_prefix.bytes().any(|b| b != b'0' && b != b'1') {
            return Err(Error::Format("malformed decided_prefix".into()));
        }
        if cp.best_value > best {
            let fam = Family::from_masks(
                pq.n,
                pq.k,
                cp.best_witness
                    .iter()
                    .map(|l| crate::kset::mask_of(l, pq.n))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            if fam.len() as u64 != cp.best_value {
                return Err(Error::Format("checkpoint witness size mismatch".into()));
            }
            best = cp.best_value;
            witness = fam.masks().to_vec();
        }
        guide = Some(cp.decided_prefix.bytes().map(|b| b == b'1').collect());
        base_nodes = cp.nodes;
    }

    let target_met = |b: u64| budget.target.is_some_and(|t| b >= t);
    if target_met(best) {
        return Ok(SearchOutcome {
            value: best,
            witness: family_of(pq, witness),
            nodes: base_nodes,
            elapsed: start.elapsed(),
            status: SearchStatus::TargetReached,
            checkpoint: None,
        });
    }

    let exclude_first = opts.seed;
    if opts.threads <= 1 || opts.resume.is_some() {
        let mut s = Searcher::new(&uni, pq, budget, start);
        s.best = best;
        s.best_witness = witness;
        s.nodes = base_nodes;
        s.exclude_first = exclude_first;
        s.dfs(0, full_alive(&uni), 0, guide.as_deref());
        let status = match s.stopped {
            None => SearchStatus::ProvedOptimal,
            Some(Stop::Budget) => SearchStatus::BudgetExhausted,
            Some(Stop::Target) => SearchStatus::TargetReached,
        };
        let checkpoint = checkpoint_of(pq, &uni, &s, s.best, &s.best_witness);
        return Ok(SearchOutcome {
            value: s.best,
            witness: family_of(pq, std::mem::take(&mut s.best_witness)),
            nodes: s.nodes,
            elapsed: start.elapsed(),
            status,
            checkpoint,
        });
    }

    // Parallel: expand the top of the tree, then hand subtrees to workers.
    let shared = Shared {
        best: AtomicU64::new(best),
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        target_hit: AtomicBool::new(false),
        witness: Mutex::new(witness),
    };
    let split_depth = (usize::BITS - (opts.threads * 8).leading_zeros()) as usize;
    let tasks = {
        let mut s = Searcher::new(&uni, pq, budget, start);
        s.shared = Some(&shared);
        s.exclude_first = exclude_first;
        s.split = Some((split_depth, Vec::new()));
        s.dfs(0, full_alive(&uni), 0, None);
        s.total_nodes();
        s.split.take().map(|(_, t)| t).unwrap_or_default()
    };
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..opts.threads {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                let Some(task) = tasks.get(idx) else { break };
                if shared.stop.load(Ordering::Relaxed) {
                    break;
                }
                let mut s = Searcher::new(&uni, pq, budget, start);
                s.shared = Some(&shared);
                s.exclude_first = exclude_first;
                s.load_included(&task.included);
                s.dfs(task.index, task.alive, task.branch_depth, None);
                s.total_nodes();
            });
        }
    });
    let status = if shared.target_hit.load(Ordering::Relaxed) {
        SearchStatus::TargetReached
    } else if shared.stop.load(Ordering::Relaxed) {
        SearchStatus::BudgetExhausted
    } else {
        SearchStatus::ProvedOptimal
    };
    let witness = shared.witness.into_inner().expect("witness lock");
    Ok(SearchOutcome {
        value: shared.best.load(Ordering::Relaxed),
        witness: family_of(pq, witness),
        nodes: shared.nodes.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
        status,
        checkpoint: None,
    })
}

/// Every shifted `U(s, q)` family of maximum size. Fails when the budget runs
/// out before the enumeration completes.
pub fn enumerate_maximum_families(pq: &ParamQuad, budget: SearchBudget) -> Result<MaximumFamilies> {
    let start = Instant::now();
    let uni = Universe::new(pq, true)?;
    let mut s = Searcher::new(&uni, pq, SearchBudget { target: None, ..budget }, start);
    // Co-optimal families must not be cut: keep anything reaching the construction's size.
    s.best = conjecture_value(pq).value();
    s.ties = Some(Vec::new());
    s.dfs(0, full_alive(&uni), 0, None);
    if s.stopped.is_some() {
        return Err(Error::TooLarge(format!(
            "tie enumeration for {pq} exhausted its budget after {} nodes",
            s.nodes
        )));
    }
    let families = s
        .ties
        .take()
        .unwrap_or_default()
        .into_iter()
        .map(|m| family_of(pq, m))
        .collect();
    Ok(MaximumFamilies {
        value: s.best,
        families,
        nodes: s.nodes,
    })
}
