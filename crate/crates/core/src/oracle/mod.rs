//! Exhaustive branch and bound for exact Turán numbers on small instances.
//!
//! Edge sets are explored as strictly increasing sequences of candidate
//! `r`-subsets in lexicographic order, so every set is visited once.

pub mod store;

use std::fmt;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detect;
use crate::hypergraph::Hypergraph;
use crate::pattern::ForbiddenPattern;

pub use store::{ResultKey, ResultStore, StoreError, StoredResult};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("witness failed re-verification: {0}")]
    WitnessRejected(String),
    #[error(transparent)]
    Store(#[from] StoreError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HostKind {
    Linear,
    General,
}

impl fmt::Display for HostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HostKind::Linear => "linear",
            HostKind::General => "general",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchBudget {
    pub node_limit: Option<u64>,
    pub time_limit_ms: Option<u64>,
    pub threads: usize,
    /// Forces a sequential search whose witness is the lexicographically
    /// least extremal edge set.
    pub deterministic: bool,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            node_limit: Some(200_000_000),
            time_limit_ms: None,
            threads: 1,
            deterministic: true,
        }
    }
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget {
            node_limit: None,
            ..SearchBudget::default()
        }
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if self.threads == 0 {
            return Err(OracleError::BadParameters(
                "threads must be positive".into(),
            ));
        }
        if self.node_limit == Some(0) || self.time_limit_ms == Some(0) {
            return Err(OracleError::BadParameters("limits must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleStatus {
    Exact,
    /// `value` is only the best found before a limit was hit.
    Interrupted,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleStats {
    pub nodes: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub n: usize,
    pub r: usize,
    pub pattern: String,
    pub host: HostKind,
    pub value: usize,
    pub witness: Hypergraph,
    pub status: OracleStatus,
    pub stats: OracleStats,
}

impl OracleResult {
    pub fn is_exact(&self) -> bool {
        self.status == OracleStatus::Exact
    }
}

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn candidate_edges(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r == 0 || r > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..r).rev().find(|&i| cur[i] < n - r + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

struct Shared<'a> {
    n: usize,
    r: usize,
    pattern: &'a ForbiddenPattern,
    linear: bool,
    cands: Vec<Vec<usize>>,
    pairs: Vec<Vec<usize>>,
    pair_total: usize,
    nodes: AtomicU64,
    interrupted: AtomicBool,
    best: AtomicUsize,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
}

impl<'a> Shared<'a> {
    fn new(
        n: usize,
        r: usize,
        pattern: &'a ForbiddenPattern,
        host: HostKind,
        budget: &SearchBudget,
    ) -> Self {
        let cands = candidate_edges(n, r);
        let pairs = cands
            .iter()
            .map(|e| {
                let mut ids = Vec::with_capacity(r * (r - 1) / 2);
                for (i, &a) in e.iter().enumerate() {
                    for &b in &e[i + 1..] {
                        ids.push(a * n + b);
                    }
                }
                ids
            })
            .collect();
        Shared {
            n,
            r,
            pattern,
            linear: host == HostKind::Linear,
            cands,
            pairs,
            pair_total: n * (n - 1) / 2,
            nodes: AtomicU64::new(0),
            interrupted: AtomicBool::new(false),
            best: AtomicUsize::new(0),
            node_limit: budget.node_limit,
            deadline: budget
                .time_limit_ms
                .map(|ms| Instant::now() + Duration::from_millis(ms)),
        }
    }

    fn tick(&self) -> bool {
        if self.interrupted.load(Ordering::Relaxed) {
            return false;
        }
        let count = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_nodes = self.node_limit.is_some_and(|limit| count > limit);
        let over_time =
            count.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() > d);
        if over_nodes || over_time {
            self.interrupted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn compatible(&self, state: &State, j: usize) -> bool {
        !self.linear || self.pairs[j].iter().all(|&p| !state.pair_used[p])
    }

    /// Whether adding candidate `j` to the current set creates the pattern.
    fn creates_pattern(&self, state: &State, j: usize) -> bool {
        if state.chosen.len() + 1 < self.pattern.edge_count() {
            return false;
        }
        let edges: Vec<&[usize]> = state
            .chosen
            .iter()
            .chain(std::iter::once(&j))
            .map(|&c| self.cands[c].as_slice())
            .collect();
        let host =
            Hypergraph::new(self.n, edges, Some(self.r)).expect("candidates are valid edges");
        let index = host.edge_index(&self.cands[j]).expect("new edge present");
        detect::contains_using_edge(&host, self.pattern, index).is_some()
    }

    fn push(&self, state: &mut State, j: usize) {
        state.chosen.push(j);
        if self.linear {
            for &p in &self.pairs[j] {
                state.pair_used[p] = true;
            }
            state.pairs_used += self.pairs[j].len();
        }
    }

    fn pop(&self, state: &mut State) {
        let j = state.chosen.pop().expect("non-empty");
        if self.linear {
            for &p in &self.pairs[j] {
                state.pair_used[p] = false;
            }
            state.pairs_used -= self.pairs[j].len();
        }
    }

    /// Extra edges a linear host can still take, by counting uncovered pairs.
    fn pair_room(&self, state: &State) -> usize {
        if self.linear {
            (self.pair_total - state.pairs_used) / (self.r * (self.r - 1) / 2)
        } else {
            usize::MAX
        }
    }

    fn maximize(&self, state: &mut State, from: usize) {
        if !self.tick() {
            return;
        }
        if state.chosen.len() > state.best_set.len() {
            state.best_set = state.chosen.clone();
            self.best.fetch_max(state.chosen.len(), Ordering::Relaxed);
        }
        let compat: Vec<usize> = (from..self.cands.len())
            .filter(|&j| self.compatible(state, j))
            .collect();
        let room = self.pair_room(state);
        for (pos, &j) in compat.iter().enumerate() {
            let optimistic = state.chosen.len() + (compat.len() - pos).min(room);
            if optimistic <= self.best.load(Ordering::Relaxed) {
                return;
            }
            if !self.compatible(state, j) || self.creates_pattern(state, j) {
                continue;
            }
            self.push(state, j);
            self.maximize(state, j + 1);
            self.pop(state);
            if self.interrupted.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    fn enumerate(
        &self,
        state: &mut State,
        from: usize,
        target: Option<usize>,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if !self.tick() {
            return ControlFlow::Break(());
        }
        if target.is_none_or(|t| t == state.chosen.len()) {
            visit(&state.chosen)?;
        }
        if target.is_some_and(|t| state.chosen.len() >= t) {
            return ControlFlow::Continue(());
        }
        let compat: Vec<usize> = (from..self.cands.len())
            .filter(|&j| self.compatible(state, j))
            .collect();
        for (pos, &j) in compat.iter().enumerate() {
            if let Some(t) = target {
                if state.chosen.len() + (compat.len() - pos).min(self.pair_room(state)) < t {
                    break;
                }
            }
            if !self.compatible(state, j) || self.creates_pattern(state, j) {
                continue;
            }
            self.push(state, j);
            let flow = self.enumerate(state, j + 1, target, visit);
            self.pop(state);
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn graph(&self, set: &[usize]) -> Hypergraph {
        Hypergraph::new(
            self.n,
            set.iter().map(|&c| self.cands[c].as_slice()),
            Some(self.r),
        )
        .expect("candidates are valid edges")
    }
}

#[derive(Clone)]
struct State {
    chosen: Vec<usize>,
    pair_used: Vec<bool>,
    pairs_used: usize,
    best_set: Vec<usize>,
}

impl State {
    fn new(n: usize) -> Self {
        State {
            chosen: Vec::new(),
            pair_used: vec![false; n * n],
            pairs_used: 0,
            best_set: Vec::new(),
        }
    }
}

fn check_params(
    n: usize,
    r: usize,
    pattern: &ForbiddenPattern,
    budget: &SearchBudget,
) -> Result<(), OracleError> {
    budget.validate()?;
    if r < 2 || n < r {
        return Err(OracleError::BadParameters(format!(
            "need n >= r >= 2, got n={n}, r={r}"
        )));
    }
    if pattern.r() != r {
        return Err(OracleError::BadParameters(format!(
            "pattern has uniformity {}, expected {r}",
            pattern.r()
        )));
    }
    Ok(())
}

fn run_in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

/// Maximum number of edges of a `pattern`-free `r`-graph on `n` vertices,
/// with a re-verified extremal witness.
pub fn max_edges(
    n: usize,
    r: usize,
    pattern: &ForbiddenPattern,
    host: HostKind,
    budget: &SearchBudget,
) -> Result<OracleResult, OracleError> {
    check_params(n, r, pattern, budget)?;
    let start = Instant::now();
    let shared = Shared::new(n, r, pattern, host, budget);
    let best_set = if budget.deterministic || budget.threads == 1 {
        let mut state = State::new(n);
        shared.maximize(&mut state, 0);
        state.best_set
    } else {
        let roots: Vec<usize> = (0..shared.cands.len()).collect();
        let shared_ref = &shared;
        let per_root: Vec<Vec<usize>> = run_in_pool(budget.threads, || {
            roots
                .par_iter()
                .filter_map(|&j| {
                    let mut state = State::new(n);
                    if shared_ref.creates_pattern(&state, j) {
                        return None;
                    }
                    shared_ref.push(&mut state, j);
                    shared_ref.maximize(&mut state, j + 1);
                    Some(state.best_set)
                })
                .collect()
        });
        per_root
            .into_iter()
            .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))
            .unwrap_or_default()
    };
    let witness = shared.graph(&best_set);
    verify_witness(&witness, pattern, host)?;
    let status = if shared.interrupted.load(Ordering::Relaxed) {
        OracleStatus::Interrupted
    } else {
        OracleStatus::Exact
    };
    Ok(OracleResult {
        n,
        r,
        pattern: pattern.to_string(),
        host,
        value: witness.edge_count(),
        witness,
        status,
        stats: OracleStats {
            nodes: shared.nodes.load(Ordering::Relaxed),
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
    })
}

/// Re-checks a witness through the detector, independently of search state.
pub fn verify_witness(
    witness: &Hypergraph,
    pattern: &ForbiddenPattern,
    host: HostKind,
) -> Result<(), OracleError> {
    if host == HostKind::Linear && !witness.is_linear() {
        return Err(OracleError::WitnessRejected("witness is not linear".into()));
    }
    if let Some(emb) = detect::contains_forest(witness, pattern) {
        return Err(OracleError::WitnessRejected(format!(
            "witness contains {pattern} on edges {:?}",
            emb.host_edges()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub count: u64,
    pub status: OracleStatus,
    pub nodes: u64,
}

/// Visits every `pattern`-free `r`-graph on `n` labelled vertices, restricted
/// to `edge_count` edges when given. Sets are visited in lexicographic order.
pub fn for_each_free(
    n: usize,
    r: usize,
    pattern: &ForbiddenPattern,
    host: HostKind,
    edge_count: Option<usize>,
    budget: &SearchBudget,
    mut visit: impl FnMut(&Hypergraph) -> ControlFlow<()>,
) -> Result<EnumerationResult, OracleError> {
    check_params(n, r, pattern, budget)?;
    let shared = Shared::new(n, r, pattern, host, budget);
    let mut state = State::new(n);
    let mut count = 0u64;
    let _ = shared.enumerate(&mut state, 0, edge_count, &mut |set| {
        count += 1;
        visit(&shared.graph(set))
    });
    let status = if shared.interrupted.load(Ordering::Relaxed) {
        OracleStatus::Interrupted
    } else {
        OracleStatus::Exact
    };
    Ok(EnumerationResult {
        count,
        status,
        nodes: shared.nodes.load(Ordering::Relaxed),
    })
}

/// Number of `pattern`-free `r`-graphs on `n` labelled vertices with exactly
/// `edge_count` edges.
pub fn enumerate_free(
    n: usize,
    r: usize,
    pattern: &ForbiddenPattern,
    host: HostKind,
    edge_count: usize,
    budget: &SearchBudget,
) -> Result<EnumerationResult, OracleError> {
    for_each_free(n, r, pattern, host, Some(edge_count), budget, |_| {
        ControlFlow::Continue(())
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub r: usize,
    pub pattern: ForbiddenPattern,
}

/// Runs [`max_edges`] over `rows`. With a store, rows that already have an
/// exact result are read back instead of recomputed, and new results are
/// appended.
pub fn ex_table(
    rows: &[TableRow],
    host: HostKind,
    budget: &SearchBudget,
    mut store: Option<&mut ResultStore>,
) -> Result<Vec<OracleResult>, OracleError> {
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let key = ResultKey::new(row.n, row.r, &row.pattern, host);
        if let Some(store) = store.as_deref_mut() {
            if let Some(done) = store.exact(&key)? {
                out.push(done);
                continue;
            }
        }
        let result = max_edges(row.n, row.r, &row.pattern, host, budget)?;
        if let Some(store) = store.as_deref_mut() {
            store.append(&result)?;
        }
        out.push(result);
    }
    Ok(out)
}
