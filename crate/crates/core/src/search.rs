//! Exact search for all minimum blocking sets below a size cap.
//!
//! Branch and bound picks the unblocked k-space with the fewest available
//! blockers and branches on them in ascending order; child `i` takes blocker
//! `i` and forbids blockers `0..i` for its whole subtree, so every set is
//! reached along exactly one path. A node is cut when its size plus a lower
//! bound on the blockers still needed exceeds the incumbent.
//!
//! Work is split into shards at a fixed depth. Each shard keeps its own
//! incumbent starting at the cap, so node and prune counters do not depend
//! on scheduling or on the number of workers.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocking::{BlockingError, BlockingSet, Incidence};
use crate::constructions::{recognize_bose_burton, recognize_construction1, BoseBurtonVariant};
use crate::counting::{
    main_theorem_bound, theorem_case, trivial_bound, CountingError, TheoremCase,
};
use crate::geometry::GeometryContext;

/// Depth at which the search tree is cut into shards.
const SHARD_DEPTH: usize = 2;
const CHECK_INTERVAL: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("search budget exceeded after {nodes_expanded} nodes ({pruned} pruned, {elapsed_seconds:.2} s)")]
    BudgetExceeded {
        nodes_expanded: u64,
        pruned: u64,
        elapsed_seconds: f64,
    },
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("{0}")]
    Blocking(#[from] BlockingError),
    #[error("{0}")]
    Counting(#[from] CountingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    BranchAndBound,
}

/// Which candidate blockers the search may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Universe {
    Both,
    Points,
    Hyperplanes,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub cap: usize,
    pub mode: SearchMode,
    pub workers: usize,
    pub budget: Option<Duration>,
    pub universe: Universe,
}

impl SearchConfig {
    pub fn new(cap: usize) -> Self {
        SearchConfig {
            cap,
            mode: SearchMode::BranchAndBound,
            workers: 1,
            budget: None,
            universe: Universe::Both,
        }
    }

    pub fn mode(mut self, mode: SearchMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn budget(mut self, budget: Option<Duration>) -> Self {
        self.budget = budget;
        self
    }

    pub fn universe(mut self, universe: Universe) -> Self {
        self.universe = universe;
        self
    }
}

/// Either the minimum size, or the string `"none <= cap"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MinimumSize {
    Size(usize),
    NoneWithinCap(String),
}

impl MinimumSize {
    pub fn size(&self) -> Option<usize> {
        match self {
            MinimumSize::Size(s) => Some(*s),
            MinimumSize::NoneWithinCap(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub n: usize,
    pub q: u32,
    pub k: usize,
    pub size_cap: usize,
    pub mode: SearchMode,
    pub universe: Universe,
    pub minimum_size_found: MinimumSize,
    pub minimum_set_count: usize,
    /// Sorted universe indices: points first, then hyperplanes offset by θ_n.
    pub minimum_sets: Vec<Vec<usize>>,
    pub root_lower_bound: usize,
    pub shards: usize,
    pub nodes_expanded: u64,
    pub pruned: u64,
    pub wall_time_seconds: f64,
}

impl SearchReport {
    pub fn minimum(&self) -> Option<usize> {
        self.minimum_size_found.size()
    }

    /// The report with timing zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        SearchReport {
            wall_time_seconds: 0.0,
            ..self.clone()
        }
    }

    pub fn minimum_blocking_sets(
        &self,
        ctx: &GeometryContext,
    ) -> Result<Vec<BlockingSet>, BlockingError> {
        self.minimum_sets
            .iter()
            .map(|s| BlockingSet::from_element_indices(ctx, self.k, s))
            .collect()
    }
}

/// Flat bitset tables for the solver. `cover` rows are over k-spaces, `block`
/// rows over the (restricted) universe.
struct Tables {
    w: usize,
    wu: usize,
    m: usize,
    cover: Vec<u64>,
    block: Vec<u64>,
    full: Vec<u64>,
    elements: Vec<usize>,
}

impl Tables {
    fn new(inc: &Incidence, universe: Universe) -> Self {
        let m = inc.spaces().len();
        let u = inc.universe_len();
        let theta = inc.point_count();
        let w = m.div_ceil(64).max(1);
        let wu = u.div_ceil(64).max(1);
        let allowed = |e: usize| match universe {
            Universe::Both => true,
            Universe::Points => e < theta,
            Universe::Hyperplanes => e >= theta,
        };
        let elements: Vec<usize> = (0..u).filter(|&e| allowed(e)).collect();
        let mut cover = vec![0u64; u * w];
        for &e in &elements {
            cover[e * w..(e + 1) * w].copy_from_slice(inc.coverage(e).words());
        }
        let mut block = vec![0u64; m * wu];
        for j in 0..m {
            for &e in inc.blockers(j) {
                if allowed(e) {
                    block[j * wu + e / 64] |= 1 << (e % 64);
                }
            }
        }
        let mut full = vec![0u64; w];
        for j in 0..m {
            full[j / 64] |= 1 << (j % 64);
        }
        Tables {
            w,
            wu,
            m,
            cover,
            block,
            full,
            elements,
        }
    }

    fn cover(&self, e: usize) -> &[u64] {
        &self.cover[e * self.w..(e + 1) * self.w]
    }

    fn block(&self, j: usize) -> &[u64] {
        &self.block[j * self.wu..(j + 1) * self.wu]
    }

    fn is_full(&self, cov: &[u64]) -> bool {
        cov == self.full.as_slice()
    }
}

#[inline]
fn bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + t)
        })
    })
}

enum Outcome {
    Full,
    Cut,
    Branch(usize),
}

/// Lower bound on the number of further blockers needed, together with the
/// most constrained unblocked k-space. `None` when some k-space has no
/// available blocker left.
fn bound_and_branch(
    t: &Tables,
    cov: &[u64],
    excl: &[u64],
    scratch: &mut [u64],
) -> Option<(usize, usize)> {
    scratch.fill(0);
    let mut remaining = 0usize;
    let mut packing = 0usize;
    let mut branch = (usize::MAX, usize::MAX);
    for j in 0..t.m {
        if bit(cov, j) {
            continue;
        }
        remaining += 1;
        let bm = t.block(j);
        let mut cnt = 0;
        let mut disjoint = true;
        for i in 0..t.wu {
            let avail = bm[i] & !excl[i];
            cnt += avail.count_ones() as usize;
            disjoint &= avail & scratch[i] == 0;
        }
        if cnt == 0 {
            return None;
        }
        if cnt < branch.0 {
            branch = (cnt, j);
        }
        // blocker sets of these spaces are pairwise disjoint, so each needs its own element
        if disjoint {
            packing += 1;
            for i in 0..t.wu {
                scratch[i] |= bm[i] & !excl[i];
            }
        }
    }
    let mut max_cov = 0usize;
    for &e in &t.elements {
        if bit(excl, e) {
            continue;
        }
        let c: usize = t
            .cover(e)
            .iter()
            .zip(cov)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum();
        max_cov = max_cov.max(c);
    }
    if max_cov == 0 {
        return None;
    }
    Some((remaining.div_ceil(max_cov).max(packing), branch.1))
}

/// A subtree root: chosen elements, forbidden elements and covered k-spaces.
#[derive(Clone)]
struct Shard {
    chosen: Vec<usize>,
    excl: Vec<u64>,
    cov: Vec<u64>,
}

#[derive(Default)]
struct ShardResult {
    nodes: u64,
    pruned: u64,
    aborted: bool,
    sols: Vec<Vec<usize>>,
}

struct Control {
    deadline: Option<Instant>,
    abort: AtomicBool,
}

impl Control {
    fn check(&self) -> bool {
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                self.abort.store(true, Ordering::Relaxed);
            }
        }
        self.abort.load(Ordering::Relaxed)
    }
}

struct Solver<'a> {
    t: &'a Tables,
    ctl: &'a Control,
    best: usize,
    res: ShardResult,
    chosen: Vec<usize>,
    excl: Vec<u64>,
    /// Covered sets per level, indexed by the number of chosen elements.
    cov_stack: Vec<u64>,
    cand_stack: Vec<u64>,
    scratch: Vec<u64>,
}

impl<'a> Solver<'a> {
    fn new(t: &'a Tables, ctl: &'a Control, cap: usize) -> Self {
        Solver {
            t,
            ctl,
            best: cap,
            res: ShardResult::default(),
            chosen: Vec::new(),
            excl: vec![0; t.wu],
            cov_stack: vec![0; (cap + 2) * t.w],
            cand_stack: vec![0; (cap + 2) * t.wu],
            scratch: vec![0; t.wu],
        }
    }

    fn visit(&mut self) -> Result<(), ()> {
        self.res.nodes += 1;
        if self.res.nodes % CHECK_INTERVAL == 1 && self.ctl.check() {
            self.res.aborted = true;
            return Err(());
        }
        Ok(())
    }

    fn evaluate(&mut self, level: usize) -> Outcome {
        let t = self.t;
        let cov = &self.cov_stack[level * t.w..(level + 1) * t.w];
        if t.is_full(cov) {
            return Outcome::Full;
        }
        if level >= self.best {
            self.res.pruned += 1;
            return Outcome::Cut;
        }
        match bound_and_branch(t, cov, &self.excl, &mut self.scratch) {
            Some((lb, j)) if level + lb <= self.best => Outcome::Branch(j),
            _ => {
                self.res.pruned += 1;
                Outcome::Cut
            }
        }
    }

    fn record(&mut self) {
        let mut s = self.chosen.clone();
        s.sort_unstable();
        if s.len() < self.best {
            self.best = s.len();
            self.res.sols.clear();
        }
        self.res.sols.push(s);
    }

    fn load(&mut self, shard: &Shard) {
        let w = self.t.w;
        let level = shard.chosen.len();
        self.chosen = shard.chosen.clone();
        self.excl.copy_from_slice(&shard.excl);
        self.cov_stack[level * w..(level + 1) * w].copy_from_slice(&shard.cov);
    }

    /// Children of the loaded node, in branching order.
    fn children(&mut self) -> Result<Option<Vec<Shard>>, ()> {
        self.visit()?;
        let (t, level) = (self.t, self.chosen.len());
        match self.evaluate(level) {
            Outcome::Full => Ok(None),
            Outcome::Cut => Ok(Some(Vec::new())),
            Outcome::Branch(j) => {
                let cov = self.cov_stack[level * t.w..(level + 1) * t.w].to_vec();
                let mut excl = self.excl.clone();
                let cand: Vec<usize> = iter_bits(t.block(j))
                    .filter(|&e| !bit(&self.excl, e))
                    .collect();
                let mut out = Vec::with_capacity(cand.len());
                for e in cand {
                    let mut chosen = self.chosen.clone();
                    chosen.push(e);
                    let c = cov.iter().zip(t.cover(e)).map(|(a, b)| a | b).collect();
                    out.push(Shard {
                        chosen,
                        excl: excl.clone(),
                        cov: c,
                    });
                    excl[e / 64] |= 1 << (e % 64);
                }
                Ok(Some(out))
            }
        }
    }

    fn dfs(&mut self) -> Result<(), ()> {
        self.visit()?;
        let t = self.t;
        let level = self.chosen.len();
        let j = match self.evaluate(level) {
            Outcome::Full => {
                self.record();
                return Ok(());
            }
            Outcome::Cut => return Ok(()),
            Outcome::Branch(j) => j,
        };
        let (wu, w) = (t.wu, t.w);
        for i in 0..wu {
            self.cand_stack[level * wu + i] = t.block(j)[i] & !self.excl[i];
        }
        let mut result = Ok(());
        for idx in 0..wu {
            let mut word = self.cand_stack[level * wu + idx];
            while word != 0 {
                let e = idx * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                let (lo, hi) = self.cov_stack.split_at_mut((level + 1) * w);
                for (i, dst) in hi[..w].iter_mut().enumerate() {
                    *dst = lo[level * w + i] | t.cover(e)[i];
                }
                self.chosen.push(e);
                result = self.dfs();
                self.chosen.pop();
                if result.is_err() {
                    break;
                }
                self.excl[idx] |= 1 << (e % 64);
            }
            if result.is_err() {
                break;
            }
        }
        for i in 0..wu {
            self.excl[i] &= !self.cand_stack[level * wu + i];
        }
        result
    }
}

/// Runs `f` over `0..count` on up to `workers` threads, returning results in
/// index order.
fn run_sharded<T: Send, F: Fn(usize) -> T + Sync>(count: usize, workers: usize, f: F) -> Vec<T> {
    let workers = workers.max(1).min(count.max(1));
    if workers == 1 {
        return (0..count).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..count).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                let r = f(i);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.unwrap())
        .collect()
}

fn root_shard(t: &Tables) -> Shard {
    Shard {
        chosen: Vec::new(),
        excl: vec![0; t.wu],
        cov: vec![0; t.w],
    }
}

/// Lower bound on the size of any blocking set drawn from `universe`.
pub fn root_lower_bound(inc: &Incidence, universe: Universe) -> usize {
    let t = Tables::new(inc, universe);
    let root = root_shard(&t);
    if t.is_full(&root.cov) {
        return 0;
    }
    let mut scratch = vec![0; t.wu];
    bound_and_branch(&t, &root.cov, &root.excl, &mut scratch).map_or(usize::MAX, |(lb, _)| lb)
}

struct Totals {
    nodes: u64,
    pruned: u64,
    aborted: bool,
}

fn branch_and_bound(
    t: &Tables,
    cfg: &SearchConfig,
    ctl: &Control,
) -> (Vec<Vec<usize>>, usize, Totals) {
    let mut totals = Totals {
        nodes: 0,
        pruned: 0,
        aborted: false,
    };
    // expand to a fixed depth; finished leaves above it become their own shards
    let mut frontier = vec![root_shard(t)];
    let mut leaves = Vec::new();
    let mut expander = Solver::new(t, ctl, cfg.cap);
    for _ in 0..SHARD_DEPTH {
        let mut next = Vec::new();
        for s in frontier {
            expander.load(&s);
            match expander.children() {
                Err(()) => {
                    totals.aborted = true;
                    break;
                }
                Ok(None) => leaves.push(s),
                Ok(Some(ch)) => next.extend(ch),
            }
        }
        frontier = next;
        if totals.aborted {
            break;
        }
    }
    totals.nodes += expander.res.nodes;
    totals.pruned += expander.res.pruned;
    let mut sols: Vec<Vec<usize>> = leaves
        .into_iter()
        .map(|s| {
            let mut c = s.chosen;
            c.sort_unstable();
            c
        })
        .collect();
    if totals.aborted {
        return (Vec::new(), 0, totals);
    }
    let shards = frontier.len();
    let results = run_sharded(shards, cfg.workers, |i| {
        let mut solver = Solver::new(t, ctl, cfg.cap);
        solver.load(&frontier[i]);
        if solver.dfs().is_err() {
            solver.res.aborted = true;
        }
        solver.res
    });
    for r in results {
        totals.nodes += r.nodes;
        totals.pruned += r.pruned;
        totals.aborted |= r.aborted;
        sols.extend(r.sols);
    }
    (sols, shards, totals)
}

/// Blocking `size`-subsets of the allowed universe whose smallest element is
/// `elements[first]`, using prefix covers.
fn subsets_of_size(t: &Tables, size: usize, first: usize, ctl: &Control, res: &mut ShardResult) {
    let w = t.w;
    let mut cov = vec![0u64; (size + 1) * w];
    if size == 0 {
        res.nodes += 1;
        if t.is_full(&cov[..w]) {
            res.sols.push(Vec::new());
        }
        return;
    }
    let mut chosen = Vec::with_capacity(size);
    let _ = extend_subsets(t, size, first, &mut cov, &mut chosen, ctl, res);
}

fn extend_subsets(
    t: &Tables,
    size: usize,
    pos: usize,
    cov: &mut [u64],
    chosen: &mut Vec<usize>,
    ctl: &Control,
    res: &mut ShardResult,
) -> Result<(), ()> {
    let w = t.w;
    let level = chosen.len();
    let e = t.elements[pos];
    res.nodes += 1;
    if res.nodes % CHECK_INTERVAL == 1 && ctl.check() {
        res.aborted = true;
        return Err(());
    }
    let (lo, hi) = cov.split_at_mut((level + 1) * w);
    for i in 0..w {
        hi[i] = lo[level * w + i] | t.cover(e)[i];
    }
    chosen.push(e);
    let mut out = Ok(());
    if level + 1 == size {
        if t.is_full(&cov[(level + 1) * w..(level + 2) * w]) {
            res.sols.push(chosen.clone());
        }
    } else {
        let last = t.elements.len() - (size - level - 1);
        for next in pos + 1..=last {
            out = extend_subsets(t, size, next, cov, chosen, ctl, res);
            if out.is_err() {
                break;
            }
        }
    }
    chosen.pop();
    out
}

fn exhaustive(t: &Tables, cfg: &SearchConfig, ctl: &Control) -> (Vec<Vec<usize>>, usize, Totals) {
    let mut totals = Totals {
        nodes: 0,
        pruned: 0,
        aborted: false,
    };
    let mut shards = 0;
    for size in 0..=cfg.cap {
        let (sols, n) = blocking_subsets_sharded(t, size, cfg.workers, ctl, &mut totals);
        shards = shards.max(n);
        if totals.aborted || !sols.is_empty() {
            return (sols, shards, totals);
        }
    }
    (Vec::new(), shards, totals)
}

fn blocking_subsets_sharded(
    t: &Tables,
    size: usize,
    workers: usize,
    ctl: &Control,
    totals: &mut Totals,
) -> (Vec<Vec<usize>>, usize) {
    let count = if size == 0 { 1 } else { t.elements.len() };
    let results = run_sharded(count, workers, |first| {
        let mut r = ShardResult::default();
        subsets_of_size(t, size, first, ctl, &mut r);
        r
    });
    let mut sols = Vec::new();
    for r in results {
        totals.nodes += r.nodes;
        totals.aborted |= r.aborted;
        sols.extend(r.sols);
    }
    (sols, count)
}

fn validate(ctx: &GeometryContext, k: usize, cfg: &SearchConfig) -> Result<(), SearchError> {
    if k >= ctx.n() {
        return Err(SearchError::InvalidConfig(format!(
            "need k < n (n = {}, k = {k})",
            ctx.n()
        )));
    }
    if cfg.workers == 0 {
        return Err(SearchError::InvalidConfig(
            "workers must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Finds every blocking set of minimum size, provided that size is at most
/// `cfg.cap`.
pub fn min_blocking_search(
    ctx: &GeometryContext,
    k: usize,
    cfg: &SearchConfig,
) -> Result<SearchReport, SearchError> {
    validate(ctx, k, cfg)?;
    let start = Instant::now();
    let inc = Incidence::new(ctx, k as isize)?;
    search_with_incidence(&inc, cfg, start)
}

/// Same as [`min_blocking_search`] with a precomputed incidence structure.
pub fn search_with_incidence(
    inc: &Incidence,
    cfg: &SearchConfig,
    start: Instant,
) -> Result<SearchReport, SearchError> {
    let ctx = inc.ctx();
    validate(ctx, inc.k() as usize, cfg)?;
    let ctl = Control {
        deadline: cfg.budget.map(|b| start + b),
        abort: AtomicBool::new(false),
    };
    let t = Tables::new(inc, cfg.universe);
    let (mut sols, shards, totals) = match cfg.mode {
        SearchMode::BranchAndBound => branch_and_bound(&t, cfg, &ctl),
        SearchMode::Exhaustive => exhaustive(&t, cfg, &ctl),
    };
    if totals.aborted {
        return Err(SearchError::BudgetExceeded {
            nodes_expanded: totals.nodes,
            pruned: totals.pruned,
            elapsed_seconds: start.elapsed().as_secs_f64(),
        });
    }
    let min = sols.iter().map(Vec::len).min();
    sols.retain(|s| Some(s.len()) == min);
    sols.sort();
    sols.dedup();
    Ok(SearchReport {
        n: ctx.n(),
        q: ctx.q(),
        k: inc.k() as usize,
        size_cap: cfg.cap,
        mode: cfg.mode,
        universe: cfg.universe,
        minimum_size_found: match min {
            Some(s) => MinimumSize::Size(s),
            None => MinimumSize::NoneWithinCap(format!("none <= {}", cfg.cap)),
        },
        minimum_set_count: sols.len(),
        minimum_sets: sols,
        root_lower_bound: root_lower_bound(inc, cfg.universe),
        shards,
        nodes_expanded: totals.nodes,
        pruned: totals.pruned,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Every blocking set of exactly `size` elements from `universe`, sorted.
pub fn blocking_sets_of_size(
    inc: &Incidence,
    size: usize,
    universe: Universe,
    workers: usize,
) -> Vec<Vec<usize>> {
    let t = Tables::new(inc, universe);
    let ctl = Control {
        deadline: None,
        abort: AtomicBool::new(false),
    };
    let mut totals = Totals {
        nodes: 0,
        pruned: 0,
        aborted: false,
    };
    let (mut sols, _) = blocking_subsets_sharded(&t, size, workers, &ctl, &mut totals);
    sols.sort();
    sols
}

/// Predicted shape of a minimum blocking set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    BoseBurtonPoints,
    BoseBurtonHyperplanes,
    Construction1,
    Other,
}

pub fn family_of(b: &BlockingSet) -> Family {
    if recognize_bose_burton(b, BoseBurtonVariant::Points).is_some() {
        Family::BoseBurtonPoints
    } else if recognize_bose_burton(b, BoseBurtonVariant::Hyperplanes).is_some() {
        Family::BoseBurtonHyperplanes
    } else if recognize_construction1(b).is_some() {
        Family::Construction1
    } else {
        Family::Other
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub set: Vec<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    pub n: usize,
    pub q: u32,
    pub k: usize,
    pub case: String,
    pub expected_bound: String,
    pub observed_minimum: Option<usize>,
    pub all_minima_match_theorem: bool,
    pub family_counts: BTreeMap<Family, usize>,
    pub mismatches: Vec<Mismatch>,
    pub report: SearchReport,
}

fn case_name(c: TheoremCase) -> &'static str {
    match c {
        TheoremCase::HyperplanePencil => "hyperplane_pencil",
        TheoremCase::PointSpace => "point_space",
        TheoremCase::Middle => "middle",
        TheoremCase::Open => "open",
    }
}

/// Search cap used by [`classify_minimum`]: the main size bound, or the
/// trivial bound in the cases where that bound is not known.
pub fn classification_cap(n: usize, k: usize, q: u32) -> Result<usize, SearchError> {
    let (n, k, q) = (n as i64, k as i64, q as u64);
    let bound = main_theorem_bound(n, k, q)?
        .value()
        .cloned()
        .unwrap_or_else(|| trivial_bound(n, k, q));
    usize::try_from(&bound)
        .map_err(|_| SearchError::InvalidConfig(format!("bound {bound} is out of range")))
}

/// Compares a finished search against the main size bound. In the open cases the
/// expectation is the trivial bound, met only by the two Bose–Burton families.
pub fn verdict_from_report(
    ctx: &GeometryContext,
    report: SearchReport,
) -> Result<ClassificationVerdict, SearchError> {
    let (n, k, q) = (report.n as i64, report.k as i64, report.q as u64);
    let case = theorem_case(n, k, q)?;
    let bound = main_theorem_bound(n, k, q)?;
    let expected = bound
        .value()
        .cloned()
        .unwrap_or_else(|| trivial_bound(n, k, q));
    let allowed: &[Family] = match case {
        TheoremCase::HyperplanePencil => &[Family::BoseBurtonHyperplanes],
        TheoremCase::PointSpace => &[Family::BoseBurtonPoints],
        TheoremCase::Middle => &[Family::Construction1],
        TheoremCase::Open => &[Family::BoseBurtonPoints, Family::BoseBurtonHyperplanes],
    };
    let observed = report.minimum();
    let mut mismatches = Vec::new();
    let mut family_counts = BTreeMap::new();
    for set in &report.minimum_sets {
        let b = BlockingSet::from_element_indices(ctx, report.k, set)?;
        let fam = family_of(&b);
        *family_counts.entry(fam).or_insert(0) += 1;
        if !allowed.contains(&fam) {
            mismatches.push(Mismatch {
                set: set.clone(),
                reason: format!("{fam:?} is not a predicted extremal family"),
            });
        }
    }
    let size_matches = observed.map(num_bigint::BigUint::from) == Some(expected.clone());
    if !size_matches {
        mismatches.insert(
            0,
            Mismatch {
                set: Vec::new(),
                reason: match observed {
                    Some(s) => format!("observed minimum {s} differs from expected {expected}"),
                    None => format!("no blocking set within cap {}", report.size_cap),
                },
            },
        );
    }
    Ok(ClassificationVerdict {
        n: report.n,
        q: report.q,
        k: report.k,
        case: case_name(case).into(),
        expected_bound: bound.render(),
        observed_minimum: observed,
        all_minima_match_theorem: mismatches.is_empty(),
        family_counts,
        mismatches,
        report,
    })
}

/// Searches at the main size bound and checks every minimum against the
/// predicted families. `cfg.cap` is replaced by [`classification_cap`].
pub fn classify_minimum(
    ctx: &GeometryContext,
    k: usize,
    cfg: &SearchConfig,
) -> Result<ClassificationVerdict, SearchError> {
    validate(ctx, k, cfg)?;
    let cfg = SearchConfig {
        cap: classification_cap(ctx.n(), k, ctx.q())?,
        ..cfg.clone()
    };
    let report = min_blocking_search(ctx, k, &cfg)?;
    verdict_from_report(ctx, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pg(n: usize, q: u32) -> GeometryContext {
        GeometryContext::pg(n, q).unwrap()
    }

    #[test]
    fn fano_plane_lines() {
        let ctx = pg(2, 2);
        for mode in [SearchMode::BranchAndBound, SearchMode::Exhaustive] {
            let r = min_blocking_search(&ctx, 1, &SearchConfig::new(3).mode(mode)).unwrap();
            assert_eq!(r.minimum(), Some(3));
            assert_eq!(r.minimum_set_count, 7);
            for b in r.minimum_blocking_sets(&ctx).unwrap() {
                assert!(b.hyperplanes().is_empty());
                assert_eq!(ctx.span_points(b.points()).dim(), 1);
            }
        }
    }

    #[test]
    fn cap_below_minimum() {
        let ctx = pg(2, 2);
        let r = min_blocking_search(&ctx, 1, &SearchConfig::new(2)).unwrap();
        assert_eq!(r.minimum(), None);
        assert_eq!(
            r.minimum_size_found,
            MinimumSize::NoneWithinCap("none <= 2".into())
        );
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["minimum_size_found"], "none <= 2");
    }

    #[test]
    fn restricted_universe() {
        let ctx = pg(2, 3);
        let r = min_blocking_search(
            &ctx,
            1,
            &SearchConfig::new(4).universe(Universe::Hyperplanes),
        )
        .unwrap();
        // k = 1 in the plane: lines are hyperplanes, and no set of lines can contain a line
        // other than itself, so every line must be picked
        assert_eq!(r.minimum(), None);
        let r =
            min_blocking_search(&ctx, 1, &SearchConfig::new(4).universe(Universe::Points)).unwrap();
        assert_eq!((r.minimum(), r.minimum_set_count), (Some(4), 13));
    }

    #[test]
    fn budget_exceeded_reports_counters() {
        let ctx = pg(3, 3);
        let cfg = SearchConfig::new(12).budget(Some(Duration::ZERO));
        match min_blocking_search(&ctx, 1, &cfg) {
            Err(SearchError::BudgetExceeded { nodes_expanded, .. }) => assert!(nodes_expanded > 0),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn classify_small_cases() {
        let ctx = pg(2, 3);
        let v = classify_minimum(&ctx, 0, &SearchConfig::new(0)).unwrap();
        assert_eq!(v.observed_minimum, Some(4));
        assert!(v.all_minima_match_theorem, "{:?}", v.mismatches);
        assert_eq!(v.family_counts[&Family::BoseBurtonHyperplanes], 13);

        let ctx = pg(2, 2);
        let v = classify_minimum(&ctx, 1, &SearchConfig::new(0)).unwrap();
        assert_eq!(
            (v.case.as_str(), v.expected_bound.as_str()),
            ("open", "open")
        );
        assert!(v.all_minima_match_theorem);
    }
}
