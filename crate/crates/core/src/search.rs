//! Enumeration of blocking sets with property filters.
//!
//! Two complete modes are offered:
//!
//! * **exhaustive**: every subset of the point universe whose size lies in
//!   the requested range is tested. The raw space is computed up front and
//!   rejected if it exceeds the node budget.
//! * **pruned**: a depth-first search over hitting sets. At each node the
//!   unblocked line with the fewest remaining candidate points is chosen and
//!   the search branches on which of those points is the *first* point of
//!   the set on that line (earlier ones are excluded). Every blocking set is
//!   reached through exactly one path. A node is cut when some unblocked line
//!   has no candidates left, when the remaining size budget cannot cover the
//!   unblocked lines, when (projectively) a whole line has been included, or,
//!   for minimal-only queries, when an included point can no longer have a
//!   tangent.
//!
//! In both modes every candidate is re-checked against the filters with the
//! checkers in [`crate::props`] before it is reported. Counts are labelled
//! counts: no isomorph rejection is done.
//!
//! Work is split into independent subtrees that run on a rayon pool; their
//! results are concatenated in subtree order and the final match list is
//! sorted, so certificates do not depend on the number of workers.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::Mask;
use crate::plane::{AffineFrame, Geometry, LineId, Plane, PointId, PointSet};
use crate::props;

/// Default node budget: 2^32.
pub const DEFAULT_BUDGET: u64 = 1 << 32;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "PLANEFORGE_BUDGET";

/// Depth at which the pruned search is cut into parallel tasks.
const SPLIT_DEPTH: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    Projective,
    Affine { r_inf: LineId },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    Blocking,
    Minimal,
    Semioval,
    RInfAtSomePoint,
    RInfAtPoint(PointId),
    PiProperty(PointId),
    PiStrong(PointId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Pruned,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchQuery {
    pub setting: Setting,
    pub min_size: usize,
    pub max_size: usize,
    pub filters: Vec<Filter>,
    pub mode: Mode,
    pub limit: Option<usize>,
}

impl SearchQuery {
    pub fn projective(min_size: usize, max_size: usize, filters: &[Filter]) -> Self {
        SearchQuery {
            setting: Setting::Projective,
            min_size,
            max_size,
            filters: filters.to_vec(),
            mode: Mode::Pruned,
            limit: None,
        }
    }

    pub fn affine(r_inf: LineId, min_size: usize, max_size: usize, filters: &[Filter]) -> Self {
        SearchQuery {
            setting: Setting::Affine { r_inf },
            ..SearchQuery::projective(min_size, max_size, filters)
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    fn has(&self, f: Filter) -> bool {
        self.filters.contains(&f)
    }
}

/// Execution parameters that do not change the result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            jobs: None,
        }
    }
}

impl SearchOptions {
    /// Default options with the budget taken from `PLANEFORGE_BUDGET` when set.
    pub fn from_env() -> Result<Self> {
        let mut opts = SearchOptions::default();
        if let Ok(raw) = std::env::var(BUDGET_ENV) {
            opts.budget = raw.trim().parse().map_err(|_| {
                Error::InvalidQuery(format!("{BUDGET_ENV}={raw} is not an integer"))
            })?;
        }
        Ok(opts)
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = Some(jobs);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryEcho {
    pub q: usize,
    #[serde(flatten)]
    pub query: SearchQuery,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub query: QueryEcho,
    /// False when the result limit was reached.
    pub complete: bool,
    /// Sorted id lists, in lexicographic order.
    pub matches: Vec<Vec<PointId>>,
    /// Number of matches per size.
    pub counts: BTreeMap<usize, usize>,
    pub elapsed_ms: u64,
}

impl Certificate {
    /// Equal outcome: completeness, matches and counts (ignores the query
    /// echo and timing).
    pub fn same_outcome(&self, other: &Certificate) -> bool {
        self.complete == other.complete
            && self.matches == other.matches
            && self.counts == other.counts
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }

    pub fn point_sets(&self, plane: &Plane) -> Result<Vec<PointSet>> {
        self.matches
            .iter()
            .map(|ids| PointSet::from_ids(plane, ids.iter().copied()))
            .collect()
    }
}

enum View<'p> {
    Projective(&'p Plane),
    Affine(AffineFrame<'p>),
}

impl View<'_> {
    fn geometry(&self) -> &dyn Geometry {
        match self {
            View::Projective(p) => *p,
            View::Affine(f) => f,
        }
    }
}

/// Post-hoc filter evaluation with the independent checkers.
struct Judge<'p> {
    view: View<'p>,
    filters: Vec<Filter>,
}

impl Judge<'_> {
    fn accepts(&self, set: &PointSet) -> bool {
        let geom = self.view.geometry();
        let plane = geom.plane();
        let blocking = props::is_blocking(geom, set);
        self.filters.iter().all(|&f| match f {
            Filter::Blocking => blocking,
            Filter::Minimal => blocking && props::is_minimal(geom, set).unwrap_or(false),
            Filter::Semioval => props::is_semioval(plane, set),
            Filter::RInfAtSomePoint => {
                blocking
                    && props::r_infinity_points(plane, set)
                        .map(|v| !v.is_empty())
                        .unwrap_or(false)
            }
            Filter::RInfAtPoint(p) => {
                blocking
                    && set.contains(p)
                    && matches!(props::has_r_infinity_property(plane, set, p), Ok(Some(_)))
            }
            Filter::PiProperty(d) => match &self.view {
                View::Affine(frame) => {
                    blocking && props::has_pi_property(frame, set, d).unwrap_or(false)
                }
                View::Projective(_) => false,
            },
            Filter::PiStrong(d) => match &self.view {
                View::Affine(frame) => {
                    blocking && props::has_pi_strong_property(frame, set, d).unwrap_or(false)
                }
                View::Projective(_) => false,
            },
        })
    }
}

fn validate(plane: &Plane, query: &SearchQuery) -> Result<()> {
    let invalid = |msg: String| Err(Error::InvalidQuery(msg));
    let n = plane.size();
    if n > 128 {
        return invalid(format!(
            "search supports planes with at most 128 points (q <= 9), got q = {}",
            plane.q()
        ));
    }
    if query.min_size < 1 || query.min_size > query.max_size || query.max_size > n {
        return invalid(format!(
            "size range {}..{} must satisfy 1 <= min <= max <= {n}",
            query.min_size, query.max_size
        ));
    }
    if query.limit == Some(0) {
        return invalid("limit must be positive".into());
    }
    let affine = match query.setting {
        Setting::Projective => false,
        Setting::Affine { r_inf } => {
            if r_inf >= n {
                return invalid(format!("line {r_inf} does not exist"));
            }
            true
        }
    };
    for &f in &query.filters {
        match f {
            Filter::PiProperty(d) | Filter::PiStrong(d) => {
                let Setting::Affine { r_inf } = query.setting else {
                    return invalid("Pi filters need the affine setting".into());
                };
                if d >= n || !plane.is_on(d, r_inf) {
                    return invalid(format!(
                        "direction {d} is not a point of the line at infinity {r_inf}"
                    ));
                }
            }
            Filter::Semioval | Filter::RInfAtSomePoint | Filter::RInfAtPoint(_) if affine => {
                return invalid(format!("{f:?} is a projective filter"));
            }
            Filter::RInfAtPoint(p) if p >= n => {
                return invalid(format!("point {p} does not exist"));
            }
            _ => {}
        }
    }
    if query.has(Filter::Minimal) && !query.has(Filter::Blocking) {
        return invalid("the minimal filter needs the blocking filter".into());
    }
    if query.mode == Mode::Pruned && !query.has(Filter::Blocking) {
        return invalid("pruned mode enumerates blocking sets; add the blocking filter".into());
    }
    Ok(())
}

/// Runs a query and returns a certificate of the (possibly limited) result.
pub fn enumerate(plane: &Plane, query: &SearchQuery, opts: &SearchOptions) -> Result<Certificate> {
    validate(plane, query)?;
    let start = Instant::now();
    let view = match query.setting {
        Setting::Projective => View::Projective(plane),
        Setting::Affine { r_inf } => View::Affine(AffineFrame::new(plane, r_inf)?),
    };
    let kernel = Kernel::new(view.geometry(), query);
    let judge = Judge {
        view,
        filters: query.filters.clone(),
    };

    let run = || match query.mode {
        Mode::Exhaustive => kernel.exhaustive(&judge, query.limit, opts.budget),
        Mode::Pruned => kernel.pruned(&judge, query.limit, opts.budget),
    };
    let (found, complete) = match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::InvalidQuery(format!("cannot start {jobs} workers: {e}")))?
            .install(run)?,
        None => run()?,
    };

    let mut matches: Vec<Vec<PointId>> = found
        .into_iter()
        .map(|bits| Mask::from_u128(bits).iter().collect())
        .collect();
    matches.sort();
    let mut counts = BTreeMap::new();
    for m in &matches {
        *counts.entry(m.len()).or_insert(0) += 1;
    }
    Ok(Certificate {
        query: QueryEcho {
            q: plane.q(),
            query: query.clone(),
        },
        complete,
        matches,
        counts,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

#[derive(Clone, Copy, Debug)]
struct Node {
    inc: u128,
    exc: u128,
    /// Active-line indices not yet met by `inc`.
    unhit: u128,
    size: u32,
}

/// Cross-task state: node counter, budget flag and the limit cut-off.
struct Shared {
    nodes: AtomicU64,
    over_budget: AtomicBool,
    /// Smallest task index that filled the limit.
    cut: AtomicUsize,
    budget: u64,
}

struct Task<'a> {
    index: usize,
    shared: &'a Shared,
    judge: &'a Judge<'a>,
    limit: usize,
    local_nodes: u64,
    out: Vec<u128>,
    stop: bool,
    /// Frontier collection: nodes at this depth become tasks.
    split: Option<(u32, Vec<Node>)>,
}

impl Task<'_> {
    fn tick(&mut self) {
        self.local_nodes += 1;
        if self.local_nodes & 0x3ff == 0 {
            self.flush();
        }
    }

    fn flush(&mut self) {
        let total = self
            .shared
            .nodes
            .fetch_add(self.local_nodes, Ordering::Relaxed)
            + self.local_nodes;
        self.local_nodes = 0;
        if total > self.shared.budget {
            self.shared.over_budget.store(true, Ordering::Relaxed);
        }
        if self.shared.over_budget.load(Ordering::Relaxed)
            || self.shared.cut.load(Ordering::Relaxed) < self.index
        {
            self.stop = true;
        }
    }

    fn emit(&mut self, bits: u128) {
        let set = PointSet::from_mask_unchecked(Mask::from_u128(bits));
        if self.judge.accepts(&set) {
            self.out.push(bits);
            if self.out.len() >= self.limit {
                self.shared.cut.fetch_min(self.index, Ordering::Relaxed);
                self.stop = true;
            }
        }
    }
}

struct Kernel {
    universe: u128,
    universe_ids: Vec<u32>,
    lines: Vec<u128>,
    all_lines: u128,
    /// Indexed by point id: active lines through the point.
    point_lines: Vec<u128>,
    full_lines_forbidden: bool,
    minimal_only: bool,
    needs_blocking: bool,
    min_size: u32,
    max_size: u32,
    max_degree: usize,
}

fn bits(mut x: u128) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if x == 0 {
            return None;
        }
        let b = x.trailing_zeros();
        x &= x - 1;
        Some(b)
    })
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Calls `f` on every `t`-subset of `positions` (as a bitmask) until it
/// returns false.
fn for_each_combination(positions: &[u32], t: usize, mut f: impl FnMut(u128) -> bool) {
    let n = positions.len();
    if t > n {
        return;
    }
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        let mask = idx.iter().fold(0u128, |m, &i| m | 1u128 << positions[i]);
        if !f(mask) {
            return;
        }
        // advance to the next combination in lexicographic order
        let mut i = t;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - t {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl Kernel {
    fn new(geom: &dyn Geometry, query: &SearchQuery) -> Kernel {
        let plane = geom.plane();
        let universe = geom.universe().to_u128().expect("validated size");
        let lines: Vec<u128> = geom
            .line_ids()
            .iter()
            .map(|&l| geom.points_on(l).to_u128().expect("validated size"))
            .collect();
        let mut point_lines = vec![0u128; plane.size()];
        for (i, &l) in lines.iter().enumerate() {
            for p in bits(l) {
                point_lines[p as usize] |= 1 << i;
            }
        }
        let max_degree = point_lines
            .iter()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0);
        let all_lines = if lines.len() == 128 {
            u128::MAX
        } else {
            (1u128 << lines.len()) - 1
        };
        Kernel {
            universe,
            universe_ids: bits(universe).collect(),
            lines,
            all_lines,
            point_lines,
            full_lines_forbidden: !geom.allows_full_lines(),
            minimal_only: query.has(Filter::Minimal),
            needs_blocking: query.has(Filter::Blocking),
            min_size: query.min_size as u32,
            max_size: (query.max_size as u32).min(universe.count_ones()),
            max_degree,
        }
    }

    fn blocks(&self, set: u128) -> bool {
        self.lines
            .iter()
            .all(|&l| l & set != 0 && !(self.full_lines_forbidden && l & !set == 0))
    }

    /// Runs tasks in parallel and merges their outputs in task order.
    fn run_tasks<T: Sync>(
        &self,
        tasks: &[T],
        judge: &Judge<'_>,
        limit: Option<usize>,
        shared: &Shared,
        work: impl Fn(&T, &mut Task<'_>) + Sync,
    ) -> Result<(Vec<u128>, bool)> {
        let limit_n = limit.unwrap_or(usize::MAX);
        let outputs: Vec<Vec<u128>> = tasks
            .par_iter()
            .enumerate()
            .map(|(index, t)| {
                let mut task = Task {
                    index,
                    shared,
                    judge,
                    limit: limit_n,
                    local_nodes: 0,
                    out: Vec::new(),
                    stop: false,
                    split: None,
                };
                if shared.cut.load(Ordering::Relaxed) >= index {
                    work(t, &mut task);
                }
                task.flush();
                task.out
            })
            .collect();
        if shared.over_budget.load(Ordering::Relaxed) {
            return Err(Error::BudgetExceeded {
                budget: shared.budget,
                needed: shared.nodes.load(Ordering::Relaxed),
            });
        }
        let mut all: Vec<u128> = outputs.into_iter().flatten().collect();
        let complete = all.len() < limit_n;
        all.truncate(limit_n);
        Ok((all, complete))
    }

    fn exhaustive(
        &self,
        judge: &Judge<'_>,
        limit: Option<usize>,
        budget: u64,
    ) -> Result<(Vec<u128>, bool)> {
        let n = self.universe_ids.len() as u64;
        let raw: u128 = (self.min_size..=self.max_size)
            .map(|k| binomial(n, k as u64))
            .sum();
        if raw > budget as u128 {
            return Err(Error::BudgetExceeded {
                budget,
                needed: raw.min(u64::MAX as u128) as u64,
            });
        }
        let shared = Shared {
            nodes: AtomicU64::new(0),
            over_budget: AtomicBool::new(false),
            cut: AtomicUsize::new(usize::MAX),
            budget,
        };
        // one task per smallest element of the subset
        let firsts: Vec<usize> = (0..self.universe_ids.len()).collect();
        self.run_tasks(&firsts, judge, limit, &shared, |&i, task| {
            let first = 1u128 << self.universe_ids[i];
            let rest = &self.universe_ids[i + 1..];
            for t in self.min_size.saturating_sub(1)..self.max_size {
                for_each_combination(rest, t as usize, |combo| {
                    task.tick();
                    let set = first | combo;
                    if !self.needs_blocking || self.blocks(set) {
                        task.emit(set);
                    }
                    !task.stop
                });
                if task.stop {
                    break;
                }
            }
        })
    }

    fn pruned(
        &self,
        judge: &Judge<'_>,
        limit: Option<usize>,
        budget: u64,
    ) -> Result<(Vec<u128>, bool)> {
        let shared = Shared {
            nodes: AtomicU64::new(0),
            over_budget: AtomicBool::new(false),
            cut: AtomicUsize::new(usize::MAX),
            budget,
        };
        let root = Node {
            inc: 0,
            exc: 0,
            unhit: self.all_lines,
            size: 0,
        };
        let mut collector = Task {
            index: 0,
            shared: &shared,
            judge,
            limit: usize::MAX,
            local_nodes: 0,
            out: Vec::new(),
            stop: false,
            split: Some((SPLIT_DEPTH, Vec::new())),
        };
        self.visit(root, 0, &mut collector);
        collector.flush();
        let frontier = collector.split.take().map(|(_, v)| v).unwrap_or_default();
        self.run_tasks(&frontier, judge, limit, &shared, |&node, task| {
            self.visit(node, 0, task);
        })
    }

    fn visit(&self, node: Node, depth: u32, task: &mut Task<'_>) {
        if task.stop {
            return;
        }
        if let Some((at, frontier)) = task.split.as_mut() {
            if depth == *at || node.unhit == 0 {
                frontier.push(node);
                return;
            }
        }
        task.tick();
        if node.unhit == 0 {
            self.leaf(node, task);
            return;
        }
        let remaining = self.max_size.saturating_sub(node.size);
        if remaining == 0 {
            return;
        }
        let free = self.universe & !node.inc & !node.exc;

        // fail-first: the unblocked line with the fewest candidates
        let mut best = 0u128;
        let mut best_count = u32::MAX;
        for l in bits(node.unhit) {
            let cands = self.lines[l as usize] & free;
            let c = cands.count_ones();
            if c == 0 {
                return;
            }
            if c < best_count {
                best_count = c;
                best = cands;
            }
        }
        if !self.cover_possible(node.unhit, free, remaining) {
            return;
        }

        let mut exc = node.exc;
        for p in bits(best) {
            let inc = node.inc | 1u128 << p;
            if self.admissible(inc, p) {
                let child = Node {
                    inc,
                    exc,
                    unhit: node.unhit & !self.point_lines[p as usize],
                    size: node.size + 1,
                };
                self.visit(child, depth + 1, task);
                if task.stop {
                    return;
                }
            }
            exc |= 1u128 << p;
        }
    }

    /// Whether `remaining` more points can meet every unblocked line: the
    /// largest `remaining` per-point coverages must sum to at least the
    /// number of unblocked lines.
    fn cover_possible(&self, unhit: u128, free: u128, remaining: u32) -> bool {
        let need = unhit.count_ones() as usize;
        let mut by_degree = [0usize; 130];
        for p in bits(free) {
            by_degree[(self.point_lines[p as usize] & unhit).count_ones() as usize] += 1;
        }
        let mut left = remaining as usize;
        let mut covered = 0;
        for d in (1..=self.max_degree).rev() {
            let take = by_degree[d].min(left);
            covered += take * d;
            left -= take;
            if covered >= need {
                return true;
            }
            if left == 0 {
                break;
            }
        }
        covered >= need
    }

    fn admissible(&self, inc: u128, added: u32) -> bool {
        if self.full_lines_forbidden {
            for l in bits(self.point_lines[added as usize]) {
                if self.lines[l as usize] & !inc == 0 {
                    return false;
                }
            }
        }
        if self.minimal_only {
            // every chosen point must keep a line meeting the set only there
            for x in bits(inc) {
                let own = 1u128 << x;
                let alive =
                    bits(self.point_lines[x as usize]).any(|l| self.lines[l as usize] & inc == own);
                if !alive {
                    return false;
                }
            }
        }
        true
    }

    fn leaf(&self, node: Node, task: &mut Task<'_>) {
        if self.minimal_only {
            // a minimal blocking set containing `inc` equals it
            if node.size >= self.min_size {
                task.emit(node.inc);
            }
            return;
        }
        let free: Vec<u32> = bits(self.universe & !node.inc & !node.exc).collect();
        let lo = self.min_size.saturating_sub(node.size) as usize;
        let hi = (self.max_size - node.size) as usize;
        for t in lo..=hi.min(free.len()) {
            for_each_combination(&free, t, |extra| {
                task.tick();
                task.emit(node.inc | extra);
                !task.stop
            });
            if task.stop {
                return;
            }
        }
    }
}

/// One row of a size spectrum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub k: usize,
    pub minimal: usize,
    pub r_inf: usize,
    pub semioval: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub q: usize,
    /// Counts are over labelled point sets, not isomorphism classes.
    pub labeled_counts: bool,
    pub complete: bool,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumReport {
    pub fn row(&self, k: usize) -> Option<&SpectrumRow> {
        self.rows.iter().find(|r| r.k == k)
    }

    /// Plain-text table.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:>4} {:>10} {:>10} {:>10}\n",
            "k", "minimal", "r_inf", "semioval"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:>4} {:>10} {:>10} {:>10}\n",
                r.k, r.minimal, r.r_inf, r.semioval
            ));
        }
        out
    }
}

/// Labelled counts of minimal blocking sets per size, with how many of them
/// have the r-infinity property at some point and how many are semiovals.
pub fn spectrum_report(
    plane: &Plane,
    min_size: usize,
    max_size: usize,
    opts: &SearchOptions,
) -> Result<SpectrumReport> {
    let query = SearchQuery::projective(min_size, max_size, &[Filter::Blocking, Filter::Minimal]);
    let cert = enumerate(plane, &query, opts)?;
    let mut rows: Vec<SpectrumRow> = (min_size..=max_size)
        .map(|k| SpectrumRow {
            k,
            minimal: 0,
            r_inf: 0,
            semioval: 0,
        })
        .collect();
    for set in cert.point_sets(plane)? {
        let row = &mut rows[set.size() - min_size];
        row.minimal += 1;
        if !props::r_infinity_points(plane, &set)?.is_empty() {
            row.r_inf += 1;
        }
        if props::is_semioval(plane, &set) {
            row.semioval += 1;
        }
    }
    Ok(SpectrumReport {
        q: plane.q(),
        labeled_counts: true,
        complete: cert.complete,
        rows,
    })
}

/// Certifies that the affine plane has no blocking set of size `<= 2q - 2`.
/// Exhaustive for `q <= 4`, pruned above.
pub fn verify_affine_bound(frame: &AffineFrame<'_>, opts: &SearchOptions) -> Result<Certificate> {
    let plane = frame.plane();
    let q = plane.q();
    if q < 3 {
        return Err(Error::InvalidQuery(format!(
            "affine bound is only checked for q >= 3, got q = {q}"
        )));
    }
    let mode = if q <= 4 {
        Mode::Exhaustive
    } else {
        Mode::Pruned
    };
    let query =
        SearchQuery::affine(frame.r_inf(), 1, 2 * q - 2, &[Filter::Blocking]).with_mode(mode);
    enumerate(plane, &query, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(13, 6), 1716);
        assert_eq!(binomial(31, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        let total: u128 = (0..=13).map(|k| binomial(13, k)).sum();
        assert_eq!(total, 1 << 13);
    }

    #[test]
    fn combinations_enumerated_once() {
        let positions = [1, 4, 6, 9, 11];
        for t in 0..=5 {
            let mut seen = Vec::new();
            for_each_combination(&positions, t, |m| {
                seen.push(m);
                true
            });
            assert_eq!(seen.len() as u128, binomial(5, t as u64));
            let mut dedup = seen.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), seen.len());
            assert!(seen.iter().all(|m| m.count_ones() as usize == t));
        }
    }

    #[test]
    fn query_validation() {
        let plane = Plane::of_order(3).unwrap();
        let opts = SearchOptions::default();
        let bad = [
            SearchQuery::projective(0, 3, &[Filter::Blocking]),
            SearchQuery::projective(4, 3, &[Filter::Blocking]),
            SearchQuery::projective(1, 14, &[Filter::Blocking]),
            SearchQuery::projective(1, 6, &[Filter::Minimal]),
            SearchQuery::projective(1, 6, &[Filter::Semioval]),
            SearchQuery::projective(1, 6, &[Filter::Blocking, Filter::PiProperty(0)]),
            SearchQuery::affine(0, 1, 6, &[Filter::Blocking, Filter::Semioval]),
            SearchQuery::affine(0, 1, 6, &[Filter::Blocking, Filter::PiProperty(12)]),
            SearchQuery::projective(1, 6, &[Filter::Blocking]).with_limit(0),
        ];
        for q in bad {
            assert!(
                matches!(enumerate(&plane, &q, &opts), Err(Error::InvalidQuery(_))),
                "{q:?}"
            );
        }
        let big = Plane::of_order(11).unwrap();
        assert!(enumerate(
            &big,
            &SearchQuery::projective(1, 2, &[Filter::Blocking]),
            &opts
        )
        .is_err());
    }

    #[test]
    fn exhaustive_budget_guard() {
        let plane = Plane::of_order(7).unwrap();
        let query = SearchQuery::projective(1, 57, &[Filter::Blocking]).with_mode(Mode::Exhaustive);
        let err = enumerate(&plane, &query, &SearchOptions::default()).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn pruned_budget_guard() {
        let plane = Plane::of_order(4).unwrap();
        let query = SearchQuery::projective(1, 21, &[Filter::Blocking, Filter::Minimal]);
        let err =
            enumerate(&plane, &query, &SearchOptions::default().with_budget(5000)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 5000, .. }));
    }

    #[test]
    fn pg23_minimal_sets_all_size_six() {
        let plane = Plane::of_order(3).unwrap();
        let query = SearchQuery::projective(1, 13, &[Filter::Blocking, Filter::Minimal]);
        let cert = enumerate(&plane, &query, &SearchOptions::default()).unwrap();
        assert!(cert.complete);
        assert_eq!(cert.sizes(), vec![6]);
    }

    #[test]
    fn limit_marks_incomplete() {
        let plane = Plane::of_order(3).unwrap();
        let query =
            SearchQuery::projective(1, 13, &[Filter::Blocking, Filter::Minimal]).with_limit(5);
        let cert = enumerate(&plane, &query, &SearchOptions::default()).unwrap();
        assert!(!cert.complete);
        assert_eq!(cert.matches.len(), 5);
        let again = enumerate(&plane, &query, &SearchOptions::default().with_jobs(1)).unwrap();
        assert!(cert.same_outcome(&again));
    }

    #[test]
    fn affine_bound_guard_for_q2() {
        let plane = Plane::of_order(2).unwrap();
        let frame = AffineFrame::new(&plane, 0).unwrap();
        assert!(matches!(
            verify_affine_bound(&frame, &SearchOptions::default()),
            Err(Error::InvalidQuery(_))
        ));
    }

    #[test]
    fn certificate_json_shape() {
        let plane = Plane::of_order(3).unwrap();
        let query = SearchQuery::projective(6, 6, &[Filter::Blocking, Filter::Minimal]);
        let cert = enumerate(&plane, &query, &SearchOptions::default()).unwrap();
        let v = serde_json::to_value(&cert).unwrap();
        for key in ["query", "complete", "matches", "counts", "elapsed_ms"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["query"]["q"], 3);
        assert!(v["counts"]["6"].as_u64().unwrap() > 0);
        let back: Certificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, cert);
    }
}
