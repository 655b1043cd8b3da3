//! Branch-and-bound over the binary variables of a [`MilpModel`].
//!
//! The search dives depth-first until the first incumbent appears, then
//! switches to best-bound order. Open nodes are taken in batches of a fixed
//! size (independent of how many threads the [`Executor`] uses) and the LP
//! results of a batch are processed in batch order, so the whole search is a
//! deterministic function of the model and the options.
//!
//! Before branching, fractional binaries are rounded one at a time whenever
//! the rows they appear in stay satisfied and the objective does not rise.
//! A fully rounded point is re-optimised over the continuous variables and
//! becomes an incumbent; binaries that cannot be rounded this way are the
//! only branching candidates. Until the first incumbent, and on every
//! `POLISH_EVERY`-th node after it, those binaries are also snapped to the
//! nearest value and the result re-optimised.
//!
//! Every `RINS_INTERVAL` nodes a neighbourhood search fixes the binaries on
//! which the incumbent and the latest branched LP point agree and explores
//! the rest depth-first for `RINS_NODES` nodes.

mod brute;

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use thiserror::Error;

use crate::exec::{Executor, Sequential};
use crate::lp::{Basis, LpOptions, LpProblem, LpResult, LpStatus};
use crate::math::{abs, floor, round};
use crate::model::{MilpModel, ModelError, Sense, VarKind};

pub use brute::{brute_force_milp, DEFAULT_MAX_BINARIES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branching {
    /// Fractional part closest to one half; ties to the lowest index.
    MostFractional,
    /// Product of estimated up/down objective gains, falling back to most
    /// fractional for variables without history.
    PseudoCost,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Relative gap `(objective − bound) / max(1, |objective|)` at which the
    /// search stops.
    pub mip_gap: f64,
    pub node_limit: Option<usize>,
    /// Seconds; needs a [`Monitor`] that reports elapsed time.
    pub time_limit: Option<f64>,
    pub branching: Branching,
    /// Open nodes evaluated per round.
    pub batch_size: usize,
    /// Distance from {0, 1} still counted as integral.
    pub integrality_tol: f64,
    pub lp: LpOptions,
    /// Known feasible point. Its binaries are fixed and the continuous part
    /// re-optimised to seed the incumbent.
    pub initial_solution: Option<Vec<f64>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            mip_gap: 1e-4,
            node_limit: None,
            time_limit: None,
            branching: Branching::MostFractional,
            batch_size: 4,
            integrality_tol: 1e-6,
            lp: LpOptions::default(),
            initial_solution: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilpStatus {
    /// Gap closed to `mip_gap`.
    Optimal,
    Infeasible,
    /// The relaxation is unbounded.
    Unbounded,
    /// Stopped by the node or time limit with an incumbent.
    GapLimit,
    /// Stopped by the node or time limit without an incumbent.
    NodeLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpResult {
    pub status: MilpStatus,
    /// Incumbent (binaries exactly 0 or 1); empty without one.
    pub solution: Vec<f64>,
    pub objective: f64,
    pub bound: f64,
    pub gap: f64,
    pub nodes: usize,
    pub lp_iterations: usize,
    /// Node LPs that hit the iteration limit twice and were dropped.
    pub numerical_failures: usize,
}

impl MilpResult {
    pub fn has_incumbent(&self) -> bool {
        !self.solution.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MilpError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("mip_gap must be nonnegative, got {0}")]
    NegativeGap(f64),
    #[error("batch_size must be at least 1")]
    EmptyBatch,
    #[error("initial solution has {got} values for {expected} variables")]
    InitialLength { expected: usize, got: usize },
    #[error("{got} binaries exceed the brute-force limit of {limit}")]
    TooManyBinaries { got: usize, limit: usize },
}

/// Snapshot passed to [`Monitor::progress`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Progress {
    pub nodes: usize,
    pub open: usize,
    pub incumbent: f64,
    pub bound: f64,
    pub gap: f64,
}

impl fmt::Display for Progress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nodes={} open={} incumbent={:.9e} bound={:.9e} gap={:.3e}",
            self.nodes, self.open, self.incumbent, self.bound, self.gap
        )
    }
}

/// A solved node: its LP bound and the bound it inherited from its parent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeEvent {
    pub id: usize,
    pub depth: usize,
    pub parent_bound: f64,
    /// `+∞` when the node LP is infeasible.
    pub bound: f64,
}

/// Observer hooks. Every method has a no-op default.
pub trait Monitor {
    fn progress(&mut self, _p: &Progress) {}
    fn node(&mut self, _e: &NodeEvent) {}
    fn incumbent(&mut self, _objective: f64) {}
    /// Seconds since the solve started, if a clock is available.
    fn elapsed(&self) -> Option<f64> {
        None
    }
}

/// Monitor that ignores everything.
#[derive(Debug, Clone, Copy, Default)]
pub struct Silent;

impl Monitor for Silent {}

/// Relative gap as used throughout: `(objective − bound) / max(1, |objective|)`.
pub fn relative_gap(objective: f64, bound: f64) -> f64 {
    if !objective.is_finite() || !bound.is_finite() {
        return f64::INFINITY;
    }
    ((objective - bound) / abs(objective).max(1.0)).max(0.0)
}

#[derive(Debug, Clone)]
struct Node {
    id: usize,
    depth: usize,
    /// Parent LP objective.
    bound: f64,
    /// `bound` on a grid of [`BOUND_GRID`] times the root magnitude, so that
    /// LP round-off does not decide the order among equal bounds.
    key: f64,
    fixings: Vec<(usize, f64)>,
    warm: Option<Basis>,
    /// Branched variable, direction and the parent's fractional value.
    branch: Option<(usize, bool, f64)>,
}

struct ByBound(Node);

impl PartialEq for ByBound {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for ByBound {}
impl PartialOrd for ByBound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByBound {
    // Max-heap: the smallest bound comes out first; among equal bounds the
    // deepest node, then the oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .key
            .total_cmp(&self.0.key)
            .then_with(|| self.0.depth.cmp(&other.0.depth))
            .then_with(|| other.0.id.cmp(&self.0.id))
    }
}

struct Evaluated {
    lp: LpResult,
    /// Re-solve with every binary fixed at its integral or rounded value.
    polished: Option<LpResult>,
    /// True when the LP point was already integral.
    integral: bool,
    /// Fractional binaries the rounding pass could not fix.
    stuck: Vec<usize>,
}

struct Search<'a> {
    model: &'a MilpModel,
    problem: &'a LpProblem,
    opts: &'a SolveOptions,
    binaries: &'a [usize],
    root_lo: &'a [f64],
    root_up: &'a [f64],
    /// Rows (with coefficient) containing each variable; filled for binaries.
    columns: &'a [Vec<(usize, f64)>],
    /// Objective coefficient of every variable.
    cost: &'a [f64],
    incumbent: Option<(f64, Vec<f64>)>,
    /// Objective a solution must beat to count; finite in neighbourhood
    /// searches, which start from the caller's cutoff.
    ceiling: f64,
    stack: Vec<Node>,
    heap: BinaryHeap<ByBound>,
    /// Smallest bound among nodes pruned only because they could not improve
    /// the incumbent by more than the gap tolerance.
    pruned_bound: f64,
    next_id: usize,
    nodes: usize,
    lp_iterations: usize,
    failures: usize,
    pseudo: Vec<[(f64, usize); 2]>,
    /// Bound ordering resolution, set from the root LP objective.
    grid: f64,
    /// Node count at which the next neighbourhood search runs; `None` inside
    /// a neighbourhood search.
    next_rins: Option<usize>,
}

/// Row tolerance of the rounding pass, relative to `max(1, |rhs|)`.
const ROUND_TOL: f64 = 1e-7;

/// Once an incumbent exists, nodes whose rounding got stuck are still
/// polished when their id is a multiple of this.
const POLISH_EVERY: usize = 8;

/// Node limit of one neighbourhood search.
const RINS_NODES: usize = 64;

/// Main-search nodes between neighbourhood searches.
const RINS_INTERVAL: usize = 128;

/// Smallest share of binaries that must agree with the incumbent before a
/// neighbourhood search is worth running.
const RINS_MIN_FIXED: f64 = 0.5;

/// Relative resolution at which node bounds are ordered.
const BOUND_GRID: f64 = 1e-9;

fn is_integral(v: f64, tol: f64) -> bool {
    abs(v - round(v)) <= tol
}

impl<'a> Search<'a> {
    fn bounds_for(&self, fixings: &[(usize, f64)]) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.root_lo.to_vec();
        let mut up = self.root_up.to_vec();
        for &(v, x) in fixings {
            lo[v] = x;
            up[v] = x;
        }
        (lo, up)
    }

    fn evaluate(&self, node: &Node) -> Evaluated {
        let (lo, up) = self.bounds_for(&node.fixings);
        let mut lp = self.problem.solve(&lo, &up, node.warm.as_ref());
        if lp.status == LpStatus::IterationLimit && node.warm.is_some() {
            lp = self.problem.solve(&lo, &up, None);
        }
        let mut out = Evaluated { lp, polished: None, integral: false, stuck: Vec::new() };
        if out.lp.status != LpStatus::Optimal {
            return out;
        }
        let tol = self.opts.integrality_tol;
        let fractional: Vec<usize> =
            self.binaries.iter().copied().filter(|&v| !is_integral(out.lp.primal[v], tol)).collect();
        out.integral = fractional.is_empty();
        let mut x = out.lp.primal.clone();
        out.stuck = self.round(&mut x, &fractional);
        // Binaries the rounding pass left fractional are snapped to the
        // nearest value, which often still admits a feasible dispatch.
        if out.stuck.is_empty() || self.incumbent.is_none() || node.id % POLISH_EVERY == 0 {
            let (mut lo, mut up) = (lo, up);
            for &v in self.binaries {
                let r = round(x[v]);
                lo[v] = r;
                up[v] = r;
            }
            out.polished = Some(self.problem.solve(&lo, &up, out.lp.basis.as_ref()));
        }
        out
    }

    /// Rounds each of `fractional` (in order) to 0 or 1 if every row holding
    /// it stays satisfied and its objective term does not grow. Returns the
    /// variables left fractional.
    fn round(&self, x: &mut [f64], fractional: &[usize]) -> Vec<usize> {
        let mut stuck = Vec::new();
        let rows = &self.model.constraints;
        for &v in fractional {
            let near = round(x[v]);
            let chosen = [near, 1.0 - near].into_iter().find(|&r| {
                let delta = r - x[v];
                self.cost[v] * delta <= 0.0
                    && self.columns[v].iter().all(|&(row, a)| {
                        let c = &rows[row];
                        let act = self.model.row_activity(row, x) + a * delta;
                        let slack = ROUND_TOL * abs(c.rhs).max(1.0);
                        match c.sense {
                            Sense::Le => act <= c.rhs + slack,
                            Sense::Ge => act >= c.rhs - slack,
                            Sense::Eq => abs(act - c.rhs) <= slack,
                        }
                    })
            });
            match chosen {
                Some(r) => x[v] = r,
                None => stuck.push(v),
            }
        }
        stuck
    }

    fn cutoff(&self) -> f64 {
        match &self.incumbent {
            Some((obj, _)) => (obj - self.opts.mip_gap * abs(*obj).max(1.0)).min(self.ceiling),
            None => self.ceiling,
        }
    }

    fn open(&self) -> usize {
        self.stack.len() + self.heap.len()
    }

    fn best_open_bound(&self) -> f64 {
        let s = self.stack.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
        let h = self.heap.peek().map_or(f64::INFINITY, |n| n.0.bound);
        s.min(h)
    }

    fn global_bound(&self) -> f64 {
        let inc = self.incumbent.as_ref().map_or(f64::INFINITY, |i| i.0);
        self.best_open_bound().min(self.pruned_bound).min(inc)
    }

    fn push(&mut self, node: Node) {
        if self.incumbent.is_none() {
            self.stack.push(node);
        } else {
            self.heap.push(ByBound(node));
        }
    }

    /// Next nodes to evaluate. While diving only the two children of the
    /// latest branching are taken, so the dive is not diluted by older
    /// siblings.
    fn take_batch(&mut self) -> Vec<Node> {
        let size = if self.incumbent.is_none() { self.opts.batch_size.min(2) } else { self.opts.batch_size };
        let mut batch = Vec::with_capacity(size);
        while batch.len() < size {
            let next = if let Some(n) = self.stack.pop() { Some(n) } else { self.heap.pop().map(|b| b.0) };
            match next {
                Some(n) => batch.push(n),
                None => break,
            }
        }
        batch
    }

    fn set_incumbent<M: Monitor + ?Sized>(&mut self, x: Vec<f64>, monitor: &mut M) -> bool {
        let obj = self.model.objective_value(&x);
        if self.incumbent.as_ref().map_or(true, |(best, _)| obj < *best) {
            monitor.incumbent(obj);
            self.incumbent = Some((obj, x));
            // From now on nodes are explored in best-bound order.
            for n in core::mem::take(&mut self.stack) {
                self.heap.push(ByBound(n));
            }
            let cut = self.cutoff();
            let kept: Vec<ByBound> = core::mem::take(&mut self.heap).into_vec();
            for n in kept {
                if n.0.bound >= cut {
                    self.pruned_bound = self.pruned_bound.min(n.0.bound);
                } else {
                    self.heap.push(n);
                }
            }
            return true;
        }
        false
    }

    fn snap(&self, x: &[f64]) -> Vec<f64> {
        let mut x = x.to_vec();
        for &v in self.binaries {
            x[v] = round(x[v]);
        }
        x
    }

    fn choose_branch(&self, x: &[f64], candidates: &[usize]) -> Option<usize> {
        let tol = self.opts.integrality_tol;
        // Binaries coupling many rows (first-stage commitments) go first.
        let dense = candidates.iter().filter(|&&v| !is_integral(x[v], tol)).map(|&v| self.columns[v].len()).max()?;
        let mut best: Option<(usize, f64)> = None;
        for &v in candidates {
            let f = x[v] - floor(x[v]);
            if is_integral(x[v], tol) || 2 * self.columns[v].len() < dense {
                continue;
            }
            let score = match self.opts.branching {
                Branching::MostFractional => f.min(1.0 - f),
                Branching::PseudoCost => {
                    let est = |dir: usize| {
                        let (sum, n) = self.pseudo[v][dir];
                        if n == 0 { None } else { Some(sum / n as f64) }
                    };
                    match (est(0), est(1)) {
                        (Some(d), Some(u)) => (d * f).max(1e-6) * (u * (1.0 - f)).max(1e-6) + 1.0,
                        // Unknown variables rank below scored ones but keep
                        // the most-fractional order among themselves.
                        _ => f.min(1.0 - f) * 1e-3,
                    }
                }
            };
            if best.map_or(true, |(_, s)| score > s) {
                best = Some((v, score));
            }
        }
        best.map(|b| b.0)
    }

    fn branch(&mut self, node: &Node, lp: LpResult, var: usize) -> Vec<Node> {
        let x = lp.primal[var];
        // The up child is explored first when diving: committing more
        // capacity rarely makes a unit-commitment style subproblem infeasible.
        let children = [(true, 1.0), (false, 0.0)];
        let mut out = Vec::with_capacity(2);
        for &(up, value) in &children {
            let mut fixings = node.fixings.clone();
            fixings.push((var, value));
            let child = Node {
                id: self.next_id,
                depth: node.depth + 1,
                bound: lp.objective,
                key: floor(lp.objective / self.grid),
                fixings,
                warm: lp.basis.clone(),
                branch: Some((var, up, x)),
            };
            self.next_id += 1;
            out.push(child);
        }
        out
    }

    fn record_pseudo(&mut self, node: &Node, objective: f64) {
        if let Some((var, up, x)) = node.branch {
            let f = x - floor(x);
            let dist = if up { 1.0 - f } else { f };
            if dist > 1e-9 && objective.is_finite() {
                let slot = &mut self.pseudo[var][usize::from(up)];
                slot.0 += (objective - node.bound).max(0.0) / dist;
                slot.1 += 1;
            }
        }
    }
}

impl Node {
    fn root(fixings: Vec<(usize, f64)>, warm: Option<Basis>) -> Self {
        Node { id: 0, depth: 0, bound: f64::NEG_INFINITY, key: f64::NEG_INFINITY, fixings, warm, branch: None }
    }
}

/// Forwards only the clock, so a neighbourhood search honours the time limit
/// without reporting.
struct Muted<'m, M: ?Sized>(&'m M);

impl<M: Monitor + ?Sized> Monitor for Muted<'_, M> {
    fn elapsed(&self) -> Option<f64> {
        self.0.elapsed()
    }
}

impl Search<'_> {
    /// Evaluates open nodes until none remain or a limit is hit. Returns the
    /// root LP status and whether a limit stopped the search.
    fn run<E: Executor, M: Monitor + ?Sized>(
        &mut self,
        exec: &E,
        monitor: &mut M,
        node_limit: Option<usize>,
    ) -> (Option<LpStatus>, bool) {
        let mut root_status = None;
        while self.open() > 0 {
            if node_limit.is_some_and(|lim| self.nodes >= lim)
                || self.opts.time_limit.is_some_and(|lim| monitor.elapsed().is_some_and(|t| t >= lim))
            {
                return (root_status, true);
            }
            let batch = self.take_batch();
            let results = {
                let search = &*self;
                exec.map(batch.iter().collect::<Vec<_>>(), |_, node| search.evaluate(node))
            };
            // Children of each batch node, pushed after the batch so that the
            // first node's children end up on top of the dive stack.
            let mut children: Vec<Vec<Node>> = Vec::new();
            // LP point of the first node branched on in this batch.
            let mut anchor: Option<(Vec<f64>, Option<Basis>)> = None;
            for (node, ev) in batch.into_iter().zip(results) {
                self.nodes += 1;
                self.lp_iterations += ev.lp.iterations + ev.polished.as_ref().map_or(0, |p| p.iterations);
                let lp = ev.lp;
                if node.id == 0 {
                    root_status = Some(lp.status);
                    if lp.objective.is_finite() {
                        self.grid = BOUND_GRID * abs(lp.objective).max(1.0);
                    }
                }
                let bound = match lp.status {
                    LpStatus::Optimal => lp.objective.max(node.bound),
                    LpStatus::Infeasible => f64::INFINITY,
                    LpStatus::Unbounded => f64::NEG_INFINITY,
                    LpStatus::IterationLimit => {
                        self.failures += 1;
                        continue;
                    }
                };
                monitor.node(&NodeEvent { id: node.id, depth: node.depth, parent_bound: node.bound, bound: lp.objective });
                self.record_pseudo(&node, if lp.status == LpStatus::Optimal { lp.objective } else { f64::NAN });
                if lp.status == LpStatus::Unbounded {
                    if node.id == 0 {
                        break;
                    }
                    continue;
                }
                if lp.status == LpStatus::Infeasible {
                    continue;
                }
                if bound >= self.cutoff() {
                    self.pruned_bound = self.pruned_bound.min(bound);
                    continue;
                }
                if let Some(p) = ev.polished {
                    if p.status == LpStatus::Optimal {
                        let x = self.snap(&p.primal);
                        self.set_incumbent(x, monitor);
                        if ev.integral || bound >= self.cutoff() {
                            continue;
                        }
                    }
                }
                let candidates = if ev.stuck.is_empty() { self.binaries.to_vec() } else { ev.stuck };
                match self.choose_branch(&lp.primal, &candidates) {
                    Some(var) => {
                        if anchor.is_none() {
                            anchor = Some((lp.primal.clone(), lp.basis.clone()));
                        }
                        children.push(self.branch(&node, lp, var));
                    }
                    // Integral within tolerance but the rounded restriction
                    // failed; nothing further to try in this subtree.
                    None => self.failures += 1,
                }
            }
            for pair in children.into_iter().rev() {
                // The preferred child is pushed last and taken first.
                for child in pair.into_iter().rev() {
                    self.push(child);
                }
            }
            if self.nodes % 64 < self.opts.batch_size || self.open() == 0 {
                let inc = self.incumbent.as_ref().map_or(f64::INFINITY, |i| i.0);
                let bound = self.global_bound();
                monitor.progress(&Progress { nodes: self.nodes, open: self.open(), incumbent: inc, bound, gap: relative_gap(inc, bound) });
            }
            if let (Some(next), Some((x, warm))) = (self.next_rins, anchor) {
                if self.incumbent.is_some() && self.nodes >= next {
                    self.rins(&x, warm, exec, monitor);
                    self.next_rins = Some(self.nodes + RINS_INTERVAL);
                }
            }
        }
        (root_status, false)
    }

    /// Fixes the binaries on which `x` agrees with the incumbent and searches
    /// the rest depth-first for at most `RINS_NODES` nodes.
    fn rins<E: Executor, M: Monitor + ?Sized>(&mut self, x: &[f64], warm: Option<Basis>, exec: &E, monitor: &mut M) {
        let Some((_, inc)) = &self.incumbent else { return };
        let tol = self.opts.integrality_tol;
        let fixings: Vec<(usize, f64)> =
            self.binaries.iter().filter(|&&v| abs(x[v] - inc[v]) <= tol).map(|&v| (v, inc[v])).collect();
        let share = fixings.len() as f64 / self.binaries.len() as f64;
        if share < RINS_MIN_FIXED || fixings.len() == self.binaries.len() {
            return;
        }
        let mut sub = Search {
            incumbent: None,
            ceiling: self.cutoff(),
            stack: vec![Node::root(fixings, warm)],
            heap: BinaryHeap::new(),
            pruned_bound: f64::INFINITY,
            next_id: 1,
            nodes: 0,
            lp_iterations: 0,
            failures: 0,
            pseudo: self.pseudo.clone(),
            next_rins: None,
            ..*self
        };
        let muted: &mut dyn Monitor = &mut Muted(&*monitor);
        sub.run(exec, muted, Some(RINS_NODES));
        self.lp_iterations += sub.lp_iterations;
        if let Some((_, x)) = sub.incumbent {
            self.set_incumbent(x, monitor);
        }
    }
}

/// Solves `model` sequentially without a monitor.
pub fn solve_milp(model: &MilpModel, options: &SolveOptions) -> Result<MilpResult, MilpError> {
    solve_milp_with(model, options, &Sequential, &mut Silent)
}

/// Branch-and-bound with node LPs evaluated through `exec`.
pub fn solve_milp_with<E: Executor, M: Monitor + ?Sized>(
    model: &MilpModel,
    options: &SolveOptions,
    exec: &E,
    monitor: &mut M,
) -> Result<MilpResult, MilpError> {
    model.validate()?;
    if !(options.mip_gap >= 0.0) {
        return Err(MilpError::NegativeGap(options.mip_gap));
    }
    if options.batch_size == 0 {
        return Err(MilpError::EmptyBatch);
    }
    if let Some(x) = &options.initial_solution {
        if x.len() != model.num_vars() {
            return Err(MilpError::InitialLength { expected: model.num_vars(), got: x.len() });
        }
    }
    let problem = LpProblem::new(model, options.lp.clone());
    let (root_lo, root_up) = (problem.bounds().0.to_vec(), problem.bounds().1.to_vec());
    let binaries = model.binaries();
    let mut columns = vec![Vec::new(); model.num_vars()];
    for (row, c) in model.constraints.iter().enumerate() {
        for &(v, a) in &c.terms {
            if model.variables[v].kind == VarKind::Binary {
                columns[v].push((row, a));
            }
        }
    }
    let cost = model.cost_vector();
    let mut s = Search {
        model,
        problem: &problem,
        opts: options,
        binaries: &binaries,
        root_lo: &root_lo,
        root_up: &root_up,
        columns: &columns,
        cost: &cost,
        incumbent: None,
        ceiling: f64::INFINITY,
        stack: Vec::new(),
        heap: BinaryHeap::new(),
        pruned_bound: f64::INFINITY,
        next_id: 1,
        nodes: 0,
        lp_iterations: 0,
        failures: 0,
        pseudo: vec![[(0.0, 0); 2]; model.num_vars()],
        grid: BOUND_GRID,
        next_rins: Some(0),
    };

    if let Some(x) = &options.initial_solution {
        let fixings: Vec<(usize, f64)> = s.binaries.iter().map(|&v| (v, round(x[v]).clamp(0.0, 1.0))).collect();
        let (lo, up) = s.bounds_for(&fixings);
        let lp = s.problem.solve(&lo, &up, None);
        s.lp_iterations += lp.iterations;
        if lp.status == LpStatus::Optimal {
            let x = s.snap(&lp.primal);
            s.set_incumbent(x, monitor);
        }
    }

    s.stack.push(Node::root(Vec::new(), None));
    let (root_status, stopped) = s.run(exec, monitor, options.node_limit);

    let bound = s.global_bound();
    let (status, solution, objective) = match (root_status, s.incumbent.take()) {
        (Some(LpStatus::Unbounded), _) => (MilpStatus::Unbounded, Vec::new(), f64::NEG_INFINITY),
        (_, Some((obj, x))) => {
            let status = if stopped && relative_gap(obj, bound) > options.mip_gap {
                MilpStatus::GapLimit
            } else {
                MilpStatus::Optimal
            };
            (status, x, obj)
        }
        (_, None) if stopped => (MilpStatus::NodeLimit, Vec::new(), f64::INFINITY),
        (_, None) => (MilpStatus::Infeasible, Vec::new(), f64::INFINITY),
    };
    let gap = if solution.is_empty() { f64::INFINITY } else { relative_gap(objective, bound) };
    Ok(MilpResult {
        status,
        solution,
        objective,
        bound: if status == MilpStatus::Infeasible { f64::INFINITY } else { bound },
        gap,
        nodes: s.nodes,
        lp_iterations: s.lp_iterations,
        numerical_failures: s.failures,
    })
}
