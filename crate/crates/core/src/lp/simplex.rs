//! Bounded revised simplex on `A x + s = b`, `lo ≤ (x, s) ≤ up`.
//!
//! Every row owns a logical variable `s` whose bounds encode the row sense
//! (`≤` → `s ≥ 0`, `≥` → `s ≤ 0`, `=` → `s = 0`). Phase 1 minimises the sum of
//! bound violations of the basic variables, so an equality row whose logical
//! cannot absorb the residual plays the part of an artificial variable.
//! The dual simplex is used when a warm-start basis is dual feasible.

use alloc::vec;
use alloc::vec::Vec;

use super::lu::{BasisFactor, LuFactors};
use super::{LpOptions, VarState};
use crate::math::abs;

const PIVOT_TOL: f64 = 1e-9;

/// Wrong-signed reduced costs up to this size on unboxed variables are left
/// for the primal clean-up pass instead of abandoning the dual simplex.
const DUAL_DRIFT: f64 = 1e-5;

/// Problem data after scaling. Columns `0..n` are structural, `n..n+m` logical.
#[derive(Debug, Clone)]
pub(crate) struct StdForm {
    pub m: usize,
    pub n: usize,
    pub col_start: Vec<usize>,
    pub row_idx: Vec<usize>,
    pub val: Vec<f64>,
    pub b: Vec<f64>,
    pub cost: Vec<f64>,
    pub lo: Vec<f64>,
    pub up: Vec<f64>,
    /// Row indices `0..m`, used as the pattern of logical columns.
    pub unit_idx: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    NotDualFeasible,
}

pub(crate) struct Simplex<'a> {
    sf: &'a StdForm,
    opts: &'a LpOptions,
    pub lo: Vec<f64>,
    pub up: Vec<f64>,
    pub x: Vec<f64>,
    pub state: Vec<VarState>,
    pub basis: Vec<usize>,
    pos_of: Vec<usize>,
    factor: BasisFactor,
    pub iterations: usize,
    max_iterations: usize,
    degenerate_run: usize,
    bland: bool,
    fresh: bool,
    // Scratch vectors.
    by_row: Vec<f64>,
    by_pos: Vec<f64>,
    alpha: Vec<f64>,
    pub y: Vec<f64>,
    pub d: Vec<f64>,
}

const ONE: [f64; 1] = [1.0];

impl<'a> Simplex<'a> {
    pub(crate) fn new(sf: &'a StdForm, opts: &'a LpOptions, lo: Vec<f64>, up: Vec<f64>, warm: Option<&[VarState]>) -> Self {
        let total = sf.n + sf.m;
        let mut state = vec![VarState::Lower; total];
        let mut use_warm = false;
        if let Some(w) = warm {
            if w.len() == total && w.iter().filter(|s| **s == VarState::Basic).count() == sf.m {
                state.copy_from_slice(w);
                use_warm = true;
            }
        }
        if !use_warm {
            for j in 0..sf.n {
                state[j] = VarState::Lower;
            }
            for r in 0..sf.m {
                state[sf.n + r] = VarState::Basic;
            }
        }
        let mut basis = Vec::with_capacity(sf.m);
        let mut pos_of = vec![usize::MAX; total];
        for j in 0..total {
            if state[j] == VarState::Basic {
                pos_of[j] = basis.len();
                basis.push(j);
            }
        }
        let mut s = Self {
            sf,
            opts,
            lo,
            up,
            x: vec![0.0; total],
            state,
            basis,
            pos_of,
            factor: BasisFactor::new(LuFactors::factor(0, |_| (&[][..], &[][..])).0),
            iterations: 0,
            max_iterations: opts.max_iterations.unwrap_or(20_000 + 20 * (sf.m + sf.n)),
            degenerate_run: 0,
            bland: false,
            fresh: false,
            by_row: vec![0.0; sf.m],
            by_pos: vec![0.0; sf.m],
            alpha: vec![0.0; sf.m],
            y: vec![0.0; sf.m],
            d: vec![0.0; total],
        };
        for j in 0..total {
            if s.state[j] != VarState::Basic {
                s.state[j] = s.nonbasic_state(j, s.state[j]);
            }
        }
        s.refactor();
        s
    }

    fn column(&self, j: usize) -> (&'a [usize], &'a [f64]) {
        let sf = self.sf;
        if j < sf.n {
            let (a, b) = (sf.col_start[j], sf.col_start[j + 1]);
            (&sf.row_idx[a..b], &sf.val[a..b])
        } else {
            let r = j - sf.n;
            (&sf.unit_idx[r..r + 1], &ONE[..])
        }
    }

    fn col_dot(&self, j: usize, v: &[f64]) -> f64 {
        let (idx, val) = self.column(j);
        idx.iter().zip(val).map(|(&i, &a)| a * v[i]).sum()
    }

    fn cost(&self, j: usize) -> f64 {
        if j < self.sf.n {
            self.sf.cost[j]
        } else {
            0.0
        }
    }

    /// Valid nonbasic state for the current bounds, keeping `wanted` when
    /// possible.
    fn nonbasic_state(&self, j: usize, wanted: VarState) -> VarState {
        let (l, u) = (self.lo[j], self.up[j]);
        match wanted {
            VarState::Upper if u.is_finite() => VarState::Upper,
            _ if l.is_finite() => VarState::Lower,
            _ if u.is_finite() => VarState::Upper,
            _ => VarState::Free,
        }
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.state[j] {
            VarState::Lower => self.lo[j],
            VarState::Upper => self.up[j],
            _ => 0.0,
        }
    }

    fn refactor(&mut self) {
        let m = self.sf.m;
        let (lu, replaced) = {
            let basis = &self.basis;
            let sf = self.sf;
            LuFactors::factor(m, |p| {
                let j = basis[p];
                if j < sf.n {
                    let (a, b) = (sf.col_start[j], sf.col_start[j + 1]);
                    (&sf.row_idx[a..b], &sf.val[a..b])
                } else {
                    let r = j - sf.n;
                    (&sf.unit_idx[r..r + 1], &ONE[..])
                }
            })
        };
        for (p, r) in replaced {
            let out = self.basis[p];
            let logical = self.sf.n + r;
            self.state[out] = self.nonbasic_state(out, VarState::Lower);
            self.pos_of[out] = usize::MAX;
            self.basis[p] = logical;
            self.state[logical] = VarState::Basic;
            self.pos_of[logical] = p;
        }
        self.factor = BasisFactor::new(lu);
        self.compute_primal();
        self.fresh = true;
    }

    fn compute_primal(&mut self) {
        let total = self.sf.n + self.sf.m;
        self.by_row.copy_from_slice(&self.sf.b);
        for j in 0..total {
            if self.state[j] == VarState::Basic {
                continue;
            }
            let v = self.nonbasic_value(j);
            self.x[j] = v;
            if v != 0.0 {
                let (idx, val) = self.column(j);
                for (&i, &a) in idx.iter().zip(val) {
                    self.by_row[i] -= a * v;
                }
            }
        }
        self.factor.ftran(&mut self.by_row, &mut self.by_pos);
        for p in 0..self.sf.m {
            self.x[self.basis[p]] = self.by_pos[p];
        }
    }

    fn infeasibility(&self, j: usize) -> f64 {
        let v = self.x[j];
        if v < self.lo[j] {
            self.lo[j] - v
        } else if v > self.up[j] {
            v - self.up[j]
        } else {
            0.0
        }
    }

    fn max_primal_infeasibility(&self) -> f64 {
        self.basis.iter().map(|&j| self.infeasibility(j)).fold(0.0, f64::max)
    }

    /// Duals for basic costs `cb` (by position) and reduced costs of all
    /// nonbasic variables for costs `c(j)`.
    fn price(&mut self, phase1: bool) {
        let tol = self.opts.feasibility_tol;
        for p in 0..self.sf.m {
            let j = self.basis[p];
            self.by_pos[p] = if phase1 {
                if self.x[j] < self.lo[j] - tol {
                    -1.0
                } else if self.x[j] > self.up[j] + tol {
                    1.0
                } else {
                    0.0
                }
            } else {
                self.cost(j)
            };
        }
        self.factor.btran(&mut self.by_pos, &mut self.y);
        let total = self.sf.n + self.sf.m;
        for j in 0..total {
            self.d[j] = if self.state[j] == VarState::Basic {
                0.0
            } else {
                let c = if phase1 { 0.0 } else { self.cost(j) };
                c - self.col_dot(j, &self.y)
            };
        }
    }

    fn ftran_column(&mut self, j: usize) {
        self.by_row.iter_mut().for_each(|v| *v = 0.0);
        let (idx, val) = self.column(j);
        for (&i, &a) in idx.iter().zip(val) {
            self.by_row[i] = a;
        }
        self.factor.ftran(&mut self.by_row, &mut self.alpha);
    }

    fn iteration_guard(&mut self) -> bool {
        self.iterations += 1;
        if self.factor.updates() >= self.opts.refactor_interval {
            self.refactor();
        }
        self.iterations <= self.max_iterations
    }

    fn note_step(&mut self, step: f64) {
        if step <= 1e-12 {
            self.degenerate_run += 1;
            if self.degenerate_run >= self.opts.bland_after {
                self.bland = true;
            }
        } else {
            self.degenerate_run = 0;
        }
    }

    fn pivot(&mut self, pos: usize, entering: usize, leaving_state: VarState) {
        let leaving = self.basis[pos];
        self.factor.update(pos, &self.alpha);
        self.basis[pos] = entering;
        self.pos_of[entering] = pos;
        self.state[entering] = VarState::Basic;
        self.pos_of[leaving] = usize::MAX;
        self.state[leaving] = leaving_state;
        self.x[leaving] = self.nonbasic_value(leaving);
        self.fresh = false;
    }

    fn choose_entering(&self) -> Option<usize> {
        let tol = self.opts.optimality_tol;
        let total = self.sf.n + self.sf.m;
        let mut best: Option<(usize, f64)> = None;
        for j in 0..total {
            let dj = self.d[j];
            let eligible = match self.state[j] {
                VarState::Basic => false,
                VarState::Lower => dj < -tol && self.up[j] > self.lo[j],
                VarState::Upper => dj > tol && self.up[j] > self.lo[j],
                VarState::Free => abs(dj) > tol,
            };
            if !eligible {
                continue;
            }
            if self.bland {
                return Some(j);
            }
            if best.map_or(true, |(_, s)| abs(dj) > s) {
                best = Some((j, abs(dj)));
            }
        }
        best.map(|b| b.0)
    }

    /// Primal simplex, phase 1 and phase 2, from the current basis.
    pub(crate) fn primal(&mut self) -> Outcome {
        let ftol = self.opts.feasibility_tol;
        loop {
            if !self.iteration_guard() {
                return Outcome::IterationLimit;
            }
            let phase1 = self.max_primal_infeasibility() > ftol;
            self.price(phase1);
            let Some(q) = self.choose_entering() else {
                if !self.fresh {
                    self.refactor();
                    continue;
                }
                if phase1 {
                    return Outcome::Infeasible;
                }
                return Outcome::Optimal;
            };
            let sigma = if self.d[q] < 0.0 { 1.0 } else { -1.0 };
            self.ftran_column(q);
            match self.primal_ratio(q, sigma, phase1) {
                Ratio::Unbounded => {
                    if !self.fresh {
                        self.refactor();
                        continue;
                    }
                    if phase1 {
                        // Numerically lost: no blocking row although phase 1
                        // must be bounded below.
                        return Outcome::Infeasible;
                    }
                    return Outcome::Unbounded;
                }
                Ratio::Flip(theta) => {
                    self.apply_step(q, sigma, theta);
                    self.state[q] = if self.state[q] == VarState::Upper { VarState::Lower } else { VarState::Upper };
                    self.x[q] = self.nonbasic_value(q);
                    self.note_step(theta);
                }
                Ratio::Leave { pos, theta, to_upper } => {
                    self.apply_step(q, sigma, theta);
                    let leaving = self.basis[pos];
                    let st = if to_upper && self.up[leaving] > self.lo[leaving] { VarState::Upper } else { VarState::Lower };
                    self.pivot(pos, q, st);
                    self.note_step(theta);
                }
            }
        }
    }

    fn apply_step(&mut self, q: usize, sigma: f64, theta: f64) {
        if theta == 0.0 {
            return;
        }
        self.x[q] += sigma * theta;
        for p in 0..self.sf.m {
            let a = self.alpha[p];
            if a != 0.0 {
                self.x[self.basis[p]] -= sigma * theta * a;
            }
        }
    }

    fn primal_ratio(&self, q: usize, sigma: f64, phase1: bool) -> Ratio {
        let tol = self.opts.feasibility_tol;
        let range = self.up[q] - self.lo[q];
        // (pos, exact ratio, relaxed ratio, |delta|, to_upper)
        let mut cands: Vec<(usize, f64, f64, f64, bool)> = Vec::new();
        for p in 0..self.sf.m {
            let a = self.alpha[p];
            if abs(a) <= PIVOT_TOL {
                continue;
            }
            let j = self.basis[p];
            let delta = -sigma * a;
            let (xj, l, u) = (self.x[j], self.lo[j], self.up[j]);
            if delta < 0.0 {
                if phase1 && xj > u + tol {
                    cands.push((p, (xj - u) / -delta, (xj - u) / -delta, -delta, true));
                } else if phase1 && xj < l - tol {
                    continue;
                } else if l.is_finite() {
                    cands.push((p, (xj - l) / -delta, (xj - l + tol) / -delta, -delta, false));
                }
            } else if phase1 && xj < l - tol {
                cands.push((p, (l - xj) / delta, (l - xj) / delta, delta, false));
            } else if phase1 && xj > u + tol {
                continue;
            } else if u.is_finite() {
                cands.push((p, (u - xj) / delta, (u - xj + tol) / delta, delta, true));
            }
        }
        if cands.is_empty() {
            return if range.is_finite() { Ratio::Flip(range) } else { Ratio::Unbounded };
        }
        let chosen = if self.bland {
            let min = cands.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
            cands
                .iter()
                .filter(|c| c.1 <= min + 1e-12)
                .min_by_key(|c| self.basis[c.0])
                .copied()
                .unwrap()
        } else {
            let bound = cands.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
            let mut best = None::<(usize, f64, f64, f64, bool)>;
            for c in &cands {
                if c.1 <= bound && best.map_or(true, |b| c.3 > b.3) {
                    best = Some(*c);
                }
            }
            best.unwrap()
        };
        let theta = chosen.1.max(0.0);
        if range.is_finite() && range <= theta {
            return Ratio::Flip(range);
        }
        Ratio::Leave { pos: chosen.0, theta, to_upper: chosen.4 }
    }

    /// Moves boxed nonbasic variables with wrong-signed reduced costs to the
    /// opposite bound. Returns false if an unboxed variable is dual infeasible
    /// beyond the drift tolerance.
    fn restore_dual_feasibility(&mut self) -> bool {
        let tol = self.opts.optimality_tol;
        let mut flipped = false;
        let mut feasible = true;
        for j in 0..self.sf.n + self.sf.m {
            let wrong = match self.state[j] {
                VarState::Basic => false,
                _ if self.up[j] == self.lo[j] => false,
                VarState::Lower => self.d[j] < -tol,
                VarState::Upper => self.d[j] > tol,
                VarState::Free => abs(self.d[j]) > DUAL_DRIFT,
            };
            if !wrong {
                continue;
            }
            let boxed = self.lo[j].is_finite() && self.up[j].is_finite();
            if boxed {
                self.state[j] = if self.state[j] == VarState::Lower { VarState::Upper } else { VarState::Lower };
                flipped = true;
            } else if abs(self.d[j]) > DUAL_DRIFT {
                feasible = false;
            }
        }
        if flipped {
            self.compute_primal();
        }
        feasible
    }

    /// Dual simplex from a dual-feasible basis.
    pub(crate) fn dual(&mut self) -> Outcome {
        let ftol = self.opts.feasibility_tol;
        let otol = self.opts.optimality_tol;
        let total = self.sf.n + self.sf.m;
        let mut rho = vec![0.0; self.sf.m];
        let mut tau = vec![0.0; self.sf.m];
        let mut row = vec![0.0; total];
        // Dual steepest-edge weights ‖e_pᵀB⁻¹‖², by basis position, starting
        // from the identity approximation.
        let mut weights = vec![1.0; self.sf.m];
        loop {
            if !self.iteration_guard() {
                return Outcome::IterationLimit;
            }
            self.price(false);
            if !self.restore_dual_feasibility() {
                return Outcome::NotDualFeasible;
            }
            // Leaving row: largest steepest-edge scaled bound violation.
            let mut leave: Option<(usize, f64)> = None;
            for p in 0..self.sf.m {
                let inf = self.infeasibility(self.basis[p]);
                if inf <= ftol {
                    continue;
                }
                let inf = inf * inf / weights[p];
                let better = match leave {
                    None => true,
                    Some((bp, bi)) => {
                        if self.bland {
                            self.basis[p] < self.basis[bp]
                        } else {
                            inf > bi
                        }
                    }
                };
                if better {
                    leave = Some((p, inf));
                }
            }
            let Some((r, _)) = leave else {
                if !self.fresh {
                    self.refactor();
                    continue;
                }
                return Outcome::Optimal;
            };
            let jr = self.basis[r];
            let to_lower = self.x[jr] < self.lo[jr];
            let target = if to_lower { self.lo[jr] } else { self.up[jr] };
            self.by_pos.iter_mut().for_each(|v| *v = 0.0);
            self.by_pos[r] = 1.0;
            self.factor.btran(&mut self.by_pos, &mut rho);
            weights[r] = rho.iter().map(|v| v * v).sum::<f64>().max(1e-12);
            // Candidates: (j, exact ratio, relaxed ratio, |alpha|)
            let mut cands: Vec<(usize, f64, f64, f64)> = Vec::new();
            for j in 0..total {
                if self.state[j] == VarState::Basic || self.up[j] == self.lo[j] {
                    continue;
                }
                let a = self.col_dot(j, &rho);
                row[j] = a;
                if abs(a) <= PIVOT_TOL {
                    continue;
                }
                let dj = self.d[j];
                // Sign of alpha that lets x_j move x_r towards its bound.
                let ok = match self.state[j] {
                    VarState::Lower => (to_lower && a < 0.0) || (!to_lower && a > 0.0),
                    VarState::Upper => (to_lower && a > 0.0) || (!to_lower && a < 0.0),
                    VarState::Free => true,
                    VarState::Basic => false,
                };
                if !ok {
                    continue;
                }
                let mag = abs(dj);
                let mag = if matches!(self.state[j], VarState::Lower) && dj < 0.0
                    || matches!(self.state[j], VarState::Upper) && dj > 0.0
                {
                    0.0
                } else {
                    mag
                };
                cands.push((j, mag / abs(a), (mag + otol) / abs(a), abs(a)));
            }
            if cands.is_empty() {
                if !self.fresh {
                    self.refactor();
                    continue;
                }
                return Outcome::Infeasible;
            }
            let mut flips: Vec<usize> = Vec::new();
            let chosen = if self.bland {
                let min = cands.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
                *cands.iter().filter(|c| c.1 <= min + 1e-12).min_by_key(|c| c.0).unwrap()
            } else {
                // Bound-flipping ratio test: boxed candidates are passed over
                // (moved to their other bound) while the leaving row's
                // infeasibility is not yet used up.
                cands.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
                let mut slope = abs(self.x[jr] - target);
                let mut start = 0;
                while start + 1 < cands.len() {
                    let (j, _, _, a) = cands[start];
                    let next = slope - a * (self.up[j] - self.lo[j]);
                    if !(next > 0.0) {
                        break;
                    }
                    slope = next;
                    flips.push(j);
                    start += 1;
                }
                let rest = &cands[start..];
                let bound = rest.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
                let mut best = None::<(usize, f64, f64, f64)>;
                for c in rest {
                    if c.1 <= bound && best.map_or(true, |b| c.3 > b.3) {
                        best = Some(*c);
                    }
                }
                best.unwrap()
            };
            let q = chosen.0;
            self.ftran_column(q);
            let arq = self.alpha[r];
            if abs(arq) <= PIVOT_TOL || abs(arq - row[q]) > 1e-6 * (1.0 + abs(arq)) {
                if !self.fresh {
                    self.refactor();
                    continue;
                }
                // Unstable pivot even on a fresh factorisation; hand over to
                // the primal simplex.
                return Outcome::NotDualFeasible;
            }
            self.by_row.copy_from_slice(&rho);
            self.factor.ftran(&mut self.by_row, &mut tau);
            let wr = weights[r];
            for p in 0..self.sf.m {
                let a = self.alpha[p];
                if p == r || a == 0.0 {
                    continue;
                }
                let ratio = a / arq;
                weights[p] = (weights[p] - 2.0 * ratio * tau[p] + ratio * ratio * wr).max(1e-4);
            }
            weights[r] = (wr / (arq * arq)).max(1e-4);
            if !flips.is_empty() {
                self.by_row.iter_mut().for_each(|v| *v = 0.0);
                for &j in &flips {
                    let old = self.x[j];
                    self.state[j] = if self.state[j] == VarState::Lower { VarState::Upper } else { VarState::Lower };
                    let new = self.nonbasic_value(j);
                    self.x[j] = new;
                    let (idx, val) = self.column(j);
                    for (&i, &a) in idx.iter().zip(val) {
                        self.by_row[i] += a * (new - old);
                    }
                }
                self.factor.ftran(&mut self.by_row, &mut self.by_pos);
                for p in 0..self.sf.m {
                    self.x[self.basis[p]] -= self.by_pos[p];
                }
            }
            let step = (self.x[jr] - target) / arq;
            self.x[q] += step;
            for p in 0..self.sf.m {
                let a = self.alpha[p];
                if a != 0.0 {
                    self.x[self.basis[p]] -= step * a;
                }
            }
            let st = if to_lower { VarState::Lower } else { VarState::Upper };
            self.pivot(r, q, st);
            self.note_step(chosen.1);
        }
    }
}

enum Ratio {
    Unbounded,
    Flip(f64),
    Leave { pos: usize, theta: f64, to_upper: bool },
}
