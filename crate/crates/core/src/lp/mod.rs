//! Linear programming relaxation engine.
//!
//! [`LpProblem`] prepares (scales and stores column-wise) the continuous
//! relaxation of a [`MilpModel`] once; [`LpProblem::solve`] can then be called
//! repeatedly with different column bounds and an optional warm-start
//! [`Basis`], which is what branch-and-bound does at every node.

mod lu;
mod simplex;

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, exp2, log2, round, sqrt};
use crate::model::{MilpModel, Sense};
use simplex::{Outcome, Simplex, StdForm};

#[derive(Debug, Clone, PartialEq)]
pub struct LpOptions {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    /// Eta updates between fresh factorisations.
    pub refactor_interval: usize,
    /// Defaults to `20000 + 20·(rows + columns)`.
    pub max_iterations: Option<usize>,
    /// Geometric row/column scaling.
    pub scaling: bool,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-7,
            optimality_tol: 1e-7,
            bland_after: 1000,
            refactor_interval: 100,
            max_iterations: None,
            scaling: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration budget exhausted; not reached on well-posed problems.
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarState {
    Basic,
    Lower,
    Upper,
    Free,
}

/// Simplex basis over structural then logical (one per row) variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    pub states: Vec<VarState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    /// `cᵀx + constant` at `primal` (meaningful when optimal).
    pub objective: f64,
    pub primal: Vec<f64>,
    /// Row duals `y` with reduced costs `c − Aᵀy`. For a minimisation,
    /// `≤` rows have `y ≤ 0` and `≥` rows `y ≥ 0`.
    pub dual: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub iterations: usize,
    pub basis: Option<Basis>,
}

/// Scaled, column-wise copy of a model's continuous relaxation.
#[derive(Debug, Clone)]
pub struct LpProblem {
    sf: StdForm,
    col_scale: Vec<f64>,
    row_scale: Vec<f64>,
    cost_scale: f64,
    cost: Vec<f64>,
    constant: f64,
    lower: Vec<f64>,
    upper: Vec<f64>,
    options: LpOptions,
}

fn pow2(x: f64) -> f64 {
    if !(x > 0.0) || !x.is_finite() {
        return 1.0;
    }
    exp2(round(log2(x)))
}

impl LpProblem {
    pub fn new(model: &MilpModel, options: LpOptions) -> Self {
        let n = model.num_vars();
        let m = model.num_constraints();
        let mut counts = vec![0usize; n + 1];
        for row in &model.constraints {
            for &(v, _) in &row.terms {
                counts[v + 1] += 1;
            }
        }
        for j in 0..n {
            counts[j + 1] += counts[j];
        }
        let col_start = counts.clone();
        let nnz = col_start[n];
        let mut row_idx = vec![0usize; nnz];
        let mut val = vec![0.0; nnz];
        let mut fill = counts;
        for (r, row) in model.constraints.iter().enumerate() {
            for &(v, a) in &row.terms {
                row_idx[fill[v]] = r;
                val[fill[v]] = a;
                fill[v] += 1;
            }
        }

        let mut row_scale = vec![1.0; m];
        let mut col_scale = vec![1.0; n];
        if options.scaling {
            for _ in 0..8 {
                let mut rmin = vec![f64::INFINITY; m];
                let mut rmax = vec![0.0f64; m];
                for j in 0..n {
                    for e in col_start[j]..col_start[j + 1] {
                        let a = abs(val[e]) * col_scale[j];
                        let r = row_idx[e];
                        rmin[r] = rmin[r].min(a);
                        rmax[r] = rmax[r].max(a);
                    }
                }
                for r in 0..m {
                    if rmax[r] > 0.0 {
                        row_scale[r] = 1.0 / sqrt(rmin[r] * rmax[r]);
                    }
                }
                for j in 0..n {
                    let mut cmin = f64::INFINITY;
                    let mut cmax = 0.0f64;
                    for e in col_start[j]..col_start[j + 1] {
                        let a = abs(val[e]) * row_scale[row_idx[e]];
                        cmin = cmin.min(a);
                        cmax = cmax.max(a);
                    }
                    if cmax > 0.0 {
                        col_scale[j] = 1.0 / sqrt(cmin * cmax);
                    }
                }
            }
            row_scale.iter_mut().for_each(|s| *s = pow2(*s));
            col_scale.iter_mut().for_each(|s| *s = pow2(*s));
        }
        for j in 0..n {
            for e in col_start[j]..col_start[j + 1] {
                val[e] *= row_scale[row_idx[e]] * col_scale[j];
            }
        }

        let cost = model.cost_vector();
        let mut cost_scale = 1.0;
        if options.scaling {
            let cmax = cost.iter().zip(&col_scale).map(|(c, s)| abs(c * s)).fold(0.0, f64::max);
            if cmax > 0.0 {
                cost_scale = pow2(1.0 / cmax);
            }
        }
        let scaled_cost: Vec<f64> = cost.iter().zip(&col_scale).map(|(c, s)| c * s * cost_scale).collect();

        let b: Vec<f64> = model.constraints.iter().zip(&row_scale).map(|(c, s)| c.rhs * s).collect();
        let mut lo = vec![0.0; n + m];
        let mut up = vec![0.0; n + m];
        for (r, row) in model.constraints.iter().enumerate() {
            let (l, u) = match row.sense {
                Sense::Le => (0.0, f64::INFINITY),
                Sense::Ge => (f64::NEG_INFINITY, 0.0),
                Sense::Eq => (0.0, 0.0),
            };
            lo[n + r] = l;
            up[n + r] = u;
        }
        let lower: Vec<f64> = model.variables.iter().map(|v| v.lower).collect();
        let upper: Vec<f64> = model.variables.iter().map(|v| v.upper).collect();
        let sf = StdForm {
            m,
            n,
            col_start,
            row_idx,
            val,
            b,
            cost: scaled_cost,
            lo,
            up,
            unit_idx: (0..m).collect(),
        };
        Self {
            sf,
            col_scale,
            row_scale,
            cost_scale,
            cost,
            constant: model.objective_constant,
            lower,
            upper,
            options,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.sf.n
    }

    pub fn num_rows(&self) -> usize {
        self.sf.m
    }

    pub fn options(&self) -> &LpOptions {
        &self.options
    }

    /// Column bounds of the underlying model.
    pub fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lower, &self.upper)
    }

    /// Solves with the model's own bounds.
    pub fn solve_default(&self) -> LpResult {
        self.solve(&self.lower, &self.upper, None)
    }

    /// Solves with replacement column bounds, optionally starting from `warm`.
    ///
    /// The dual simplex runs first whenever the starting basis (the warm one,
    /// or the all-logical basis) can be made dual feasible by moving boxed
    /// columns between their bounds; otherwise the primal simplex runs.
    pub fn solve(&self, lower: &[f64], upper: &[f64], warm: Option<&Basis>) -> LpResult {
        let n = self.sf.n;
        assert_eq!(lower.len(), n);
        assert_eq!(upper.len(), n);
        for j in 0..n {
            if lower[j] > upper[j] {
                return self.infeasible(0);
            }
        }
        let mut lo = self.sf.lo.clone();
        let mut up = self.sf.up.clone();
        for j in 0..n {
            lo[j] = lower[j] / self.col_scale[j];
            up[j] = upper[j] / self.col_scale[j];
        }
        let warm_states = warm.map(|b| &b.states[..]);
        let mut s = Simplex::new(&self.sf, &self.options, lo, up, warm_states);
        let mut outcome = s.dual();
        if outcome == Outcome::NotDualFeasible || outcome == Outcome::Optimal {
            // After the dual simplex, the primal pass only mops up residual
            // dual infeasibilities.
            outcome = s.primal();
        }
        let iterations = s.iterations;
        match outcome {
            Outcome::Optimal => self.unscale(&s, iterations),
            Outcome::Infeasible | Outcome::NotDualFeasible => self.infeasible(iterations),
            Outcome::Unbounded => LpResult {
                status: LpStatus::Unbounded,
                objective: f64::NEG_INFINITY,
                ..self.infeasible(iterations)
            },
            Outcome::IterationLimit => LpResult {
                status: LpStatus::IterationLimit,
                objective: f64::NAN,
                ..self.infeasible(iterations)
            },
        }
    }

    fn infeasible(&self, iterations: usize) -> LpResult {
        LpResult {
            status: LpStatus::Infeasible,
            objective: f64::INFINITY,
            primal: Vec::new(),
            dual: Vec::new(),
            reduced_costs: Vec::new(),
            iterations,
            basis: None,
        }
    }

    fn unscale(&self, s: &Simplex<'_>, iterations: usize) -> LpResult {
        let n = self.sf.n;
        let primal: Vec<f64> = (0..n).map(|j| s.x[j] * self.col_scale[j]).collect();
        let dual: Vec<f64> = s.y.iter().zip(&self.row_scale).map(|(y, r)| y * r / self.cost_scale).collect();
        let reduced_costs: Vec<f64> = (0..n).map(|j| s.d[j] / (self.cost_scale * self.col_scale[j])).collect();
        let objective = self.cost.iter().zip(&primal).map(|(c, x)| c * x).sum::<f64>() + self.constant;
        LpResult {
            status: LpStatus::Optimal,
            objective,
            primal,
            dual,
            reduced_costs,
            iterations,
            basis: Some(Basis { states: s.state.clone() }),
        }
    }
}

/// Solves the continuous relaxation of `model` (integrality ignored).
pub fn solve_lp(model: &MilpModel) -> LpResult {
    solve_lp_with(model, &LpOptions::default())
}

pub fn solve_lp_with(model: &MilpModel, options: &LpOptions) -> LpResult {
    LpProblem::new(model, options.clone()).solve_default()
}

/// Lagrangian dual value `bᵀy + Σ_j min_{x_j ∈ [l_j, u_j]} (c_j − a_jᵀy)·x_j`
/// for the given row duals. Returns `-∞` when `y` has the wrong sign on an
/// inequality row or a reduced cost pushes towards an infinite bound.
pub fn dual_objective(model: &MilpModel, dual: &[f64], tol: f64) -> f64 {
    let mut value = model.objective_constant;
    for (row, &y) in model.constraints.iter().zip(dual) {
        let sign_ok = match row.sense {
            Sense::Le => y <= tol,
            Sense::Ge => y >= -tol,
            Sense::Eq => true,
        };
        if !sign_ok {
            return f64::NEG_INFINITY;
        }
        value += row.rhs * y;
    }
    let mut reduced = model.cost_vector();
    for (row, &y) in model.constraints.iter().zip(dual) {
        for &(v, a) in &row.terms {
            reduced[v] -= a * y;
        }
    }
    for (var, &d) in model.variables.iter().zip(&reduced) {
        if abs(d) <= tol {
            // Treat tiny reduced costs as zero but still charge them on
            // finite bounds.
            let bound = if d >= 0.0 { var.lower } else { var.upper };
            if bound.is_finite() {
                value += d * bound;
            }
            continue;
        }
        let bound = if d > 0.0 { var.lower } else { var.upper };
        if !bound.is_finite() {
            return f64::NEG_INFINITY;
        }
        value += d * bound;
    }
    value
}

/// Relative gap between primal and dual objectives of an optimal result.
pub fn duality_gap(model: &MilpModel, result: &LpResult) -> f64 {
    let primal = model.objective_value(&result.primal);
    let dual = dual_objective(model, &result.dual, 1e-9);
    abs(primal - dual) / (1.0 + abs(primal))
}

/// Checks an optimal result: bound and row residuals within `tol` and the
/// primal/dual objective gap within `tol·(1 + |cᵀx|)`.
pub fn verify_lp(model: &MilpModel, result: &LpResult, tol: f64) -> bool {
    if result.status != LpStatus::Optimal
        || result.primal.len() != model.num_vars()
        || result.dual.len() != model.num_constraints()
    {
        return false;
    }
    if model.max_violation(&result.primal) > tol {
        return false;
    }
    let primal = model.objective_value(&result.primal);
    let dual = dual_objective(model, &result.dual, tol);
    abs(primal - dual) <= tol * (1.0 + abs(primal))
}
