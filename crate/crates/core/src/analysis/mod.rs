//! Carbon accounting, expected-cost aggregation and the two studies built on
//! the solver: stochastic versus deterministic commitment, and carbon-price
//! sweeps.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use thiserror::Error;

use crate::exec::{Executor, Sequential};
use crate::formulation::{
    build_model_with, check_feasibility, encode_solution, extract_solution, piecewise_cost, ExtractError,
    FeasibilityReport, FormulationError, ModelOptions, VariableIndex, DEFAULT_SHED_PENALTY,
};
use crate::math::abs;
use crate::milp::{solve_milp_with, MilpError, MilpResult, MilpStatus, Monitor, Silent, SolveOptions};
use crate::model::MilpModel;
use crate::system::{
    emissions, start_stop_cycles, uc_cost, CarbonMarketParams, CommitmentSchedule, DispatchSolution, ScenarioCost,
    ScenarioDispatch, ScenarioSet, SystemConfig, ThermalUnit,
};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Shed plus spill above this many MWh flags a scenario.
pub const SHED_FLAG_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Formulation(#[from] FormulationError),
    #[error(transparent)]
    Milp(#[from] MilpError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error("solver stopped without an incumbent ({0:?})")]
    NoIncumbent(MilpStatus),
    #[error("probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),
    #[error("{costs} costs for {probabilities} probabilities")]
    Length { costs: usize, probabilities: usize },
    #[error("carbon prices must be nonnegative, got {0}")]
    NegativePrice(f64),
}

/// `λ·(Σ u·E(p) − η·h·Σ p)·Δt` over one scenario's dispatch. May be negative
/// when the free allowance exceeds actual emissions.
pub fn carbon_cost(
    dispatch: &ScenarioDispatch,
    schedule: &CommitmentSchedule,
    units: &[ThermalUnit],
    carbon: &CarbonMarketParams,
    dt: f64,
) -> f64 {
    let mut emitted = 0.0;
    let mut generation = 0.0;
    for (i, unit) in units.iter().enumerate() {
        for (t, &p) in dispatch.p_thermal[i].iter().enumerate() {
            let p = p.max(0.0);
            generation += p;
            if schedule.is_on(i, t) {
                emitted += emissions(unit, p).unwrap_or(0.0);
            }
        }
    }
    carbon.price * (emitted - carbon.allowance_rate() * generation) * dt
}

/// Probability-weighted sum of per-scenario costs.
pub fn expected_cost(costs: &[f64], probabilities: &[f64]) -> Result<f64, AnalysisError> {
    if costs.len() != probabilities.len() {
        return Err(AnalysisError::Length { costs: costs.len(), probabilities: probabilities.len() });
    }
    let sum: f64 = probabilities.iter().sum();
    if !(abs(sum - 1.0) <= 1e-9) {
        return Err(AnalysisError::ProbabilitySum(sum));
    }
    Ok(costs.iter().zip(probabilities).map(|(c, p)| c * p).sum())
}

/// Cost summary of a commitment schedule and its recourse dispatch, with
/// every figure recomputed from the exact cost curves.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CostReport {
    pub total: f64,
    pub uc_cost: f64,
    pub expected_fuel: f64,
    pub expected_carbon: f64,
    pub expected_imbalance: f64,
    pub expected_emissions: f64,
    pub expected_allowance: f64,
    pub scenarios: Vec<ScenarioCost>,
    pub start_stop_cycles: usize,
    /// Objective value of the (piecewise) model at this solution.
    pub model_objective: f64,
    /// Upper bound on `model_objective − total` from the chord errors.
    pub linearization_bound: f64,
    /// Scenarios whose dispatch needed shed or spill slack.
    pub shed_scenarios: Vec<usize>,
}

pub fn cost_report(
    config: &SystemConfig,
    scenarios: &ScenarioSet,
    schedule: &CommitmentSchedule,
    solution: &DispatchSolution,
    model_objective: f64,
    segments: usize,
) -> Result<CostReport, AnalysisError> {
    let uc = uc_cost(schedule, &config.units).map_err(|_| FormulationError::BadCommitment)?;
    let probs = scenarios.probabilities();
    let costs: Vec<ScenarioCost> = solution.scenarios.iter().map(|d| d.cost.clone()).collect();
    let pick = |f: fn(&ScenarioCost) -> f64| -> Result<f64, AnalysisError> {
        expected_cost(&costs.iter().map(f).collect::<Vec<_>>(), &probs)
    };
    let expected_fuel = pick(|c| c.fuel)?;
    let expected_carbon = pick(|c| c.carbon)?;
    let expected_imbalance = pick(|c| c.imbalance)?;
    let pw = piecewise_cost(config, scenarios, schedule, solution, segments, 0.0)?;
    let shed_scenarios = solution
        .scenarios
        .iter()
        .enumerate()
        .filter(|(_, d)| d.shed.iter().chain(&d.spill).sum::<f64>() > SHED_FLAG_TOL)
        .map(|(w, _)| w)
        .collect();
    Ok(CostReport {
        total: uc + expected_fuel + expected_carbon + expected_imbalance,
        uc_cost: uc,
        expected_fuel,
        expected_carbon,
        expected_imbalance,
        expected_emissions: pick(|c| c.emissions)?,
        expected_allowance: pick(|c| c.allowance)?,
        scenarios: costs,
        start_stop_cycles: start_stop_cycles(schedule),
        model_objective,
        linearization_bound: pw.error_bound,
        shed_scenarios,
    })
}

/// Options shared by the solve pipeline and the studies.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyOptions {
    pub model: ModelOptions,
    pub solve: SolveOptions,
    /// Price of shed or spilled energy when a fixed schedule is re-costed.
    pub shed_penalty: f64,
    /// Tolerance handed to the feasibility check.
    pub feasibility_tol: f64,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self {
            model: ModelOptions::default(),
            solve: SolveOptions::default(),
            shed_penalty: DEFAULT_SHED_PENALTY,
            feasibility_tol: 1e-6,
        }
    }
}

/// Everything produced by one build → solve → extract → check pass.
#[derive(Debug, Clone)]
pub struct Solved {
    pub model: MilpModel,
    pub index: VariableIndex,
    pub result: MilpResult,
    pub schedule: CommitmentSchedule,
    pub dispatch: DispatchSolution,
    pub report: CostReport,
    pub feasibility: FeasibilityReport,
}

fn solve_prepared<E: Executor>(
    config: &SystemConfig,
    scenarios: &ScenarioSet,
    model_opts: &ModelOptions,
    solve_opts: &SolveOptions,
    feasibility_tol: f64,
    exec: &E,
    monitor: &mut dyn Monitor,
) -> Result<Solved, AnalysisError> {
    let (model, index) = build_model_with(config, scenarios, model_opts)?;
    let result = solve_milp_with(&model, solve_opts, exec, monitor)?;
    if !result.has_incumbent() {
        return Err(AnalysisError::NoIncumbent(result.status));
    }
    let (schedule, dispatch) = extract_solution(&result.solution, &index, config, scenarios)?;
    let feasibility = check_feasibility(&schedule, &dispatch, config, scenarios, feasibility_tol);
    let report = cost_report(config, scenarios, &schedule, &dispatch, result.objective, model_opts.segments)?;
    Ok(Solved { model, index, result, schedule, dispatch, report, feasibility })
}

/// Builds and solves the two-stage problem, then extracts, checks and costs
/// the incumbent.
pub fn solve_instance<E: Executor>(
    config: &SystemConfig,
    scenarios: &ScenarioSet,
    options: &StudyOptions,
    exec: &E,
    monitor: &mut dyn Monitor,
) -> Result<Solved, AnalysisError> {
    solve_prepared(config, scenarios, &options.model, &options.solve, options.feasibility_tol, exec, monitor)
}

/// A fixed schedule re-costed under every scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub dispatch: DispatchSolution,
    /// Per-scenario model objectives (each includes the start/stop cost).
    pub objectives: Vec<f64>,
    /// `Σ π_ω · objectives[ω]`, the two-stage model value of the schedule.
    pub model_objective: f64,
    pub report: CostReport,
}

/// Solves each scenario's recourse problem with the commitment fixed to
/// `schedule`, allowing shed and spill at `options.shed_penalty`.
pub fn evaluate_schedule<E: Executor>(
    config: &SystemConfig,
    scenarios: &ScenarioSet,
    schedule: &CommitmentSchedule,
    options: &StudyOptions,
    exec: &E,
) -> Result<Evaluation, AnalysisError> {
    let model_opts = ModelOptions {
        fixed_commitment: Some(schedule.clone()),
        shed_penalty: Some(options.shed_penalty),
        ..options.model.clone()
    };
    let jobs: Vec<ScenarioSet> = scenarios
        .scenarios
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.probability = 1.0;
            ScenarioSet::new(alloc::vec![s])
        })
        .collect();
    let solved = exec.map(jobs, |_, set| {
        solve_prepared(config, &set, &model_opts, &options.solve, options.feasibility_tol, &Sequential, &mut Silent)
    });
    let mut dispatch = DispatchSolution { startup_cost: Vec::new(), shutdown_cost: Vec::new(), scenarios: Vec::new() };
    let mut objectives = Vec::with_capacity(scenarios.len());
    for s in solved {
        let s = s?;
        if dispatch.startup_cost.is_empty() {
            dispatch.startup_cost = s.dispatch.startup_cost.clone();
            dispatch.shutdown_cost = s.dispatch.shutdown_cost.clone();
        }
        objectives.push(s.result.objective);
        dispatch.scenarios.extend(s.dispatch.scenarios);
    }
    let model_objective = expected_cost(&objectives, &scenarios.probabilities())?;
    let report = cost_report(config, scenarios, schedule, &dispatch, model_objective, options.model.segments)?;
    Ok(Evaluation { dispatch, objectives, model_objective, report })
}

/// Stochastic versus expected-value (deterministic) commitment.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub stochastic: Solved,
    pub deterministic_schedule: CommitmentSchedule,
    pub deterministic: Evaluation,
    /// Deterministic model value minus stochastic model value.
    pub vss: f64,
}

/// Solves the expected-value problem on the probability-weighted mean
/// scenario, re-costs its schedule under every scenario, then solves the
/// stochastic problem seeded with that schedule as a starting incumbent.
pub fn compare_deterministic<E: Executor>(
    config: &SystemConfig,
    scenarios: &ScenarioSet,
    options: &StudyOptions,
    exec: &E,
    monitor: &mut dyn Monitor,
) -> Result<Comparison, AnalysisError> {
    let mean = ScenarioSet::new(alloc::vec![scenarios.mean_scenario()]);
    let det = solve_instance(config, &mean, options, exec, monitor)?;
    if scenarios.len() == 1 {
        // The mean scenario is the only scenario: both problems are the same
        // MILP, so the deterministic solve already is the stochastic one.
        let evaluation = Evaluation {
            dispatch: det.dispatch.clone(),
            objectives: alloc::vec![det.result.objective],
            model_objective: det.result.objective,
            report: det.report.clone(),
        };
        return Ok(Comparison { deterministic_schedule: det.schedule.clone(), stochastic: det, deterministic: evaluation, vss: 0.0 });
    }
    let evaluation = evaluate_schedule(config, scenarios, &det.schedule, options, exec)?;
    let mut solve = options.solve.clone();
    if evaluation.report.shed_scenarios.is_empty() {
        let (_, index) = build_model_with(config, scenarios, &options.model)?;
        let seed = encode_solution(config, &index, &det.schedule, &evaluation.dispatch, options.model.segments)?;
        solve.initial_solution = Some(seed);
    }
    let stochastic = solve_prepared(config, scenarios, &options.model, &solve, options.feasibility_tol, exec, monitor)?;
    let vss = evaluation.model_objective - stochastic.result.objective;
    Ok(Comparison { stochastic, deterministic_schedule: det.schedule, deterministic: evaluation, vss })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SweepRow {
    pub carbon_price: f64,
    pub total: f64,
    pub expected_emissions: f64,
    pub expected_allowance: f64,
    pub uc_cost: f64,
    pub start_stop_cycles: usize,
    pub model_objective: f64,
    /// Relative gap of the solve; above the requested gap only when a node or
    /// time limit stopped it.
    pub gap: f64,
    /// Set when this row's solve failed; numeric fields are then NaN.
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(price: f64, e: &AnalysisError) -> Self {
        Self {
            carbon_price: price,
            total: f64::NAN,
            expected_emissions: f64::NAN,
            expected_allowance: f64::NAN,
            uc_cost: f64::NAN,
            start_stop_cycles: 0,
            model_objective: f64::NAN,
            gap: f64::NAN,
            error: Some(e.to_string()),
        }
    }
}

/// Re-solves the two-stage problem at every price. Rows come back sorted by
/// price; a failed solve is recorded in its row and the sweep continues.
pub fn carbon_price_sweep<E: Executor>(
    config: &SystemConfig,
    scenarios: &ScenarioSet,
    prices: &[f64],
    options: &StudyOptions,
    exec: &E,
) -> Result<Vec<SweepRow>, AnalysisError> {
    carbon_price_sweep_with(config, scenarios, prices, options, exec, || Silent)
}

/// [`carbon_price_sweep`] with a fresh monitor from `monitor` for every row,
/// so a time limit applies to each row separately.
pub fn carbon_price_sweep_with<E, M, F>(
    config: &SystemConfig,
    scenarios: &ScenarioSet,
    prices: &[f64],
    options: &StudyOptions,
    exec: &E,
    monitor: F,
) -> Result<Vec<SweepRow>, AnalysisError>
where
    E: Executor,
    M: Monitor,
    F: Fn() -> M + Sync,
{
    if let Some(&p) = prices.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
        return Err(AnalysisError::NegativePrice(p));
    }
    let mut sorted = prices.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rows = exec.map(sorted, |_, price| {
        let cfg = config.with_carbon_price(price);
        match solve_instance(&cfg, scenarios, options, &Sequential, &mut monitor()) {
            Ok(s) => SweepRow {
                carbon_price: price,
                total: s.report.total,
                expected_emissions: s.report.expected_emissions,
                expected_allowance: s.report.expected_allowance,
                uc_cost: s.report.uc_cost,
                start_stop_cycles: s.report.start_stop_cycles,
                model_objective: s.result.objective,
                gap: s.result.gap,
                error: None,
            },
            Err(e) => SweepRow::failed(price, &e),
        }
    });
    Ok(rows)
}
