use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use super::{unit_curves, FormulationError, UnitCurves, VariableIndex};
use crate::math::{abs, round};
use crate::system::{
    emissions, fuel_cost, uc_cost, CommitmentSchedule, DispatchSolution, ScenarioCost, ScenarioDispatch, ScenarioSet,
    SystemConfig,
};

/// Binaries further than this from {0, 1} are rejected.
pub const BINARY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtractError {
    #[error("assignment has {got} values, model has {expected} variables")]
    Length { expected: usize, got: usize },
    #[error("index covers {expected} scenarios, scenario set has {got}")]
    ScenarioCount { expected: usize, got: usize },
    #[error("binary variable {var} has value {value}")]
    NonBinary { var: usize, value: f64 },
}

fn binary(values: &[f64], var: usize) -> Result<u8, ExtractError> {
    let v = values[var];
    let r = round(v);
    if abs(v - r) > BINARY_TOL || !(r == 0.0 || r == 1.0) {
        return Err(ExtractError::NonBinary { var, value: v });
    }
    Ok(r as u8)
}

// Solver round-off below zero is cleaned; anything larger is kept so that the
// feasibility check can see it.
fn clean(v: f64) -> f64 {
    if v < 0.0 && v > -1e-9 { 0.0 } else { v }
}

/// Maps a model assignment back to a commitment schedule and per-scenario
/// dispatch, with costs recomputed from the exact cost curves.
pub fn extract_solution(
    values: &[f64],
    index: &VariableIndex,
    config: &SystemConfig,
    scenarios: &ScenarioSet,
) -> Result<(CommitmentSchedule, DispatchSolution), ExtractError> {
    if values.len() != index.len() {
        return Err(ExtractError::Length { expected: index.len(), got: values.len() });
    }
    if scenarios.len() != index.scenarios {
        return Err(ExtractError::ScenarioCount { expected: index.scenarios, got: scenarios.len() });
    }
    let (n, t_len) = (index.units, index.periods);
    let mut on = vec![vec![0u8; t_len]; n];
    let mut startup_cost = vec![vec![0.0; t_len]; n];
    let mut shutdown_cost = vec![vec![0.0; t_len]; n];
    for i in 0..n {
        for t in 0..t_len {
            on[i][t] = binary(values, index.u(i, t))?;
            startup_cost[i][t] = clean(values[index.start_cost(i, t)]);
            shutdown_cost[i][t] = clean(values[index.stop_cost(i, t)]);
        }
    }
    let schedule = CommitmentSchedule {
        on,
        initial_state: (0..n).map(|i| u8::from(config.initial_on(i))).collect(),
    };
    let mut out = Vec::with_capacity(index.scenarios);
    for w in 0..index.scenarios {
        let mut d = ScenarioDispatch::zeros(n, t_len);
        for t in 0..t_len {
            binary(values, index.charge_mode(w, t))?;
            for i in 0..n {
                d.p_thermal[i][t] = clean(values[index.thermal(w, i, t)]);
            }
            d.p_wind[t] = clean(values[index.wind(w, t)]);
            d.p_solar[t] = clean(values[index.solar(w, t)]);
            d.p_hydro[t] = clean(values[index.hydro(w, t)]);
            d.p_charge[t] = clean(values[index.charge(w, t)]);
            d.p_release[t] = clean(values[index.release(w, t)]);
            d.energy[t] = values[index.energy(w, t)];
            if let (Some(sh), Some(sp)) = (index.shed(w, t), index.spill(w, t)) {
                d.shed[t] = clean(values[sh]);
                d.spill[t] = clean(values[sp]);
            }
        }
        d.cost = scenario_cost(config, &schedule, &d, index.shed_penalty.unwrap_or(0.0));
        out.push(d);
    }
    Ok((schedule, DispatchSolution { startup_cost, shutdown_cost, scenarios: out }))
}

/// Exact fuel, emission and carbon figures of one scenario.
///
/// Every term is a rate times `dt`; units that are off contribute nothing.
pub fn scenario_cost(
    config: &SystemConfig,
    schedule: &CommitmentSchedule,
    dispatch: &ScenarioDispatch,
    shed_penalty: f64,
) -> ScenarioCost {
    let dt = config.dt;
    let mut fuel = 0.0;
    let mut emitted = 0.0;
    let mut generation = 0.0;
    for (i, unit) in config.units.iter().enumerate() {
        for t in 0..config.horizon {
            let p = dispatch.p_thermal[i][t].max(0.0);
            generation += p * dt;
            if schedule.is_on(i, t) {
                fuel += fuel_cost(unit, p, config.coal_price).unwrap_or(0.0) * dt;
                emitted += emissions(unit, p).unwrap_or(0.0) * dt;
            }
        }
    }
    let allowance = config.carbon.allowance_rate() * generation;
    let imbalance: f64 = dispatch.shed.iter().chain(&dispatch.spill).map(|v| v * dt * shed_penalty).sum();
    ScenarioCost {
        fuel,
        carbon: config.carbon.price * (emitted - allowance),
        emissions: emitted,
        allowance,
        imbalance,
    }
}

/// The model's own (piecewise) valuation of a solution.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PiecewiseCost {
    pub uc: f64,
    pub expected_fuel: f64,
    pub expected_carbon: f64,
    pub expected_imbalance: f64,
    /// Sum over scenarios, units and on-periods of the chord error bounds,
    /// probability weighted.
    pub error_bound: f64,
}

impl PiecewiseCost {
    pub fn total(&self) -> f64 {
        self.uc + self.expected_fuel + self.expected_carbon + self.expected_imbalance
    }
}

/// Evaluates `a·u + b·p + chord(c·p²)` style piecewise costs directly on the
/// domain values, independently of the solver's breakpoint weights.
pub fn piecewise_cost(
    config: &SystemConfig,
    scenarios: &ScenarioSet,
    schedule: &CommitmentSchedule,
    solution: &DispatchSolution,
    segments: usize,
    shed_penalty: f64,
) -> Result<PiecewiseCost, FormulationError> {
    let curves = unit_curves(config, segments)?;
    let uc = uc_cost(schedule, &config.units).map_err(|_| FormulationError::BadCommitment)?;
    let mut out = PiecewiseCost { uc, ..PiecewiseCost::default() };
    let (coal, lambda) = (config.coal_price, config.carbon.price);
    let rate = config.carbon.allowance_rate();
    let dt = config.dt;
    for (sc, d) in scenarios.scenarios.iter().zip(&solution.scenarios) {
        let pi = sc.probability;
        for (i, cv) in curves.iter().enumerate() {
            for t in 0..config.horizon {
                let p = d.p_thermal[i][t];
                out.expected_carbon -= pi * dt * lambda * rate * p;
                if !schedule.is_on(i, t) {
                    continue;
                }
                out.expected_fuel += pi * dt * coal * cv.fuel.eval(p);
                out.expected_carbon += pi * dt * lambda * cv.emission.eval(p);
                out.error_bound += pi * dt * (coal * cv.fuel.error_bound() + lambda * cv.emission.error_bound());
            }
        }
        let imb: f64 = d.shed.iter().chain(&d.spill).sum();
        out.expected_imbalance += pi * dt * shed_penalty * imb;
    }
    Ok(out)
}

fn weights(curve: &UnitCurves, p: f64, on: bool) -> Vec<f64> {
    let bp = &curve.fuel.breakpoints;
    let mut w = vec![0.0; bp.len()];
    if !on {
        return w;
    }
    if bp.len() == 1 {
        w[0] = 1.0;
        return w;
    }
    let p = p.clamp(bp[0].0, bp[bp.len() - 1].0);
    let k = bp.windows(2).position(|s| p <= s[1].0).unwrap_or(bp.len() - 2);
    let (x0, x1) = (bp[k].0, bp[k + 1].0);
    let f = (p - x0) / (x1 - x0);
    w[k] = 1.0 - f;
    w[k + 1] = f;
    w
}

/// Inverse of [`extract_solution`]: lays out a domain solution as a model
/// assignment. Breakpoint weights are put on the two breakpoints around each
/// output; the charge mode is 1 exactly when the battery charges.
pub fn encode_solution(
    config: &SystemConfig,
    index: &VariableIndex,
    schedule: &CommitmentSchedule,
    solution: &DispatchSolution,
    segments: usize,
) -> Result<Vec<f64>, FormulationError> {
    let curves = unit_curves(config, segments)?;
    let mut x = vec![0.0; index.len()];
    for i in 0..index.units {
        for t in 0..index.periods {
            x[index.u(i, t)] = f64::from(schedule.on[i][t]);
            x[index.start_cost(i, t)] = solution.startup_cost[i][t];
            x[index.stop_cost(i, t)] = solution.shutdown_cost[i][t];
        }
    }
    for (w, d) in solution.scenarios.iter().enumerate().take(index.scenarios) {
        for t in 0..index.periods {
            for i in 0..index.units {
                let p = d.p_thermal[i][t];
                x[index.thermal(w, i, t)] = p;
                for (k, v) in weights(&curves[i], p, schedule.is_on(i, t)).into_iter().enumerate() {
                    x[index.weight(w, i, t, k)] = v;
                }
            }
            x[index.wind(w, t)] = d.p_wind[t];
            x[index.solar(w, t)] = d.p_solar[t];
            x[index.hydro(w, t)] = d.p_hydro[t];
            x[index.charge(w, t)] = d.p_charge[t];
            x[index.release(w, t)] = d.p_release[t];
            x[index.energy(w, t)] = d.energy[t];
            x[index.charge_mode(w, t)] = if d.p_charge[t] > 0.0 { 1.0 } else { 0.0 };
            if let (Some(sh), Some(sp)) = (index.shed(w, t), index.spill(w, t)) {
                x[sh] = d.shed[t];
                x[sp] = d.spill[t];
            }
        }
    }
    Ok(x)
}
