//! Deterministic-equivalent MILP of the two-stage problem.
//!
//! First stage: commitment `u[i,t]` with start/stop cost epigraph variables
//! and rolling-window minimum up/down rows. Second stage, per scenario: unit
//! outputs expressed as convex combinations of breakpoints (so fuel and
//! emission curves enter the objective piecewise linearly), renewable
//! outputs bounded by the scenario caps, and a battery with a binary mode
//! indicator that forbids charging and releasing in the same period.

mod check;
mod extract;
mod index;
mod piecewise;

use alloc::format;
use alloc::vec::Vec;
use thiserror::Error;

use crate::model::{MilpModel, Sense, VarKind};
use crate::system::{validate_config, validate_scenarios, CommitmentSchedule, ScenarioSet, SystemConfig, ValidationReport};

pub use check::{check_feasibility, Family, FeasibilityReport, FeasibilityViolation};
pub use extract::{
    encode_solution, extract_solution, piecewise_cost, scenario_cost, ExtractError, PiecewiseCost,
};
pub use index::{VarKey, VariableIndex};
pub use piecewise::{linearize_quadratic, quadratic, PiecewiseCurve, PiecewiseError};

pub const DEFAULT_SEGMENTS: usize = 8;

/// Penalty per MWh of shed or spilled energy used by recourse evaluation.
pub const DEFAULT_SHED_PENALTY: f64 = 1e5;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelOptions {
    pub segments: usize,
    /// Fixes every `u[i,t]` to the given schedule.
    pub fixed_commitment: Option<CommitmentSchedule>,
    /// Adds shed and spill slacks to the balance rows at this price per MWh.
    pub shed_penalty: Option<f64>,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self { segments: DEFAULT_SEGMENTS, fixed_commitment: None, shed_penalty: None }
    }
}

impl ModelOptions {
    pub fn with_segments(segments: usize) -> Self {
        Self { segments, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormulationError {
    #[error("invalid configuration:\n{0}")]
    Config(ValidationReport),
    #[error("invalid scenario set:\n{0}")]
    Scenarios(ValidationReport),
    #[error("scenario horizon {scenarios} does not match config horizon {config}")]
    HorizonMismatch { config: usize, scenarios: usize },
    #[error("segments must be at least 1")]
    NoSegments,
    #[error("fixed commitment has the wrong shape or non-binary entries")]
    BadCommitment,
    #[error("unit {unit}: {source}")]
    Curve { unit: usize, source: PiecewiseError },
}

/// Fuel and emission curves of every unit at the model's resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitCurves {
    pub fuel: PiecewiseCurve,
    pub emission: PiecewiseCurve,
}

pub fn unit_curves(config: &SystemConfig, segments: usize) -> Result<Vec<UnitCurves>, FormulationError> {
    if segments == 0 {
        return Err(FormulationError::NoSegments);
    }
    config
        .units
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let dom = (u.p_min, u.p_max);
            let fuel = linearize_quadratic((u.a, u.b, u.c), dom, segments);
            let emission = linearize_quadratic((u.l, u.k, u.j), dom, segments);
            match (fuel, emission) {
                (Ok(fuel), Ok(emission)) => Ok(UnitCurves { fuel, emission }),
                (Err(e), _) | (_, Err(e)) => Err(FormulationError::Curve { unit: i, source: e }),
            }
        })
        .collect()
}

/// Builds the model with default options and the given segment count.
pub fn build_model(
    config: &SystemConfig,
    scenarios: &ScenarioSet,
    segments: usize,
) -> Result<(MilpModel, VariableIndex), FormulationError> {
    build_model_with(config, scenarios, &ModelOptions::with_segments(segments))
}

pub fn build_model_with(
    config: &SystemConfig,
    scenarios: &ScenarioSet,
    options: &ModelOptions,
) -> Result<(MilpModel, VariableIndex), FormulationError> {
    let report = validate_config(config);
    if !report.is_ok() {
        return Err(FormulationError::Config(report));
    }
    if let Some(s) = scenarios.scenarios.iter().find(|s| s.periods() != config.horizon) {
        return Err(FormulationError::HorizonMismatch { config: config.horizon, scenarios: s.periods() });
    }
    let report = validate_scenarios(scenarios, config.horizon);
    if !report.is_ok() {
        return Err(FormulationError::Scenarios(report));
    }
    let curves = unit_curves(config, options.segments)?;
    let (n, t_len, s_len) = (config.num_units(), config.horizon, scenarios.len());
    if let Some(fixed) = &options.fixed_commitment {
        if crate::system::uc_cost(fixed, &config.units).is_err() || fixed.periods() != t_len {
            return Err(FormulationError::BadCommitment);
        }
    }
    let bps: Vec<usize> = curves.iter().map(|c| c.fuel.breakpoints.len()).collect();
    let idx = VariableIndex::new(n, t_len, s_len, bps, options.shed_penalty);
    let mut m = MilpModel::new();
    m.variables.reserve(idx.len());

    // Columns, in index order.
    for i in 0..n {
        for t in 0..t_len {
            let (lo, up) = match &options.fixed_commitment {
                Some(f) => {
                    let v = f64::from(f.on[i][t]);
                    (v, v)
                }
                None => (0.0, 1.0),
            };
            m.add_var(format!("u[{i},{t}]"), VarKind::Binary, lo, up);
        }
    }
    for name in ["cu", "cd"] {
        for i in 0..n {
            for t in 0..t_len {
                m.add_continuous(format!("{name}[{i},{t}]"), 0.0, f64::INFINITY);
            }
        }
    }
    let bat = &config.battery;
    for (w, sc) in scenarios.scenarios.iter().enumerate() {
        for t in 0..t_len {
            for (i, unit) in config.units.iter().enumerate() {
                m.add_continuous(format!("pg[{w},{i},{t}]"), 0.0, unit.p_max);
                for k in 0..idx.breakpoints[i] {
                    m.add_continuous(format!("lam[{w},{i},{t},{k}]"), 0.0, 1.0);
                }
            }
            m.add_continuous(format!("pwt[{w},{t}]"), 0.0, sc.wind_cap[t]);
            m.add_continuous(format!("ppv[{w},{t}]"), 0.0, sc.solar_cap[t]);
            m.add_continuous(format!("ph[{w},{t}]"), 0.0, sc.hydro_cap[t]);
            m.add_continuous(format!("pch[{w},{t}]"), 0.0, bat.charge_limit);
            m.add_continuous(format!("pre[{w},{t}]"), 0.0, bat.release_limit);
            m.add_continuous(format!("e[{w},{t}]"), bat.energy_min(), bat.energy_max());
            m.add_binary(format!("ych[{w},{t}]"));
            if idx.has_slack() {
                m.add_continuous(format!("shed[{w},{t}]"), 0.0, f64::INFINITY);
                m.add_continuous(format!("spill[{w},{t}]"), 0.0, f64::INFINITY);
            }
        }
    }
    debug_assert_eq!(m.num_vars(), idx.len());

    // First stage.
    for (i, unit) in config.units.iter().enumerate() {
        let u0 = f64::from(u8::from(config.initial_on(i)));
        for t in 0..t_len {
            let u = idx.u(i, t);
            // cu ≥ SU·(u_t − u_{t−1}); cd ≥ SD·(u_{t−1} − u_t)
            let mut start = alloc::vec![(idx.start_cost(i, t), 1.0), (u, -unit.startup_cost)];
            let mut stop = alloc::vec![(idx.stop_cost(i, t), 1.0), (u, unit.shutdown_cost)];
            let (mut start_rhs, mut stop_rhs) = (0.0, 0.0);
            if t == 0 {
                start_rhs = -unit.startup_cost * u0;
                stop_rhs = unit.shutdown_cost * u0;
            } else {
                start.push((idx.u(i, t - 1), unit.startup_cost));
                stop.push((idx.u(i, t - 1), -unit.shutdown_cost));
            }
            m.add_constraint(format!("startcost[{i},{t}]"), start, Sense::Ge, start_rhs);
            m.add_constraint(format!("stopcost[{i},{t}]"), stop, Sense::Ge, stop_rhs);

            // Σ_{τ=t}^{t+L−1} u_τ ≥ L·(u_t − u_{t−1})
            // Σ_{τ=t}^{t+L−1} (1 − u_τ) ≥ L·(u_{t−1} − u_t)
            let up_len = (unit.min_up as usize).min(t_len - t);
            let down_len = (unit.min_down as usize).min(t_len - t);
            let l_up = up_len as f64;
            let l_dn = down_len as f64;
            let mut up_row: Vec<(usize, f64)> = (t..t + up_len).map(|tau| (idx.u(i, tau), 1.0)).collect();
            up_row.push((u, -l_up));
            let mut down_row: Vec<(usize, f64)> = (t..t + down_len).map(|tau| (idx.u(i, tau), -1.0)).collect();
            down_row.push((u, l_dn));
            let (mut up_rhs, mut down_rhs) = (0.0, -l_dn);
            if t == 0 {
                up_rhs = -l_up * u0;
                down_rhs += l_dn * u0;
            } else {
                up_row.push((idx.u(i, t - 1), l_up));
                down_row.push((idx.u(i, t - 1), -l_dn));
            }
            m.add_constraint(format!("minup[{i},{t}]"), up_row, Sense::Ge, up_rhs);
            m.add_constraint(format!("mindown[{i},{t}]"), down_row, Sense::Ge, down_rhs);
        }
    }

    // Second stage.
    for w in 0..s_len {
        for t in 0..t_len {
            let mut bal: Vec<(usize, f64)> = (0..n).map(|i| (idx.thermal(w, i, t), 1.0)).collect();
            bal.extend([
                (idx.wind(w, t), 1.0),
                (idx.solar(w, t), 1.0),
                (idx.hydro(w, t), 1.0),
                (idx.release(w, t), 1.0),
                (idx.charge(w, t), -1.0),
            ]);
            if let (Some(sh), Some(sp)) = (idx.shed(w, t), idx.spill(w, t)) {
                bal.push((sh, 1.0));
                bal.push((sp, -1.0));
            }
            m.add_constraint(format!("balance[{w},{t}]"), bal, Sense::Eq, config.load[t]);

            for (i, unit) in config.units.iter().enumerate() {
                let p = idx.thermal(w, i, t);
                let u = idx.u(i, t);
                let bp = &curves[i].fuel.breakpoints;
                let mut link = alloc::vec![(p, 1.0)];
                let mut conv = alloc::vec![(u, -1.0)];
                for (k, &(x, _)) in bp.iter().enumerate() {
                    link.push((idx.weight(w, i, t, k), -x));
                    conv.push((idx.weight(w, i, t, k), 1.0));
                }
                m.add_constraint(format!("link[{w},{i},{t}]"), link, Sense::Eq, 0.0);
                m.add_constraint(format!("convex[{w},{i},{t}]"), conv, Sense::Eq, 0.0);

                // p_t − p_{t−1} ≤ R_u·u_{t−1} + S·(1 − u_{t−1})
                // p_{t−1} − p_t ≤ R_d·u_t + S·(1 − u_t)
                let s_up = unit.startup_ramp();
                let s_dn = unit.shutdown_ramp();
                let ru = unit.ramp_up * config.dt;
                let rd = unit.ramp_down * config.dt;
                let mut up_row = alloc::vec![(p, 1.0)];
                let mut dn_row = alloc::vec![(p, -1.0), (u, -(rd - s_dn))];
                let (up_rhs, dn_rhs);
                if t == 0 {
                    let u0 = f64::from(u8::from(config.initial_on(i)));
                    let p0 = config.initial_power(i);
                    up_rhs = s_up + (ru - s_up) * u0 + p0;
                    dn_rhs = s_dn - p0;
                } else {
                    let prev = idx.thermal(w, i, t - 1);
                    up_row.push((prev, -1.0));
                    up_row.push((idx.u(i, t - 1), -(ru - s_up)));
                    dn_row.push((prev, 1.0));
                    up_rhs = s_up;
                    dn_rhs = s_dn;
                }
                m.add_constraint(format!("rampup[{w},{i},{t}]"), up_row, Sense::Le, up_rhs);
                m.add_constraint(format!("rampdown[{w},{i},{t}]"), dn_row, Sense::Le, dn_rhs);
            }

            let (ch, re, y, e) = (idx.charge(w, t), idx.release(w, t), idx.charge_mode(w, t), idx.energy(w, t));
            m.add_constraint(format!("chlim[{w},{t}]"), alloc::vec![(ch, 1.0), (y, -bat.charge_limit)], Sense::Le, 0.0);
            m.add_constraint(
                format!("relim[{w},{t}]"),
                alloc::vec![(re, 1.0), (y, bat.release_limit)],
                Sense::Le,
                bat.release_limit,
            );
            let mut rec = alloc::vec![
                (e, 1.0),
                (ch, -bat.eta_charge * config.dt),
                (re, config.dt / bat.eta_release),
            ];
            let rhs = if t == 0 {
                bat.initial_energy
            } else {
                rec.push((idx.energy(w, t - 1), -1.0));
                0.0
            };
            m.add_constraint(format!("energy[{w},{t}]"), rec, Sense::Eq, rhs);
        }
    }

    // Objective.
    for i in 0..n {
        for t in 0..t_len {
            m.add_objective(idx.start_cost(i, t), 1.0);
            m.add_objective(idx.stop_cost(i, t), 1.0);
        }
    }
    let carbon = &config.carbon;
    let allowance = carbon.allowance_rate();
    for (w, sc) in scenarios.scenarios.iter().enumerate() {
        let pi = sc.probability;
        for t in 0..t_len {
            for i in 0..n {
                let cv = &curves[i];
                for (k, (&(x, fuel), &(_, em))) in cv.fuel.breakpoints.iter().zip(&cv.emission.breakpoints).enumerate() {
                    let cost = config.coal_price * fuel + carbon.price * (em - allowance * x);
                    m.add_objective(idx.weight(w, i, t, k), pi * config.dt * cost);
                }
            }
            if let Some(penalty) = options.shed_penalty {
                let c = pi * config.dt * penalty;
                m.add_objective(idx.shed(w, t).unwrap(), c);
                m.add_objective(idx.spill(w, t).unwrap(), c);
            }
        }
    }
    Ok((m, idx))
}

/// Number of rows [`build_model`] emits.
pub fn expected_rows(units: usize, periods: usize, scenarios: usize) -> usize {
    4 * units * periods + scenarios * periods * (4 * units + 4)
}
