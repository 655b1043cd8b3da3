use alloc::vec::Vec;
use core::fmt;

use crate::math::abs;
use crate::system::{CommitmentSchedule, DispatchSolution, ScenarioSet, SystemConfig};

/// Constraint families checked on domain values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    MinDown,
    MinUp,
    StartupCost,
    ShutdownCost,
    Balance,
    GenerationBounds,
    Ramp,
    WindCap,
    SolarCap,
    HydroCap,
    ChargeLimit,
    ReleaseLimit,
    Complementarity,
    EnergyBalance,
    SocBounds,
}

impl Family {
    pub const ALL: [Family; 15] = [
        Family::MinDown,
        Family::MinUp,
        Family::StartupCost,
        Family::ShutdownCost,
        Family::Balance,
        Family::GenerationBounds,
        Family::Ramp,
        Family::WindCap,
        Family::SolarCap,
        Family::HydroCap,
        Family::ChargeLimit,
        Family::ReleaseLimit,
        Family::Complementarity,
        Family::EnergyBalance,
        Family::SocBounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::MinDown => "min-down",
            Family::MinUp => "min-up",
            Family::StartupCost => "startup-cost",
            Family::ShutdownCost => "shutdown-cost",
            Family::Balance => "power-balance",
            Family::GenerationBounds => "generation-bounds",
            Family::Ramp => "ramp",
            Family::WindCap => "wind-cap",
            Family::SolarCap => "solar-cap",
            Family::HydroCap => "hydro-cap",
            Family::ChargeLimit => "charge-limit",
            Family::ReleaseLimit => "release-limit",
            Family::Complementarity => "complementarity",
            Family::EnergyBalance => "energy-balance",
            Family::SocBounds => "soc-bounds",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityViolation {
    pub family: Family,
    /// Which side or variant of the family failed, e.g. `"up"` for ramping.
    pub detail: &'static str,
    pub scenario: Option<usize>,
    pub unit: Option<usize>,
    pub period: usize,
    /// Amount by which the constraint is violated.
    pub residual: f64,
}

impl fmt::Display for FeasibilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family.name())?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        if let Some(w) = self.scenario {
            write!(f, " scenario={w}")?;
        }
        if let Some(i) = self.unit {
            write!(f, " unit={i}")?;
        }
        write!(f, " period={} residual={:.6e}", self.period, self.residual)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeasibilityReport {
    pub violations: Vec<FeasibilityViolation>,
}

impl FeasibilityReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, family: Family) -> usize {
        self.violations.iter().filter(|v| v.family == family).count()
    }

    /// Distinct families present, in declaration order.
    pub fn families(&self) -> Vec<Family> {
        Family::ALL.iter().copied().filter(|f| self.count(*f) > 0).collect()
    }
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

struct Checker {
    tol: f64,
    out: Vec<FeasibilityViolation>,
}

impl Checker {
    /// Records `lhs ≤ rhs` failures beyond `tol·max(1, |rhs|)`.
    fn le(&mut self, family: Family, detail: &'static str, at: (Option<usize>, Option<usize>, usize), lhs: f64, rhs: f64) {
        let residual = lhs - rhs;
        if residual > self.tol * abs(rhs).max(1.0) || residual.is_nan() {
            self.out.push(FeasibilityViolation { family, detail, scenario: at.0, unit: at.1, period: at.2, residual });
        }
    }

    fn eq(&mut self, family: Family, detail: &'static str, at: (Option<usize>, Option<usize>, usize), lhs: f64, rhs: f64) {
        let residual = abs(lhs - rhs);
        if residual > self.tol * abs(rhs).max(1.0) || residual.is_nan() {
            self.out.push(FeasibilityViolation { family, detail, scenario: at.0, unit: at.1, period: at.2, residual });
        }
    }

    /// `lo ≤ x ≤ hi` reported once, with the larger of the two residuals.
    fn within(&mut self, family: Family, at: (Option<usize>, Option<usize>, usize), x: f64, lo: f64, hi: f64) {
        let below = lo - x;
        let above = x - hi;
        if below > self.tol * abs(lo).max(1.0) {
            self.out.push(FeasibilityViolation { family, detail: "lower", scenario: at.0, unit: at.1, period: at.2, residual: below });
        } else if above > self.tol * abs(hi).max(1.0) || x.is_nan() {
            self.out.push(FeasibilityViolation { family, detail: "upper", scenario: at.0, unit: at.1, period: at.2, residual: above });
        }
    }
}

/// Evaluates every constraint family of the model on domain values.
/// Residuals up to `tol·max(1, |rhs|)` are accepted.
pub fn check_feasibility(
    schedule: &CommitmentSchedule,
    dispatch: &DispatchSolution,
    config: &SystemConfig,
    scenarios: &ScenarioSet,
    tol: f64,
) -> FeasibilityReport {
    let mut c = Checker { tol, out: Vec::new() };
    let t_len = config.horizon;
    let u = |i: usize, t: usize| f64::from(schedule.on[i][t]);
    let prev = |i: usize, t: usize| f64::from(schedule.previous(i, t));

    for (i, unit) in config.units.iter().enumerate() {
        for t in 0..t_len {
            let at = (None, Some(i), t);
            let dn = (unit.min_down as usize).min(t_len - t);
            let off: f64 = (t..t + dn).map(|tau| 1.0 - u(i, tau)).sum();
            c.le(Family::MinDown, "", at, dn as f64 * (prev(i, t) - u(i, t)), off);
            let up = (unit.min_up as usize).min(t_len - t);
            let on: f64 = (t..t + up).map(|tau| u(i, tau)).sum();
            c.le(Family::MinUp, "", at, up as f64 * (u(i, t) - prev(i, t)), on);

            let cu = dispatch.startup_cost[i][t];
            let cd = dispatch.shutdown_cost[i][t];
            c.le(Family::StartupCost, "", at, unit.startup_cost * (u(i, t) - prev(i, t)), cu);
            c.le(Family::StartupCost, "nonnegative", at, 0.0, cu);
            c.le(Family::ShutdownCost, "", at, unit.shutdown_cost * (prev(i, t) - u(i, t)), cd);
            c.le(Family::ShutdownCost, "nonnegative", at, 0.0, cd);
        }
    }

    let bat = &config.battery;
    for (w, (sc, d)) in scenarios.scenarios.iter().zip(&dispatch.scenarios).enumerate() {
        for t in 0..t_len {
            let at = (Some(w), None, t);
            let supply: f64 = (0..config.num_units()).map(|i| d.p_thermal[i][t]).sum::<f64>()
                + d.p_wind[t]
                + d.p_solar[t]
                + d.p_hydro[t]
                + d.p_release[t]
                - d.p_charge[t]
                + d.shed[t]
                - d.spill[t];
            c.eq(Family::Balance, "", at, supply, config.load[t]);

            for (i, unit) in config.units.iter().enumerate() {
                let at = (Some(w), Some(i), t);
                let p = d.p_thermal[i][t];
                c.within(Family::GenerationBounds, at, p, unit.p_min * u(i, t), unit.p_max * u(i, t));
                let (p_prev, u_prev) = if t == 0 {
                    (config.initial_power(i), prev(i, 0))
                } else {
                    (d.p_thermal[i][t - 1], u(i, t - 1))
                };
                let su = unit.startup_ramp();
                let sd = unit.shutdown_ramp();
                let ru = unit.ramp_up * config.dt;
                let rd = unit.ramp_down * config.dt;
                c.le(Family::Ramp, "up", at, p - p_prev, ru * u_prev + su * (1.0 - u_prev));
                c.le(Family::Ramp, "down", at, p_prev - p, rd * u(i, t) + sd * (1.0 - u(i, t)));
            }

            c.within(Family::WindCap, at, d.p_wind[t], 0.0, sc.wind_cap[t]);
            c.within(Family::SolarCap, at, d.p_solar[t], 0.0, sc.solar_cap[t]);
            c.within(Family::HydroCap, at, d.p_hydro[t], 0.0, sc.hydro_cap[t]);
            c.within(Family::ChargeLimit, at, d.p_charge[t], 0.0, bat.charge_limit);
            c.within(Family::ReleaseLimit, at, d.p_release[t], 0.0, bat.release_limit);
            c.le(Family::Complementarity, "", at, d.p_charge[t].min(d.p_release[t]), 0.0);
            let before = if t == 0 { bat.initial_energy } else { d.energy[t - 1] };
            let expected = before + bat.eta_charge * config.dt * d.p_charge[t] - config.dt / bat.eta_release * d.p_release[t];
            c.eq(Family::EnergyBalance, "", at, d.energy[t], expected);
            c.within(Family::SocBounds, at, d.energy[t], bat.energy_min(), bat.energy_max());
        }
    }
    FeasibilityReport { violations: c.out }
}
