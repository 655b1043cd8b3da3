use thiserror::Error;

use super::{CommitmentSchedule, ThermalUnit};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error("power must be non-negative, got {0}")]
    NegativePower(f64),
    #[error("commitment entry ({unit}, {period}) is {value}, expected 0 or 1")]
    NonBinary { unit: usize, period: usize, value: u8 },
    #[error("initial state of unit {unit} is {value}, expected 0 or 1")]
    NonBinaryInitial { unit: usize, value: u8 },
    #[error("schedule has {got} units, expected {expected}")]
    UnitCount { expected: usize, got: usize },
    #[error("schedule row {unit} has {got} periods, expected {expected}")]
    RaggedSchedule { unit: usize, expected: usize, got: usize },
}

/// Fuel cost `coal_price · (a + b·p + c·p²)` of a running unit.
pub fn fuel_cost(unit: &ThermalUnit, power: f64, coal_price: f64) -> Result<f64, CostError> {
    if !(power >= 0.0) {
        return Err(CostError::NegativePower(power));
    }
    Ok(coal_price * (unit.a + unit.b * power + unit.c * power * power))
}

/// CO₂ emitted, `l + k·p + j·p²`, by a running unit.
pub fn emissions(unit: &ThermalUnit, power: f64) -> Result<f64, CostError> {
    if !(power >= 0.0) {
        return Err(CostError::NegativePower(power));
    }
    Ok(unit.l + unit.k * power + unit.j * power * power)
}

fn check_binary(schedule: &CommitmentSchedule, units: usize) -> Result<(), CostError> {
    if schedule.on.len() != units {
        return Err(CostError::UnitCount { expected: units, got: schedule.on.len() });
    }
    let periods = schedule.periods();
    for (i, row) in schedule.on.iter().enumerate() {
        if row.len() != periods {
            return Err(CostError::RaggedSchedule { unit: i, expected: periods, got: row.len() });
        }
        if let Some((t, &v)) = row.iter().enumerate().find(|(_, &v)| v > 1) {
            return Err(CostError::NonBinary { unit: i, period: t, value: v });
        }
    }
    if let Some((i, &v)) = schedule.initial_state.iter().enumerate().find(|(_, &v)| v > 1) {
        return Err(CostError::NonBinaryInitial { unit: i, value: v });
    }
    Ok(())
}

/// Start-up plus shut-down cost of a commitment schedule.
pub fn uc_cost(schedule: &CommitmentSchedule, units: &[ThermalUnit]) -> Result<f64, CostError> {
    check_binary(schedule, units.len())?;
    let mut total = 0.0;
    for (i, unit) in units.iter().enumerate() {
        for t in 0..schedule.periods() {
            let now = schedule.on[i][t];
            let before = schedule.previous(i, t);
            if now > before {
                total += unit.startup_cost;
            } else if now < before {
                total += unit.shutdown_cost;
            }
        }
    }
    Ok(total)
}

/// Number of 0→1 and 1→0 transitions over all units, counting the step from
/// the initial state into the first period.
pub fn start_stop_cycles(schedule: &CommitmentSchedule) -> usize {
    (0..schedule.units())
        .map(|i| {
            (0..schedule.periods())
                .filter(|&t| schedule.on[i][t] != schedule.previous(i, t))
                .count()
        })
        .sum()
}
