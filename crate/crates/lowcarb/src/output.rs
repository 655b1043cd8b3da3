//! Result files written by the commands, each with a reader.

use std::path::Path;

use lowcarb_core::analysis::{CostReport, SweepRow};
use lowcarb_core::milp::{MilpResult, MilpStatus};
use lowcarb_core::{CommitmentSchedule, DispatchSolution, SystemConfig};
use serde::{Deserialize, Serialize};

use crate::csvio::{sig6, Table};
use crate::error::Result;

pub const REPORT_FORMAT: &str = "lowcarb-report";
pub const COMPARE_FORMAT: &str = "lowcarb-compare";
pub const OUTPUT_VERSION: u32 = 1;

/// Unit id per row, one `t<k>` column per period, cells 0 or 1.
pub fn commitment_table(config: &SystemConfig, schedule: &CommitmentSchedule) -> Table {
    let mut header = vec!["unit".to_string()];
    header.extend((0..schedule.periods()).map(|t| format!("t{t}")));
    let mut table = Table::new(header);
    for (unit, row) in config.units.iter().zip(&schedule.on) {
        let mut cells = vec![unit.id.clone()];
        cells.extend(row.iter().map(u8::to_string));
        table.push(cells);
    }
    table
}

/// Unit ids and the 0/1 matrix of a commitment file.
pub fn read_commitment(path: &Path) -> Result<(Vec<String>, Vec<Vec<u8>>)> {
    let t = Table::read(path)?;
    let mut ids = Vec::new();
    let mut on = Vec::new();
    for (r, row) in t.rows.iter().enumerate() {
        ids.push(row[0].clone());
        let mut bits = Vec::with_capacity(row.len() - 1);
        for (c, cell) in row.iter().enumerate().skip(1) {
            match cell.as_str() {
                "0" => bits.push(0),
                "1" => bits.push(1),
                other => return Err(t.error(t.lines[r], c + 1, format!("`{other}` is not 0 or 1"))),
            }
        }
        on.push(bits);
    }
    Ok((ids, on))
}

pub const DISPATCH_SIGNALS: [&str; 8] = ["wind", "solar", "hydro", "charge", "release", "energy", "shed", "spill"];

/// One row per scenario and period: unit outputs, then the other sources
/// and the battery.
pub fn dispatch_table(config: &SystemConfig, dispatch: &DispatchSolution) -> Table {
    let mut header = vec!["scenario".to_string(), "period".to_string()];
    header.extend(config.units.iter().map(|u| u.id.clone()));
    header.extend(DISPATCH_SIGNALS.iter().map(|s| s.to_string()));
    let mut table = Table::new(header);
    for (w, d) in dispatch.scenarios.iter().enumerate() {
        for t in 0..config.horizon {
            let mut row = vec![w.to_string(), t.to_string()];
            row.extend(d.p_thermal.iter().map(|p| sig6(p[t])));
            for v in [&d.p_wind, &d.p_solar, &d.p_hydro, &d.p_charge, &d.p_release, &d.energy, &d.shed, &d.spill] {
                row.push(sig6(v[t]));
            }
            table.push(row);
        }
    }
    table
}

/// A dispatch file as `(scenario, period, values)` rows, values in header
/// order after the two index columns.
pub fn read_dispatch(path: &Path) -> Result<(Vec<String>, Vec<(usize, usize, Vec<f64>)>)> {
    let t = Table::read(path)?;
    let mut rows = Vec::with_capacity(t.rows.len());
    for r in 0..t.rows.len() {
        let idx = |c: usize| -> Result<usize> {
            t.rows[r][c].parse().map_err(|_| t.error(t.lines[r], c + 1, "expected a nonnegative integer"))
        };
        let values = (2..t.header.len()).map(|c| t.num(r, c)).collect::<Result<Vec<f64>>>()?;
        rows.push((idx(0)?, idx(1)?, values));
    }
    Ok((t.header[2..].to_vec(), rows))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveSummary {
    pub status: String,
    pub objective: f64,
    pub bound: f64,
    pub gap: f64,
    pub nodes: usize,
    pub lp_iterations: usize,
}

impl From<&MilpResult> for SolveSummary {
    fn from(r: &MilpResult) -> Self {
        Self {
            status: status_name(r.status).into(),
            objective: r.objective,
            bound: r.bound,
            gap: r.gap,
            nodes: r.nodes,
            lp_iterations: r.lp_iterations,
        }
    }
}

pub fn status_name(s: MilpStatus) -> &'static str {
    match s {
        MilpStatus::Optimal => "optimal",
        MilpStatus::Infeasible => "infeasible",
        MilpStatus::Unbounded => "unbounded",
        MilpStatus::GapLimit => "gap_limit",
        MilpStatus::NodeLimit => "node_limit",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    pub format: String,
    pub version: u32,
    pub solve: SolveSummary,
    /// Feasibility-check findings; empty when the solution passes.
    pub violations: Vec<String>,
    pub cost: CostReport,
}

impl SolveReport {
    pub fn new(result: &MilpResult, violations: Vec<String>, cost: CostReport) -> Self {
        Self { format: REPORT_FORMAT.into(), version: OUTPUT_VERSION, solve: result.into(), violations, cost }
    }
}

pub const SWEEP_HEADER: [&str; 9] =
    ["price", "total", "emissions", "allowance", "uc_cost", "cycles", "model_objective", "gap", "error"];

pub fn sweep_table(rows: &[SweepRow]) -> Table {
    let mut table = Table::new(SWEEP_HEADER.iter().map(|s| s.to_string()).collect());
    for r in rows {
        let failed = r.error.is_some();
        table.push(vec![
            sig6(r.carbon_price),
            sig6(r.total),
            sig6(r.expected_emissions),
            sig6(r.expected_allowance),
            sig6(r.uc_cost),
            if failed { String::new() } else { r.start_stop_cycles.to_string() },
            sig6(r.model_objective),
            sig6(r.gap),
            r.error.clone().unwrap_or_default(),
        ]);
    }
    table
}

pub fn read_sweep(path: &Path) -> Result<Vec<SweepRow>> {
    let t = Table::read(path)?;
    for (c, name) in SWEEP_HEADER.iter().enumerate() {
        if t.header.get(c).map(String::as_str) != Some(name) {
            return Err(t.error(1, c + 1, format!("expected column `{name}`")));
        }
    }
    let mut rows = Vec::with_capacity(t.rows.len());
    for r in 0..t.rows.len() {
        let opt = |c: usize| -> Result<f64> { Ok(t.num_opt(r, c)?.unwrap_or(f64::NAN)) };
        let error = Some(t.rows[r][8].clone()).filter(|e| !e.is_empty());
        let cycles = match t.rows[r][5].as_str() {
            "" => 0,
            s => s.parse().map_err(|_| t.error(t.lines[r], 6, "expected a cycle count"))?,
        };
        rows.push(SweepRow {
            carbon_price: t.num(r, 0)?,
            total: opt(1)?,
            expected_emissions: opt(2)?,
            expected_allowance: opt(3)?,
            uc_cost: opt(4)?,
            start_stop_cycles: cycles,
            model_objective: opt(6)?,
            gap: opt(7)?,
            error,
        });
    }
    Ok(rows)
}

pub const COMPARE_HEADER: [&str; 8] =
    ["case", "total", "uc_cost", "fuel", "carbon", "imbalance", "cycles", "model_objective"];

/// Stochastic and deterministic rows in the shape of a cost comparison
/// table. `uc_cost` is the start/stop cost.
pub fn compare_table(stochastic: (&CostReport, f64), deterministic: (&CostReport, f64)) -> Table {
    let mut table = Table::new(COMPARE_HEADER.iter().map(|s| s.to_string()).collect());
    for (name, (r, model)) in [("stochastic", stochastic), ("deterministic", deterministic)] {
        table.push(vec![
            name.to_string(),
            sig6(r.total),
            sig6(r.uc_cost),
            sig6(r.expected_fuel),
            sig6(r.expected_carbon),
            sig6(r.expected_imbalance),
            r.start_stop_cycles.to_string(),
            sig6(model),
        ]);
    }
    table
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareReport {
    pub format: String,
    pub version: u32,
    /// Deterministic-schedule model value minus the stochastic optimum.
    pub vss: f64,
    pub stochastic_solve: SolveSummary,
    pub stochastic: CostReport,
    pub deterministic: CostReport,
    /// Scenarios in which the deterministic schedule had to shed or spill.
    pub deterministic_shed: Vec<usize>,
}
