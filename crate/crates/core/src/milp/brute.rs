use alloc::vec::Vec;

use super::{relative_gap, MilpError, MilpResult, MilpStatus};
use crate::lp::{LpOptions, LpProblem, LpStatus};
use crate::model::MilpModel;

pub const DEFAULT_MAX_BINARIES: usize = 16;

/// Exhaustive enumeration of every binary assignment, solving the continuous
/// restriction of each from scratch. Meant as a reference for tests.
pub fn brute_force_milp(model: &MilpModel, max_binaries: usize) -> Result<MilpResult, MilpError> {
    model.validate()?;
    let binaries = model.binaries();
    if binaries.len() > max_binaries {
        return Err(MilpError::TooManyBinaries { got: binaries.len(), limit: max_binaries });
    }
    let problem = LpProblem::new(model, LpOptions::default());
    let (lo0, up0) = problem.bounds();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut iterations = 0;
    let mut unbounded = false;
    let count = 1usize << binaries.len();
    for mask in 0..count {
        let (mut lo, mut up) = (lo0.to_vec(), up0.to_vec());
        for (bit, &v) in binaries.iter().enumerate() {
            let x = ((mask >> bit) & 1) as f64;
            lo[v] = x;
            up[v] = x;
        }
        let r = problem.solve(&lo, &up, None);
        iterations += r.iterations;
        match r.status {
            LpStatus::Optimal => {
                if best.as_ref().map_or(true, |b| r.objective < b.0) {
                    best = Some((r.objective, r.primal));
                }
            }
            LpStatus::Unbounded => unbounded = true,
            _ => {}
        }
    }
    let (status, objective, solution) = match best {
        _ if unbounded => (MilpStatus::Unbounded, f64::NEG_INFINITY, Vec::new()),
        Some((obj, x)) => (MilpStatus::Optimal, obj, x),
        None => (MilpStatus::Infeasible, f64::INFINITY, Vec::new()),
    };
    Ok(MilpResult {
        status,
        gap: if solution.is_empty() { f64::INFINITY } else { relative_gap(objective, objective) },
        solution,
        objective,
        bound: objective,
        nodes: count,
        lp_iterations: iterations,
        numerical_failures: 0,
    })
}
