mod common;

use lowcarb_core::exec::Executor;
use lowcarb_core::formulation::{build_model, check_feasibility, extract_solution};
use lowcarb_core::milp::{brute_force_milp, solve_milp, solve_milp_with, MilpStatus, Monitor, NodeEvent, SolveOptions};
use lowcarb_core::Sequential;

const INSTANCES: u64 = 50;
const REL_TOL: f64 = 1e-6;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

#[test]
fn branch_and_bound_matches_enumeration() {
    let mut optimal = 0;
    for seed in 0..INSTANCES {
        let (cfg, set) = common::random_instance(seed);
        let segments = 1 + (seed as usize % 4);
        let (m, idx) = build_model(&cfg, &set, segments).unwrap();
        assert!(m.num_binaries() <= 12);
        let opts = SolveOptions { mip_gap: 0.0, ..SolveOptions::default() };
        let bb = solve_milp(&m, &opts).unwrap();
        let brute = brute_force_milp(&m, 16).unwrap();
        assert_eq!(bb.status, brute.status, "seed {seed}");
        if bb.status != MilpStatus::Optimal {
            continue;
        }
        optimal += 1;
        assert!(rel(bb.objective, brute.objective) <= REL_TOL, "seed {seed}: {} vs {}", bb.objective, brute.objective);
        let (sched, sol) = extract_solution(&bb.solution, &idx, &cfg, &set).unwrap();
        let rep = check_feasibility(&sched, &sol, &cfg, &set, 1e-6);
        assert!(rep.is_empty(), "seed {seed}:\n{rep}");
    }
    // The generator is meant to produce mostly solvable instances.
    assert!(optimal >= INSTANCES as usize / 2, "only {optimal} feasible");
}

#[derive(Default)]
struct Recorder {
    events: Vec<NodeEvent>,
    incumbents: Vec<f64>,
}

impl Monitor for Recorder {
    fn node(&mut self, e: &NodeEvent) {
        self.events.push(*e);
    }
    fn incumbent(&mut self, objective: f64) {
        self.incumbents.push(objective);
    }
}

#[test]
fn node_bounds_rise_and_incumbents_fall() {
    for seed in 0..20 {
        let (cfg, set) = common::random_instance(1000 + seed);
        let (m, _) = build_model(&cfg, &set, 3).unwrap();
        let mut rec = Recorder::default();
        let opts = SolveOptions { mip_gap: 0.0, batch_size: 3, ..SolveOptions::default() };
        solve_milp_with(&m, &opts, &Sequential, &mut rec).unwrap();
        for e in &rec.events {
            if e.parent_bound.is_finite() {
                assert!(e.bound >= e.parent_bound - 1e-9 * e.parent_bound.abs().max(1.0), "seed {seed}: {e:?}");
            }
        }
        assert!(rec.incumbents.windows(2).all(|w| w[1] <= w[0]), "seed {seed}: {:?}", rec.incumbents);
    }
}

/// Runs jobs back to front, returning results in input order.
struct Backwards;

impl Executor for Backwards {
    fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(usize, T) -> R + Sync,
    {
        let n = items.len();
        let mut out: Vec<(usize, R)> = items.into_iter().enumerate().rev().map(|(i, t)| (i, f(i, t))).collect();
        out.sort_by_key(|p| p.0);
        assert_eq!(out.len(), n);
        out.into_iter().map(|p| p.1).collect()
    }
}

#[test]
fn result_does_not_depend_on_job_order() {
    for seed in 0..10 {
        let (cfg, set) = common::random_instance(2000 + seed);
        let (m, _) = build_model(&cfg, &set, 2).unwrap();
        let opts = SolveOptions { batch_size: 4, ..SolveOptions::default() };
        let a = solve_milp_with(&m, &opts, &Sequential, &mut lowcarb_core::milp::Silent).unwrap();
        let b = solve_milp_with(&m, &opts, &Backwards, &mut lowcarb_core::milp::Silent).unwrap();
        assert_eq!(a, b, "seed {seed}");
    }
}
