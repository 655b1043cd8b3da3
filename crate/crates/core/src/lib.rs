//! Two-stage stochastic unit commitment and economic dispatch for a combined
//! coal / wind / solar / hydro / battery system under a carbon-trading cost.
//!
//! The crate is `no_std` (it needs `alloc`) and contains everything that is
//! pure computation:
//!
//! * [`system`] — domain types, validation and the cost / emission curves.
//! * [`scenario`] — k-means scenario reduction, elbow selection and the
//!   Cartesian composition of wind and solar clusters.
//! * [`model`] — a solver-agnostic sparse MILP container.
//! * [`lp`] — a bounded revised simplex (primal two-phase plus a dual simplex
//!   used for warm starts).
//! * [`milp`] — branch-and-bound over binaries and a brute-force oracle.
//! * [`formulation`] — assembly of the deterministic-equivalent MILP, solution
//!   extraction and constraint checking.
//! * [`analysis`] — carbon accounting, stochastic-vs-deterministic comparison
//!   and carbon-price sweeps.
//!
//! IO, threads and the command line live in the `lowcarb` companion crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod exec;
pub mod formulation;
pub mod lp;
pub mod milp;
pub mod model;
pub mod scenario;
pub mod system;

mod math;

pub use exec::{Executor, Sequential};
pub use model::{Constraint, MilpModel, Sense, VarKind, Variable};
pub use system::{
    BatteryParams, CarbonMarketParams, CommitmentSchedule, DispatchSolution, Scenario,
    ScenarioDispatch, ScenarioSet, SystemConfig, ThermalUnit,
};
