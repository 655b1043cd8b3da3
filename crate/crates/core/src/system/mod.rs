//! Domain types of the combined energy system.
//!
//! Units: powers are period-average MW, energies MWh, money in whatever
//! currency the coal and carbon prices are quoted in.

mod costs;
mod validate;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub use costs::{emissions, fuel_cost, start_stop_cycles, uc_cost, CostError};
pub use validate::{validate_config, validate_scenarios, ValidationReport, Violation};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// A coal-fired unit with quadratic fuel and emission curves.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ThermalUnit {
    pub id: String,
    /// Fuel curve `a + b·p + c·p²` in tonnes of standard coal.
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Emission curve `l + k·p + j·p²` in tCO₂.
    pub l: f64,
    pub k: f64,
    pub j: f64,
    pub p_min: f64,
    pub p_max: f64,
    /// MW per period.
    pub ramp_up: f64,
    pub ramp_down: f64,
    pub startup_cost: f64,
    pub shutdown_cost: f64,
    /// Minimum number of consecutive on periods after a start.
    pub min_up: u32,
    /// Minimum number of consecutive off periods after a stop.
    pub min_down: u32,
}

impl ThermalUnit {
    /// Output limit in the period a unit starts or stops: the midpoint of its
    /// operating range.
    pub fn startup_ramp(&self) -> f64 {
        0.5 * (self.p_min + self.p_max)
    }

    pub fn shutdown_ramp(&self) -> f64 {
        self.startup_ramp()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BatteryParams {
    /// Rated energy capacity, MWh.
    pub capacity: f64,
    pub charge_limit: f64,
    pub release_limit: f64,
    pub eta_charge: f64,
    /// Divides released energy: releasing `p` for `dt` drains `p·dt/eta_release`.
    pub eta_release: f64,
    pub soc_min: f64,
    pub soc_max: f64,
    /// Stored energy before the first period.
    pub initial_energy: f64,
}

impl BatteryParams {
    pub fn energy_min(&self) -> f64 {
        self.soc_min * self.capacity
    }

    pub fn energy_max(&self) -> f64 {
        self.soc_max * self.capacity
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CarbonMarketParams {
    /// Price per tonne of CO₂.
    pub price: f64,
    /// Correction factor applied to the free allocation.
    pub eta_correction: f64,
    /// Free allocation per MWh generated, tCO₂/MWh.
    pub allocation_coeff: f64,
}

impl CarbonMarketParams {
    /// Free allowance granted per MWh of coal generation.
    pub fn allowance_rate(&self) -> f64 {
        self.eta_correction * self.allocation_coeff
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SystemConfig {
    pub units: Vec<ThermalUnit>,
    pub battery: BatteryParams,
    pub carbon: CarbonMarketParams,
    /// Price per tonne of standard coal.
    pub coal_price: f64,
    pub load: Vec<f64>,
    pub horizon: usize,
    /// Hours per period.
    pub dt: f64,
    /// Commitment status before the first period (one entry per unit).
    pub initial_state: Vec<bool>,
    /// Output before the first period (one entry per unit).
    pub initial_output: Vec<f64>,
}

impl SystemConfig {
    pub fn num_units(&self) -> usize {
        self.units.len()
    }

    pub fn initial_on(&self, unit: usize) -> bool {
        self.initial_state.get(unit).copied().unwrap_or(false)
    }

    pub fn initial_power(&self, unit: usize) -> f64 {
        self.initial_output.get(unit).copied().unwrap_or(0.0)
    }

    pub fn with_carbon_price(&self, price: f64) -> Self {
        let mut out = self.clone();
        out.carbon.price = price;
        out
    }
}

/// One typical renewable-output scenario.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Scenario {
    pub probability: f64,
    pub wind_cap: Vec<f64>,
    pub solar_cap: Vec<f64>,
    pub hydro_cap: Vec<f64>,
}

impl Scenario {
    pub fn periods(&self) -> usize {
        self.wind_cap.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ScenarioSet {
    pub scenarios: Vec<Scenario>,
}

impl ScenarioSet {
    pub fn new(scenarios: Vec<Scenario>) -> Self {
        Self { scenarios }
    }

    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.scenarios.iter().map(|s| s.probability).collect()
    }

    /// Probability-weighted mean scenario, used as the expected-value
    /// (deterministic) benchmark.
    pub fn mean_scenario(&self) -> Scenario {
        let periods = self.scenarios.first().map_or(0, Scenario::periods);
        let mut mean = Scenario {
            probability: 1.0,
            wind_cap: vec![0.0; periods],
            solar_cap: vec![0.0; periods],
            hydro_cap: vec![0.0; periods],
        };
        for s in &self.scenarios {
            for t in 0..periods {
                mean.wind_cap[t] += s.probability * s.wind_cap[t];
                mean.solar_cap[t] += s.probability * s.solar_cap[t];
                mean.hydro_cap[t] += s.probability * s.hydro_cap[t];
            }
        }
        mean
    }
}

/// First-stage on/off decisions, `on[unit][period]` ∈ {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CommitmentSchedule {
    pub on: Vec<Vec<u8>>,
    pub initial_state: Vec<u8>,
}

impl CommitmentSchedule {
    pub fn all_off(units: usize, periods: usize) -> Self {
        Self {
            on: vec![vec![0; periods]; units],
            initial_state: vec![0; units],
        }
    }

    pub fn units(&self) -> usize {
        self.on.len()
    }

    pub fn periods(&self) -> usize {
        self.on.first().map_or(0, Vec::len)
    }

    pub fn is_on(&self, unit: usize, period: usize) -> bool {
        self.on[unit][period] == 1
    }

    /// Status in the period before `period`, falling back to the initial
    /// state for the first period.
    pub fn previous(&self, unit: usize, period: usize) -> u8 {
        if period == 0 {
            self.initial_state.get(unit).copied().unwrap_or(0)
        } else {
            self.on[unit][period - 1]
        }
    }
}

/// Recomputed cost figures of one scenario's dispatch.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ScenarioCost {
    pub fuel: f64,
    pub carbon: f64,
    /// Gross emissions, tCO₂.
    pub emissions: f64,
    /// Free allowance, tCO₂.
    pub allowance: f64,
    /// Penalty paid for unserved or surplus energy (zero unless the dispatch
    /// was solved with balance slacks).
    pub imbalance: f64,
}

impl ScenarioCost {
    pub fn total(&self) -> f64 {
        self.fuel + self.carbon + self.imbalance
    }
}

/// Second-stage decisions for one scenario.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ScenarioDispatch {
    /// `p_thermal[unit][period]`
    pub p_thermal: Vec<Vec<f64>>,
    pub p_wind: Vec<f64>,
    pub p_solar: Vec<f64>,
    pub p_hydro: Vec<f64>,
    pub p_charge: Vec<f64>,
    pub p_release: Vec<f64>,
    /// Stored energy at the end of each period.
    pub energy: Vec<f64>,
    /// Unserved load (only nonzero with balance slacks).
    pub shed: Vec<f64>,
    /// Surplus generation (only nonzero with balance slacks).
    pub spill: Vec<f64>,
    pub cost: ScenarioCost,
}

impl ScenarioDispatch {
    pub fn zeros(units: usize, periods: usize) -> Self {
        Self {
            p_thermal: vec![vec![0.0; periods]; units],
            p_wind: vec![0.0; periods],
            p_solar: vec![0.0; periods],
            p_hydro: vec![0.0; periods],
            p_charge: vec![0.0; periods],
            p_release: vec![0.0; periods],
            energy: vec![0.0; periods],
            shed: vec![0.0; periods],
            spill: vec![0.0; periods],
            cost: ScenarioCost::default(),
        }
    }

    pub fn thermal_total(&self) -> f64 {
        self.p_thermal.iter().flatten().sum()
    }
}

/// Full recourse solution: start/stop cost variables plus per-scenario
/// dispatch.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DispatchSolution {
    /// `startup_cost[unit][period]`, the epigraph variables of the start cost.
    pub startup_cost: Vec<Vec<f64>>,
    pub shutdown_cost: Vec<Vec<f64>>,
    pub scenarios: Vec<ScenarioDispatch>,
}
