//! A feasible one-unit case and one single-family mutation of it per
//! constraint family.
#![allow(dead_code)]

use lowcarb_core::formulation::{check_feasibility, Family};
use lowcarb_core::{
    BatteryParams, CarbonMarketParams, CommitmentSchedule, DispatchSolution, Scenario, ScenarioDispatch, ScenarioSet,
    SystemConfig, ThermalUnit,
};

pub const TOL: f64 = 1e-6;
pub const T: usize = 6;

pub struct Case {
    pub cfg: SystemConfig,
    pub set: ScenarioSet,
    pub sched: CommitmentSchedule,
    pub sol: DispatchSolution,
}

impl Case {
    fn d(&mut self) -> &mut ScenarioDispatch {
        &mut self.sol.scenarios[0]
    }

    /// Sets the load to whatever the dispatch supplies.
    fn balance(&mut self) {
        let d = &self.sol.scenarios[0];
        for t in 0..T {
            self.cfg.load[t] =
                d.p_thermal[0][t] + d.p_wind[t] + d.p_solar[t] + d.p_hydro[t] + d.p_release[t] - d.p_charge[t];
        }
    }

    /// Recomputes stored energy from the flows.
    fn integrate(&mut self) {
        let b = self.cfg.battery.clone();
        let d = &mut self.sol.scenarios[0];
        let mut e = b.initial_energy;
        for t in 0..T {
            e += b.eta_charge * d.p_charge[t] - d.p_release[t] / b.eta_release;
            d.energy[t] = e;
        }
    }

    fn commit(&mut self, on: [u8; T]) {
        self.sched.on[0] = on.to_vec();
        let (su, sd) = (self.cfg.units[0].startup_cost, self.cfg.units[0].shutdown_cost);
        for t in 0..T {
            let prev = if t == 0 { 0 } else { on[t - 1] };
            self.sol.startup_cost[0][t] = if on[t] > prev { su } else { 0.0 };
            self.sol.shutdown_cost[0][t] = if on[t] < prev { sd } else { 0.0 };
        }
    }

    pub fn check(&mut self) -> Vec<(Family, usize)> {
        let rep = check_feasibility(&self.sched, &self.sol, &self.cfg, &self.set, TOL);
        rep.violations.iter().map(|v| (v.family, v.period)).collect()
    }
}

/// One unit (20–120 MW, ramp 60, startup/shutdown ramp 70, two-hour minimum
/// up and down times) started at t = 1 and stopped at t = 5.
pub fn base() -> Case {
    let unit = ThermalUnit {
        id: "g".into(),
        a: 5.0,
        b: 0.3,
        c: 0.0005,
        l: 2.0,
        k: 0.95,
        j: 0.0001,
        p_min: 20.0,
        p_max: 120.0,
        ramp_up: 60.0,
        ramp_down: 60.0,
        startup_cost: 3000.0,
        shutdown_cost: 500.0,
        min_up: 2,
        min_down: 2,
    };
    let cfg = SystemConfig {
        units: vec![unit],
        battery: BatteryParams {
            capacity: 100.0,
            charge_limit: 20.0,
            release_limit: 20.0,
            eta_charge: 0.95,
            eta_release: 1.0 / 0.95,
            soc_min: 0.3,
            soc_max: 0.9,
            initial_energy: 60.0,
        },
        carbon: CarbonMarketParams { price: 100.0, eta_correction: 1.0, allocation_coeff: 0.9419 },
        coal_price: 700.0,
        load: vec![0.0; T],
        horizon: T,
        dt: 1.0,
        initial_state: vec![false],
        initial_output: vec![0.0],
    };
    let set = ScenarioSet::new(vec![Scenario {
        probability: 1.0,
        wind_cap: vec![30.0; T],
        solar_cap: vec![10.0; T],
        hydro_cap: vec![5.0; T],
    }]);
    let mut d = ScenarioDispatch::zeros(1, T);
    d.p_thermal[0] = vec![0.0, 50.0, 70.0, 70.0, 50.0, 0.0];
    d.p_wind = vec![10.0; T];
    d.p_hydro = vec![5.0; T];
    let sol = DispatchSolution { startup_cost: vec![vec![0.0; T]], shutdown_cost: vec![vec![0.0; T]], scenarios: vec![d] };
    let mut c = Case { cfg, set, sched: CommitmentSchedule { on: vec![vec![0; T]], initial_state: vec![0] }, sol };
    c.commit([0, 1, 1, 1, 1, 0]);
    c.integrate();
    c.balance();
    c
}

pub fn mutate(family: Family) -> Case {
    let mut c = base();
    match family {
        Family::MinDown => {
            // Off at 3, back on at 4.
            c.commit([0, 1, 1, 0, 1, 1]);
            c.d().p_thermal[0] = vec![0.0, 50.0, 70.0, 0.0, 60.0, 50.0];
        }
        Family::MinUp => {
            c.commit([0, 1, 0, 0, 0, 0]);
            c.d().p_thermal[0] = vec![0.0, 50.0, 0.0, 0.0, 0.0, 0.0];
        }
        Family::StartupCost => c.sol.startup_cost[0][1] -= 1.0,
        Family::ShutdownCost => c.sol.shutdown_cost[0][5] = 0.0,
        Family::Balance => {
            c.balance();
            c.cfg.load[2] += 1.0;
            return c;
        }
        Family::GenerationBounds => c.d().p_thermal[0][4] = 15.0,
        Family::Ramp => c.d().p_thermal[0][2..5].copy_from_slice(&[111.0, 111.0, 51.0]),
        Family::WindCap => c.d().p_wind[3] = 31.0,
        Family::SolarCap => c.d().p_solar[3] = 11.0,
        Family::HydroCap => c.d().p_hydro[3] = 6.0,
        Family::ChargeLimit => {
            c.d().p_charge[1] = 21.0;
            c.integrate();
        }
        Family::ReleaseLimit => {
            c.d().p_release[1] = 21.0;
            c.integrate();
        }
        Family::Complementarity => {
            // 0.95·5 − 5/(1/0.95) = 0: stored energy is unchanged.
            c.d().p_charge[2] = 5.0;
            c.d().p_release[2] = 5.0;
        }
        Family::EnergyBalance => {
            c.d().energy[T - 1] += 1.0;
            return c;
        }
        Family::SocBounds => {
            // 60 → 79 → 98 (above 90) → 88.5.
            c.d().p_charge[1] = 20.0;
            c.d().p_charge[2] = 20.0;
            c.d().p_release[3] = 10.0;
            c.integrate();
        }
    }
    c.balance();
    c
}
