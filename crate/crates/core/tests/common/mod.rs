//! Seeded random two-stage instances small enough for brute force.

#![allow(dead_code)]

use lowcarb_core::{BatteryParams, CarbonMarketParams, Scenario, ScenarioSet, SystemConfig, ThermalUnit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_unit(rng: &mut ChaCha8Rng, id: usize) -> ThermalUnit {
    let p_min = rng.gen_range(10.0..40.0);
    ThermalUnit {
        id: format!("G{id}"),
        a: rng.gen_range(0.0..10.0),
        b: rng.gen_range(0.25..0.4),
        c: rng.gen_range(0.0..0.001),
        l: rng.gen_range(0.0..5.0),
        k: rng.gen_range(0.8..1.2),
        j: rng.gen_range(0.0..0.0005),
        p_min,
        p_max: p_min + rng.gen_range(30.0..120.0),
        ramp_up: rng.gen_range(20.0..100.0),
        ramp_down: rng.gen_range(20.0..100.0),
        startup_cost: rng.gen_range(0.0..3000.0),
        shutdown_cost: rng.gen_range(0.0..800.0),
        min_up: rng.gen_range(1..=3),
        min_down: rng.gen_range(1..=3),
    }
}

/// At most 2 units, 3 periods and 2 scenarios, so at most 12 binaries.
pub fn random_instance(seed: u64) -> (SystemConfig, ScenarioSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=2);
    let horizon = rng.gen_range(2..=3);
    let s = rng.gen_range(1..=2);
    let units: Vec<ThermalUnit> = (0..n).map(|i| random_unit(&mut rng, i)).collect();
    let cap: f64 = units.iter().map(|u| u.p_max).sum();
    let load = (0..horizon).map(|_| rng.gen_range(0.1..0.8) * cap).collect();
    let initial_state: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let initial_output = units
        .iter()
        .zip(&initial_state)
        .map(|(u, &on)| if on { rng.gen_range(u.p_min..=u.p_max) } else { 0.0 })
        .collect();
    let capacity = rng.gen_range(20.0..100.0);
    let battery = BatteryParams {
        capacity,
        charge_limit: rng.gen_range(5.0..20.0),
        release_limit: rng.gen_range(5.0..20.0),
        eta_charge: 0.95,
        eta_release: 1.0 / 0.95,
        soc_min: 0.2,
        soc_max: 0.9,
        initial_energy: rng.gen_range(0.2..0.9) * capacity,
    };
    let config = SystemConfig {
        units,
        battery,
        carbon: CarbonMarketParams { price: rng.gen_range(0.0..200.0), eta_correction: 1.0, allocation_coeff: 0.9419 },
        coal_price: 700.0,
        load,
        horizon,
        dt: 1.0,
        initial_state,
        initial_output,
    };
    let weights: Vec<f64> = (0..s).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut curve = |hi: f64| -> Vec<f64> { (0..horizon).map(|_| rng.gen_range(0.0..hi)).collect() };
    let scenarios = weights
        .iter()
        .map(|w| Scenario { probability: w / total, wind_cap: curve(60.0), solar_cap: curve(30.0), hydro_cap: curve(10.0) })
        .collect();
    (config, ScenarioSet::new(scenarios))
}
