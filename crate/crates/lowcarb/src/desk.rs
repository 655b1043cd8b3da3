//! The shipped desk-scale instance: a synthetic six-unit, 3070 MW coal fleet
//! with wind, solar, hydro and a battery over 24 hourly periods, plus a
//! synthetic 48-day renewable history whose k = 3 clustering reproduces the
//! published marginal probabilities.
//!
//! Unit coefficients are invented: the fuel-cheap units are the dirty ones,
//! so raising the carbon price moves output towards the cleaner units.

use lowcarb_core::scenario::{joint_scenarios, kmeans, ClusterResult, CurveSet, ScenarioError};
use lowcarb_core::system::{BatteryParams, CarbonMarketParams, ScenarioSet, SystemConfig, ThermalUnit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::csvio::sig6;

pub const HORIZON: usize = 24;
pub const HISTORY_DAYS: usize = 48;
pub const HISTORY_SEED: u64 = 20_240_601;
pub const CLUSTER_SEED: u64 = 42;

/// Days per wind regime (typical, windy, calm).
pub const WIND_SIZES: [usize; 3] = [33, 7, 8];
/// Days per solar regime (clear, hazy, overcast).
pub const SOLAR_SIZES: [usize; 3] = [31, 15, 2];

/// Hourly load in MW, night trough and evening peak.
pub const LOAD: [f64; HORIZON] = [
    1780.0, 1720.0, 1690.0, 1680.0, 1700.0, 1790.0, 1950.0, 2150.0, 2320.0, 2420.0, 2480.0, 2500.0, 2440.0, 2400.0,
    2420.0, 2460.0, 2530.0, 2650.0, 2740.0, 2700.0, 2580.0, 2380.0, 2120.0, 1920.0,
];

#[allow(clippy::too_many_arguments)]
fn unit(id: &str, p_min: f64, p_max: f64, b: f64, c: f64, k: f64, ramp: f64, start: f64, min_up: u32, min_down: u32) -> ThermalUnit {
    ThermalUnit {
        id: id.to_string(),
        a: 0.012 * p_max,
        b,
        c,
        l: 0.03 * p_max,
        k,
        j: 0.00002,
        p_min,
        p_max,
        ramp_up: ramp,
        ramp_down: ramp,
        startup_cost: start,
        shutdown_cost: 0.2 * start,
        min_up,
        min_down,
    }
}

pub fn units() -> Vec<ThermalUnit> {
    vec![
        unit("G1", 300.0, 660.0, 0.296, 0.000030, 1.030, 240.0, 36_000.0, 6, 5),
        unit("G2", 300.0, 660.0, 0.300, 0.000032, 1.010, 240.0, 36_000.0, 6, 5),
        unit("G3", 270.0, 600.0, 0.308, 0.000036, 0.990, 220.0, 30_000.0, 5, 4),
        unit("G4", 270.0, 600.0, 0.314, 0.000038, 0.975, 220.0, 30_000.0, 5, 4),
        unit("G5", 100.0, 275.0, 0.330, 0.000060, 0.960, 140.0, 9_000.0, 3, 2),
        unit("G6", 100.0, 275.0, 0.336, 0.000064, 0.955, 140.0, 9_000.0, 3, 2),
    ]
}

pub fn config() -> SystemConfig {
    let units = units();
    let n = units.len();
    SystemConfig {
        units,
        battery: BatteryParams {
            capacity: 600.0,
            charge_limit: 80.0,
            release_limit: 80.0,
            eta_charge: 0.95,
            eta_release: 1.0 / 0.95,
            soc_min: 0.3,
            soc_max: 0.9,
            initial_energy: 180.0,
        },
        carbon: CarbonMarketParams { price: 100.0, eta_correction: 1.0, allocation_coeff: 0.9419 },
        coal_price: 700.0,
        load: LOAD.to_vec(),
        horizon: HORIZON,
        dt: 1.0,
        initial_state: (0..n).map(|i| i < 3).collect(),
        initial_output: (0..n).map(|i| if i < 3 { 420.0 } else { 0.0 }).collect(),
    }
}

fn cosine(t: usize, peak_hour: f64) -> f64 {
    (2.0 * std::f64::consts::PI * (t as f64 - peak_hour) / HORIZON as f64).cos()
}

/// Clear-sky bell between 06:00 and 18:00.
fn daylight(t: usize) -> f64 {
    let h = t as f64 + 0.5;
    if (6.0..18.0).contains(&h) {
        (std::f64::consts::PI * (h - 6.0) / 12.0).sin()
    } else {
        0.0
    }
}

pub fn wind_regime(regime: usize, t: usize) -> f64 {
    let (mean, swing) = [(260.0, 90.0), (560.0, 120.0), (70.0, 30.0)][regime];
    mean + swing * cosine(t, 3.0)
}

pub fn solar_regime(regime: usize, t: usize) -> f64 {
    [460.0, 260.0, 70.0][regime] * daylight(t)
}

pub fn hydro_cap() -> Vec<f64> {
    (0..HORIZON).map(|t| round6(110.0 + 20.0 * cosine(t, 18.0))).collect()
}

/// Generated values are kept at six significant digits so the CSV files
/// reproduce them exactly.
fn round6(x: f64) -> f64 {
    sig6(x).parse().expect("sig6 output parses")
}

/// Days of each regime with ±6 % multiplicative noise, regimes interleaved by
/// a seeded shuffle.
fn history(label: &str, sizes: &[usize; 3], shape: fn(usize, usize) -> f64, rng: &mut ChaCha8Rng) -> CurveSet {
    let mut regimes: Vec<usize> = sizes.iter().enumerate().flat_map(|(r, &n)| std::iter::repeat(r).take(n)).collect();
    for i in (1..regimes.len()).rev() {
        regimes.swap(i, rng.gen_range(0..=i));
    }
    let curves = regimes
        .iter()
        .map(|&r| (0..HORIZON).map(|t| round6(shape(r, t) * (1.0 + rng.gen_range(-0.06..0.06)))).collect())
        .collect();
    CurveSet { label: label.to_string(), curves }
}

/// Synthetic 48-day wind and solar histories.
pub fn histories() -> (CurveSet, CurveSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(HISTORY_SEED);
    let wind = history("wind", &WIND_SIZES, wind_regime, &mut rng);
    let solar = history("solar", &SOLAR_SIZES, solar_regime, &mut rng);
    (wind, solar)
}

pub fn clusters() -> Result<(ClusterResult, ClusterResult), ScenarioError> {
    let (wind, solar) = histories();
    Ok((kmeans(&wind, 3, CLUSTER_SEED)?, kmeans(&solar, 3, CLUSTER_SEED)?))
}

/// Nine joint scenarios from the k = 3 clusterings of both histories.
pub fn scenarios() -> Result<ScenarioSet, ScenarioError> {
    let (w, s) = clusters()?;
    joint_scenarios(&w, &s, &hydro_cap())
}
