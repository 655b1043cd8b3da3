use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{BatteryParams, CarbonMarketParams, ScenarioSet, SystemConfig, ThermalUnit};

/// One broken invariant: where it is and which predicate failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, message: &str) -> bool {
        self.violations.iter().any(|v| v.message == message)
    }

    fn check(&mut self, ok: bool, path: impl Into<String>, message: &str) {
        if !ok {
            self.violations.push(Violation { path: path.into(), message: message.to_string() });
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_unit(r: &mut ValidationReport, i: usize, u: &ThermalUnit) {
    let p = |field: &str| format!("units[{i}].{field}");
    for (name, value) in [("a", u.a), ("b", u.b), ("l", u.l), ("k", u.k)] {
        r.check(value.is_finite(), p(name), "finite");
    }
    r.check(u.p_min >= 0.0, p("p_min"), "0 <= p_min");
    r.check(u.p_min <= u.p_max && u.p_max.is_finite(), p("p_max"), "p_min <= p_max");
    r.check(u.ramp_up > 0.0, p("ramp_up"), "ramp_up > 0");
    r.check(u.ramp_down > 0.0, p("ramp_down"), "ramp_down > 0");
    r.check(u.c >= 0.0 && u.c.is_finite(), p("c"), "c >= 0");
    r.check(u.j >= 0.0 && u.j.is_finite(), p("j"), "j >= 0");
    r.check(u.min_up >= 1, p("min_up"), "min_up >= 1");
    r.check(u.min_down >= 1, p("min_down"), "min_down >= 1");
    r.check(u.startup_cost >= 0.0 && u.startup_cost.is_finite(), p("startup_cost"), "startup_cost >= 0");
    r.check(u.shutdown_cost >= 0.0 && u.shutdown_cost.is_finite(), p("shutdown_cost"), "shutdown_cost >= 0");
}

fn check_battery(r: &mut ValidationReport, b: &BatteryParams) {
    r.check(b.soc_min >= 0.0, "battery.soc_min", "0 <= soc_min");
    r.check(b.soc_min < b.soc_max, "battery.soc_max", "soc_min < soc_max");
    r.check(b.soc_max <= 1.0, "battery.soc_max", "soc_max <= 1");
    r.check(b.capacity > 0.0 && b.capacity.is_finite(), "battery.capacity", "capacity > 0");
    r.check(b.charge_limit >= 0.0 && b.charge_limit.is_finite(), "battery.charge_limit", "charge_limit >= 0");
    r.check(b.release_limit >= 0.0 && b.release_limit.is_finite(), "battery.release_limit", "release_limit >= 0");
    r.check(b.eta_charge > 0.0 && b.eta_charge <= 1.0, "battery.eta_charge", "0 < eta_charge <= 1");
    r.check(b.eta_release > 0.0 && b.eta_release.is_finite(), "battery.eta_release", "eta_release > 0");
    // Only meaningful once the SoC window itself is well formed.
    if b.soc_min < b.soc_max && b.capacity > 0.0 {
        let tol = 1e-9 * b.capacity;
        r.check(
            b.initial_energy >= b.energy_min() - tol && b.initial_energy <= b.energy_max() + tol,
            "battery.initial_energy",
            "soc_min*B <= initial_energy <= soc_max*B",
        );
    }
}

fn check_carbon(r: &mut ValidationReport, c: &CarbonMarketParams) {
    r.check(c.price >= 0.0 && c.price.is_finite(), "carbon.price", "price >= 0");
    r.check(
        c.allocation_coeff >= 0.0 && c.allocation_coeff.is_finite(),
        "carbon.allocation_coeff",
        "allocation_coeff >= 0",
    );
    r.check(c.eta_correction > 0.0 && c.eta_correction.is_finite(), "carbon.eta_correction", "eta_correction > 0");
}

/// Checks every invariant of the configuration; an empty report means the
/// configuration is usable.
pub fn validate_config(config: &SystemConfig) -> ValidationReport {
    let mut r = ValidationReport::default();
    for (i, u) in config.units.iter().enumerate() {
        check_unit(&mut r, i, u);
    }
    check_battery(&mut r, &config.battery);
    check_carbon(&mut r, &config.carbon);
    r.check(config.coal_price >= 0.0 && config.coal_price.is_finite(), "coal_price", "coal_price >= 0");
    r.check(config.horizon == config.load.len(), "horizon", "horizon = length(load)");
    r.check(config.dt > 0.0 && config.dt.is_finite(), "dt", "dt > 0");
    for (t, &l) in config.load.iter().enumerate() {
        r.check(l >= 0.0 && l.is_finite(), format!("load[{t}]"), "load[t] >= 0");
    }
    let n = config.units.len();
    r.check(config.initial_state.len() == n, "initial_state", "length(initial_state) = units");
    r.check(config.initial_output.len() == n, "initial_output", "length(initial_output) = units");
    for (i, u) in config.units.iter().enumerate() {
        let (Some(&on), Some(&p)) = (config.initial_state.get(i), config.initial_output.get(i)) else {
            continue;
        };
        let ok = if on { p >= u.p_min && p <= u.p_max } else { p == 0.0 };
        r.check(ok, format!("initial_output[{i}]"), "initial output within unit bounds");
    }
    r
}

/// Checks a scenario set against a horizon.
pub fn validate_scenarios(set: &ScenarioSet, horizon: usize) -> ValidationReport {
    let mut r = ValidationReport::default();
    r.check(!set.is_empty(), "scenarios", "nonempty");
    let mut sum = 0.0;
    for (w, s) in set.scenarios.iter().enumerate() {
        sum += s.probability;
        r.check(
            (0.0..=1.0).contains(&s.probability),
            format!("scenarios[{w}].probability"),
            "probability in [0,1]",
        );
        for (name, curve) in [("wind_cap", &s.wind_cap), ("solar_cap", &s.solar_cap), ("hydro_cap", &s.hydro_cap)] {
            r.check(curve.len() == horizon, format!("scenarios[{w}].{name}"), "length = horizon");
            r.check(
                curve.iter().all(|v| *v >= 0.0 && v.is_finite()),
                format!("scenarios[{w}].{name}"),
                "entries >= 0",
            );
        }
    }
    if !set.is_empty() {
        r.check(libm::fabs(sum - 1.0) <= 1e-9, "scenarios", "sum of probabilities = 1");
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::Scenario;
    use alloc::vec;

    pub(crate) fn two_unit_config() -> SystemConfig {
        let unit = |id: &str| ThermalUnit {
            id: id.to_string(),
            a: 10.0,
            b: 0.3,
            c: 0.0002,
            l: 5.0,
            k: 0.9,
            j: 0.0001,
            p_min: 50.0,
            p_max: 200.0,
            ramp_up: 80.0,
            ramp_down: 80.0,
            startup_cost: 5000.0,
            shutdown_cost: 1000.0,
            min_up: 2,
            min_down: 2,
        };
        SystemConfig {
            units: vec![unit("g1"), unit("g2")],
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
            load: vec![100.0; 24],
            horizon: 24,
            dt: 1.0,
            initial_state: vec![false, false],
            initial_output: vec![0.0, 0.0],
        }
    }

    #[test]
    fn well_formed_config_passes() {
        assert!(validate_config(&two_unit_config()).is_ok());
    }

    #[test]
    fn inverted_soc_bounds() {
        let mut c = two_unit_config();
        c.battery.soc_min = 0.9;
        c.battery.soc_max = 0.3;
        let r = validate_config(&c);
        assert!(r.has("soc_min < soc_max"), "{r}");
        assert_eq!(r.violations.len(), 1);
    }

    #[test]
    fn load_length_mismatch() {
        let mut c = two_unit_config();
        c.load.pop();
        let r = validate_config(&c);
        assert_eq!(r.violations.len(), 1);
        assert!(r.has("horizon = length(load)"));
    }

    #[test]
    fn initial_output_must_match_state() {
        let mut c = two_unit_config();
        c.initial_state[0] = true;
        let r = validate_config(&c);
        assert!(r.has("initial output within unit bounds"));
        c.initial_output[0] = 100.0;
        assert!(validate_config(&c).is_ok());
    }

    #[test]
    fn scenario_set_checks() {
        let s = Scenario {
            probability: 0.5,
            wind_cap: vec![1.0; 24],
            solar_cap: vec![1.0; 24],
            hydro_cap: vec![1.0; 23],
        };
        let set = ScenarioSet::new(vec![s.clone(), s]);
        let r = validate_scenarios(&set, 24);
        assert_eq!(r.violations.len(), 2);
        assert!(r.has("length = horizon"));
        assert!(validate_scenarios(&ScenarioSet::new(vec![]), 24).has("nonempty"));
    }
}
