mod common;

use lowcarb_core::system::{emissions, fuel_cost, uc_cost, validate_config};
use lowcarb_core::{CommitmentSchedule, SystemConfig};
use proptest::prelude::*;

type Breaker = fn(&mut SystemConfig);

/// Each entry breaks exactly one invariant of a valid configuration.
const BREAKERS: [(&str, Breaker); 22] = [
    ("0 <= p_min", |c| c.units[0].p_min = -1.0),
    ("p_min <= p_max", |c| {
        c.units[0].p_max = c.units[0].p_min - 1.0;
        c.initial_state[0] = false;
        c.initial_output[0] = 0.0;
    }),
    ("ramp_up > 0", |c| c.units[0].ramp_up = 0.0),
    ("ramp_down > 0", |c| c.units[0].ramp_down = -3.0),
    ("c >= 0", |c| c.units[0].c = -1e-4),
    ("j >= 0", |c| c.units[0].j = -1e-4),
    ("min_up >= 1", |c| c.units[0].min_up = 0),
    ("min_down >= 1", |c| c.units[0].min_down = 0),
    ("startup_cost >= 0", |c| c.units[0].startup_cost = -1.0),
    ("shutdown_cost >= 0", |c| c.units[0].shutdown_cost = -1.0),
    ("0 <= soc_min", |c| {
        c.battery.soc_min = -0.1;
        c.battery.initial_energy = 0.5 * c.battery.capacity;
    }),
    ("soc_min < soc_max", |c| {
        c.battery.soc_min = 0.9;
        c.battery.soc_max = 0.3;
    }),
    ("soc_max <= 1", |c| {
        c.battery.soc_max = 1.2;
        c.battery.initial_energy = 0.5 * c.battery.capacity;
    }),
    ("capacity > 0", |c| c.battery.capacity = 0.0),
    ("charge_limit >= 0", |c| c.battery.charge_limit = -1.0),
    ("0 < eta_charge <= 1", |c| c.battery.eta_charge = 1.1),
    ("eta_release > 0", |c| c.battery.eta_release = 0.0),
    ("soc_min*B <= initial_energy <= soc_max*B", |c| c.battery.initial_energy = c.battery.capacity),
    ("price >= 0", |c| c.carbon.price = -5.0),
    ("eta_correction > 0", |c| c.carbon.eta_correction = 0.0),
    ("horizon = length(load)", |c| c.horizon += 1),
    ("dt > 0", |c| c.dt = 0.0),
];

#[test]
fn random_configs_are_valid() {
    for seed in 0..100 {
        let (cfg, _) = common::random_instance(seed);
        assert!(validate_config(&cfg).is_ok(), "seed {seed}:\n{}", validate_config(&cfg));
    }
}

proptest! {
    #[test]
    fn breaking_one_invariant_reports_exactly_it(seed in 0u64..10_000, which in 0..BREAKERS.len()) {
        let (mut cfg, _) = common::random_instance(seed);
        let (message, breaker) = BREAKERS[which];
        breaker(&mut cfg);
        let rep = validate_config(&cfg);
        prop_assert_eq!(rep.violations.len(), 1, "{}:\n{}", message, rep);
        prop_assert_eq!(rep.violations[0].message.as_str(), message);
    }

    #[test]
    fn cost_curves_are_convex(seed in 0u64..10_000, p1 in 0.0f64..500.0, p2 in 0.0f64..500.0, alpha in 0.0f64..=1.0) {
        let (cfg, _) = common::random_instance(seed);
        let u = &cfg.units[0];
        let mid = alpha * p1 + (1.0 - alpha) * p2;
        let f = |p| fuel_cost(u, p, cfg.coal_price).unwrap();
        let e = |p| emissions(u, p).unwrap();
        prop_assert!(f(mid) <= alpha * f(p1) + (1.0 - alpha) * f(p2) + 1e-9 * f(p1).max(f(p2)));
        prop_assert!(e(mid) <= alpha * e(p1) + (1.0 - alpha) * e(p2) + 1e-9 * e(p1).max(e(p2)));
    }

    #[test]
    fn uc_cost_ignores_an_unchanged_trailing_period(
        seed in 0u64..10_000,
        on in prop::collection::vec(prop::collection::vec(0u8..=1, 1..12), 1..=2),
    ) {
        let (cfg, _) = common::random_instance(seed);
        let n = on.len().min(cfg.units.len());
        let len = on.iter().map(Vec::len).min().unwrap();
        let rows: Vec<Vec<u8>> = on[..n].iter().map(|r| r[..len].to_vec()).collect();
        let sched = CommitmentSchedule { on: rows.clone(), initial_state: vec![0; n] };
        let longer = CommitmentSchedule {
            on: rows.iter().map(|r| { let mut r = r.clone(); r.push(*r.last().unwrap()); r }).collect(),
            initial_state: vec![0; n],
        };
        let units = &cfg.units[..n];
        prop_assert_eq!(uc_cost(&sched, units).unwrap(), uc_cost(&longer, units).unwrap());
    }
}

#[test]
fn cost_examples() {
    let (cfg, _) = common::random_instance(7);
    let mut u = cfg.units[0].clone();
    (u.a, u.b, u.c) = (100.0, 2.0, 0.01);
    assert_eq!(fuel_cost(&u, 50.0, 1.0).unwrap(), 225.0);
    assert_eq!(fuel_cost(&u, 0.0, 1.0).unwrap(), 100.0);
    assert!(fuel_cost(&u, -1.0, 1.0).is_err());
    (u.l, u.k, u.j) = (10.0, 0.9, 0.0001);
    assert!((emissions(&u, 100.0).unwrap() - 101.0).abs() < 1e-12);
    (u.startup_cost, u.shutdown_cost) = (1000.0, 500.0);
    let sched = CommitmentSchedule { on: vec![vec![0, 1, 1, 0]], initial_state: vec![0] };
    assert_eq!(uc_cost(&sched, &[u]).unwrap(), 1500.0);
}
