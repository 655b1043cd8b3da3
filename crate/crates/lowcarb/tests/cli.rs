mod common;

use lowcarb::cli::{parse_prices, COMMITMENT_FILE, DISPATCH_FILE, MANIFEST_FILE, REPORT_FILE};
use lowcarb::csvio::{history_table, Series};
use lowcarb::manifest::RunManifest;
use lowcarb::output::{read_commitment, read_sweep, CompareReport, SolveReport};
use lowcarb::scenarios::{read_json, ScenarioDocument};
use lowcarb_core::scenario::CurveSet;
use tempfile::tempdir;

use common::*;

fn histories(dir: &std::path::Path) {
    let wind = CurveSet::new("wind", vec![vec![10.0, 20.0], vec![11.0, 21.0], vec![50.0, 60.0], vec![52.0, 59.0]]).unwrap();
    let solar = CurveSet::new("solar", vec![vec![0.0, 5.0], vec![0.0, 30.0], vec![0.0, 6.0], vec![0.0, 31.0]]).unwrap();
    history_table(&wind).write(&dir.join("wind.csv")).unwrap();
    history_table(&solar).write(&dir.join("solar.csv")).unwrap();
    Series { names: vec!["hydro".into()], values: vec![vec![7.0, 8.0]] }.to_table().write(&dir.join("hydro.csv")).unwrap();
}

#[test]
fn cluster_fixed_k_writes_document_and_manifest() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    histories(d);
    let out = d.join("sc.json");
    let (wind, solar) = (d.join("wind.csv"), d.join("solar.csv"));
    let args = ["cluster", "--wind", s(&wind), "--solar", s(&solar)];
    let r = lowcarb(&[&args[..], &["--hydro", s(&d.join("hydro.csv")), "--k", "2", "--seed", "5", "--out", s(&out)]].concat());
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    let doc = ScenarioDocument::read(&out).unwrap();
    assert_eq!(doc.scenarios.len(), 4);
    assert_eq!(doc.seed, Some(5));
    let total: f64 = doc.scenarios.iter().map(|s| s.probability).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!(doc.scenarios.iter().all(|s| s.hydro_cap == [7.0, 8.0]));
    let m = RunManifest::read(&d.join("sc.manifest.json")).unwrap();
    assert_eq!(m.seed, Some(5));
    assert_eq!(m.inputs.len(), 3);
    assert!(m.verify(d).is_empty());

    let r = lowcarb(&[&args[..], &["--k", "1", "--seed", "5", "--out", s(&out)]].concat());
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    let doc = ScenarioDocument::read(&out).unwrap();
    assert_eq!(doc.scenarios.len(), 1);
    assert_eq!(doc.scenarios[0].probability, 1.0);
    assert_eq!(doc.scenarios[0].hydro_cap, [0.0, 0.0]);

    let r = lowcarb(&[&args[..], &["--k", "auto", "--k-max", "3", "--seed", "5", "--out", s(&out)]].concat());
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    let doc = ScenarioDocument::read(&out).unwrap();
    assert_eq!(doc.wind.unwrap().k, 2);
}

#[test]
fn cluster_requires_seed_and_reports_bad_rows() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    histories(d);
    let out = d.join("sc.json");
    let r = lowcarb(&["cluster", "--wind", s(&d.join("wind.csv")), "--solar", s(&d.join("solar.csv")), "--out", s(&out)]);
    assert_eq!(code(&r), 2);
    assert!(stderr(&r).contains("--seed"));

    std::fs::write(d.join("wind.csv"), "day,t0,t1\nd1,1,2\nd2,1,2,3\n").unwrap();
    let r = lowcarb(&[
        "cluster", "--wind", s(&d.join("wind.csv")), "--solar", s(&d.join("solar.csv")), "--k", "1", "--seed", "1", "--out",
        s(&out),
    ]);
    assert_eq!(code(&r), 2);
    let err = stderr(&r);
    assert!(err.contains("wind.csv:3:"), "{err}");
    assert!(!out.exists());
}

#[test]
fn solve_writes_outputs_and_is_deterministic() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let (c, sc) = write_instance(d, &small_config(), &small_scenarios());
    let run = |out: &str, threads: &str| {
        let r = lowcarb(&["solve", "--config", s(&c), "--scenarios", s(&sc), "--out", s(&d.join(out)), "--threads", threads, "--mps", "--quiet"]);
        assert_eq!(code(&r), 0, "{}", stderr(&r));
    };
    run("a", "1");
    run("b", "1");
    run("c", "4");
    for f in [COMMITMENT_FILE, DISPATCH_FILE, REPORT_FILE, "model.mps"] {
        assert_eq!(read(&d.join("a").join(f)), read(&d.join("b").join(f)), "{f}");
        assert_eq!(read(&d.join("a").join(f)), read(&d.join("c").join(f)), "{f}");
    }
    let ma = RunManifest::read(&d.join("a").join(MANIFEST_FILE)).unwrap();
    let mb = RunManifest::read(&d.join("b").join(MANIFEST_FILE)).unwrap();
    assert_eq!(RunManifest { wall_time_s: 0.0, ..ma.clone() }, RunManifest { wall_time_s: 0.0, ..mb });
    assert!(ma.verify(&d.join("a")).is_empty());

    let report: SolveReport = read_json(&d.join("a").join(REPORT_FILE)).unwrap();
    assert_eq!(report.solve.status, "optimal");
    assert!(report.violations.is_empty());
    assert!(report.solve.gap <= 1e-4);

    let r = lowcarb(&["verify", s(&d.join("a").join(MANIFEST_FILE))]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    std::fs::write(d.join("a").join(COMMITMENT_FILE), "tampered").unwrap();
    let r = lowcarb(&["verify", s(&d.join("a").join(MANIFEST_FILE))]);
    assert_ne!(code(&r), 0);
    assert!(stderr(&r).contains(COMMITMENT_FILE));
}

#[test]
fn zero_load_gives_all_off_and_zero_cost() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let mut config = small_config();
    config.load = vec![0.0; 4];
    config.initial_state = vec![false, false];
    config.initial_output = vec![0.0, 0.0];
    let (c, sc) = write_instance(d, &config, &small_scenarios());
    let r = lowcarb(&["solve", "--config", s(&c), "--scenarios", s(&sc), "--out", s(&d.join("o")), "--quiet"]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    let (_, on) = read_commitment(&d.join("o").join(COMMITMENT_FILE)).unwrap();
    assert!(on.iter().flatten().all(|&b| b == 0));
    let report: SolveReport = read_json(&d.join("o").join(REPORT_FILE)).unwrap();
    assert_eq!(report.cost.total, 0.0);
    assert_eq!(report.cost.start_stop_cycles, 0);
}

#[test]
fn loose_gap_never_beats_the_tight_bound() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let (c, sc) = write_instance(d, &small_config(), &small_scenarios());
    let tight = lowcarb(&["solve", "--config", s(&c), "--scenarios", s(&sc), "--out", s(&d.join("t")), "--mip-gap", "0", "--quiet"]);
    let loose = lowcarb(&["solve", "--config", s(&c), "--scenarios", s(&sc), "--out", s(&d.join("l")), "--mip-gap", "0.1", "--quiet"]);
    assert_eq!((code(&tight), code(&loose)), (0, 0));
    let t: SolveReport = read_json(&d.join("t").join(REPORT_FILE)).unwrap();
    let l: SolveReport = read_json(&d.join("l").join(REPORT_FILE)).unwrap();
    assert!(l.solve.objective >= t.solve.objective - 1e-9 * t.solve.objective.abs());
    assert!(l.solve.bound <= t.solve.objective + 1e-9 * t.solve.objective.abs());
}

#[test]
fn infeasible_instance_exits_3() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let mut config = small_config();
    config.load[2] = 5000.0;
    let (c, sc) = write_instance(d, &config, &small_scenarios());
    let r = lowcarb(&["solve", "--config", s(&c), "--scenarios", s(&sc), "--out", s(&d.join("o")), "--quiet"]);
    assert_eq!(code(&r), 3, "{}", stderr(&r));
    assert!(stderr(&r).contains("infeasible"));
}

#[test]
fn missing_and_mismatched_inputs_exit_2() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let (c, sc) = write_instance(d, &small_config(), &small_scenarios());
    let missing = d.join("nope.json");
    let r = lowcarb(&["compare", "--config", s(&c), "--scenarios", s(&missing), "--out", s(&d.join("o"))]);
    assert_eq!(code(&r), 2);
    assert!(stderr(&r).contains("nope.json"));

    let mut longer = small_config();
    longer.load.push(700.0);
    longer.horizon = 5;
    std::fs::create_dir(d.join("five")).unwrap();
    let (c5, _) = write_instance(&d.join("five"), &longer, &small_scenarios());
    let r = lowcarb(&["solve", "--config", s(&c5), "--scenarios", s(&sc), "--out", s(&d.join("o"))]);
    assert_eq!(code(&r), 2);
    assert!(stderr(&r).contains("periods"), "{}", stderr(&r));

    let r = lowcarb(&["solve", "--config", s(&c5), "--scenarios", s(&sc), "--out", s(&d.join("o")), "--branching", "random"]);
    assert_eq!(code(&r), 2);
}

#[test]
fn sweep_rows_and_usage_errors() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let (c, sc) = write_instance(d, &small_config(), &small_scenarios());
    let out = d.join("sweep.csv");
    let base = ["sweep", "--config", s(&c), "--scenarios", s(&sc), "--out", s(&out), "--quiet"];

    for empty in ["", " , "] {
        let r = lowcarb(&[&base[..], &["--prices", empty]].concat());
        assert_eq!(code(&r), 2, "{empty:?}");
    }
    let r = lowcarb(&[&base[..], &["--prices", "-5"]].concat());
    assert_eq!(code(&r), 2);

    let r = lowcarb(&[&base[..], &["--prices", "300,0,100"]].concat());
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    let rows = read_sweep(&out).unwrap();
    assert_eq!(rows.iter().map(|r| r.carbon_price).collect::<Vec<_>>(), [0.0, 100.0, 300.0]);
    assert!(RunManifest::read(&d.join("sweep.manifest.json")).unwrap().verify(d).is_empty());

    // One price matches the solve at that price (the config's price is 100).
    let r = lowcarb(&[&base[..], &["--prices", "100"]].concat());
    assert_eq!(code(&r), 0);
    let one = read_sweep(&out).unwrap();
    let r = lowcarb(&["solve", "--config", s(&c), "--scenarios", s(&sc), "--out", s(&d.join("o")), "--quiet"]);
    assert_eq!(code(&r), 0);
    let report: SolveReport = read_json(&d.join("o").join(REPORT_FILE)).unwrap();
    assert_eq!(one.len(), 1);
    assert!((one[0].total - report.cost.total).abs() <= 5e-6 * report.cost.total.abs());
}

#[test]
fn sweep_with_every_row_failing_exits_3() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let mut config = small_config();
    config.load[1] = 5000.0;
    let (c, sc) = write_instance(d, &config, &small_scenarios());
    let r = lowcarb(&["sweep", "--config", s(&c), "--scenarios", s(&sc), "--out", s(&d.join("s.csv")), "--prices", "0,10", "--quiet"]);
    assert_eq!(code(&r), 3, "{}", stderr(&r));
    let rows = read_sweep(&d.join("s.csv")).unwrap();
    assert!(rows.iter().all(|r| r.error.is_some()));
}

#[test]
fn compare_single_scenario_has_zero_vss() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let mut set = small_scenarios();
    set.scenarios.truncate(1);
    set.scenarios[0].probability = 1.0;
    let (c, sc) = write_instance(d, &small_config(), &set);
    let r = lowcarb(&["compare", "--config", s(&c), "--scenarios", s(&sc), "--out", s(&d.join("o")), "--quiet"]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    let rep: CompareReport = read_json(&d.join("o").join("compare.json")).unwrap();
    assert_eq!(rep.vss, 0.0);
    assert_eq!(rep.stochastic, rep.deterministic);
    let csv = String::from_utf8(read(&d.join("o").join("compare.csv"))).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[1].split_once(',').unwrap().1, lines[2].split_once(',').unwrap().1);
}

#[test]
fn compare_two_scenarios_has_nonnegative_vss() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let (c, sc) = write_instance(d, &small_config(), &small_scenarios());
    let r = lowcarb(&["compare", "--config", s(&c), "--scenarios", s(&sc), "--out", s(&d.join("o")), "--quiet"]);
    assert_eq!(code(&r), 0, "{}", stderr(&r));
    let rep: CompareReport = read_json(&d.join("o").join("compare.json")).unwrap();
    assert!(rep.vss >= -1e-6 * rep.stochastic.total.abs(), "{}", rep.vss);
}

#[test]
fn thread_count_comes_from_the_environment() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let (c, sc) = write_instance(d, &small_config(), &small_scenarios());
    let r = std::process::Command::new(env!("CARGO_BIN_EXE_lowcarb"))
        .args(["solve", "--config", s(&c), "--scenarios", s(&sc), "--out", s(&d.join("o")), "--quiet"])
        .env("LOWCARB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&r), 2);
    assert!(stderr(&r).contains("LOWCARB_THREADS") || stderr(&r).contains("threads"), "{}", stderr(&r));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(code(&lowcarb(&["--help"])), 0);
    assert_eq!(code(&lowcarb(&["--version"])), 0);
    assert_eq!(code(&lowcarb(&["frobnicate"])), 2);
}

#[test]
fn price_lists() {
    assert_eq!(parse_prices("0, 42.85,100").unwrap(), [0.0, 42.85, 100.0]);
    assert!(parse_prices("").is_err());
    assert!(parse_prices("1,x").is_err());
}
