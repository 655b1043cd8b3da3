#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lowcarb::config::{write_config, ConfigFile};
use lowcarb::desk;
use lowcarb::scenarios::ScenarioDocument;
use lowcarb_core::{Scenario, ScenarioSet, SystemConfig};

/// Two desk units over four periods.
pub fn small_config() -> SystemConfig {
    let mut c = desk::config();
    let mut units = desk::units();
    let mut g5 = units.remove(4);
    let mut g1 = units.remove(0);
    g1.min_up = 2;
    g1.min_down = 2;
    g5.min_up = 2;
    g5.min_down = 2;
    c.units = vec![g1, g5];
    c.initial_state = vec![true, false];
    c.initial_output = vec![420.0, 0.0];
    c.load = vec![700.0, 800.0, 900.0, 850.0];
    c.horizon = 4;
    c
}

pub fn small_scenarios() -> ScenarioSet {
    ScenarioSet::new(vec![
        Scenario {
            probability: 0.6,
            wind_cap: vec![100.0, 120.0, 80.0, 60.0],
            solar_cap: vec![0.0, 50.0, 80.0, 20.0],
            hydro_cap: vec![50.0; 4],
        },
        Scenario {
            probability: 0.4,
            wind_cap: vec![40.0, 30.0, 20.0, 10.0],
            solar_cap: vec![0.0, 30.0, 40.0, 10.0],
            hydro_cap: vec![50.0; 4],
        },
    ])
}

/// Writes `config.toml` and `scenarios.json` into `dir`.
pub fn write_instance(dir: &Path, config: &SystemConfig, set: &ScenarioSet) -> (PathBuf, PathBuf) {
    let c = dir.join("config.toml");
    let s = dir.join("scenarios.json");
    write_config(&c, &ConfigFile::from_config(config)).unwrap();
    ScenarioDocument::new(set).write(&s).unwrap();
    (c, s)
}

pub fn lowcarb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lowcarb"))
        .args(args)
        .env_remove("LOWCARB_THREADS")
        .output()
        .expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

pub fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

/// The shipped desk files.
pub fn desk_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/desk")
}
