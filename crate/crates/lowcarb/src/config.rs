//! The system configuration document (TOML).
//!
//! ```toml
//! format = "lowcarb-config"
//! version = 1
//! coal_price = 700.0
//! dt = 1.0
//! series = "series.csv"   # `load` column; or an inline `load = [...]`
//! min_up = 1              # defaults for units that omit them
//! min_down = 1
//!
//! [carbon]
//! price = 100.0
//! eta_correction = 1.0
//! allocation_coeff = 0.9419
//!
//! [battery]
//! capacity = 600.0
//! # initial_energy defaults to soc_min · capacity
//!
//! [[units]]
//! id = "G1"
//! initial_on = true       # default false
//! initial_output = 420.0  # default p_min when on, 0 when off
//! ```

use std::path::{Path, PathBuf};

use lowcarb_core::system::validate_config;
use lowcarb_core::{BatteryParams, CarbonMarketParams, SystemConfig, ThermalUnit};
use serde::{Deserialize, Serialize};

use crate::csvio::{write_file, Series};
use crate::error::{Error, Result};

pub const CONFIG_FORMAT: &str = "lowcarb-config";
pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitEntry {
    pub id: String,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub l: f64,
    pub k: f64,
    pub j: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub ramp_up: f64,
    pub ramp_down: f64,
    pub startup_cost: f64,
    pub shutdown_cost: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_up: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_down: Option<u32>,
    #[serde(default)]
    pub initial_on: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_output: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatteryEntry {
    pub capacity: f64,
    pub charge_limit: f64,
    pub release_limit: f64,
    pub eta_charge: f64,
    pub eta_release: f64,
    pub soc_min: f64,
    pub soc_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub format: String,
    pub version: u32,
    pub coal_price: f64,
    #[serde(default = "one")]
    pub dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub load: Option<Vec<f64>>,
    /// CSV with a `load` column, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<PathBuf>,
    #[serde(default = "one_u32")]
    pub min_up: u32,
    #[serde(default = "one_u32")]
    pub min_down: u32,
    pub carbon: CarbonMarketParams,
    pub battery: BatteryEntry,
    pub units: Vec<UnitEntry>,
}

fn one() -> f64 {
    1.0
}

fn one_u32() -> u32 {
    1
}

impl ConfigFile {
    /// The document for `config`, with the load written inline.
    pub fn from_config(config: &SystemConfig) -> Self {
        let units = config
            .units
            .iter()
            .enumerate()
            .map(|(i, u)| UnitEntry {
                id: u.id.clone(),
                a: u.a,
                b: u.b,
                c: u.c,
                l: u.l,
                k: u.k,
                j: u.j,
                p_min: u.p_min,
                p_max: u.p_max,
                ramp_up: u.ramp_up,
                ramp_down: u.ramp_down,
                startup_cost: u.startup_cost,
                shutdown_cost: u.shutdown_cost,
                min_up: Some(u.min_up),
                min_down: Some(u.min_down),
                initial_on: config.initial_on(i),
                initial_output: Some(config.initial_power(i)),
            })
            .collect();
        let b = &config.battery;
        ConfigFile {
            format: CONFIG_FORMAT.into(),
            version: CONFIG_VERSION,
            coal_price: config.coal_price,
            dt: config.dt,
            load: Some(config.load.clone()),
            series: None,
            min_up: 1,
            min_down: 1,
            carbon: config.carbon.clone(),
            battery: BatteryEntry {
                capacity: b.capacity,
                charge_limit: b.charge_limit,
                release_limit: b.release_limit,
                eta_charge: b.eta_charge,
                eta_release: b.eta_release,
                soc_min: b.soc_min,
                soc_max: b.soc_max,
                initial_energy: Some(b.initial_energy),
            },
            units,
        }
    }

    /// Resolves defaults and the load series. `path` is the config file;
    /// a relative `series` path is taken from its directory.
    pub fn resolve(&self, path: &Path) -> Result<SystemConfig> {
        if self.format != CONFIG_FORMAT {
            return Err(Error::invalid(path, format!("format is `{}`, expected `{CONFIG_FORMAT}`", self.format)));
        }
        if self.version != CONFIG_VERSION {
            return Err(Error::invalid(path, format!("unsupported version {}", self.version)));
        }
        let load = match (&self.load, &self.series) {
            (Some(l), None) => l.clone(),
            (None, Some(s)) => {
                let file = path.parent().unwrap_or(Path::new(".")).join(s);
                let series = Series::read(&file)?;
                series.get("load").ok_or_else(|| Error::invalid(&file, "no `load` column"))?.to_vec()
            }
            _ => return Err(Error::invalid(path, "give exactly one of `load` and `series`")),
        };
        let units: Vec<ThermalUnit> = self
            .units
            .iter()
            .map(|u| ThermalUnit {
                id: u.id.clone(),
                a: u.a,
                b: u.b,
                c: u.c,
                l: u.l,
                k: u.k,
                j: u.j,
                p_min: u.p_min,
                p_max: u.p_max,
                ramp_up: u.ramp_up,
                ramp_down: u.ramp_down,
                startup_cost: u.startup_cost,
                shutdown_cost: u.shutdown_cost,
                min_up: u.min_up.unwrap_or(self.min_up),
                min_down: u.min_down.unwrap_or(self.min_down),
            })
            .collect();
        let b = &self.battery;
        let config = SystemConfig {
            initial_state: self.units.iter().map(|u| u.initial_on).collect(),
            initial_output: self
                .units
                .iter()
                .map(|u| u.initial_output.unwrap_or(if u.initial_on { u.p_min } else { 0.0 }))
                .collect(),
            units,
            battery: BatteryParams {
                capacity: b.capacity,
                charge_limit: b.charge_limit,
                release_limit: b.release_limit,
                eta_charge: b.eta_charge,
                eta_release: b.eta_release,
                soc_min: b.soc_min,
                soc_max: b.soc_max,
                initial_energy: b.initial_energy.unwrap_or(b.soc_min * b.capacity),
            },
            carbon: self.carbon.clone(),
            coal_price: self.coal_price,
            horizon: load.len(),
            load,
            dt: self.dt,
        };
        let report = validate_config(&config);
        if !report.is_ok() {
            return Err(Error::invalid(path, format!("invalid configuration:\n{report}")));
        }
        Ok(config)
    }
}

pub fn read_config_file(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(&text, s.start));
        Error::Parse { path: path.to_path_buf(), line, column, message: e.message().to_string() }
    })
}

pub fn read_config(path: &Path) -> Result<SystemConfig> {
    read_config_file(path)?.resolve(path)
}

/// The config file plus the series file it names, if any.
pub fn config_files(path: &Path) -> Result<Vec<PathBuf>> {
    let doc = read_config_file(path)?;
    let mut files = vec![path.to_path_buf()];
    files.extend(doc.series.map(|s| path.parent().unwrap_or(Path::new(".")).join(s)));
    Ok(files)
}

pub fn write_config(path: &Path, doc: &ConfigFile) -> Result<()> {
    let text = toml::to_string(doc).map_err(|e| Error::invalid(path, e.to_string()))?;
    write_file(path, text.as_bytes())
}

/// 1-based line and column of a byte offset.
pub fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}
