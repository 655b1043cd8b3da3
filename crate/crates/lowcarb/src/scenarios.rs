//! The scenario-set document (JSON): clustering results plus the joint
//! scenarios consumed by `solve`.

use std::path::Path;

use lowcarb_core::scenario::ClusterResult;
use lowcarb_core::system::validate_scenarios;
use lowcarb_core::{Scenario, ScenarioSet};
use serde::{Deserialize, Serialize};

use crate::csvio::write_file;
use crate::error::{Error, Result};

pub const SCENARIO_FORMAT: &str = "lowcarb-scenarios";
pub const SCENARIO_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterSummary {
    pub k: usize,
    pub probabilities: Vec<f64>,
    pub centroids: Vec<Vec<f64>>,
    pub sse: f64,
    pub iterations: usize,
}

impl From<&ClusterResult> for ClusterSummary {
    fn from(r: &ClusterResult) -> Self {
        Self {
            k: r.k(),
            probabilities: r.probabilities.clone(),
            centroids: r.centroids.clone(),
            sse: r.sse,
            iterations: r.iterations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub format: String,
    pub version: u32,
    pub periods: usize,
    /// k-means seed; absent for hand-written sets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wind: Option<ClusterSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solar: Option<ClusterSummary>,
    pub scenarios: Vec<Scenario>,
}

impl ScenarioDocument {
    pub fn new(set: &ScenarioSet) -> Self {
        Self {
            format: SCENARIO_FORMAT.into(),
            version: SCENARIO_VERSION,
            periods: set.scenarios.first().map_or(0, Scenario::periods),
            seed: None,
            wind: None,
            solar: None,
            scenarios: set.scenarios.clone(),
        }
    }

    pub fn set(&self) -> ScenarioSet {
        ScenarioSet::new(self.scenarios.clone())
    }

    pub fn read(path: &Path) -> Result<ScenarioDocument> {
        let doc: ScenarioDocument = read_json(path)?;
        if doc.format != SCENARIO_FORMAT {
            return Err(Error::invalid(path, format!("format is `{}`, expected `{SCENARIO_FORMAT}`", doc.format)));
        }
        if doc.version != SCENARIO_VERSION {
            return Err(Error::invalid(path, format!("unsupported version {}", doc.version)));
        }
        let report = validate_scenarios(&doc.set(), doc.periods);
        if !report.is_ok() {
            return Err(Error::invalid(path, format!("invalid scenario set:\n{report}")));
        }
        Ok(doc)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialise");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_file(path, to_json(value).as_bytes())
}

/// Parses a JSON document, reporting errors with line and column.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}
