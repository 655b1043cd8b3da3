//! Run manifests: what was run, on which inputs, producing which files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scenarios::{read_json, write_json};

pub const MANIFEST_FORMAT: &str = "lowcarb-manifest";
pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileDigest {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub format: String,
    pub version: u32,
    pub tool_version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub options: BTreeMap<String, String>,
    pub inputs: Vec<FileDigest>,
    /// Output paths are relative to the manifest's directory.
    pub outputs: Vec<FileDigest>,
    pub wall_time_s: f64,
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

pub fn digest(path: &Path) -> Result<FileDigest> {
    Ok(FileDigest { path: path.to_path_buf(), sha256: sha256_file(path)? })
}

impl RunManifest {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Self {
            format: MANIFEST_FORMAT.into(),
            version: MANIFEST_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            options: BTreeMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn option(&mut self, key: &str, value: impl ToString) {
        self.options.insert(key.into(), value.to_string());
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        self.inputs.push(digest(path)?);
        Ok(())
    }

    /// Records `dir/name`, keeping the relative name.
    pub fn output(&mut self, dir: &Path, name: &str) -> Result<()> {
        let d = digest(&dir.join(name))?;
        self.outputs.push(FileDigest { path: name.into(), sha256: d.sha256 });
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let m: RunManifest = read_json(path)?;
        if m.format != MANIFEST_FORMAT || m.version != MANIFEST_VERSION {
            return Err(Error::invalid(path, "not a version 1 run manifest"));
        }
        Ok(m)
    }

    /// Recomputes every digest; returns the files that no longer match.
    /// Inputs are resolved from the working directory, outputs from
    /// `dir`.
    pub fn verify(&self, dir: &Path) -> Vec<PathBuf> {
        let inputs = self.inputs.iter().map(|f| (f.path.clone(), f));
        let outputs = self.outputs.iter().map(|f| (dir.join(&f.path), f));
        inputs
            .chain(outputs)
            .filter(|(p, f)| sha256_file(p).ok().as_deref() != Some(f.sha256.as_str()))
            .map(|(p, _)| p)
            .collect()
    }
}
