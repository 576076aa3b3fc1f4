//! Run manifests: the fully resolved parameters of one invocation.
//!
//! Every default is written out, so replaying a manifest does not depend on
//! the defaults of the binary that replays it.

use std::path::{Path, PathBuf};

use cpns_core::graph::GeneratorSpec;
use cpns_core::metrics::Pairing;
use cpns_core::sparsify::Strategy;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approx,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateParams {
    #[serde(flatten)]
    pub spec: GeneratorSpec,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResistParams {
    pub input: PathBuf,
    pub mode: Mode,
    pub epsilon: f64,
    pub seed: u64,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsifyParams {
    pub input: PathBuf,
    pub strategy: Strategy,
    pub fractions: Vec<f64>,
    pub draws: usize,
    pub mode: Mode,
    pub epsilon: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsifierInput {
    pub label: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareParams {
    pub original: PathBuf,
    pub sparsifiers: Vec<SparsifierInput>,
    pub gamma: f64,
    pub timesteps: usize,
    pub runs: usize,
    pub cpns_runs: usize,
    pub patient_zero: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceParams {
    pub input: PathBuf,
    pub gamma: f64,
    pub runs_per_source: usize,
    pub mode: Mode,
    pub epsilon: f64,
    pub pairing: Pairing,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Invocation {
    Generate(GenerateParams),
    Resist(ResistParams),
    Sparsify(SparsifyParams),
    Compare(CompareParams),
    Importance(ImportanceParams),
}

impl Invocation {
    pub fn name(&self) -> &'static str {
        match self {
            Invocation::Generate(_) => "generate",
            Invocation::Resist(_) => "resist",
            Invocation::Sparsify(_) => "sparsify",
            Invocation::Compare(_) => "compare",
            Invocation::Importance(_) => "importance",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub invocation: Invocation,
    /// Output files, relative to the output directory.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(invocation: Invocation, outputs: Vec<String>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            invocation,
            outputs,
        }
    }

    pub fn file_name(&self) -> String {
        format!("{}.manifest.json", self.invocation.name())
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(self.file_name());
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| CliError::Manifest {
            path: path.to_path_buf(),
            source,
        })
    }
}
