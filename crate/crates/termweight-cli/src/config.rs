//! Declarative run configuration. Every flag of the `run`, `weigh` and
//! `factors` subcommands can instead live in a TOML file passed with
//! `--config`; flags given on the command line win field by field.
//!
//! ```toml
//! corpus = ["data/polarity"]
//! format = "dir"
//! schemes = ["tf-igm", "tf-idfc-rf"]
//! lambda = 7.0
//! features = [500, 1000, 2000]
//! classifiers = ["nb", "svm"]
//! folds = 5
//! seed = 42
//! out = "report.csv"
//! ```

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub corpus: Option<Vec<PathBuf>>,
    pub format: Option<String>,
    pub positive_label: Option<String>,
    /// Scheme list for `run`.
    pub schemes: Option<Vec<String>>,
    /// Single scheme for `weigh`.
    pub scheme: Option<String>,
    pub lambda: Option<f64>,
    pub features: Option<Vec<usize>>,
    pub classifiers: Option<Vec<String>>,
    pub folds: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config file {}", path.display()))
    }
}
