use std::path::Path;

use anyhow::{bail, Context};
use serde::Deserialize;

/// An exact rational in a config file: `m = 2` or `m = "3/2"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalValue {
    Integer(i64),
    Text(String),
    Float(f64),
}

impl RationalValue {
    pub fn into_string(self, key: &str) -> anyhow::Result<String> {
        match self {
            Self::Integer(v) => Ok(v.to_string()),
            Self::Text(s) => Ok(s),
            Self::Float(v) => bail!("{key} = {v} is a float; write it as an integer or a \"p/q\" string"),
        }
    }
}

/// Keys accepted by `--config`; command-line flags take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub m: Option<RationalValue>,
    pub l: Option<RationalValue>,
    pub k2: Option<f64>,
    pub format: Option<String>,
    pub grid: Option<usize>,
    pub residual_tol: Option<f64>,
    pub edge_tol: Option<f64>,
    pub ode_tol: Option<f64>,
    pub fixtures: Option<bool>,
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub samples: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}
