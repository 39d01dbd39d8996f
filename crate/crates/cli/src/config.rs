use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use floquet_core::model::ModelSpec;

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationConfig {
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// "second" or "fourth"
    #[serde(default = "default_order")]
    pub order: String,
}

fn default_steps() -> usize {
    4096
}

fn default_order() -> String {
    "fourth".into()
}

impl Default for PropagationConfig {
    fn default() -> Self {
        PropagationConfig { steps: default_steps(), order: default_order() }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub directory: Option<String>,
    #[serde(default = "default_formats")]
    pub formats: Vec<String>,
}

fn default_formats() -> Vec<String> {
    vec!["csv".into(), "json".into()]
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { directory: None, formats: default_formats() }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSpec,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub propagation: Option<PropagationConfig>,
    #[serde(default)]
    pub output: Option<OutputConfig>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    /// Named tolerance overrides for the verification suites.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

pub struct LoadedConfig {
    pub run: RunConfig,
    /// sha-256 of the raw config bytes, lowercase hex.
    pub hash: String,
}

pub fn load_config(path: &Path) -> Result<LoadedConfig, String> {
    let raw = std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut hasher = Sha256::new();
    hasher.update(&raw);
    let hash = format!("{:x}", hasher.finalize());
    let text = String::from_utf8(raw).map_err(|_| "config is not valid UTF-8".to_string())?;
    let is_json = path.extension().is_some_and(|e| e == "json")
        || text.trim_start().starts_with('{');
    let run: RunConfig = if is_json {
        serde_json::from_str(&text).map_err(|e| format!("invalid JSON config: {e}"))?
    } else {
        toml::from_str(&text).map_err(|e| format!("invalid TOML config: {e}"))?
    };
    run.model.validate().map_err(|e| format!("invalid model: {e}"))?;
    if let Some(s) = &run.sweep {
        if s.count < 2 {
            return Err("sweep needs count >= 2".into());
        }
    }
    Ok(LoadedConfig { run, hash })
}

/// Set a named numeric parameter on a model; used by sweeps.
pub fn set_parameter(spec: &ModelSpec, name: &str, value: f64) -> Result<ModelSpec, String> {
    let mut s = spec.clone();
    let missing = || format!("model variant has no sweepable parameter named `{name}`");
    match &mut s {
        ModelSpec::LinearSingleDrive { m, g, lambda, omega, hbar } => match name {
            "m" => *m = value,
            "g" => *g = value,
            "lambda" => *lambda = value,
            "omega" => *omega = value,
            "hbar" => *hbar = value,
            _ => return Err(missing()),
        },
        ModelSpec::LinearDualDrive { m, g, lambda1, lambda2, omega1, omega2, hbar } => match name {
            "m" => *m = value,
            "g" => *g = value,
            "lambda1" => *lambda1 = value,
            "lambda2" => *lambda2 = value,
            "omega1" => *omega1 = value,
            "omega2" => *omega2 = value,
            "hbar" => *hbar = value,
            _ => return Err(missing()),
        },
        ModelSpec::HarmonicDriven { m, omega_m, lambda, omega, hbar } => match name {
            "m" => *m = value,
            "omega_m" => *omega_m = value,
            "lambda" => *lambda = value,
            "omega" => *omega = value,
            "hbar" => *hbar = value,
            _ => return Err(missing()),
        },
        ModelSpec::CoupledDriven { m1, m2, omega1, omega2, g, lambda, omega, hbar } => match name {
            "m1" => *m1 = value,
            "m2" => *m2 = value,
            "omega1" => *omega1 = value,
            "omega2" => *omega2 = value,
            "g" => *g = value,
            "lambda" => *lambda = value,
            "omega" => *omega = value,
            "hbar" => *hbar = value,
            _ => return Err(missing()),
        },
    }
    Ok(s)
}
