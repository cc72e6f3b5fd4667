//! Run configuration: one JSON document per run, strict about unknown keys,
//! with scalar overrides applied before the typed parse.

use serde::Deserialize;
use serde_json::Value;
use std::path::{Path, PathBuf};

use crate::CliError;

/// The full run document. Each subcommand reads its own section; `geometry`,
/// `vortices`, and `seed` are shared.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    #[serde(default)]
    pub seed: u64,
    pub geometry: Option<GeometryConfig>,
    pub vortices: Option<Vec<VortexRecord>>,
    pub simulate: Option<SimulateConfig>,
    pub sample: Option<SampleConfig>,
    pub scan: Option<ScanConfig>,
    pub field: Option<FieldConfig>,
    pub order_parameter: Option<OrderParameterConfig>,
    pub check: Option<CheckConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Plane,
    Torus,
    Sphere,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub kind: GeometryKind,
    #[serde(rename = "L1")]
    pub l1: Option<f64>,
    #[serde(rename = "L2")]
    pub l2: Option<f64>,
    /// Lifts the torus aspect-ratio guard (0.1 <= L2/L1 <= 10).
    #[serde(default)]
    pub allow_extreme_aspect: bool,
}

#[derive(Debug, Clone, Copy, Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields)]
pub struct VortexRecord {
    pub re: f64,
    pub im: f64,
    pub charge: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub t_end: f64,
    pub output_stride: Option<f64>,
    pub eta_step: Option<f64>,
    pub local_tol: Option<f64>,
    pub r_core: Option<f64>,
    pub annihilation: Option<bool>,
    pub coincidence_epsilon: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub n_pairs: usize,
    pub beta: f64,
    pub n_sweeps: Option<usize>,
    pub n_burn: Option<usize>,
    pub proposal_scale: Option<f64>,
    pub hard_core: Option<f64>,
    pub r_pair: Option<f64>,
    /// Dump every k-th sampled sweep to samples.csv.
    pub dump_every: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub beta_grid: Vec<f64>,
    pub n_pairs: usize,
    pub n_sweeps: Option<usize>,
    pub n_burn: Option<usize>,
    pub proposal_scale: Option<f64>,
    pub hard_core: Option<f64>,
    pub r_pair: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorRecord {
    pub re: f64,
    pub im: f64,
    pub order: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub divisor: Vec<DivisorRecord>,
    pub window: WindowConfig,
    pub nx: usize,
    pub ny: usize,
}

/// Either a named built-in parameterization or explicit coefficients for
/// a(T) = a0 * (T - Tc) with constant b (and optional constant c).
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ModelConfig {
    Named(String),
    Explicit(ModelParams),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub a0: f64,
    pub b: f64,
    #[serde(default)]
    pub c: Option<f64>,
    pub m: f64,
    pub tc: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderParameterConfig {
    pub model: ModelConfig,
    pub t_grid: Option<Vec<f64>>,
    pub t_start: Option<f64>,
    pub t_stop: Option<f64>,
    pub t_points: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    /// Path to a trajectory CSV produced by `simulate`; relative paths are
    /// resolved against the config file's directory.
    pub trajectory: PathBuf,
}

/// Load the JSON document, apply `--set key=value` overrides and the `--seed`
/// flag, and parse strictly. Returns the typed document plus the resolved
/// JSON value echoed into the manifest.
pub fn load(
    path: &Path,
    overrides: &[String],
    seed_flag: Option<u64>,
) -> Result<(ConfigDoc, Value), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!(
        "cannot read config {}: {e}",
        path.display()
    )))?;
    let mut value: Value = serde_json::from_str(&text).map_err(|e| {
        CliError::config(format!(
            "config {} is not valid JSON (line {}, column {}): {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    for entry in overrides {
        apply_override(&mut value, entry)?;
    }
    if let Some(seed) = seed_flag {
        let obj = value.as_object_mut().ok_or_else(|| {
            CliError::config("config root must be a JSON object".to_string())
        })?;
        obj.insert("seed".to_string(), Value::from(seed));
    }
    let resolved_text = serde_json::to_string_pretty(&value).expect("value serializes");
    let doc: ConfigDoc = serde_json::from_str(&resolved_text).map_err(|e| {
        CliError::config(format!("invalid config after overrides: {e}"))
    })?;
    Ok((doc, value))
}

/// Apply one `key=value` override. Keys are dotted paths into the document;
/// only scalar fields may be set.
fn apply_override(root: &mut Value, entry: &str) -> Result<(), CliError> {
    let (key, raw) = entry.split_once('=').ok_or_else(|| {
        CliError::overrides(format!("override '{entry}' is not of the form key=value"))
    })?;
    if key.is_empty() {
        return Err(CliError::overrides(format!("override '{entry}' has an empty key")));
    }
    let parsed = match serde_json::from_str::<Value>(raw) {
        Ok(v) if v.is_object() || v.is_array() => {
            return Err(CliError::overrides(format!(
                "override '{key}' must be a scalar, got {v}"
            )))
        }
        Ok(v) => v,
        // Bare words become strings, so --set geometry.kind=torus works.
        Err(_) => Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.split('.').collect();
    let mut cursor = root;
    for part in &parts[..parts.len() - 1] {
        let obj = cursor.as_object_mut().ok_or_else(|| {
            CliError::overrides(format!("override '{key}': '{part}' is not an object"))
        })?;
        cursor = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(serde_json::Map::new()));
    }
    let last = parts[parts.len() - 1];
    let obj = cursor.as_object_mut().ok_or_else(|| {
        CliError::overrides(format!("override '{key}': parent is not an object"))
    })?;
    if let Some(existing) = obj.get(last) {
        if existing.is_object() || existing.is_array() {
            return Err(CliError::overrides(format!(
                "override '{key}' targets a non-scalar field"
            )));
        }
    }
    obj.insert(last.to_string(), parsed);
    Ok(())
}
