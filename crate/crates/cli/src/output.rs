//! Artifact writers. CSVs use '.' decimals and 17-significant-digit floats so
//! values round-trip exactly and identical runs produce identical bytes.

use serde::Serialize;
use serde_json::Value;
use std::io::Write;
use std::path::Path;

use vortex_gas::dynamics::TrajectoryState;
use vortex_gas::flow::FieldGrid;

use crate::CliError;

/// 17 significant digits, locale-independent, round-trip exact.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_text(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::io(format!("cannot serialize {}: {e}", path.display())))?;
    text.push('\n');
    write_text(path, &text)
}

/// trajectory.csv: one row per vortex per recorded state.
pub fn trajectory_csv(states: &[TrajectoryState]) -> String {
    let mut out = String::from("time,vortex_index,charge,re,im\n");
    for state in states {
        for (index, vortex) in state.config.vortices().iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_f64(state.time),
                index,
                vortex.charge(),
                fmt_f64(vortex.position().re),
                fmt_f64(vortex.position().im),
            ));
        }
    }
    out
}

#[derive(Serialize)]
pub struct ConservedRow {
    pub time: f64,
    pub energy: f64,
    pub dipole_re: Option<f64>,
    pub dipole_im: Option<f64>,
    pub angular: Option<f64>,
    pub charge: i64,
}

#[derive(Serialize)]
pub struct EventRecord {
    pub time: f64,
    pub separation: f64,
    pub energy_before: f64,
    pub energy_after: f64,
    pub removed: Vec<crate::config::VortexRecord>,
    pub merged: Option<crate::config::VortexRecord>,
}

#[derive(Serialize)]
pub struct ConservedSidecar {
    pub series: Vec<ConservedRow>,
    pub events: Vec<EventRecord>,
}

pub fn conserved_sidecar(states: &[TrajectoryState]) -> ConservedSidecar {
    let to_record = |v: &vortex_gas::Vortex| crate::config::VortexRecord {
        re: v.position().re,
        im: v.position().im,
        charge: v.charge(),
    };
    ConservedSidecar {
        series: states
            .iter()
            .map(|s| ConservedRow {
                time: s.time,
                energy: s.conserved.energy,
                dipole_re: s.conserved.dipole_moment.map(|m| m.re),
                dipole_im: s.conserved.dipole_moment.map(|m| m.im),
                angular: s.conserved.angular_moment,
                charge: s.conserved.total_charge,
            })
            .collect(),
        events: states
            .iter()
            .flat_map(|s| s.events.iter())
            .map(|e| EventRecord {
                time: e.time,
                separation: e.separation,
                energy_before: e.energy_before,
                energy_after: e.energy_after,
                removed: vec![to_record(&e.removed.0), to_record(&e.removed.1)],
                merged: e.merged.as_ref().map(to_record),
            })
            .collect(),
    }
}

/// field.csv: x,y,u,v with empty u/v fields at masked samples.
pub fn field_csv(grid: &FieldGrid) -> String {
    let mut out = String::from("x,y,u,v\n");
    for (j, &y) in grid.ys.iter().enumerate() {
        for (i, &x) in grid.xs.iter().enumerate() {
            match grid.values[j * grid.nx + i] {
                Some(value) => out.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_f64(x),
                    fmt_f64(y),
                    fmt_f64(value.re),
                    fmt_f64(value.im),
                )),
                None => out.push_str(&format!("{},{},,\n", fmt_f64(x), fmt_f64(y))),
            }
        }
    }
    out
}

/// samples.csv rows share the trajectory format with time = sweep index.
pub fn samples_csv(dumps: &[(u64, vortex_gas::Configuration)]) -> String {
    let mut out = String::from("time,vortex_index,charge,re,im\n");
    for (sweep, config) in dumps {
        for (index, vortex) in config.vortices().iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_f64(*sweep as f64),
                index,
                vortex.charge(),
                fmt_f64(vortex.position().re),
                fmt_f64(vortex.position().im),
            ));
        }
    }
    out
}

#[derive(Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub wall_time_seconds: f64,
    pub artifacts: Vec<String>,
    pub config: Value,
}

pub fn write_manifest(out_dir: &Path, manifest: &Manifest) -> Result<(), CliError> {
    write_json(&out_dir.join("manifest.json"), manifest)
}

/// Write a file atomically enough for our purposes.
pub fn write_artifact(out_dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    let path = out_dir.join(name);
    let mut file = std::fs::File::create(&path)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", path.display())))?;
    file.write_all(content.as_bytes())
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}
