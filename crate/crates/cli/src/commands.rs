//! One runner per subcommand. Each returns the list of artifact file names it
//! wrote into the output directory.

use num_complex::Complex64;
use serde::Serialize;
use std::path::Path;

use vortex_gas::dynamics::{integrate, IntegrationOptions};
use vortex_gas::ensemble::{sample_with_dump, temperature_scan, EnsembleSpec};
use vortex_gas::flow::{Divisor, FlowPotential, GridWindow};
use vortex_gas::geometry::Geometry;
use vortex_gas::landau::{Branch, Coefficient, LgModel};
use vortex_gas::vortex::{Configuration, ConservedSet, Vortex};

use crate::config::{
    CheckConfig, ConfigDoc, FieldConfig, GeometryConfig, GeometryKind, ModelConfig,
    OrderParameterConfig, SampleConfig, ScanConfig, SimulateConfig, VortexRecord,
};
use crate::output::{
    conserved_sidecar, field_csv, fmt_f64, samples_csv, trajectory_csv, write_artifact,
    write_json,
};
use crate::CliError;

fn build_geometry(config: &GeometryConfig) -> Result<Geometry, CliError> {
    match config.kind {
        GeometryKind::Plane | GeometryKind::Sphere => {
            if config.l1.is_some() || config.l2.is_some() {
                return Err(CliError::config(
                    "L1/L2 apply to the torus geometry only".to_string(),
                ));
            }
            Ok(match config.kind {
                GeometryKind::Plane => Geometry::plane(),
                _ => Geometry::sphere(),
            })
        }
        GeometryKind::Torus => {
            let l1 = config
                .l1
                .ok_or_else(|| CliError::config("torus geometry needs L1".to_string()))?;
            let l2 = config
                .l2
                .ok_or_else(|| CliError::config("torus geometry needs L2".to_string()))?;
            let geometry = if config.allow_extreme_aspect {
                Geometry::torus_unrestricted(l1, l2)
            } else {
                Geometry::torus(l1, l2)
            };
            geometry.map_err(CliError::from)
        }
    }
}

fn require<'a, T>(section: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    section
        .as_ref()
        .ok_or_else(|| CliError::config(format!("config is missing the '{name}' section")))
}

fn build_configuration(doc: &ConfigDoc) -> Result<Configuration, CliError> {
    let geometry = build_geometry(require(&doc.geometry, "geometry")?)?;
    let records = require(&doc.vortices, "vortices")?;
    let vortices: Result<Vec<Vortex>, _> = records
        .iter()
        .map(|r| Vortex::new(Complex64::new(r.re, r.im), r.charge))
        .collect();
    Configuration::new(vortices?, geometry).map_err(CliError::from)
}

pub fn run_simulate(doc: &ConfigDoc, out_dir: &Path) -> Result<Vec<String>, CliError> {
    let section: &SimulateConfig = require(&doc.simulate, "simulate")?;
    let config = build_configuration(doc)?;

    let report = config.geometry().admissibility(&config);
    if matches!(config.geometry(), Geometry::Sphere) && !report.admissible {
        return Err(CliError::admissibility(
            report.reason.unwrap_or_else(|| "sphere rejected".to_string()),
        ));
    }

    let defaults = IntegrationOptions::default();
    let options = IntegrationOptions {
        eta_step: section.eta_step.unwrap_or(defaults.eta_step),
        local_tol: section.local_tol.unwrap_or(defaults.local_tol),
        output_stride: section.output_stride,
        r_core: section.r_core.unwrap_or(defaults.r_core),
        annihilation: section.annihilation.unwrap_or(defaults.annihilation),
        coincidence_epsilon: section
            .coincidence_epsilon
            .unwrap_or(defaults.coincidence_epsilon),
        max_steps: defaults.max_steps,
    };
    let states = integrate(&config, section.t_end, &options)?;

    write_artifact(out_dir, "trajectory.csv", &trajectory_csv(&states))?;
    write_json(&out_dir.join("conserved.json"), &conserved_sidecar(&states))?;
    Ok(vec!["trajectory.csv".into(), "conserved.json".into()])
}

/// Optional chain knobs shared by the sample and scan sections.
struct ChainKnobs {
    n_sweeps: Option<usize>,
    n_burn: Option<usize>,
    proposal_scale: Option<f64>,
    hard_core: Option<f64>,
    r_pair: Option<f64>,
}

fn ensemble_spec(
    doc: &ConfigDoc,
    n_pairs: usize,
    beta: f64,
    knobs: &ChainKnobs,
) -> Result<EnsembleSpec, CliError> {
    let geometry = build_geometry(require(&doc.geometry, "geometry")?)?;
    let mut spec = EnsembleSpec::new(n_pairs, geometry, beta, doc.seed)?;
    if let Some(v) = knobs.n_sweeps {
        spec.n_sweeps = v;
    }
    if let Some(v) = knobs.n_burn {
        spec.n_burn = v;
    }
    if let Some(v) = knobs.proposal_scale {
        spec.proposal_scale = v;
    }
    if let Some(v) = knobs.hard_core {
        spec.hard_core = v;
    }
    if let Some(v) = knobs.r_pair {
        spec.r_pair = v;
    }
    spec.validate()?;
    Ok(spec)
}

pub fn run_sample(doc: &ConfigDoc, out_dir: &Path) -> Result<Vec<String>, CliError> {
    let section: &SampleConfig = require(&doc.sample, "sample")?;
    let spec = ensemble_spec(
        doc,
        section.n_pairs,
        section.beta,
        &ChainKnobs {
            n_sweeps: section.n_sweeps,
            n_burn: section.n_burn,
            proposal_scale: section.proposal_scale,
            hard_core: section.hard_core,
            r_pair: section.r_pair,
        },
    )?;
    let (stats, dumps) = sample_with_dump(&spec, section.dump_every)?;
    write_json(&out_dir.join("stats.json"), &stats)?;
    let mut artifacts = vec!["stats.json".to_string()];
    if section.dump_every.is_some() {
        write_artifact(out_dir, "samples.csv", &samples_csv(&dumps))?;
        artifacts.push("samples.csv".into());
    }
    Ok(artifacts)
}

pub fn run_scan(doc: &ConfigDoc, out_dir: &Path) -> Result<Vec<String>, CliError> {
    let section: &ScanConfig = require(&doc.scan, "scan")?;
    if section.beta_grid.is_empty() {
        return Err(CliError::config("scan.beta_grid must be non-empty".to_string()));
    }
    let spec = ensemble_spec(
        doc,
        section.n_pairs,
        section.beta_grid[0].max(f64::MIN_POSITIVE),
        &ChainKnobs {
            n_sweeps: section.n_sweeps,
            n_burn: section.n_burn,
            proposal_scale: section.proposal_scale,
            hard_core: section.hard_core,
            r_pair: section.r_pair,
        },
    )?;
    let stats = temperature_scan(&spec, &section.beta_grid)?;
    let mut csv = String::from("beta,mean_energy,acceptance,dipole_fraction,mean_nn_distance\n");
    for (beta, s) in section.beta_grid.iter().zip(&stats) {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(*beta),
            fmt_f64(s.mean_energy),
            fmt_f64(s.acceptance_rate),
            fmt_f64(s.dipole_fraction),
            fmt_f64(s.mean_nn_distance),
        ));
    }
    write_artifact(out_dir, "scan.csv", &csv)?;
    Ok(vec!["scan.csv".into()])
}

pub fn run_field(doc: &ConfigDoc, out_dir: &Path) -> Result<Vec<String>, CliError> {
    let section: &FieldConfig = require(&doc.field, "field")?;
    let points = section
        .divisor
        .iter()
        .map(|r| (Complex64::new(r.re, r.im), r.order))
        .collect();
    let potential = FlowPotential::new(Divisor::new(points)?);
    let window = GridWindow {
        x_min: section.window.x_min,
        x_max: section.window.x_max,
        y_min: section.window.y_min,
        y_max: section.window.y_max,
    };
    let grid = potential.field_grid(&window, section.nx, section.ny)?;
    write_artifact(out_dir, "field.csv", &field_csv(&grid))?;
    Ok(vec!["field.csv".into()])
}

fn build_model(config: &ModelConfig) -> Result<LgModel, CliError> {
    match config {
        ModelConfig::Named(name) => match name.as_str() {
            // a(T) = T - 1, b = 1, m = 1, Tc = 1.
            "default" => Ok(LgModel::quadratic(1.0, 1.0, 1.0, 1.0)?),
            other => Err(CliError::config(format!(
                "unknown model '{other}'; known models: default"
            ))),
        },
        ModelConfig::Explicit(p) => Ok(LgModel::new(
            Coefficient::Linear { slope: p.a0 },
            Coefficient::Constant(p.b),
            p.c.map(Coefficient::Constant),
            p.m,
            p.tc,
        )?),
    }
}

pub fn run_order_parameter(doc: &ConfigDoc, out_dir: &Path) -> Result<Vec<String>, CliError> {
    let section: &OrderParameterConfig = require(&doc.order_parameter, "order_parameter")?;
    let model = build_model(&section.model)?;
    let grid: Vec<f64> = match (&section.t_grid, section.t_start, section.t_stop, section.t_points)
    {
        (Some(grid), None, None, None) => grid.clone(),
        (None, Some(start), Some(stop), Some(points)) => {
            if points < 2 || !(stop > start) {
                return Err(CliError::config(
                    "order_parameter needs t_points >= 2 and t_stop > t_start".to_string(),
                ));
            }
            (0..points)
                .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
                .collect()
        }
        _ => {
            return Err(CliError::config(
                "order_parameter needs either t_grid or all of t_start/t_stop/t_points"
                    .to_string(),
            ))
        }
    };
    let sweep = model.temperature_sweep(&grid)?;
    let mut csv = String::from("T,psi_min,branch,F_min\n");
    for result in &sweep {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(result.temperature),
            fmt_f64(result.psi_min),
            match result.branch {
                Branch::Normal => "normal",
                Branch::Superfluid => "superfluid",
            },
            fmt_f64(result.free_energy_min),
        ));
    }
    write_artifact(out_dir, "order_parameter.csv", &csv)?;
    Ok(vec!["order_parameter.csv".into()])
}

#[derive(Serialize)]
struct DriftReport {
    states: usize,
    time_span: (f64, f64),
    q_constant: bool,
    max_rel_drift_energy: f64,
    max_rel_drift_dipole: Option<f64>,
    max_rel_drift_angular: Option<f64>,
}

pub fn run_check(
    doc: &ConfigDoc,
    out_dir: &Path,
    config_dir: &Path,
) -> Result<Vec<String>, CliError> {
    let section: &CheckConfig = require(&doc.check, "check")?;
    let geometry = build_geometry(require(&doc.geometry, "geometry")?)?;
    let path = if section.trajectory.is_absolute() {
        section.trajectory.clone()
    } else {
        config_dir.join(&section.trajectory)
    };
    let text = std::fs::read_to_string(&path).map_err(|e| {
        CliError::io(format!("cannot read trajectory {}: {e}", path.display()))
    })?;

    // Rows are grouped into states by their (exactly repeated) time stamps.
    let mut grouped: Vec<(f64, Vec<VortexRecord>)> = Vec::new();
    for (line_no, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(CliError::config(format!(
                "{}:{}: expected 5 columns, got {}",
                path.display(),
                line_no + 1,
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64, CliError> {
            s.parse::<f64>().map_err(|e| {
                CliError::config(format!("{}:{}: bad number '{s}': {e}", path.display(), line_no + 1))
            })
        };
        let time = parse(fields[0])?;
        let charge: i64 = fields[2].parse().map_err(|e| {
            CliError::config(format!(
                "{}:{}: bad charge '{}': {e}",
                path.display(),
                line_no + 1,
                fields[2]
            ))
        })?;
        let record = VortexRecord {
            re: parse(fields[3])?,
            im: parse(fields[4])?,
            charge,
        };
        match grouped.last_mut() {
            Some((t, rows)) if *t == time => rows.push(record),
            _ => grouped.push((time, vec![record])),
        }
    }
    if grouped.is_empty() {
        return Err(CliError::config(format!(
            "trajectory {} holds no states",
            path.display()
        )));
    }

    let conserved: Result<Vec<(f64, ConservedSet)>, CliError> = grouped
        .iter()
        .map(|(time, rows)| {
            let vortices: Result<Vec<Vortex>, _> = rows
                .iter()
                .map(|r| Vortex::new(Complex64::new(r.re, r.im), r.charge))
                .collect();
            let config = Configuration::new(vortices?, geometry)?;
            Ok((*time, config.conserved_set()?))
        })
        .collect();
    let conserved = conserved?;

    let first = &conserved[0].1;
    let mut report = DriftReport {
        states: conserved.len(),
        time_span: (conserved[0].0, conserved.last().unwrap().0),
        q_constant: true,
        max_rel_drift_energy: 0.0,
        max_rel_drift_dipole: first.dipole_moment.map(|_| 0.0),
        max_rel_drift_angular: first.angular_moment.map(|_| 0.0),
    };
    for (_, set) in &conserved {
        report.q_constant &= set.total_charge == first.total_charge;
        report.max_rel_drift_energy = report.max_rel_drift_energy.max(
            (set.energy - first.energy).abs() / first.energy.abs().max(f64::MIN_POSITIVE),
        );
        if let (Some(m), Some(m0)) = (set.dipole_moment, first.dipole_moment) {
            let drift = (m - m0).norm() / m0.norm().max(f64::MIN_POSITIVE);
            report.max_rel_drift_dipole =
                Some(report.max_rel_drift_dipole.unwrap_or(0.0).max(drift));
        }
        if let (Some(i), Some(i0)) = (set.angular_moment, first.angular_moment) {
            let drift = (i - i0).abs() / i0.abs().max(f64::MIN_POSITIVE);
            report.max_rel_drift_angular =
                Some(report.max_rel_drift_angular.unwrap_or(0.0).max(drift));
        }
    }
    write_json(&out_dir.join("conservation_report.json"), &report)?;
    println!(
        "conservation over {} states: q_constant={} max drift H {:.3e}{}{}",
        report.states,
        report.q_constant,
        report.max_rel_drift_energy,
        report
            .max_rel_drift_dipole
            .map(|d| format!(" M {d:.3e}"))
            .unwrap_or_default(),
        report
            .max_rel_drift_angular
            .map(|d| format!(" I {d:.3e}"))
            .unwrap_or_default(),
    );
    Ok(vec!["conservation_report.json".into()])
}
