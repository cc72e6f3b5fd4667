//! Metropolis sampling of the neutral vortex gas on the torus.
//!
//! Single-vortex random displacements against the pair Hamiltonian, with a
//! hard core regularizing the attraction of opposite charges (the bare energy
//! is unbounded below as a +/- pair collapses). Chains are fully deterministic
//! given the spec's seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Geometry, Torus};
use crate::vortex::{Configuration, Vortex};

/// Parameters of one sampling run. Charges are fixed to +/-1 with `n_pairs`
/// of each sign, so the net charge vanishes by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub n_pairs: usize,
    pub geometry: Geometry,
    /// Inverse temperature in reduced units.
    pub beta: f64,
    pub n_sweeps: usize,
    pub n_burn: usize,
    /// Half-width of the uniform square displacement proposal.
    pub proposal_scale: f64,
    /// Minimum allowed pair separation.
    pub hard_core: f64,
    /// Pairing radius for the dipole-fraction observable.
    pub r_pair: f64,
    pub seed: u64,
}

impl EnsembleSpec {
    /// Spec with the default knobs scaled to the torus size: hard core
    /// 0.01 * min period, proposal 0.1 * min period, pairing radius 3x the
    /// hard core.
    pub fn new(n_pairs: usize, geometry: Geometry, beta: f64, seed: u64) -> Result<Self> {
        let torus = match &geometry {
            Geometry::Torus(t) => *t,
            _ => {
                return Err(Error::InvalidSpec {
                    detail: "ensemble sampling requires a torus geometry".into(),
                })
            }
        };
        let min_period = torus.min_period();
        Ok(Self {
            n_pairs,
            geometry,
            beta,
            n_sweeps: 2000,
            n_burn: 500,
            proposal_scale: 0.1 * min_period,
            hard_core: 0.01 * min_period,
            r_pair: 0.03 * min_period,
            seed,
        })
    }

    fn torus(&self) -> Result<Torus> {
        match &self.geometry {
            Geometry::Torus(t) => Ok(*t),
            _ => Err(Error::InvalidSpec {
                detail: "ensemble sampling requires a torus geometry".into(),
            }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let torus = self.torus()?;
        if self.n_pairs == 0 {
            return Err(Error::InvalidSpec {
                detail: "n_pairs must be at least 1".into(),
            });
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::InvalidSpec {
                detail: format!("beta must be positive, got {}", self.beta),
            });
        }
        if self.n_sweeps == 0 {
            return Err(Error::InvalidSpec {
                detail: "n_sweeps must be at least 1".into(),
            });
        }
        if !(self.hard_core > 0.0) {
            return Err(Error::InvalidSpec {
                detail: format!("hard core must be positive, got {}", self.hard_core),
            });
        }
        if !(self.hard_core < self.proposal_scale && self.proposal_scale < torus.min_period()) {
            return Err(Error::InvalidSpec {
                detail: format!(
                    "need hard_core < proposal_scale < min period, got {} / {} / {}",
                    self.hard_core,
                    self.proposal_scale,
                    torus.min_period()
                ),
            });
        }
        if !(self.r_pair > 0.0) {
            return Err(Error::InvalidSpec {
                detail: format!("r_pair must be positive, got {}", self.r_pair),
            });
        }
        Ok(())
    }
}

/// Accumulated observables of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub mean_energy: f64,
    /// Accepted / attempted, with hard-core rejections excluded from the
    /// attempt count.
    pub acceptance_rate: f64,
    /// Fraction of vortices whose nearest opposite-charge neighbour is within
    /// the pairing radius.
    pub dipole_fraction: f64,
    pub mean_nn_distance: f64,
    pub samples: u64,
    pub hard_core_rejects: u64,
}

/// Dipole-pairing observables of a single configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairingStats {
    pub dipole_fraction: f64,
    pub mean_nn_distance: f64,
}

/// Metropolis acceptance probability min(1, exp(-beta * delta_h)).
pub fn metropolis_acceptance(beta: f64, delta_h: f64) -> f64 {
    (-beta * delta_h).exp().min(1.0)
}

/// A running Metropolis chain over vortex positions.
pub struct Sampler {
    torus: Torus,
    beta: f64,
    proposal_scale: f64,
    hard_core: f64,
    positions: Vec<Complex64>,
    charges: Vec<i64>,
    energy: f64,
    rng: ChaCha8Rng,
    attempted: u64,
    accepted: u64,
    hard_core_rejects: u64,
}

impl Sampler {
    pub fn new(spec: &EnsembleSpec) -> Result<Self> {
        spec.validate()?;
        let torus = spec.torus()?;
        let n = 2 * spec.n_pairs;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let (l1, l2) = torus.periods();

        let mut positions: Vec<Complex64> = Vec::with_capacity(n);
        let mut charges: Vec<i64> = Vec::with_capacity(n);
        for i in 0..n {
            let charge = if i < spec.n_pairs { 1 } else { -1 };
            let mut tries = 0;
            let z = loop {
                let candidate = Complex64::new(
                    rng.random_range(0.0..l1),
                    rng.random_range(0.0..l2),
                );
                let clear = positions
                    .iter()
                    .all(|&p| torus.min_image_distance(candidate, p) >= spec.hard_core);
                if clear {
                    break candidate;
                }
                tries += 1;
                if tries > 100_000 {
                    return Err(Error::InvalidSpec {
                        detail: format!(
                            "cannot place {n} vortices with hard core {} on this torus",
                            spec.hard_core
                        ),
                    });
                }
            };
            positions.push(z);
            charges.push(charge);
        }
        let energy = pair_energy(&torus, &positions, &charges);
        Ok(Self {
            torus,
            beta: spec.beta,
            proposal_scale: spec.proposal_scale,
            hard_core: spec.hard_core,
            positions,
            charges,
            energy,
            rng,
            attempted: 0,
            accepted: 0,
            hard_core_rejects: 0,
        })
    }

    /// One proposed single-vortex move; returns whether it was accepted.
    pub fn step(&mut self) -> bool {
        self.attempted += 1;
        let n = self.positions.len();
        let idx = self.rng.random_range(0..n);
        let dx = self.rng.random_range(-self.proposal_scale..self.proposal_scale);
        let dy = self.rng.random_range(-self.proposal_scale..self.proposal_scale);
        let old = self.positions[idx];
        let new = self.torus.reduce(old + Complex64::new(dx, dy));

        for (l, &p) in self.positions.iter().enumerate() {
            if l != idx && self.torus.min_image_distance(new, p) < self.hard_core {
                self.hard_core_rejects += 1;
                return false;
            }
        }

        // Incremental energy change touches only the moved vortex's pairs.
        let mut delta = 0.0;
        for (l, &p) in self.positions.iter().enumerate() {
            if l == idx {
                continue;
            }
            let coupling = (self.charges[idx] * self.charges[l]) as f64;
            delta -= coupling * (self.torus.kernel(new - p) - self.torus.kernel(old - p));
        }

        let accept = delta <= 0.0 || {
            let u: f64 = self.rng.random();
            u < metropolis_acceptance(self.beta, delta)
        };
        if accept {
            self.positions[idx] = new;
            self.energy += delta;
            self.accepted += 1;
        }
        accept
    }

    /// One sweep = one proposed move per vortex.
    pub fn sweep(&mut self) {
        for _ in 0..self.positions.len() {
            self.step();
        }
    }

    /// Incrementally tracked energy.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Full O(N^2) recomputation, for bookkeeping checks.
    pub fn recompute_energy(&self) -> f64 {
        pair_energy(&self.torus, &self.positions, &self.charges)
    }

    pub fn acceptance_rate_excluding_hard_core(&self) -> f64 {
        let effective = self.attempted - self.hard_core_rejects;
        if effective == 0 {
            0.0
        } else {
            self.accepted as f64 / effective as f64
        }
    }

    pub fn hard_core_rejects(&self) -> u64 {
        self.hard_core_rejects
    }

    pub fn min_pair_distance(&self) -> f64 {
        let mut min = f64::INFINITY;
        for k in 1..self.positions.len() {
            for l in 0..k {
                min = min.min(self.torus.min_image_distance(self.positions[k], self.positions[l]));
            }
        }
        min
    }

    pub fn pairing(&self, r_pair: f64) -> Result<PairingStats> {
        pairing_from_arrays(&self.positions, &self.charges, |z, w| {
            self.torus.min_image_distance(z, w)
        }, r_pair)
    }

    pub fn configuration(&self) -> Result<Configuration> {
        let vortices: Result<Vec<Vortex>> = self
            .positions
            .iter()
            .zip(&self.charges)
            .map(|(&z, &n)| Vortex::new(z, n))
            .collect();
        Configuration::new(vortices?, Geometry::Torus(self.torus))
    }
}

fn pair_energy(torus: &Torus, positions: &[Complex64], charges: &[i64]) -> f64 {
    let mut h = 0.0;
    for k in 1..positions.len() {
        for l in 0..k {
            h -= (charges[k] * charges[l]) as f64 * torus.kernel(positions[k] - positions[l]);
        }
    }
    h
}

fn pairing_from_arrays<D: Fn(Complex64, Complex64) -> f64>(
    positions: &[Complex64],
    charges: &[i64],
    distance: D,
    r_pair: f64,
) -> Result<PairingStats> {
    if positions.is_empty() {
        return Err(Error::PairingUndefined {
            detail: "empty configuration".into(),
        });
    }
    let total: i64 = charges.iter().sum();
    if total != 0 {
        return Err(Error::PairingUndefined {
            detail: format!("configuration is not neutral (Q = {total})"),
        });
    }
    let mut paired = 0usize;
    let mut nn_sum = 0.0;
    for k in 0..positions.len() {
        let mut nearest = f64::INFINITY;
        for l in 0..positions.len() {
            if l == k || charges[k] * charges[l] >= 0 {
                continue;
            }
            nearest = nearest.min(distance(positions[k], positions[l]));
        }
        if nearest < r_pair {
            paired += 1;
        }
        nn_sum += nearest;
    }
    Ok(PairingStats {
        dipole_fraction: paired as f64 / positions.len() as f64,
        mean_nn_distance: nn_sum / positions.len() as f64,
    })
}

/// Dipole-pairing observables: for each vortex the distance to its nearest
/// opposite-charge neighbour in the geometry's metric; the dipole fraction is
/// the share within `r_pair`. Requires a neutral, non-empty configuration.
pub fn pairing_stats(config: &Configuration, r_pair: f64) -> Result<PairingStats> {
    let positions: Vec<Complex64> = config.vortices().iter().map(|v| v.position()).collect();
    let charges: Vec<i64> = config.vortices().iter().map(|v| v.charge()).collect();
    match config.geometry() {
        Geometry::Torus(t) => {
            pairing_from_arrays(&positions, &charges, |z, w| t.min_image_distance(z, w), r_pair)
        }
        Geometry::Plane => {
            pairing_from_arrays(&positions, &charges, |z, w| (z - w).norm(), r_pair)
        }
        Geometry::Sphere => Err(Error::SphereGeometry),
    }
}

/// Run a chain and accumulate statistics after burn-in. With `dump_every =
/// Some(k)` every k-th sampled sweep's configuration is returned alongside.
pub fn sample_with_dump(
    spec: &EnsembleSpec,
    dump_every: Option<usize>,
) -> Result<(EnsembleStats, Vec<(u64, Configuration)>)> {
    let mut sampler = Sampler::new(spec)?;
    for _ in 0..spec.n_burn {
        sampler.sweep();
    }
    let mut energy_sum = 0.0;
    let mut dipole_sum = 0.0;
    let mut nn_sum = 0.0;
    let mut dumps = Vec::new();
    for sweep in 0..spec.n_sweeps {
        sampler.sweep();
        energy_sum += sampler.energy();
        let pairing = sampler.pairing(spec.r_pair)?;
        dipole_sum += pairing.dipole_fraction;
        nn_sum += pairing.mean_nn_distance;
        if let Some(every) = dump_every {
            if every > 0 && sweep % every == 0 {
                dumps.push((sweep as u64, sampler.configuration()?));
            }
        }
    }
    let samples = spec.n_sweeps as u64;
    Ok((
        EnsembleStats {
            mean_energy: energy_sum / samples as f64,
            acceptance_rate: sampler.acceptance_rate_excluding_hard_core(),
            dipole_fraction: dipole_sum / samples as f64,
            mean_nn_distance: nn_sum / samples as f64,
            samples,
            hard_core_rejects: sampler.hard_core_rejects(),
        },
        dumps,
    ))
}

/// Run a chain and return its statistics.
pub fn sample(spec: &EnsembleSpec) -> Result<EnsembleStats> {
    sample_with_dump(spec, None).map(|(stats, _)| stats)
}

/// Independent runs across an ascending beta grid. Chain `i` uses the base
/// seed for `i = 0` and a seed derived from it otherwise, so a singleton grid
/// reproduces [`sample`] exactly.
pub fn temperature_scan(spec: &EnsembleSpec, beta_grid: &[f64]) -> Result<Vec<EnsembleStats>> {
    if beta_grid.is_empty() || beta_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::BadBetaGrid);
    }
    let results: Vec<Result<EnsembleStats>> = beta_grid
        .par_iter()
        .enumerate()
        .map(|(i, &beta)| {
            let mut point = spec.clone();
            point.beta = beta;
            point.seed = derived_seed(spec.seed, i as u64);
            sample(&point).map_err(|e| Error::AtBeta {
                beta,
                source: Box::new(e),
            })
        })
        .collect();
    results.into_iter().collect()
}

/// splitmix64-style stream derivation; index 0 keeps the base seed.
pub fn derived_seed(base: u64, index: u64) -> u64 {
    if index == 0 {
        return base;
    }
    let mut z = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_torus() -> Geometry {
        Geometry::torus(1.0, 1.0).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spec_requires_torus() {
        assert!(matches!(
            EnsembleSpec::new(4, Geometry::Plane, 1.0, 7),
            Err(Error::InvalidSpec { .. })
        ));
    }

    #[test]
    fn spec_validates_scales() {
        let mut spec = EnsembleSpec::new(2, unit_torus(), 1.0, 7).unwrap();
        spec.proposal_scale = spec.hard_core / 2.0;
        assert!(matches!(spec.validate(), Err(Error::InvalidSpec { .. })));
        let mut spec = EnsembleSpec::new(2, unit_torus(), -1.0, 7).unwrap();
        spec.beta = -1.0;
        assert!(matches!(spec.validate(), Err(Error::InvalidSpec { .. })));
    }

    #[test]
    fn beta_to_zero_accepts_everything() {
        let mut spec = EnsembleSpec::new(4, unit_torus(), 1e-9, 11).unwrap();
        spec.n_sweeps = 100;
        spec.n_burn = 10;
        let stats = sample(&spec).unwrap();
        assert!(
            stats.acceptance_rate > 0.99,
            "acceptance {}",
            stats.acceptance_rate
        );
    }

    #[test]
    fn identical_seeds_reproduce_bitwise() {
        let mut spec = EnsembleSpec::new(4, unit_torus(), 2.0, 99).unwrap();
        spec.n_sweeps = 200;
        spec.n_burn = 50;
        let a = sample(&spec).unwrap();
        let b = sample(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn neutrality_and_hard_core_preserved() {
        let mut spec = EnsembleSpec::new(6, unit_torus(), 1.5, 3).unwrap();
        spec.n_sweeps = 50;
        spec.n_burn = 20;
        let mut sampler = Sampler::new(&spec).unwrap();
        for _ in 0..(spec.n_burn + spec.n_sweeps) {
            sampler.sweep();
            assert!(sampler.min_pair_distance() >= spec.hard_core);
        }
        let config = sampler.configuration().unwrap();
        assert_eq!(config.total_charge(), 0);
    }

    #[test]
    fn incremental_energy_matches_full_recomputation() {
        let mut spec = EnsembleSpec::new(8, unit_torus(), 1.0, 21).unwrap();
        spec.n_sweeps = 1;
        let mut sampler = Sampler::new(&spec).unwrap();
        for _ in 0..10_000 {
            sampler.step();
        }
        let drift = (sampler.energy() - sampler.recompute_energy()).abs();
        assert!(drift <= 1e-8, "bookkeeping drift {drift}");
    }

    #[test]
    fn detailed_balance_on_discretized_moves() {
        // pi(c1) P(c1 -> c2) = pi(c2) P(c2 -> c1) with symmetric proposals:
        // checked on a 2-vortex instance over a grid of displacements.
        let torus = Torus::new(1.0, 1.0).unwrap();
        let beta = 1.7;
        let z_fixed = c(0.21, 0.34);
        let z_base = c(0.58, 0.67);
        // H of a +1/-1 pair: -(+1)(-1) K = +K.
        let h_of = |z: Complex64| torus.kernel(z - z_fixed);
        for i in 0..10 {
            for j in 0..10 {
                let delta = c(0.015 * i as f64 - 0.07, 0.015 * j as f64 - 0.07);
                let z_moved = torus.reduce(z_base + delta);
                let h1 = h_of(z_base);
                let h2 = h_of(z_moved);
                let flow_12 = (-beta * h1).exp() * metropolis_acceptance(beta, h2 - h1);
                let flow_21 = (-beta * h2).exp() * metropolis_acceptance(beta, h1 - h2);
                assert!(
                    (flow_12 - flow_21).abs() <= 1e-12 * flow_12.abs().max(1.0),
                    "balance violated: {flow_12} vs {flow_21}"
                );
            }
        }
    }

    #[test]
    fn pairing_stats_single_tight_pair() {
        let config = Configuration::new(
            vec![
                Vortex::new(c(0.0, 0.0), 1).unwrap(),
                Vortex::new(c(0.01, 0.0), -1).unwrap(),
            ],
            Geometry::Plane,
        )
        .unwrap();
        let stats = pairing_stats(&config, 0.05).unwrap();
        assert_eq!(stats.dipole_fraction, 1.0);
        assert!((stats.mean_nn_distance - 0.01).abs() < 1e-15);
    }

    #[test]
    fn pairing_stats_loose_pair_on_torus() {
        let config = Configuration::new(
            vec![
                Vortex::new(c(0.0, 0.0), 1).unwrap(),
                Vortex::new(c(0.4, 0.0), -1).unwrap(),
            ],
            unit_torus(),
        )
        .unwrap();
        let stats = pairing_stats(&config, 0.05).unwrap();
        assert_eq!(stats.dipole_fraction, 0.0);
        assert!((stats.mean_nn_distance - 0.4).abs() < 1e-12);
    }

    #[test]
    fn pairing_stats_mixed_tight_and_loose() {
        let config = Configuration::new(
            vec![
                Vortex::new(c(0.10, 0.10), 1).unwrap(),
                Vortex::new(c(0.11, 0.10), -1).unwrap(),
                Vortex::new(c(0.60, 0.60), 1).unwrap(),
                Vortex::new(c(0.60, 0.85), -1).unwrap(),
            ],
            unit_torus(),
        )
        .unwrap();
        let stats = pairing_stats(&config, 0.05).unwrap();
        assert_eq!(stats.dipole_fraction, 0.5);
    }

    #[test]
    fn pairing_stats_rejects_charged_or_empty() {
        let charged = Configuration::new(
            vec![
                Vortex::new(c(0.1, 0.1), 1).unwrap(),
                Vortex::new(c(0.6, 0.6), 1).unwrap(),
            ],
            unit_torus(),
        )
        .unwrap();
        assert!(matches!(
            pairing_stats(&charged, 0.05),
            Err(Error::PairingUndefined { .. })
        ));
        let empty = Configuration::new(vec![], unit_torus()).unwrap();
        assert!(matches!(
            pairing_stats(&empty, 0.05),
            Err(Error::PairingUndefined { .. })
        ));
    }

    #[test]
    fn pairing_uses_min_image_metric() {
        // 0.02 apart across the periodic boundary, not 0.98.
        let config = Configuration::new(
            vec![
                Vortex::new(c(0.01, 0.5), 1).unwrap(),
                Vortex::new(c(0.99, 0.5), -1).unwrap(),
            ],
            unit_torus(),
        )
        .unwrap();
        let stats = pairing_stats(&config, 0.05).unwrap();
        assert_eq!(stats.dipole_fraction, 1.0);
        assert!((stats.mean_nn_distance - 0.02).abs() < 1e-12);
    }

    #[test]
    fn tight_dipole_matches_boltzmann_quadrature() {
        // Two vortices at beta = 50: the separation distribution concentrates
        // just above the hard core. Oracle: polar quadrature of the two-vortex
        // Boltzmann factor over the torus separation.
        let torus = Torus::new(1.0, 1.0).unwrap();
        let beta = 50.0;
        let hard_core = 0.05;

        let mut weight_sum = 0.0;
        let mut r_sum = 0.0;
        let n_r = 4000;
        let n_theta = 64;
        let r_max: f64 = 0.5;
        let log_span = (r_max / hard_core).ln();
        for i in 0..n_r {
            // log-spaced radii resolve the sharp decay near the core
            let r0 = hard_core * ((i as f64 / n_r as f64) * log_span).exp();
            let r1 = hard_core * (((i + 1) as f64 / n_r as f64) * log_span).exp();
            let r = 0.5 * (r0 + r1);
            let dr = r1 - r0;
            for j in 0..n_theta {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / n_theta as f64;
                let s = Complex64::from_polar(r, theta);
                // H for a +1/-1 pair is +K(separation)
                let w = (-beta * torus.kernel(s)).exp() * r * dr;
                weight_sum += w;
                r_sum += r * w;
            }
        }
        let oracle_mean = r_sum / weight_sum;

        let mut spec = EnsembleSpec::new(1, Geometry::Torus(torus), beta, 4242).unwrap();
        spec.hard_core = hard_core;
        spec.proposal_scale = 0.08;
        spec.r_pair = 0.15;
        spec.n_burn = 2000;
        spec.n_sweeps = 30_000;
        let stats = sample(&spec).unwrap();

        let rel = (stats.mean_nn_distance - oracle_mean).abs() / oracle_mean;
        assert!(
            rel < 0.05,
            "MC mean {} vs quadrature {} (rel {rel})",
            stats.mean_nn_distance,
            oracle_mean
        );
        // And it is indeed pinned near the hard core.
        assert!(stats.mean_nn_distance < 2.0 * hard_core);
    }

    #[test]
    fn singleton_scan_equals_single_run() {
        let mut spec = EnsembleSpec::new(3, unit_torus(), 2.5, 5).unwrap();
        spec.n_sweeps = 100;
        spec.n_burn = 20;
        let scan = temperature_scan(&spec, &[2.5]).unwrap();
        let single = sample(&spec).unwrap();
        assert_eq!(scan, vec![single]);
    }

    #[test]
    fn scan_rejects_bad_grids() {
        let spec = EnsembleSpec::new(3, unit_torus(), 1.0, 5).unwrap();
        assert!(matches!(
            temperature_scan(&spec, &[]),
            Err(Error::BadBetaGrid)
        ));
        assert!(matches!(
            temperature_scan(&spec, &[2.0, 1.0]),
            Err(Error::BadBetaGrid)
        ));
    }

    #[test]
    fn scan_reports_offending_beta() {
        let mut spec = EnsembleSpec::new(3, unit_torus(), 1.0, 5).unwrap();
        spec.n_sweeps = 10;
        spec.n_burn = 0;
        // A beta of zero in the grid is invalid for the per-point run.
        let err = temperature_scan(&spec, &[0.0, 1.0]).unwrap_err();
        match err {
            Error::AtBeta { beta, .. } => assert_eq!(beta, 0.0),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn pairing_tightens_with_beta() {
        let mut hits = 0;
        for seed in 0..5 {
            let mut cold = EnsembleSpec::new(8, unit_torus(), 8.0, 1000 + seed).unwrap();
            cold.n_sweeps = 1200;
            cold.n_burn = 600;
            let mut hot = cold.clone();
            hot.beta = 0.5;
            let cold_stats = sample(&cold).unwrap();
            let hot_stats = sample(&hot).unwrap();
            if cold_stats.dipole_fraction > hot_stats.dipole_fraction {
                hits += 1;
            }
        }
        assert!(hits >= 4, "pairing ordering held in only {hits}/5 seeds");
    }
}
