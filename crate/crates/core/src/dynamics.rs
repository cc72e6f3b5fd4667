//! Time integration of the first-order vortex equations of motion.
//!
//! The motion law in reduced units is `n_k dz_k/dt = -2i dH/dconj(z_k)`, which
//! closes to `dz_k/dt = i sum_{l!=k} n_l / conj(z_k - z_l)` on the plane and to
//! the analytic derivative of the theta kernel on the torus.
//!
//! The integrator is classical RK4 with step doubling: each step is taken at
//! full and at half size, the Richardson error estimate controls the step, and
//! the extrapolated solution is kept. The step is additionally capped by
//! `eta_step * d_min^2`, the timescale of the fastest pair (a pair at distance
//! d co-rotates with period proportional to d^2).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::vortex::{Configuration, ConservedSet, Vortex};

/// Knobs for [`integrate`].
#[derive(Debug, Clone)]
pub struct IntegrationOptions {
    /// Step cap factor: h <= eta_step * d_min^2.
    pub eta_step: f64,
    /// Absolute local error tolerance per step (positions).
    pub local_tol: f64,
    /// Spacing of recorded states; `None` means t_end / 100.
    pub output_stride: Option<f64>,
    /// Opposite-charge pairs closer than this are annihilated.
    pub r_core: f64,
    /// Whether annihilation events are processed.
    pub annihilation: bool,
    /// Coincidence guard for velocity evaluations.
    pub coincidence_epsilon: f64,
    /// Hard cap on internal steps.
    pub max_steps: u64,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            eta_step: 0.05,
            local_tol: 1e-12,
            output_stride: None,
            r_core: 1e-3,
            annihilation: true,
            coincidence_epsilon: 1e-12,
            max_steps: 200_000_000,
        }
    }
}

/// One recorded point of a trajectory.
#[derive(Debug, Clone)]
pub struct TrajectoryState {
    pub time: f64,
    pub config: Configuration,
    pub conserved: ConservedSet,
    /// Annihilation events that occurred since the previous recorded state.
    pub events: Vec<AnnihilationEvent>,
}

/// A logged annihilation: the removed pair, the merged survivor (if the
/// charges did not cancel), and the energy discontinuity.
#[derive(Debug, Clone)]
pub struct AnnihilationEvent {
    pub time: f64,
    pub removed: (Vortex, Vortex),
    pub separation: f64,
    pub energy_before: f64,
    pub energy_after: f64,
    pub merged: Option<Vortex>,
}

/// Velocity of every vortex, `dz_k/dt = i sum_{l!=k} n_l / conj(z_k - z_l)` on
/// the plane; the periodic analogue on the torus. A single vortex is at rest.
pub fn velocity_field(config: &Configuration) -> Result<Vec<Complex64>> {
    let positions: Vec<Complex64> = config.vortices().iter().map(|v| v.position()).collect();
    let charges: Vec<i64> = config.vortices().iter().map(|v| v.charge()).collect();
    velocities(&positions, &charges, config.geometry(), 1e-12)
}

fn velocities(
    positions: &[Complex64],
    charges: &[i64],
    geometry: &Geometry,
    epsilon: f64,
) -> Result<Vec<Complex64>> {
    let n = positions.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    match geometry {
        Geometry::Plane => {
            for k in 0..n {
                let mut v = Complex64::new(0.0, 0.0);
                for l in 0..n {
                    if l == k {
                        continue;
                    }
                    let s = positions[k] - positions[l];
                    let d = s.norm();
                    if d < epsilon {
                        return Err(Error::CoincidentPoints {
                            separation: d,
                            epsilon,
                        });
                    }
                    v += charges[l] as f64 * Complex64::new(0.0, 1.0) / s.conj();
                }
                out[k] = v;
            }
        }
        Geometry::Torus(t) => {
            for k in 0..n {
                let mut v = Complex64::new(0.0, 0.0);
                for l in 0..n {
                    if l == k {
                        continue;
                    }
                    let s = positions[k] - positions[l];
                    let d = t.min_image_distance(positions[k], positions[l]);
                    if d < epsilon {
                        return Err(Error::CoincidentPoints {
                            separation: d,
                            epsilon,
                        });
                    }
                    v += charges[l] as f64 * t.velocity_kernel(s);
                }
                out[k] = v;
            }
        }
        Geometry::Sphere => return Err(Error::SphereGeometry),
    }
    Ok(out)
}

fn rk4_step(
    positions: &[Complex64],
    charges: &[i64],
    geometry: &Geometry,
    epsilon: f64,
    h: f64,
    k1: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = positions.len();
    let shifted = |base: &[Complex64], ks: &[Complex64], f: f64| -> Vec<Complex64> {
        (0..n).map(|i| base[i] + f * ks[i]).collect()
    };
    let k2 = velocities(&shifted(positions, k1, 0.5 * h), charges, geometry, epsilon)?;
    let k3 = velocities(&shifted(positions, &k2, 0.5 * h), charges, geometry, epsilon)?;
    let k4 = velocities(&shifted(positions, &k3, h), charges, geometry, epsilon)?;
    Ok((0..n)
        .map(|i| positions[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

fn min_pair_distance(positions: &[Complex64], geometry: &Geometry) -> Option<f64> {
    let mut min: Option<f64> = None;
    for k in 1..positions.len() {
        for l in 0..k {
            let d = match geometry {
                Geometry::Torus(t) => t.min_image_distance(positions[k], positions[l]),
                _ => (positions[k] - positions[l]).norm(),
            };
            min = Some(min.map_or(d, |m: f64| m.min(d)));
        }
    }
    min
}

/// Pair energy without the coincidence guard; coincident pairs yield -inf
/// terms instead of errors. Used to log the energy discontinuity of events.
fn raw_energy(positions: &[Complex64], charges: &[i64], geometry: &Geometry) -> f64 {
    let mut h = 0.0;
    for k in 1..positions.len() {
        for l in 0..k {
            let kernel = match geometry {
                Geometry::Plane => (positions[k] - positions[l]).norm().ln(),
                Geometry::Torus(t) => t.kernel(positions[k] - positions[l]),
                Geometry::Sphere => f64::NAN,
            };
            h -= (charges[k] * charges[l]) as f64 * kernel;
        }
    }
    h
}

/// Closest opposite-sign pair, if any.
fn closest_opposite_pair(
    positions: &[Complex64],
    charges: &[i64],
    geometry: &Geometry,
) -> Option<(usize, usize, f64)> {
    let mut best: Option<(usize, usize, f64)> = None;
    for k in 1..positions.len() {
        for l in 0..k {
            if charges[k] * charges[l] >= 0 {
                continue;
            }
            let d = match geometry {
                Geometry::Torus(t) => t.min_image_distance(positions[k], positions[l]),
                _ => (positions[k] - positions[l]).norm(),
            };
            if best.is_none_or(|(_, _, bd)| d < bd) {
                best = Some((l, k, d));
            }
        }
    }
    best
}

/// Repeatedly merge or remove the closest opposite-sign pair with separation
/// below `r_core`. Charges add; a zero sum removes both vortices, otherwise
/// the survivor sits at the |charge|-weighted midpoint. Q is conserved exactly.
fn annihilate_arrays(
    positions: &mut Vec<Complex64>,
    charges: &mut Vec<i64>,
    geometry: &Geometry,
    r_core: f64,
    time: f64,
    events: &mut Vec<AnnihilationEvent>,
) -> Result<()> {
    while let Some((l, k, d)) = closest_opposite_pair(positions, charges, geometry) {
        if d >= r_core {
            break;
        }
        let energy_before = raw_energy(positions, charges, geometry);
        let (zl, zk) = (positions[l], positions[k]);
        let (nl, nk) = (charges[l], charges[k]);
        let removed = (Vortex::new(zl, nl)?, Vortex::new(zk, nk)?);
        let sum = nl + nk;
        let merged = if sum != 0 {
            let wl = nl.unsigned_abs() as f64;
            let wk = nk.unsigned_abs() as f64;
            // Weighted midpoint along the minimum-image offset so that pairs
            // straddling a torus boundary merge on the short side.
            let offset = match geometry {
                Geometry::Torus(t) => t.min_image_vector(zk, zl),
                _ => zk - zl,
            };
            let mut z = zl + wk / (wl + wk) * offset;
            if let Geometry::Torus(t) = geometry {
                z = t.reduce(z);
            }
            Some(Vortex::new(z, sum)?)
        } else {
            None
        };
        // Replace the earlier slot, drop the later one.
        if let Some(m) = &merged {
            positions[l] = m.position();
            charges[l] = m.charge();
            positions.remove(k);
            charges.remove(k);
        } else {
            positions.remove(k);
            charges.remove(k);
            positions.remove(l);
            charges.remove(l);
        }
        let energy_after = raw_energy(positions, charges, geometry);
        events.push(AnnihilationEvent {
            time,
            removed,
            separation: d,
            energy_before,
            energy_after,
            merged,
        });
    }
    Ok(())
}

/// Apply the annihilation rule once-off to a configuration.
pub fn annihilate(
    config: &Configuration,
    r_core: f64,
) -> Result<(Configuration, Vec<AnnihilationEvent>)> {
    if !(r_core > 0.0) {
        return Err(Error::InvalidSpec {
            detail: format!("r_core must be positive, got {r_core}"),
        });
    }
    let mut positions: Vec<Complex64> = config.vortices().iter().map(|v| v.position()).collect();
    let mut charges: Vec<i64> = config.vortices().iter().map(|v| v.charge()).collect();
    let mut events = Vec::new();
    annihilate_arrays(
        &mut positions,
        &mut charges,
        config.geometry(),
        r_core,
        0.0,
        &mut events,
    )?;
    let vortices: Result<Vec<Vortex>> = positions
        .iter()
        .zip(&charges)
        .map(|(&z, &n)| Vortex::new(z, n))
        .collect();
    Ok((Configuration::new(vortices?, *config.geometry())?, events))
}

/// Integrate the equations of motion up to `t_end`, recording states at the
/// output stride. Conserved quantities are recomputed at every recorded state;
/// annihilation events (if enabled) are processed between steps and attached
/// to the next recorded state.
pub fn integrate(
    initial: &Configuration,
    t_end: f64,
    options: &IntegrationOptions,
) -> Result<Vec<TrajectoryState>> {
    if matches!(initial.geometry(), Geometry::Sphere) {
        return Err(Error::SphereGeometry);
    }
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidSpec {
            detail: format!("t_end must be positive and finite, got {t_end}"),
        });
    }
    if initial.is_empty() {
        return Ok(Vec::new());
    }
    let stride = match options.output_stride {
        Some(s) if s > 0.0 => s,
        Some(s) => {
            return Err(Error::InvalidSpec {
                detail: format!("output stride must be positive, got {s}"),
            })
        }
        None => t_end / 100.0,
    };

    let geometry = *initial.geometry();
    let mut positions: Vec<Complex64> = initial.vortices().iter().map(|v| v.position()).collect();
    let mut charges: Vec<i64> = initial.vortices().iter().map(|v| v.charge()).collect();

    let mut output_times = Vec::new();
    let mut k = 1u64;
    while (k as f64) * stride < t_end * (1.0 - 1e-12) {
        output_times.push(k as f64 * stride);
        k += 1;
    }
    output_times.push(t_end);

    let mut states = Vec::with_capacity(output_times.len() + 1);
    let mut pending_events = Vec::new();

    if options.annihilation {
        annihilate_arrays(
            &mut positions,
            &mut charges,
            &geometry,
            options.r_core,
            0.0,
            &mut pending_events,
        )?;
    }
    states.push(make_state(
        0.0,
        &positions,
        &charges,
        &geometry,
        std::mem::take(&mut pending_events),
    )?);

    let h_floor = 1e-14 * t_end.max(1.0);
    let mut t = 0.0;
    let mut h_suggest = f64::INFINITY;
    let mut steps: u64 = 0;

    for &target in &output_times {
        while t < target {
            // Roundoff remnants of the previous step are snapped to the target.
            if target - t <= h_floor {
                break;
            }
            if options.annihilation {
                if let Some((_, _, d)) = closest_opposite_pair(&positions, &charges, &geometry) {
                    if d < options.r_core {
                        annihilate_arrays(
                            &mut positions,
                            &mut charges,
                            &geometry,
                            options.r_core,
                            t,
                            &mut pending_events,
                        )?;
                    }
                }
            }
            let d_min = min_pair_distance(&positions, &geometry).unwrap_or(f64::INFINITY);
            let h_cap = options.eta_step * d_min * d_min;
            let mut h = h_suggest.min(h_cap).min(target - t);
            if h < h_floor {
                return Err(Error::StepSizeUnderflow { time: t, step: h });
            }

            let k1 = velocities(&positions, &charges, &geometry, options.coincidence_epsilon)?;
            // Step doubling: retry with smaller h until the Richardson error
            // estimate meets the tolerance, then keep the extrapolated step.
            let next = loop {
                steps += 1;
                if steps > options.max_steps {
                    return Err(Error::StepLimitExceeded { steps });
                }
                let trial = || -> Result<(Vec<Complex64>, f64)> {
                    let full =
                        rk4_step(&positions, &charges, &geometry, options.coincidence_epsilon, h, &k1)?;
                    let mid =
                        rk4_step(&positions, &charges, &geometry, options.coincidence_epsilon, 0.5 * h, &k1)?;
                    let k1_mid =
                        velocities(&mid, &charges, &geometry, options.coincidence_epsilon)?;
                    let half = rk4_step(&mid, &charges, &geometry, options.coincidence_epsilon, 0.5 * h, &k1_mid)?;
                    let err = full
                        .iter()
                        .zip(&half)
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0f64, f64::max)
                        / 15.0;
                    let extrapolated: Vec<Complex64> = half
                        .iter()
                        .zip(&full)
                        .map(|(h2, f)| h2 + (h2 - f) / 15.0)
                        .collect();
                    Ok((extrapolated, err))
                };
                match trial() {
                    Ok((extrapolated, err)) if err.is_finite() && err <= options.local_tol => {
                        let factor = if err > 0.0 {
                            (0.9 * (options.local_tol / err).powf(0.2)).clamp(0.2, 5.0)
                        } else {
                            5.0
                        };
                        h_suggest = h * factor;
                        break extrapolated;
                    }
                    Ok((_, err)) => {
                        let factor = if err.is_finite() && err > 0.0 {
                            (0.9 * (options.local_tol / err).powf(0.2)).clamp(0.1, 0.9)
                        } else {
                            0.25
                        };
                        h *= factor;
                        if h < h_floor {
                            return Err(Error::StepSizeUnderflow { time: t, step: h });
                        }
                    }
                    Err(Error::CoincidentPoints { .. }) | Err(Error::CoincidentVortices { .. }) => {
                        // A stage evaluation landed on a near-collision; retry shorter.
                        h *= 0.25;
                        if h < h_floor {
                            return Err(Error::StepSizeUnderflow { time: t, step: h });
                        }
                    }
                    Err(other) => return Err(other),
                }
            };
            positions = next;
            if let Geometry::Torus(torus) = &geometry {
                for z in &mut positions {
                    *z = torus.reduce(*z);
                }
            }
            t += h;
        }
        t = target;
        if options.annihilation {
            annihilate_arrays(
                &mut positions,
                &mut charges,
                &geometry,
                options.r_core,
                t,
                &mut pending_events,
            )?;
        }
        states.push(make_state(
            t,
            &positions,
            &charges,
            &geometry,
            std::mem::take(&mut pending_events),
        )?);
    }
    Ok(states)
}

fn make_state(
    time: f64,
    positions: &[Complex64],
    charges: &[i64],
    geometry: &Geometry,
    events: Vec<AnnihilationEvent>,
) -> Result<TrajectoryState> {
    let vortices: Result<Vec<Vortex>> = positions
        .iter()
        .zip(charges)
        .map(|(&z, &n)| Vortex::new(z, n))
        .collect();
    let config = Configuration::new(vortices?, *geometry)?;
    let conserved = config.conserved_set()?;
    Ok(TrajectoryState {
        time,
        config,
        conserved,
        events,
    })
}
