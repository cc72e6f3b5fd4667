//! Meromorphic flow potentials represented by their divisors.
//!
//! A configuration maps to the potential `f(z) = prod_k (z - z_k)^{n_k}`. The
//! potential is never evaluated as a product (it overflows and the equivalence
//! class modulo non-vanishing holomorphic factors would be lost); everything
//! works through the divisor `{(z_k, n_k)}` and the logarithmic derivative
//! `f'/f = sum_k n_k / (z - z_k)`.

use num_complex::Complex64;
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::vortex::Configuration;

/// Tolerance used by circulation quadrature: contour clearance from divisor
/// points and the accepted integer residual.
pub const CONTOUR_CLEARANCE: f64 = 1e-9;
pub const RESIDUAL_TOLERANCE: f64 = 1e-6;
/// Starting node count callers use unless they have a reason not to.
pub const DEFAULT_CIRCULATION_NODES: usize = 1024;
const MIN_NODES: usize = 64;
const MAX_NODES: usize = 1 << 22;

/// One zero/pole of the potential: a position and a non-zero integer order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivisorPoint {
    pub position: Complex64,
    pub order: i64,
}

/// A formal sum of orders at distinct points, kept sorted by (re, im).
#[derive(Debug, Clone, PartialEq)]
pub struct Divisor {
    points: Vec<DivisorPoint>,
}

fn position_key(z: Complex64) -> (f64, f64) {
    // Normalize -0.0 so equal positions merge regardless of sign of zero.
    (z.re + 0.0, z.im + 0.0)
}

fn compare_positions(a: Complex64, b: Complex64) -> Ordering {
    let (ar, ai) = position_key(a);
    let (br, bi) = position_key(b);
    ar.partial_cmp(&br)
        .unwrap()
        .then(ai.partial_cmp(&bi).unwrap())
}

impl Divisor {
    /// Build from (position, order) pairs. Orders must be non-zero; repeated
    /// positions are merged by adding orders (points cancelling to zero are
    /// dropped, matching the equivalence-class arithmetic).
    pub fn new(points: Vec<(Complex64, i64)>) -> Result<Self> {
        let mut entries = Vec::with_capacity(points.len());
        for (z, order) in points {
            if order == 0 {
                return Err(Error::ZeroOrder);
            }
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinitePosition { re: z.re, im: z.im });
            }
            entries.push(DivisorPoint {
                position: Complex64::new(z.re + 0.0, z.im + 0.0),
                order,
            });
        }
        entries.sort_by(|a, b| compare_positions(a.position, b.position));
        let mut merged: Vec<DivisorPoint> = Vec::with_capacity(entries.len());
        for p in entries {
            match merged.last_mut() {
                Some(last) if position_key(last.position) == position_key(p.position) => {
                    last.order += p.order;
                    if last.order == 0 {
                        merged.pop();
                    }
                }
                _ => merged.push(p),
            }
        }
        Ok(Self { points: merged })
    }

    pub fn empty() -> Self {
        Self { points: Vec::new() }
    }

    /// Divisor of the flow potential attached to a configuration: one point
    /// per vortex, order = charge. Degree equals the total charge Q.
    pub fn from_configuration(config: &Configuration) -> Self {
        let points = config
            .vortices()
            .iter()
            .map(|v| DivisorPoint {
                position: Complex64::new(v.position().re + 0.0, v.position().im + 0.0),
                order: v.charge(),
            })
            .collect();
        let mut divisor = Self { points };
        divisor
            .points
            .sort_by(|a, b| compare_positions(a.position, b.position));
        divisor
    }

    pub fn points(&self) -> &[DivisorPoint] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total order; this is the Chern class of the associated line bundle.
    pub fn degree(&self) -> i64 {
        self.points.iter().map(|p| p.order).sum()
    }

    /// Pointwise sum of orders (the divisor of a product of potentials):
    /// `nu_p(fg) = nu_p(f) + nu_p(g)`, points cancelling to zero removed.
    pub fn multiply(&self, other: &Divisor) -> Divisor {
        let mut out = Vec::with_capacity(self.points.len() + other.points.len());
        let (mut i, mut j) = (0, 0);
        while i < self.points.len() && j < other.points.len() {
            let a = self.points[i];
            let b = other.points[j];
            match compare_positions(a.position, b.position) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    let order = a.order + b.order;
                    if order != 0 {
                        out.push(DivisorPoint {
                            position: a.position,
                            order,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.points[i..]);
        out.extend_from_slice(&other.points[j..]);
        Divisor { points: out }
    }
}

/// Chern class of the line bundle of a divisor: the exact integer sum of
/// orders. Equal to the configuration's net charge when the divisor comes
/// from a configuration, and shared by every potential in the bundle class.
pub fn chern_class(divisor: &Divisor) -> i64 {
    divisor.degree()
}

/// The flow potential `prod (z - z_k)^{n_k}`, represented by its divisor.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowPotential {
    divisor: Divisor,
}

/// A circular contour for circulation quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

/// Outcome of circulation quadrature: the winding integer, the distance of the
/// raw quadrature value from it, and the node count that settled it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirculationResult {
    pub winding: i64,
    pub residual: f64,
    pub nodes: usize,
}

/// Rectangular sampling window for [`FlowPotential::field_grid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridWindow {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

/// Sampled flow field; `values` is row-major over y (outer) then x (inner),
/// with `None` marking samples within 1e-6 of a divisor point.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub nx: usize,
    pub ny: usize,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<Option<Complex64>>,
}

const GRID_SINGULARITY_RADIUS: f64 = 1e-6;

impl FlowPotential {
    pub fn new(divisor: Divisor) -> Self {
        Self { divisor }
    }

    pub fn from_configuration(config: &Configuration) -> Self {
        Self {
            divisor: Divisor::from_configuration(config),
        }
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    /// `f'/f (z) = sum_k n_k / (z - z_k)`; the complex flow field.
    pub fn log_derivative(&self, z: Complex64) -> Result<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        for p in self.divisor.points() {
            let dz = z - p.position;
            let d = dz.norm();
            if d < 1e-14 {
                return Err(Error::EvaluationAtDivisorPoint { distance: d });
            }
            sum += p.order as f64 / dz;
        }
        Ok(sum)
    }

    /// Winding integer `(1/2*pi*i) \oint f'/f dz` over a circle, by trapezoidal
    /// quadrature with adaptive node doubling. The result equals the sum of
    /// orders strictly inside the contour; the physical circulation is 2*pi
    /// times this integer in reduced units.
    pub fn circulation(&self, contour: &Circle, n_points: usize) -> Result<CirculationResult> {
        if n_points < MIN_NODES {
            return Err(Error::TooFewNodes {
                got: n_points,
                min: MIN_NODES,
            });
        }
        for p in self.divisor.points() {
            let distance = ((p.position - contour.center).norm() - contour.radius).abs();
            if distance < CONTOUR_CLEARANCE {
                return Err(Error::ContourThroughSingularity {
                    distance,
                    tolerance: CONTOUR_CLEARANCE,
                });
            }
        }
        let mut nodes = n_points;
        let mut previous: Option<(i64, f64)> = None;
        while nodes <= MAX_NODES {
            let raw = self.quadrature(contour, nodes)?;
            let winding = raw.re.round();
            let residual = (raw - winding).norm();
            if let Some((prev_winding, _)) = previous {
                if prev_winding == winding as i64 && residual < RESIDUAL_TOLERANCE {
                    return Ok(CirculationResult {
                        winding: winding as i64,
                        residual,
                        nodes,
                    });
                }
            }
            previous = Some((winding as i64, residual));
            nodes *= 2;
        }
        Err(Error::QuadratureFailure {
            residual: previous.map(|(_, r)| r).unwrap_or(f64::NAN),
            tolerance: RESIDUAL_TOLERANCE,
        })
    }

    fn quadrature(&self, contour: &Circle, nodes: usize) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..nodes {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
            let unit = Complex64::from_polar(1.0, theta);
            let z = contour.center + contour.radius * unit;
            acc += self.log_derivative(z)? * unit;
        }
        Ok(contour.radius * acc / nodes as f64)
    }

    /// Product of potentials: divisor orders add pointwise.
    pub fn multiply(&self, other: &FlowPotential) -> FlowPotential {
        FlowPotential {
            divisor: self.divisor.multiply(&other.divisor),
        }
    }

    /// Sample the flow field on a uniform grid (endpoints included). Samples
    /// within 1e-6 of a divisor point are missing.
    pub fn field_grid(&self, window: &GridWindow, nx: usize, ny: usize) -> Result<FieldGrid> {
        if nx < 2 || ny < 2 {
            return Err(Error::GridTooSmall { nx, ny });
        }
        if !(window.x_max > window.x_min) {
            return Err(Error::DegenerateWindow {
                detail: format!("x range [{}, {}] has no width", window.x_min, window.x_max),
            });
        }
        if !(window.y_max > window.y_min) {
            return Err(Error::DegenerateWindow {
                detail: format!("y range [{}, {}] has no height", window.y_min, window.y_max),
            });
        }
        let xs: Vec<f64> = (0..nx)
            .map(|i| window.x_min + (window.x_max - window.x_min) * i as f64 / (nx - 1) as f64)
            .collect();
        let ys: Vec<f64> = (0..ny)
            .map(|j| window.y_min + (window.y_max - window.y_min) * j as f64 / (ny - 1) as f64)
            .collect();
        let mut values = Vec::with_capacity(nx * ny);
        for &y in &ys {
            for &x in &xs {
                let z = Complex64::new(x, y);
                let near_singularity = self
                    .divisor
                    .points()
                    .iter()
                    .any(|p| (z - p.position).norm() < GRID_SINGULARITY_RADIUS);
                if near_singularity {
                    values.push(None);
                } else {
                    values.push(Some(self.log_derivative(z)?));
                }
            }
        }
        Ok(FieldGrid {
            nx,
            ny,
            xs,
            ys,
            values,
        })
    }
}
