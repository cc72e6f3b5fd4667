//! Surfaces the vortex gas lives on: plane, torus, sphere.
//!
//! The plane carries the bare logarithmic pair interaction. The torus carries
//! the doubly periodic interaction built from the first Jacobi theta function
//! with a quadratic correction in the imaginary separation,
//!
//! ```text
//! K(s) = log|theta1(pi s / L1; q)| - pi (Im s)^2 / (L1 L2),   q = exp(-pi L2/L1),
//! ```
//!
//! which is exactly periodic in `s` under both lattice shifts. The sphere is
//! represented only so that it can be rejected: a genus-0 surface has no line
//! bundles with vanishing Chern class, so a neutral vortex gas cannot live on
//! it.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::theta;
use crate::vortex::Configuration;

/// Default tolerance below which two positions count as coincident.
pub const DEFAULT_COINCIDENCE_EPSILON: f64 = 1e-12;

/// Default guard band on the torus aspect ratio L2/L1.
pub const ASPECT_RATIO_MIN: f64 = 0.1;
pub const ASPECT_RATIO_MAX: f64 = 10.0;

/// A rectangular torus with periods `L1` (real direction) and `L2` (imaginary).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Torus {
    l1: f64,
    l2: f64,
}

impl Torus {
    /// Torus with the aspect-ratio guard enforced (keeps the q-series well conditioned).
    pub fn new(l1: f64, l2: f64) -> Result<Self> {
        let torus = Self::unrestricted(l1, l2)?;
        let ratio = l2 / l1;
        if !(ASPECT_RATIO_MIN..=ASPECT_RATIO_MAX).contains(&ratio) {
            return Err(Error::AspectRatio {
                ratio,
                min: ASPECT_RATIO_MIN,
                max: ASPECT_RATIO_MAX,
            });
        }
        Ok(torus)
    }

    /// Torus with positive periods but no aspect-ratio guard.
    pub fn unrestricted(l1: f64, l2: f64) -> Result<Self> {
        if !(l1 > 0.0 && l2 > 0.0) || !l1.is_finite() || !l2.is_finite() {
            return Err(Error::InvalidPeriods { l1, l2 });
        }
        Ok(Self { l1, l2 })
    }

    pub fn periods(&self) -> (f64, f64) {
        (self.l1, self.l2)
    }

    pub fn min_period(&self) -> f64 {
        self.l1.min(self.l2)
    }

    /// Nome of the theta series, q = exp(-pi L2/L1); always in (0, 1).
    pub fn nome(&self) -> f64 {
        (-PI * self.l2 / self.l1).exp()
    }

    /// Canonical representative of `z` in the fundamental domain [0,L1) x [0,L2).
    pub fn reduce(&self, z: Complex64) -> Complex64 {
        Complex64::new(z.re.rem_euclid(self.l1), z.im.rem_euclid(self.l2))
    }

    /// Representative of a separation in the centered domain [-L1/2,L1/2) x [-L2/2,L2/2).
    pub fn reduce_centered(&self, s: Complex64) -> Complex64 {
        Complex64::new(
            (s.re + 0.5 * self.l1).rem_euclid(self.l1) - 0.5 * self.l1,
            (s.im + 0.5 * self.l2).rem_euclid(self.l2) - 0.5 * self.l2,
        )
    }

    /// Minimum-image distance between two points.
    pub fn min_image_distance(&self, z: Complex64, w: Complex64) -> f64 {
        self.reduce_centered(z - w).norm()
    }

    /// Minimum-image separation vector from `w` to `z`.
    pub fn min_image_vector(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.reduce_centered(z - w)
    }

    /// Doubly periodic pair kernel evaluated on the centered separation.
    pub fn kernel(&self, s: Complex64) -> f64 {
        let r = self.reduce_centered(s);
        let u = PI / self.l1 * r;
        theta::theta1(u, self.nome()).norm().ln() - PI * r.im * r.im / (self.l1 * self.l2)
    }

    /// Per-pair building block of the vortex velocity on the torus:
    /// the contribution of a unit charge at separation `s` is
    /// `i (pi/L1) conj(theta1'/theta1(pi s/L1)) + 2 pi Im(s) / (L1 L2)`.
    /// Doubly periodic in `s`; reduces to `i / conj(s)` for small separations.
    pub fn velocity_kernel(&self, s: Complex64) -> Complex64 {
        let r = self.reduce_centered(s);
        let u = PI / self.l1 * r;
        let t = theta::theta1_log_derivative(u, self.nome());
        Complex64::new(0.0, PI / self.l1) * t.conj()
            + Complex64::new(2.0 * PI * r.im / (self.l1 * self.l2), 0.0)
    }
}

/// The surface underlying a configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Plane,
    Torus(Torus),
    Sphere,
}

impl Geometry {
    pub fn plane() -> Self {
        Geometry::Plane
    }

    pub fn torus(l1: f64, l2: f64) -> Result<Self> {
        Ok(Geometry::Torus(Torus::new(l1, l2)?))
    }

    pub fn torus_unrestricted(l1: f64, l2: f64) -> Result<Self> {
        Ok(Geometry::Torus(Torus::unrestricted(l1, l2)?))
    }

    pub fn sphere() -> Self {
        Geometry::Sphere
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Geometry::Plane => "plane",
            Geometry::Torus(_) => "torus",
            Geometry::Sphere => "sphere",
        }
    }

    /// Genus of the surface. The plane reports 1: for vortex dynamics it is
    /// used through its torus compactification (opposite sides identified).
    pub fn genus(&self) -> u32 {
        match self {
            Geometry::Plane | Geometry::Torus(_) => 1,
            Geometry::Sphere => 0,
        }
    }

    pub fn as_torus(&self) -> Option<&Torus> {
        match self {
            Geometry::Torus(t) => Some(t),
            _ => None,
        }
    }

    /// Pair interaction kernel with the default coincidence epsilon.
    pub fn pair_kernel(&self, z: Complex64, w: Complex64) -> Result<f64> {
        self.pair_kernel_with_epsilon(z, w, DEFAULT_COINCIDENCE_EPSILON)
    }

    /// Pair interaction kernel: `log|z - w|` on the plane, the theta-function
    /// kernel on the torus. Errors on the sphere and on (near-)coincident points.
    pub fn pair_kernel_with_epsilon(&self, z: Complex64, w: Complex64, epsilon: f64) -> Result<f64> {
        let d = self.distance(z, w)?;
        if d < epsilon {
            return Err(Error::CoincidentPoints {
                separation: d,
                epsilon,
            });
        }
        match self {
            Geometry::Plane => Ok(d.ln()),
            Geometry::Torus(t) => Ok(t.kernel(z - w)),
            Geometry::Sphere => unreachable!("distance already rejected the sphere"),
        }
    }

    /// Distance respecting the geometry (Euclidean on the plane, minimum image
    /// on the torus). Errors on the sphere.
    pub fn distance(&self, z: Complex64, w: Complex64) -> Result<f64> {
        match self {
            Geometry::Plane => Ok((z - w).norm()),
            Geometry::Torus(t) => Ok(t.min_image_distance(z, w)),
            Geometry::Sphere => Err(Error::SphereGeometry),
        }
    }

    /// Canonical reduction into the fundamental domain; torus only.
    pub fn reduce_position(&self, z: Complex64) -> Result<Complex64> {
        match self {
            Geometry::Torus(t) => Ok(t.reduce(z)),
            _ => Err(Error::GeometryMismatch { required: "torus" }),
        }
    }

    /// Admissibility of a configuration for vortex dynamics and for
    /// phase-transition studies.
    pub fn admissibility(&self, config: &Configuration) -> AdmissibilityReport {
        let genus = self.genus();
        let total_charge = config.total_charge();
        let (admissible, reason) = if matches!(self, Geometry::Sphere) && !config.is_empty() {
            (
                false,
                Some("genus 0: no nontrivial vanishing-Chern-class bundles".to_string()),
            )
        } else if total_charge != 0 {
            (
                false,
                Some(format!(
                    "net charge must vanish for phase-transition studies (Q = {total_charge})"
                )),
            )
        } else {
            (true, None)
        };
        AdmissibilityReport {
            admissible,
            reason,
            genus,
            dim_h1: 2 * genus,
            affine_dynamics: genus == 1,
            total_charge,
        }
    }
}

/// Chern class of the canonical bundle, c(kappa) = 2(g - 1). Affine vortex
/// dynamics is admissible exactly when this vanishes, i.e. at genus 1.
pub fn canonical_chern(genus: i64) -> Result<i64> {
    if genus < 0 {
        return Err(Error::NegativeGenus { genus });
    }
    Ok(2 * (genus - 1))
}

/// Outcome of the admissibility check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub reason: Option<String>,
    pub genus: u32,
    /// dim H^1(M, C) = 2g.
    pub dim_h1: u32,
    /// Whether affine dynamics is supported (genus 1, vanishing canonical Chern class).
    pub affine_dynamics: bool,
    pub total_charge: i64,
}
