//! Point vortices, configurations, and the conserved quantities of the
//! affine symmetry.
//!
//! Everything is in reduced units: hbar/m = 1, so energies carry a unit
//! prefactor, the circulation quantum is 2*pi, and the pair Hamiltonian reads
//! `H = -sum_{k>l} n_k n_l K(z_k, z_l)` with `K` the geometry's pair kernel.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Geometry, DEFAULT_COINCIDENCE_EPSILON};

/// A point vortex: complex position and non-zero integer charge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vortex {
    position: Complex64,
    charge: i64,
}

impl Vortex {
    pub fn new(position: Complex64, charge: i64) -> Result<Self> {
        if charge == 0 {
            return Err(Error::ZeroCharge);
        }
        if !position.re.is_finite() || !position.im.is_finite() {
            return Err(Error::NonFinitePosition {
                re: position.re,
                im: position.im,
            });
        }
        Ok(Self { position, charge })
    }

    pub fn position(&self) -> Complex64 {
        self.position
    }

    pub fn charge(&self) -> i64 {
        self.charge
    }
}

/// An ordered set of vortices bound to a geometry.
///
/// Positions are pairwise distinct; on the torus they are stored canonically
/// reduced into the fundamental domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    vortices: Vec<Vortex>,
    geometry: Geometry,
}

impl Configuration {
    pub fn new(vortices: Vec<Vortex>, geometry: Geometry) -> Result<Self> {
        let vortices: Vec<Vortex> = match &geometry {
            Geometry::Torus(t) => vortices
                .into_iter()
                .map(|v| Vortex {
                    position: t.reduce(v.position),
                    charge: v.charge,
                })
                .collect(),
            _ => vortices,
        };
        // Exact duplicates are rejected outright; near-coincidence (below the
        // configurable epsilon) is reported lazily by the energy evaluation.
        for k in 1..vortices.len() {
            for l in 0..k {
                let d = match &geometry {
                    Geometry::Torus(t) => {
                        t.min_image_distance(vortices[k].position, vortices[l].position)
                    }
                    _ => (vortices[k].position - vortices[l].position).norm(),
                };
                if d == 0.0 {
                    return Err(Error::CoincidentVortices {
                        first: l,
                        second: k,
                        separation: 0.0,
                        epsilon: 0.0,
                    });
                }
            }
        }
        Ok(Self { vortices, geometry })
    }

    pub fn vortices(&self) -> &[Vortex] {
        &self.vortices
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn len(&self) -> usize {
        self.vortices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vortices.is_empty()
    }

    /// Total charge Q, exact integer arithmetic.
    pub fn total_charge(&self) -> i64 {
        self.vortices.iter().map(|v| v.charge).sum()
    }

    /// Minimum pair distance in the geometry's metric; `None` for fewer than
    /// two vortices.
    pub fn min_pair_distance(&self) -> Option<f64> {
        let mut min: Option<f64> = None;
        for k in 1..self.vortices.len() {
            for l in 0..k {
                let d = match &self.geometry {
                    Geometry::Torus(t) => {
                        t.min_image_distance(self.vortices[k].position, self.vortices[l].position)
                    }
                    _ => (self.vortices[k].position - self.vortices[l].position).norm(),
                };
                min = Some(min.map_or(d, |m: f64| m.min(d)));
            }
        }
        min
    }

    /// Interaction energy `H = -sum_{k>l} n_k n_l K(z_k, z_l)`.
    pub fn hamiltonian(&self) -> Result<f64> {
        self.hamiltonian_with_epsilon(DEFAULT_COINCIDENCE_EPSILON)
    }

    /// As [`Self::hamiltonian`] with a caller-chosen coincidence epsilon.
    pub fn hamiltonian_with_epsilon(&self, epsilon: f64) -> Result<f64> {
        if matches!(self.geometry, Geometry::Sphere) {
            return Err(Error::SphereGeometry);
        }
        let mut h = 0.0;
        for k in 1..self.vortices.len() {
            for l in 0..k {
                let a = &self.vortices[k];
                let b = &self.vortices[l];
                let kernel =
                    self.geometry
                        .pair_kernel_with_epsilon(a.position, b.position, epsilon)
                        .map_err(|e| match e {
                            Error::CoincidentPoints {
                                separation,
                                epsilon,
                            } => Error::CoincidentVortices {
                                first: l,
                                second: k,
                                separation,
                                epsilon,
                            },
                            other => other,
                        })?;
                h -= (a.charge * b.charge) as f64 * kernel;
            }
        }
        Ok(h)
    }

    /// Energy, dipole moment M, angular moment I, and total charge Q.
    ///
    /// M and I come from the translational and rotational parts of the planar
    /// affine symmetry; on the torus they are reported absent.
    pub fn conserved_set(&self) -> Result<ConservedSet> {
        let energy = self.hamiltonian()?;
        let total_charge = self.total_charge();
        let (dipole_moment, angular_moment) = match &self.geometry {
            Geometry::Plane => {
                let m: Complex64 = self
                    .vortices
                    .iter()
                    .map(|v| v.charge as f64 * v.position)
                    .sum();
                let i: f64 = self
                    .vortices
                    .iter()
                    .map(|v| v.charge as f64 * v.position.norm_sqr())
                    .sum();
                (Some(m), Some(i))
            }
            _ => (None, None),
        };
        Ok(ConservedSet {
            energy,
            dipole_moment,
            angular_moment,
            total_charge,
        })
    }

    /// Planar affine map `z -> eta z + xi` with unimodular `eta`; charges
    /// unchanged. The pair Hamiltonian is invariant under this map.
    pub fn affine_transform(&self, eta: Complex64, xi: Complex64) -> Result<Configuration> {
        if !matches!(self.geometry, Geometry::Plane) {
            return Err(Error::GeometryMismatch { required: "plane" });
        }
        let modulus = eta.norm();
        if (modulus - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnimodularRotation { modulus });
        }
        let vortices = self
            .vortices
            .iter()
            .map(|v| Vortex {
                position: eta * v.position + xi,
                charge: v.charge,
            })
            .collect();
        Configuration::new(vortices, self.geometry)
    }
}

/// The constants of motion attached to a configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedSet {
    /// Interaction energy H in reduced units.
    pub energy: f64,
    /// Dipole moment M = sum n_k z_k; defined on the plane only.
    pub dipole_moment: Option<Complex64>,
    /// Angular moment I = sum n_k |z_k|^2; defined on the plane only.
    pub angular_moment: Option<f64>,
    /// Total charge Q = sum n_k, exact.
    pub total_charge: i64,
}
