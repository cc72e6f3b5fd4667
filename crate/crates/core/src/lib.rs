//! Simulation and analysis toolkit for the two-dimensional quantized
//! point-vortex gas.
//!
//! A vortex is a point singularity with integer circulation quantum count
//! ("charge"); a neutral gas of them interacts through a logarithmic pair
//! Hamiltonian, moves by first-order dynamics, and is analysed here through
//! four lenses:
//!
//! - [`vortex`] / [`geometry`]: domain types, pair kernels (plane and torus),
//!   conserved quantities of the planar affine symmetry, and genus-based
//!   admissibility arithmetic.
//! - [`dynamics`]: adaptive RK4 integration of the equations of motion with
//!   conservation auditing and opposite-charge annihilation events.
//! - [`flow`]: the meromorphic flow potential as a divisor, winding numbers by
//!   contour quadrature, and Chern-class bookkeeping.
//! - [`landau`]: the truncated Landau-Ginzburg free energy and the order
//!   parameter across temperature.
//! - [`ensemble`]: Metropolis sampling of the neutral gas on the torus with
//!   dipole-pairing observables.
//!
//! Units are reduced throughout: hbar/m = 1, so energies are dimensionless,
//! lengths are in the reduced length unit, and the circulation quantum h/m is
//! 2*pi. The superfluid density is constant and absorbed into the units.

// `!(x > 0.0)` is the NaN-rejecting form of a positivity check; `x <= 0.0`
// would wave NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod ensemble;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod landau;
mod theta;
pub mod vortex;

pub use dynamics::{
    annihilate, integrate, velocity_field, AnnihilationEvent, IntegrationOptions, TrajectoryState,
};
pub use ensemble::{
    pairing_stats, sample, sample_with_dump, temperature_scan, EnsembleSpec, EnsembleStats,
    PairingStats, Sampler,
};
pub use error::{Error, Result};
pub use flow::{
    chern_class, Circle, CirculationResult, Divisor, DivisorPoint, FieldGrid, FlowPotential,
    GridWindow,
};
pub use geometry::{canonical_chern, AdmissibilityReport, Geometry, Torus};
pub use landau::{Branch, Coefficient, LgModel, OrderParameterResult, RelevanceReport};
pub use vortex::{Configuration, ConservedSet, Vortex};
