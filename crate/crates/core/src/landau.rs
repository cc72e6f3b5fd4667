//! Truncated free-energy functional and the order parameter across
//! temperature.
//!
//! The free energy density is `|grad psi|^2/(2m) + a(T)|psi|^2 + b(T)|psi|^4
//! + c(T)|psi|^6` with the sextic term optional. Only the uniform sector is
//! minimized: constant fields are the harmonic minimizers on a compact
//! surface, so the stationarity condition in `x = |psi|^2` is
//! `a + 2 b x + 3 c x^2 = 0`.

use serde::Serialize;

use crate::error::{Error, Result};

/// A temperature-dependent coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coefficient {
    Constant(f64),
    /// `slope * (T - T_c)`, the conventional leading behaviour of a(T).
    Linear { slope: f64 },
}

impl Coefficient {
    fn eval(&self, temperature: f64, t_c: f64) -> f64 {
        match self {
            Coefficient::Constant(v) => *v,
            Coefficient::Linear { slope } => slope * (temperature - t_c),
        }
    }
}

/// Coefficients of the truncated free energy plus the mass parameter and the
/// declared critical temperature of the parameterization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LgModel {
    a: Coefficient,
    b: Coefficient,
    c: Option<Coefficient>,
    mass: f64,
    t_c: f64,
}

/// Which minimum the system sits in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Normal,
    Superfluid,
}

/// The order parameter at one temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderParameterResult {
    pub temperature: f64,
    /// |psi| at the global minimum; zero exactly on the normal branch.
    pub psi_min: f64,
    pub branch: Branch,
    pub free_energy_min: f64,
}

/// Physical-relevance note: more than one nontrivial stationary branch would
/// enlarge the gauge group beyond a single U(1) and force the genus above 1,
/// which the affine vortex dynamics excludes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelevanceReport {
    pub temperature: f64,
    pub nontrivial_branches: usize,
    pub relevant: bool,
    pub detail: String,
}

impl LgModel {
    pub fn new(
        a: Coefficient,
        b: Coefficient,
        c: Option<Coefficient>,
        mass: f64,
        t_c: f64,
    ) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidSpec {
                detail: format!("mass must be positive, got {mass}"),
            });
        }
        if !(t_c > 0.0) || !t_c.is_finite() {
            return Err(Error::InvalidSpec {
                detail: format!("T_c must be positive, got {t_c}"),
            });
        }
        Ok(Self { a, b, c, mass, t_c })
    }

    /// The default quadratic parameterization: a(T) = T - T_c, constant b.
    pub fn quadratic(a0: f64, b: f64, mass: f64, t_c: f64) -> Result<Self> {
        Self::new(
            Coefficient::Linear { slope: a0 },
            Coefficient::Constant(b),
            None,
            mass,
            t_c,
        )
    }

    /// Constant coefficients, convenient for fixed-temperature studies.
    pub fn with_constants(a: f64, b: f64, c: Option<f64>, mass: f64, t_c: f64) -> Result<Self> {
        Self::new(
            Coefficient::Constant(a),
            Coefficient::Constant(b),
            c.map(Coefficient::Constant),
            mass,
            t_c,
        )
    }

    pub fn critical_temperature(&self) -> f64 {
        self.t_c
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn a(&self, temperature: f64) -> f64 {
        self.a.eval(temperature, self.t_c)
    }

    pub fn b(&self, temperature: f64) -> f64 {
        self.b.eval(temperature, self.t_c)
    }

    pub fn c(&self, temperature: f64) -> Option<f64> {
        self.c.map(|c| c.eval(temperature, self.t_c))
    }

    /// Sign conditions on the coefficients: b(T) > 0 above T_c (stability of
    /// psi = 0) and a(T)/b(T) < 0 below T_c (a nontrivial minimum exists).
    pub fn validate_at(&self, temperature: f64) -> Result<()> {
        let a = self.a(temperature);
        let b = self.b(temperature);
        if temperature > self.t_c && b <= 0.0 {
            return Err(Error::ModelValidation {
                temperature,
                detail: format!("b(T) = {b} must be positive above T_c = {}", self.t_c),
            });
        }
        if temperature < self.t_c && !(a / b < 0.0) {
            return Err(Error::ModelValidation {
                temperature,
                detail: format!(
                    "a(T)/b(T) = {} must be negative below T_c = {}",
                    a / b,
                    self.t_c
                ),
            });
        }
        Ok(())
    }

    /// Free energy density at given |psi|^2 and |grad psi|^2.
    pub fn free_energy_density(&self, temperature: f64, psi_sq: f64, grad_sq: f64) -> Result<f64> {
        self.validate_at(temperature)?;
        if psi_sq < 0.0 || grad_sq < 0.0 {
            return Err(Error::InvalidSpec {
                detail: format!("psi_sq and grad_sq must be non-negative, got {psi_sq}, {grad_sq}"),
            });
        }
        Ok(grad_sq / (2.0 * self.mass) + self.uniform_density(temperature, psi_sq))
    }

    /// Uniform-sector density `a x + b x^2 + c x^3` at `x = |psi|^2`.
    fn uniform_density(&self, temperature: f64, x: f64) -> f64 {
        let mut f = self.a(temperature) * x + self.b(temperature) * x * x;
        if let Some(c) = self.c(temperature) {
            f += c * x * x * x;
        }
        f
    }

    /// Stationary moduli of the uniform free energy: solutions `x >= 0` of
    /// `a + 2 b x + 3 c x^2 = 0`, with `x = 0` always included. Sorted
    /// ascending, deduplicated.
    pub fn stationary_moduli(&self, temperature: f64) -> Result<Vec<f64>> {
        self.validate_at(temperature)?;
        let a = self.a(temperature);
        let b = self.b(temperature);
        let c = self.c(temperature).unwrap_or(0.0);

        let mut roots = vec![0.0];
        if c == 0.0 {
            if b == 0.0 {
                return Err(Error::DegenerateModel);
            }
            let x = -a / (2.0 * b);
            if x > 0.0 {
                roots.push(x);
            }
        } else {
            // 3c x^2 + 2b x + a = 0 via the numerically stable q-form.
            let disc = 4.0 * b * b - 12.0 * c * a;
            let disc_tol = 1e-12 * (4.0 * b * b).max((12.0 * c * a).abs()).max(1e-300);
            if disc >= -disc_tol {
                let disc = disc.max(0.0);
                let sq = disc.sqrt();
                let q = -0.5 * (2.0 * b + (2.0 * b).signum() * sq);
                let candidates = if q == 0.0 {
                    // b == 0 and disc == 0: double root at zero of 3c x^2 + a.
                    vec![-2.0 * b / (6.0 * c)]
                } else {
                    vec![q / (3.0 * c), a / q]
                };
                for x in candidates {
                    if x.is_finite() && x > 0.0 {
                        roots.push(x);
                    }
                }
            }
        }
        roots.sort_by(|p, q| p.partial_cmp(q).unwrap());
        roots.dedup_by(|p, q| (*p - *q).abs() <= 1e-9 * p.abs().max(1.0));
        Ok(roots)
    }

    /// The residual of the stationarity polynomial at `x`, used by the root
    /// quality checks.
    pub fn stationarity_residual(&self, temperature: f64, x: f64) -> f64 {
        let a = self.a(temperature);
        let b = self.b(temperature);
        let c = self.c(temperature).unwrap_or(0.0);
        a + 2.0 * b * x + 3.0 * c * x * x
    }

    /// Global minimizer of the uniform free energy over the stationary set.
    /// Reproduces the quadratic-model solution exactly: psi = 0 above T_c and
    /// psi = sqrt(-a/2b) below.
    pub fn order_parameter(&self, temperature: f64) -> Result<OrderParameterResult> {
        let c = self.c(temperature).unwrap_or(0.0);
        let b = self.b(temperature);
        // The minimization needs a free energy bounded below in x.
        if c < 0.0 || (c == 0.0 && b < 0.0) {
            return Err(Error::UnboundedFreeEnergy { temperature });
        }
        let moduli = self.stationary_moduli(temperature)?;
        let mut best_x = 0.0;
        let mut best_f = 0.0;
        for &x in &moduli {
            let f = self.uniform_density(temperature, x);
            if f < best_f {
                best_f = f;
                best_x = x;
            }
        }
        Ok(OrderParameterResult {
            temperature,
            psi_min: best_x.sqrt(),
            branch: if best_x > 0.0 {
                Branch::Superfluid
            } else {
                Branch::Normal
            },
            free_energy_min: best_f,
        })
    }

    /// Order parameter over an ascending temperature grid.
    pub fn temperature_sweep(&self, t_grid: &[f64]) -> Result<Vec<OrderParameterResult>> {
        if t_grid.is_empty() || t_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadTemperatureGrid);
        }
        t_grid
            .iter()
            .map(|&t| {
                self.order_parameter(t).map_err(|e| match e {
                    e @ Error::ModelValidation { .. } => e,
                    other => Error::AtTemperature {
                        temperature: t,
                        source: Box::new(other),
                    },
                })
            })
            .collect()
    }

    /// Count the nontrivial stationary branches and flag physical relevance:
    /// at most one is compatible with affine dynamics on a genus-1 surface
    /// (the gauge group stays a single U(1)). Advisory only.
    pub fn relevance_check(&self, temperature: f64) -> Result<RelevanceReport> {
        let moduli = self.stationary_moduli(temperature)?;
        let nontrivial = moduli.iter().filter(|&&x| x > 0.0).count();
        let relevant = nontrivial <= 1;
        let detail = if relevant {
            format!(
                "{nontrivial} nontrivial stationary branch(es): gauge group is at most a single \
                 U(1), compatible with affine dynamics on the torus (genus 1)"
            )
        } else {
            format!(
                "{nontrivial} nontrivial stationary branches: each extra branch enlarges the \
                 gauge group and forces the genus above 1, where affine dynamics is impossible"
            )
        };
        Ok(RelevanceReport {
            temperature,
            nontrivial_branches: nontrivial,
            relevant,
            detail,
        })
    }
}
