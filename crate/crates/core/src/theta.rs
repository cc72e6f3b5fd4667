//! First Jacobi theta function for the doubly periodic pair interaction.
//!
//! `theta1(u, q) = 2 * sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1)u)` with real
//! nome `0 < q < 1`. The series is evaluated to relative truncation 1e-16;
//! the Gaussian decay of `q^{(n+1/2)^2}` dominates the exponential growth of
//! `sin` for every complex argument, so the cutoff is always reached.

use num_complex::Complex64;

const REL_CUTOFF: f64 = 1e-16;
const MAX_TERMS: usize = 128;

/// theta1(u; q) by truncated q-series.
pub fn theta1(u: Complex64, q: f64) -> Complex64 {
    debug_assert!(q > 0.0 && q < 1.0);
    let log_q = q.ln();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small_streak = 0;
    for n in 0..MAX_TERMS {
        let half = n as f64 + 0.5;
        let coeff = (log_q * half * half).exp();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * coeff * ((2 * n + 1) as f64 * u).sin();
        sum += term;
        if term.norm() < REL_CUTOFF * sum.norm().max(f64::MIN_POSITIVE) {
            small_streak += 1;
            if small_streak >= 2 {
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    2.0 * sum
}

/// d/du theta1(u; q) by the term-wise differentiated series.
pub fn theta1_deriv(u: Complex64, q: f64) -> Complex64 {
    debug_assert!(q > 0.0 && q < 1.0);
    let log_q = q.ln();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small_streak = 0;
    for n in 0..MAX_TERMS {
        let half = n as f64 + 0.5;
        let odd = (2 * n + 1) as f64;
        let coeff = odd * (log_q * half * half).exp();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * coeff * (odd * u).cos();
        sum += term;
        if term.norm() < REL_CUTOFF * sum.norm().max(f64::MIN_POSITIVE) {
            small_streak += 1;
            if small_streak >= 2 {
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    2.0 * sum
}

/// Logarithmic derivative theta1'(u)/theta1(u).
pub fn theta1_log_derivative(u: Complex64, q: f64) -> Complex64 {
    theta1_deriv(u, q) / theta1(u, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Independent oracle: the triple product
    // theta1(u) = 2 q^{1/4} sin(u) prod_{n>=1} (1-q^{2n})(1 - 2 q^{2n} cos(2u) + q^{4n}).
    fn theta1_product(u: Complex64, q: f64) -> Complex64 {
        let mut prod = Complex64::new(2.0 * q.powf(0.25), 0.0) * u.sin();
        let cos2u = (2.0 * u).cos();
        for n in 1..200 {
            let q2n = q.powi(2 * n);
            if q2n < 1e-18 {
                break;
            }
            prod *= (1.0 - q2n) * (1.0 - 2.0 * q2n * cos2u + q2n * q2n);
        }
        prod
    }

    #[test]
    fn series_matches_product_formula() {
        let qs = [0.04321391826377224, 0.3, 0.7304026910486456];
        let us = [
            Complex64::new(0.3, 0.0),
            Complex64::new(1.2, 0.4),
            Complex64::new(-0.9, -0.2),
            Complex64::new(PI / 2.0, 0.1),
        ];
        for &q in &qs {
            for &u in &us {
                let series = theta1(u, q);
                let product = theta1_product(u, q);
                assert!(
                    (series - product).norm() <= 1e-13 * product.norm(),
                    "q={q} u={u}: series {series} vs product {product}"
                );
            }
        }
    }

    #[test]
    fn real_period_flips_sign() {
        let q = 0.2;
        for &u in &[Complex64::new(0.4, 0.1), Complex64::new(-1.1, -0.3)] {
            let lhs = theta1(u + PI, q);
            let rhs = -theta1(u, q);
            assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm());
        }
    }

    #[test]
    fn quasi_period_in_imaginary_direction() {
        // theta1(u + pi*tau) = -q^{-1} exp(-2iu) theta1(u) with q = exp(i*pi*tau).
        let ratio: f64 = 0.8; // L2/L1
        let q = (-PI * ratio).exp();
        let pi_tau = Complex64::new(0.0, PI * ratio);
        for &u in &[Complex64::new(0.7, 0.05), Complex64::new(-0.4, -0.1)] {
            let lhs = theta1(u + pi_tau, q);
            let factor = -(Complex64::new(0.0, -2.0) * u).exp() / q;
            let rhs = factor * theta1(u, q);
            assert!(
                (lhs - rhs).norm() <= 1e-12 * rhs.norm(),
                "u={u}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn simple_zero_at_origin() {
        let q = 0.3;
        let h = 1e-7;
        let at_h = theta1(Complex64::new(h, 0.0), q);
        let deriv = theta1_deriv(Complex64::new(0.0, 0.0), q);
        // theta1(h) ~ theta1'(0) * h near the zero
        assert!((at_h / h - deriv).norm() < 1e-6 * deriv.norm());
    }

    #[test]
    fn log_derivative_matches_finite_difference() {
        let q = 0.15;
        let u = Complex64::new(0.6, 0.2);
        let h = 1e-6;
        let fd = (theta1(u + h, q) - theta1(u - h, q)) / (2.0 * h * theta1(u, q));
        let analytic = theta1_log_derivative(u, q);
        assert!((fd - analytic).norm() < 1e-7 * analytic.norm().max(1.0));
    }
}
