//! Analytic overlap of a displaced thermal beam state dephased by the
//! qubit-state frequency pull. With w = 1 - exp(-i theta) and
//! xi = w * n_thermal,
//!
//!   nu_0(theta) = exp(-i theta / 2) * exp(-w alpha_0^2 / (1 + xi)) / (1 + xi).
//!
//! The Gaussian phase-space average behind this expression is what the
//! quadrature route evaluates numerically.

use super::{OverlapInputs, OverlapMethod};
use crate::error::Result;
use num_complex::Complex64;

#[derive(Debug, Default, Clone, Copy)]
pub struct ClosedForm;

impl OverlapMethod for ClosedForm {
    fn name(&self) -> &'static str {
        "closed-form"
    }

    fn evaluate(&self, inputs: &OverlapInputs, theta: f64) -> Result<Complex64> {
        inputs.validate()?;
        let w = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -theta);
        let denom = Complex64::new(1.0, 0.0) + w * inputs.n_thermal;
        let phase = Complex64::from_polar(1.0, -0.5 * theta);
        let nu = phase * (-w * inputs.alpha0 * inputs.alpha0 / denom).exp() / denom;
        Ok(nu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn nu(alpha0: f64, n_thermal: f64, theta: f64) -> Complex64 {
        ClosedForm
            .evaluate(
                &OverlapInputs {
                    alpha0,
                    n_thermal,
                    zeta: 1e-3,
                },
                theta,
            )
            .unwrap()
    }

    #[test]
    fn starts_at_unity() {
        let v = nu(0.18, 1.2, 0.0);
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_temperature_half_turn() {
        // At theta = pi and n = 0: |nu_0|^2 = exp(-4 alpha_0^2).
        let v = nu(0.18, 0.0, PI);
        let expected = (-4.0 * 0.18f64 * 0.18).exp();
        assert!((v.norm_sqr() - expected).abs() < 1e-14);
        // The phase factor exp(-i theta / 2) puts the value on the
        // negative imaginary axis.
        assert!(v.re.abs() < 1e-15);
        assert!(v.im < 0.0);
    }

    #[test]
    fn thermal_half_turn_reference_value() {
        // Frozen reference: alpha_0 = 0.18, n = 1.2 gives
        // |nu_0(pi)| = 0.28856519.
        let v = nu(0.18, 1.2, PI);
        assert!((v.norm() - 0.28856519).abs() < 1e-7, "norm {}", v.norm());
    }

    #[test]
    fn full_turn_revival_is_exact() {
        for &(a, n) in &[(0.18, 1.2), (1.5, 0.0), (0.7, 6.0)] {
            let v = nu(a, n, 2.0 * PI);
            assert!((v.norm() - 1.0).abs() < 1e-14);
            // Residual phase after one turn is exp(-i pi) = -1.
            assert!((v + Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn temperature_deepens_the_dip() {
        let warm = nu(0.18, 1.2, PI).norm();
        let cold = nu(0.18, 0.0, PI).norm();
        assert!(warm < cold);
    }
}
