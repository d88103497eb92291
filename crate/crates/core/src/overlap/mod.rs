//! Beam-state overlap factor nu_0(theta): the qubit coherence left after
//! the beam evolves under the two qubit-state-dependent Hamiltonians for a
//! pulled phase theta = zeta * omega_0 * t. Three interchangeable routes
//! are registered: an analytic closed form, a numerical phase-space
//! quadrature, and an exact Fock-space propagator. The first two share the
//! frequency-pull linearization; the Fock route keeps the full quadratic
//! coupling and converges to them as zeta -> 0.

mod closed_form;
mod fock;
mod quadrature;

pub use closed_form::ClosedForm;
pub use fock::FockExact;
pub use quadrature::PhaseSpaceQuadrature;

use crate::error::{Error, Result};
use num_complex::Complex64;

/// State of the beam and its coupling when the Rabi pulse starts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapInputs {
    /// Coherent displacement of the beam per qubit state.
    pub alpha0: f64,
    /// Thermal occupation of the beam mode.
    pub n_thermal: f64,
    /// Relative frequency pull between the qubit states; the Fock route
    /// needs it to undo theta = zeta * omega_0 * t.
    pub zeta: f64,
}

impl OverlapInputs {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha0.is_finite() && self.alpha0 >= 0.0) {
            return Err(Error::ParameterDomain {
                name: "alpha0".into(),
                value: self.alpha0,
                requirement: "finite and non-negative".into(),
            });
        }
        if !(self.n_thermal.is_finite() && self.n_thermal >= 0.0) {
            return Err(Error::ParameterDomain {
                name: "n_thermal".into(),
                value: self.n_thermal,
                requirement: "finite and non-negative".into(),
            });
        }
        if !(self.zeta.is_finite() && self.zeta > 0.0 && self.zeta < 0.5) {
            return Err(Error::ParameterDomain {
                name: "zeta".into(),
                value: self.zeta,
                requirement: "inside (0, 0.5)".into(),
            });
        }
        Ok(())
    }
}

/// One evaluation strategy for nu_0.
pub trait OverlapMethod: Send + Sync {
    /// Registry key.
    fn name(&self) -> &'static str;

    /// nu_0 at a single pulled phase theta >= 0.
    fn evaluate(&self, inputs: &OverlapInputs, theta: f64) -> Result<Complex64>;

    /// Batch evaluation; routes with reusable precomputation override this.
    fn evaluate_many(&self, inputs: &OverlapInputs, thetas: &[f64]) -> Result<Vec<Complex64>> {
        thetas.iter().map(|&t| self.evaluate(inputs, t)).collect()
    }
}

pub const METHOD_NAMES: [&str; 3] = ["closed-form", "quadrature", "fock-exact"];

/// Look up a strategy by its registry key.
pub fn by_name(name: &str) -> Result<Box<dyn OverlapMethod>> {
    match name {
        "closed-form" => Ok(Box::new(ClosedForm)),
        "quadrature" => Ok(Box::new(PhaseSpaceQuadrature::default())),
        "fock-exact" => Ok(Box::new(FockExact::default())),
        _ => Err(Error::UnknownMethod(format!(
            "{name} (known: {})",
            METHOD_NAMES.join(", ")
        ))),
    }
}

/// Every registered strategy, for cross-route comparisons.
pub fn all_methods() -> Vec<Box<dyn OverlapMethod>> {
    METHOD_NAMES
        .iter()
        .map(|n| by_name(n).expect("registered name"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reference_inputs() -> OverlapInputs {
        OverlapInputs {
            alpha0: 0.18,
            n_thermal: 1.2,
            zeta: 3.0e-4,
        }
    }

    #[test]
    fn registry_resolves_all_names() {
        for name in METHOD_NAMES {
            let method = by_name(name).unwrap();
            assert_eq!(method.name(), name);
        }
        assert!(matches!(
            by_name("pade"),
            Err(Error::UnknownMethod(_))
        ));
    }

    #[test]
    fn inputs_are_validated() {
        let mut bad = reference_inputs();
        bad.alpha0 = -1.0;
        assert!(bad.validate().is_err());
        let mut bad = reference_inputs();
        bad.n_thermal = f64::NAN;
        assert!(bad.validate().is_err());
        let mut bad = reference_inputs();
        bad.zeta = 0.0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn closed_and_quadrature_agree_at_reference_point() {
        let closed = ClosedForm;
        let quad = PhaseSpaceQuadrature::default();
        let inputs = reference_inputs();
        for &theta in &[0.3, 1.0, std::f64::consts::PI, 5.5, 11.0] {
            let a = closed.evaluate(&inputs, theta).unwrap();
            let b = quad.evaluate(&inputs, theta).unwrap();
            assert!((a - b).norm() < 1e-8, "theta {theta}: {a} vs {b}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // The quadrature route must reproduce the closed form to 1e-8
        // anywhere in the physical input range.
        #[test]
        fn quadrature_matches_closed_form(
            alpha0 in 0.0f64..2.0,
            n_thermal in 0.05f64..10.0,
            theta in 0.0f64..(4.0 * std::f64::consts::PI),
        ) {
            let inputs = OverlapInputs { alpha0, n_thermal, zeta: 1.0e-3 };
            let a = ClosedForm.evaluate(&inputs, theta).unwrap();
            let b = PhaseSpaceQuadrature::default()
                .evaluate(&inputs, theta)
                .unwrap();
            prop_assert!((a - b).norm() < 1e-8);
        }

        // |nu_0| is a fidelity-like quantity: bounded by one, and exactly
        // one whenever the pulled phase completes a full turn.
        #[test]
        fn closed_form_is_bounded_and_revives(
            alpha0 in 0.0f64..2.0,
            n_thermal in 0.0f64..10.0,
            theta in 0.0f64..(6.0 * std::f64::consts::PI),
            turns in 1u32..4,
        ) {
            let inputs = OverlapInputs { alpha0, n_thermal, zeta: 1.0e-3 };
            let nu = ClosedForm.evaluate(&inputs, theta).unwrap();
            prop_assert!(nu.norm() <= 1.0 + 1e-12);
            let revival = 2.0 * std::f64::consts::PI * turns as f64;
            let nu_rev = ClosedForm.evaluate(&inputs, revival).unwrap();
            prop_assert!((nu_rev.norm() - 1.0).abs() < 1e-12);
        }
    }
}
