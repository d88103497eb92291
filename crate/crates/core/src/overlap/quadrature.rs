//! Numerical route for the overlap: the thermal beam state is averaged as
//! a Gaussian distribution of coherent states, each dephasing with its own
//! amplitude. The two-dimensional integral is evaluated with Gauss-Hermite
//! nodes shifted and scaled onto the real Gaussian envelope of the raw
//! integrand, which is sampled pointwise (no reuse of the closed-form
//! algebra beyond the shared definition of the integrand).

use super::{OverlapInputs, OverlapMethod};
use crate::error::{Error, Result};
use crate::gauss::{hermite, QuadratureRule};
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct PhaseSpaceQuadrature {
    rule: QuadratureRule,
}

impl Default for PhaseSpaceQuadrature {
    fn default() -> Self {
        PhaseSpaceQuadrature {
            rule: hermite(64).expect("fixed-size rule"),
        }
    }
}

impl PhaseSpaceQuadrature {
    pub fn with_nodes(n: usize) -> Result<Self> {
        Ok(PhaseSpaceQuadrature { rule: hermite(n)? })
    }
}

impl OverlapMethod for PhaseSpaceQuadrature {
    fn name(&self) -> &'static str {
        "quadrature"
    }

    fn evaluate(&self, inputs: &OverlapInputs, theta: f64) -> Result<Complex64> {
        inputs.validate()?;
        let n = inputs.n_thermal;
        if n <= 0.0 {
            return Err(Error::Undefined {
                name: "quadrature overlap".into(),
                reason: "the coherent-state distribution degenerates at n_thermal = 0; \
                         use the closed-form route"
                    .into(),
            });
        }
        let alpha0 = inputs.alpha0;
        let w = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -theta);
        // Real Gaussian envelope of the integrand: variance sigma^2 per
        // axis and a shifted center along the displacement axis.
        let inv_sigma2 = 1.0 / n + w.re;
        let sigma = inv_sigma2.recip().sqrt();
        let center = alpha0 / (1.0 + n * w.re);
        let mut sum = Complex64::new(0.0, 0.0);
        for (&u, &wu) in self.rule.nodes.iter().zip(self.rule.weights.iter()) {
            let x = center + sigma * u;
            let dx = x - alpha0;
            for (&v, &wv) in self.rule.nodes.iter().zip(self.rule.weights.iter()) {
                let y = sigma * v;
                let r2 = x * x + y * y;
                // Raw exponent plus the Hermite weight compensation; the
                // real parts cancel near the envelope, keeping exp() tame.
                let exponent = Complex64::new(
                    u * u + v * v - (dx * dx + y * y) / n,
                    0.0,
                ) - w * r2;
                sum += wu * wv * exponent.exp();
            }
        }
        let prefactor = sigma * sigma / (std::f64::consts::PI * n);
        Ok(Complex64::from_polar(1.0, -0.5 * theta) * prefactor * sum)
    }
}
