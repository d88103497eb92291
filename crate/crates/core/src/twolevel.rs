//! Reduction of the lowest doublet to a two-level model
//! h(b) = sqrt(delta^2 + eta^2 b^2) (half the gap, in units of U_0), and
//! the coupling of that qubit to the beam. The flux sensitivity eta is
//! extracted from the numerical gap with two independent routes: an
//! inverted finite-difference identity evaluated at a self-consistent bias,
//! and a least-squares fit of the squared gap.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::params::{DeviceParams, DerivedParams};
use crate::spectrum::{eigenvalues, FluxGrid};
use rayon::prelude::*;
use serde::Serialize;

/// Two-level reduction of the flux doublet. All energies in units of U_0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoLevelModel {
    /// Half the symmetric-point splitting (tunnel amplitude).
    pub delta: f64,
    /// Flux sensitivity d(half gap)/db at large bias, from the
    /// finite-difference identity (adopted value).
    pub eta: f64,
    /// Flux sensitivity from the least-squares route (cross-check).
    pub eta_lsq: f64,
    /// Self-consistent evaluation bias b* = 5 delta / eta.
    pub b_star: f64,
    /// Half-width of the fit window in bias.
    pub fit_window: f64,
    /// Worst relative deviation of the model gap from the numerical gap
    /// over the fit window.
    pub fit_residual_max: f64,
    /// (lambda_2 - lambda_1) / (lambda_1 - lambda_0) at b = 0; large values
    /// justify truncating to the doublet.
    pub gap_ratio: f64,
}

/// Model half-gap sqrt(delta^2 + (eta b)^2).
pub fn half_gap_model(delta: f64, eta: f64, bias: f64) -> f64 {
    (delta * delta + eta * eta * bias * bias).sqrt()
}

fn half_gap_numeric(bias: f64, beta_l: f64, beta_c: f64, grid: &FluxGrid) -> Result<f64> {
    let levels = eigenvalues(bias, beta_l, beta_c, grid, 2)?;
    Ok(0.5 * (levels[1] - levels[0]))
}

/// Extract the two-level model from the eigenspectrum.
///
/// The finite-difference route uses the exact identity
/// h(b) h'(b) = eta^2 b, with h' taken by a central difference of step
/// 1e-3 and b chosen self-consistently as b* = 5 delta / eta (capped at
/// 0.5) so that the gap is slope-dominated without leaving the two-level
/// regime. The least-squares route fits h^2 - delta^2 against b^2 over
/// 24 biases spanning min(0.5, 8 delta / eta).
pub fn extract(beta_l: f64, beta_c: f64, grid: &FluxGrid) -> Result<TwoLevelModel> {
    if beta_l <= 1.0 {
        return Err(Error::NoDoubleWell { beta_l });
    }
    let levels = eigenvalues(0.0, beta_l, beta_c, grid, 3)?;
    let delta = 0.5 * (levels[1] - levels[0]);
    let gap_ratio = (levels[2] - levels[1]) / (levels[1] - levels[0]);
    if !(delta > 0.0) {
        return Err(Error::Eigensolver(format!(
            "degenerate doublet: delta = {delta:e}"
        )));
    }

    let fd_step = 1e-3;
    let slope = |b: f64| -> Result<f64> {
        let plus = half_gap_numeric(b + fd_step, beta_l, beta_c, grid)?;
        let minus = half_gap_numeric(b - fd_step, beta_l, beta_c, grid)?;
        Ok((plus - minus) / (2.0 * fd_step))
    };

    let mut eta = 2.5f64;
    let mut converged = false;
    for _ in 0..40 {
        let b = (5.0 * delta / eta).min(0.5);
        let h = half_gap_numeric(b, beta_l, beta_c, grid)?;
        let s = slope(b)?;
        let product = h * s / b;
        if !(product > 0.0) {
            return Err(Error::Eigensolver(format!(
                "gap slope {s:e} at b = {b} is not positive"
            )));
        }
        let next = product.sqrt();
        // Tolerance sits just above the eigenvalue quantization noise of
        // the bisection solver (~5e-9 relative after the finite difference).
        let done = (next - eta).abs() <= 1e-7 * eta;
        eta = next;
        if done {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Eigensolver(
            "flux-sensitivity fixed point did not converge".into(),
        ));
    }
    // Bias consistent with the final eta, not the last loop iterate.
    let b_star = (5.0 * delta / eta).min(0.5);

    let fit_window = (8.0 * delta / eta).min(0.5);
    let biases: Vec<f64> = (1..=24)
        .map(|i| fit_window * i as f64 / 24.0)
        .collect();
    let gaps: Vec<f64> = biases
        .par_iter()
        .map(|&b| half_gap_numeric(b, beta_l, beta_c, grid))
        .collect::<Result<_>>()?;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut fit_residual_max = 0.0f64;
    for (&b, &h) in biases.iter().zip(gaps.iter()) {
        let b2 = b * b;
        num += (h * h - delta * delta) * b2;
        den += b2 * b2;
        let model = half_gap_model(delta, eta, b);
        fit_residual_max = fit_residual_max.max((model - h).abs() / h);
    }
    let eta_lsq = (num / den).sqrt();

    Ok(TwoLevelModel {
        delta,
        eta,
        eta_lsq,
        b_star,
        fit_window,
        fit_residual_max,
        gap_ratio,
    })
}

impl TwoLevelModel {
    /// Relative disagreement between the two eta routes.
    pub fn route_disagreement(&self) -> f64 {
        (self.eta - self.eta_lsq).abs() / self.eta
    }
}

/// Coupling of the qubit to the beam, in laboratory units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingParams {
    /// Qubit-state-dependent Lorentz force on the beam, newton.
    pub force: f64,
    /// Beam equilibrium shift per qubit state, |F| / (m omega_0^2), meter.
    pub equilibrium_shift: f64,
    /// Dimensionless displacement of the beam coherent state,
    /// alpha_0 = F x_zp / (hbar omega_0).
    pub alpha0: f64,
    /// Relative beam-frequency pull between the two qubit states.
    pub zeta: f64,
    /// Qubit angular splitting 2 delta U_0 / hbar at zero bias, rad/s.
    pub rabi_angular_frequency: f64,
}

/// Chain from the two-level model to the beam coupling. The force is the
/// energy gradient of the qubit branch with respect to beam displacement;
/// the frequency pull comes from the gap curvature at zero bias.
pub fn derive_coupling(
    model: &TwoLevelModel,
    device: &DeviceParams,
    derived: &DerivedParams,
    constants: &PhysicalConstants,
) -> Result<CouplingParams> {
    let flux_per_meter = 2.0 * std::f64::consts::PI * device.coupling_bl / constants.flux_quantum;
    let force = derived.u0 * model.eta * flux_per_meter;
    let spring = device.beam_mass * device.beam_frequency * device.beam_frequency;
    let equilibrium_shift = force / spring;
    let alpha0 = force * derived.x_zero_point / (constants.hbar * device.beam_frequency);
    let zeta = derived.u0 * model.eta * model.eta * flux_per_meter * flux_per_meter
        / (model.delta * spring);
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(Error::Undefined {
            name: "zeta".into(),
            reason: format!("frequency pull {zeta:e} is not a positive number"),
        });
    }
    Ok(CouplingParams {
        force,
        equilibrium_shift,
        alpha0,
        zeta,
        rabi_angular_frequency: 2.0 * model.delta * derived.u0 / constants.hbar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn extraction_on_reference_well() {
        // Frozen outputs of the locked recipe for beta_L = 1.9,
        // beta_C = 0.78 on the default grid.
        let model = extract(1.9, 0.78, &FluxGrid::default()).unwrap();
        assert!(rel(model.delta, 0.117898) < 1e-4, "delta {}", model.delta);
        assert!(rel(model.eta, 2.615258) < 1e-4, "eta {}", model.eta);
        assert!(rel(model.eta_lsq, 2.611189) < 1e-4, "lsq {}", model.eta_lsq);
        assert!(rel(model.b_star, 5.0 * model.delta / model.eta) < 1e-9);
        assert!(rel(model.fit_window, 0.360646) < 1e-3);
        assert!(model.fit_residual_max > 0.09 && model.fit_residual_max < 0.10);
        assert!(model.gap_ratio > 5.2 && model.gap_ratio < 5.45);
        assert!(model.route_disagreement() < 0.02);
    }

    #[test]
    fn model_gap_brackets_numeric_gap() {
        let grid = FluxGrid::default();
        let model = extract(1.9, 0.78, &grid).unwrap();
        for &b in &[0.05, 0.15, 0.3] {
            let h = half_gap_numeric(b, 1.9, 0.78, &grid).unwrap();
            let m = half_gap_model(model.delta, model.eta, b);
            assert!(
                (m - h).abs() / h < 0.12,
                "bias {b}: model {m} numeric {h}"
            );
        }
    }

    #[test]
    fn coupling_chain_on_reference_device() {
        let device = DeviceParams::reference();
        let constants = PhysicalConstants::default();
        let derived = params::derive(&device, &constants).unwrap();
        let model = TwoLevelModel {
            delta: 0.117898,
            eta: 2.615258,
            eta_lsq: 2.611189,
            b_star: 0.225404,
            fit_window: 0.360646,
            fit_residual_max: 0.0934,
            gap_ratio: 5.32,
        };
        let c = derive_coupling(&model, &device, &derived, &constants).unwrap();
        assert!(rel(c.alpha0, 0.1787780) < 1e-4, "alpha0 {}", c.alpha0);
        assert!(rel(c.zeta, 2.759679e-4) < 1e-4, "zeta {}", c.zeta);
        assert!(rel(c.equilibrium_shift, 4.094372e-15) < 1e-4);
        // Identity zeta = 2 alpha0^2 beta_h / delta ties the two routes.
        let identity = 2.0 * c.alpha0 * c.alpha0 * derived.beta_h / model.delta;
        assert!(rel(c.zeta, identity) < 1e-12);
    }

    #[test]
    fn no_double_well_is_rejected() {
        assert!(matches!(
            extract(0.9, 0.78, &FluxGrid::default()),
            Err(Error::NoDoubleWell { .. })
        ));
    }
}
