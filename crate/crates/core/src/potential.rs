//! Dimensionless flux potential of the loop near the half-quantum bias
//! point: u(phi) / U_0 = (phi - b)^2 + 2 beta_L cos(phi), where phi is the
//! junction-phase offset and b the dimensionless flux bias. For beta_L > 1
//! the potential is a double well whose minima carry opposite circulating
//! currents.

use crate::error::{Error, Result};

/// u(phi; b) / U_0.
pub fn potential_u(phi: f64, bias: f64, beta_l: f64) -> f64 {
    let d = phi - bias;
    d * d + 2.0 * beta_l * phi.cos()
}

/// d(u/U_0)/dphi.
pub fn potential_du(phi: f64, bias: f64, beta_l: f64) -> f64 {
    2.0 * (phi - bias) - 2.0 * beta_l * phi.sin()
}

/// d^2(u/U_0)/dphi^2.
pub fn potential_d2u(phi: f64, beta_l: f64) -> f64 {
    2.0 - 2.0 * beta_l * phi.cos()
}

/// Stationary points of the double well: left minimum, barrier top,
/// right minimum (phi values, ascending).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellShape {
    pub left_minimum: f64,
    pub barrier_top: f64,
    pub right_minimum: f64,
    /// Barrier height above the deeper minimum, in units of U_0.
    pub barrier_height: f64,
}

/// Locate the two minima and the separating barrier by coarse sampling
/// plus Newton refinement. Fails when the potential is not a double well.
pub fn well_shape(bias: f64, beta_l: f64) -> Result<WellShape> {
    if beta_l <= 1.0 {
        return Err(Error::NoDoubleWell { beta_l });
    }
    let refine = |start: f64| -> f64 {
        let mut phi = start;
        for _ in 0..60 {
            let g = potential_du(phi, bias, beta_l);
            let h = potential_d2u(phi, beta_l);
            if h.abs() < 1e-12 {
                break;
            }
            let step = g / h;
            phi -= step;
            if step.abs() < 1e-14 * phi.abs().max(1.0) {
                break;
            }
        }
        phi
    };
    let coarse_min = |lo: f64, hi: f64| -> f64 {
        let n = 400;
        let mut best = lo;
        let mut best_u = f64::INFINITY;
        for i in 0..=n {
            let phi = lo + (hi - lo) * i as f64 / n as f64;
            let u = potential_u(phi, bias, beta_l);
            if u < best_u {
                best_u = u;
                best = phi;
            }
        }
        best
    };
    let pi = std::f64::consts::PI;
    let left = refine(coarse_min(bias - pi, bias - 1e-3));
    let right = refine(coarse_min(bias + 1e-3, bias + pi));
    let top = refine(bias);
    let valid = left < top
        && top < right
        && potential_d2u(left, beta_l) > 0.0
        && potential_d2u(right, beta_l) > 0.0
        && potential_d2u(top, beta_l) < 0.0;
    if !valid {
        return Err(Error::NoDoubleWell { beta_l });
    }
    let u_top = potential_u(top, bias, beta_l);
    let u_left = potential_u(left, bias, beta_l);
    let u_right = potential_u(right, bias, beta_l);
    let barrier_height = u_top - u_left.max(u_right);
    if barrier_height <= 0.0 {
        return Err(Error::NoDoubleWell { beta_l });
    }
    Ok(WellShape {
        left_minimum: left,
        barrier_top: top,
        right_minimum: right,
        barrier_height,
    })
}
