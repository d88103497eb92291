//! Finite-difference eigensolver for the dimensionless flux Hamiltonian
//! (-beta_C d^2/dphi^2 + u(phi)/U_0) psi = lambda psi on a uniform grid
//! with Dirichlet ends. Eigenvalues are in units of U_0.

use crate::error::{Error, Result};
use crate::potential::potential_u;
use crate::tridiag::SymTridiag;
use rayon::prelude::*;
use serde::Serialize;

/// Endpoint amplitudes above this fraction of the peak indicate the box
/// clips the state.
pub const DECAY_BOUND: f64 = 1e-8;

/// Richardson eigenvalue defects above this fraction of max(|lambda|, 1)
/// indicate the grid step is too coarse.
pub const CONVERGENCE_BOUND: f64 = 1e-6;

/// Uniform flux grid; `points` counts both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxGrid {
    pub phi_min: f64,
    pub phi_max: f64,
    pub points: usize,
}

impl Default for FluxGrid {
    /// Wide enough that the first four levels of the reference double well
    /// decay below `DECAY_BOUND` at the ends, with step pi/1000 keeping
    /// Richardson defects below `CONVERGENCE_BOUND`.
    fn default() -> Self {
        let pi = std::f64::consts::PI;
        FluxGrid {
            phi_min: -2.25 * pi,
            phi_max: 2.25 * pi,
            points: 4501,
        }
    }
}

impl FluxGrid {
    pub fn new(phi_min: f64, phi_max: f64, points: usize) -> Result<Self> {
        if !(phi_min.is_finite() && phi_max.is_finite() && phi_max > phi_min) {
            return Err(Error::Grid(format!(
                "flux window [{phi_min}, {phi_max}] is not an increasing finite interval"
            )));
        }
        if points < 16 {
            return Err(Error::Grid(format!(
                "{points} grid points cannot resolve the well structure"
            )));
        }
        Ok(FluxGrid {
            phi_min,
            phi_max,
            points,
        })
    }

    pub fn step(&self) -> f64 {
        (self.phi_max - self.phi_min) / (self.points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.phi_min + self.step() * i as f64
    }

    /// Grid with the same endpoints and half the step.
    pub fn refined(&self) -> FluxGrid {
        FluxGrid {
            phi_min: self.phi_min,
            phi_max: self.phi_max,
            points: 2 * self.points - 1,
        }
    }
}

/// Eigensolution on a flux grid. States include the Dirichlet endpoints
/// (zero there), are normalized so that sum(psi^2) * h = 1, and carry a
/// deterministic sign (largest-magnitude sample positive).
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub grid: FluxGrid,
    pub bias: f64,
    pub beta_l: f64,
    pub beta_c: f64,
    /// Dimensionless eigenvalues E_n / U_0, ascending.
    pub levels: Vec<f64>,
    /// One wavefunction per level, sampled on the full grid.
    pub states: Vec<Vec<f64>>,
}

fn hamiltonian(bias: f64, beta_l: f64, beta_c: f64, grid: &FluxGrid) -> Result<SymTridiag> {
    let h = grid.step();
    let kinetic = beta_c / (h * h);
    let interior = grid.points - 2;
    let mut diag = Vec::with_capacity(interior);
    for i in 1..grid.points - 1 {
        diag.push(2.0 * kinetic + potential_u(grid.node(i), bias, beta_l));
    }
    SymTridiag::new(diag, vec![-kinetic; interior - 1])
}

/// Lowest `k` eigenvalues only (no vectors, no decay check); used for
/// Richardson comparisons and bias sweeps.
pub fn eigenvalues(
    bias: f64,
    beta_l: f64,
    beta_c: f64,
    grid: &FluxGrid,
    k: usize,
) -> Result<Vec<f64>> {
    if beta_c <= 0.0 {
        return Err(Error::ParameterDomain {
            name: "beta_c".into(),
            value: beta_c,
            requirement: "positive".into(),
        });
    }
    hamiltonian(bias, beta_l, beta_c, grid)?.eigenvalues_lowest(k)
}

/// Lowest `k` eigenpairs with the endpoint-decay check.
pub fn solve(bias: f64, beta_l: f64, beta_c: f64, grid: &FluxGrid, k: usize) -> Result<Spectrum> {
    if beta_c <= 0.0 {
        return Err(Error::ParameterDomain {
            name: "beta_c".into(),
            value: beta_c,
            requirement: "positive".into(),
        });
    }
    let pairs = hamiltonian(bias, beta_l, beta_c, grid)?.eigen_lowest(k)?;
    let h = grid.step();
    let scale = 1.0 / h.sqrt();
    let mut levels = Vec::with_capacity(k);
    let mut states = Vec::with_capacity(k);
    for (level, pair) in pairs.into_iter().enumerate() {
        let peak = pair
            .vector
            .iter()
            .fold(0.0f64, |acc, &x| acc.max(x.abs()));
        let edge = pair.vector[0]
            .abs()
            .max(pair.vector[pair.vector.len() - 1].abs());
        let amplitude = edge / peak;
        if amplitude > DECAY_BOUND {
            return Err(Error::GridTooSmall {
                level,
                amplitude,
                bound: DECAY_BOUND,
            });
        }
        let mut state = Vec::with_capacity(grid.points);
        state.push(0.0);
        state.extend(pair.vector.iter().map(|&x| x * scale));
        state.push(0.0);
        levels.push(pair.value);
        states.push(state);
    }
    Ok(Spectrum {
        grid: *grid,
        bias,
        beta_l,
        beta_c,
        levels,
        states,
    })
}

/// Relative Richardson defects |lambda(h) - lambda(h/2)| / max(|lambda|, 1)
/// for the lowest `k` levels.
pub fn convergence_defects(
    bias: f64,
    beta_l: f64,
    beta_c: f64,
    grid: &FluxGrid,
    k: usize,
) -> Result<Vec<f64>> {
    let coarse = eigenvalues(bias, beta_l, beta_c, grid, k)?;
    let fine = eigenvalues(bias, beta_l, beta_c, &grid.refined(), k)?;
    Ok(coarse
        .iter()
        .zip(fine.iter())
        .map(|(&a, &b)| (a - b).abs() / a.abs().max(1.0))
        .collect())
}

/// Solve and additionally require Richardson convergence of every level.
pub fn solve_checked(
    bias: f64,
    beta_l: f64,
    beta_c: f64,
    grid: &FluxGrid,
    k: usize,
) -> Result<Spectrum> {
    let spectrum = solve(bias, beta_l, beta_c, grid, k)?;
    let defects = convergence_defects(bias, beta_l, beta_c, grid, k)?;
    for (level, &defect) in defects.iter().enumerate() {
        if defect > CONVERGENCE_BOUND {
            return Err(Error::Grid(format!(
                "level {level} defect {defect:e} exceeds {CONVERGENCE_BOUND:e}; refine the grid"
            )));
        }
    }
    Ok(spectrum)
}

/// Eigenvalues at each bias, preserving input order (parallel).
pub fn bias_sweep(
    biases: &[f64],
    beta_l: f64,
    beta_c: f64,
    grid: &FluxGrid,
    k: usize,
) -> Result<Vec<Vec<f64>>> {
    biases
        .par_iter()
        .map(|&b| eigenvalues(b, beta_l, beta_c, grid, k))
        .collect()
}
