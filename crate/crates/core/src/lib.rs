//! Simulation core for an rf SQUID flux qubit whose loop contains a
//! vibrating beam segment.
//!
//! The pipeline runs from raw device parameters to measurable quantities:
//!
//! 1. [`params`] reduces SI device values to the dimensionless groups that
//!    control the physics (`beta_L`, `beta_C`, `beta_h`, junction energy
//!    scale `U0`, displacement-to-flux scale `x_phi`, thermal occupation).
//! 2. [`spectrum`] solves the 1-D flux Schroedinger problem on a finite
//!    difference grid and exposes the low-lying eigenpairs.
//! 3. [`twolevel`] reduces the two lowest levels to a qubit model
//!    (tunnel splitting `Delta`, bias slope `eta`) and derives the
//!    qubit-beam coupling chain (`x0`, `zeta`, `alpha0`, recoherence time,
//!    damping and Landau-Zener exponents).
//! 4. [`visibility`] and [`overlap`] evaluate the Rabi-visibility factors:
//!    the beam-entanglement overlap `nu0` (closed form, phase-space
//!    quadrature, or exact Fock-basis propagation) and the dissipative
//!    envelope `nu_d`.
//! 5. [`report`] and [`sweep`] bundle everything into feasibility reports
//!    and one-parameter design sweeps; [`validate`] cross-checks the
//!    independent evaluation routes at runtime.

pub mod config;
pub mod constants;
pub mod error;
pub mod format;
pub mod gauss;
pub mod output;
pub mod overlap;
pub mod params;
pub mod potential;
pub mod report;
pub mod spectrum;
pub mod sweep;
pub mod tridiag;
pub mod twolevel;
pub mod validate;
pub mod visibility;

pub use error::{Error, Result};
