//! Feasibility report: runs the full pipeline on one device and evaluates
//! the named regime checks that the visibility model relies on. A failed
//! check marks the device infeasible but is not an error; broken physics
//! (no double well, bad parameters) still surfaces as a domain error.

use crate::constants::PhysicalConstants;
use crate::error::Result;
use crate::overlap::ClosedForm;
use crate::overlap::OverlapMethod;
use crate::params::{self, DeviceParams, DerivedParams};
use crate::spectrum::FluxGrid;
use crate::twolevel::{self, CouplingParams, TwoLevelModel};
use crate::visibility::{self, VisibilityModel};
use serde::Serialize;

/// One regime check: `value` compared against `bound` in the stated
/// direction.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub description: &'static str,
    pub value: f64,
    pub bound: f64,
    /// "below" means pass when value < bound, "above" when value > bound.
    pub direction: &'static str,
    pub pass: bool,
}

pub fn check_below(
    name: &'static str,
    description: &'static str,
    value: f64,
    bound: f64,
) -> CheckResult {
    CheckResult {
        name,
        description,
        value,
        bound,
        direction: "below",
        pass: value < bound,
    }
}

pub fn check_above(
    name: &'static str,
    description: &'static str,
    value: f64,
    bound: f64,
) -> CheckResult {
    CheckResult {
        name,
        description,
        value,
        bound,
        direction: "above",
        pass: value > bound,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityReport {
    pub derived: DerivedParams,
    pub two_level: TwoLevelModel,
    pub coupling: CouplingParams,
    /// Initial decay rate of the pull overlap, 1/s.
    pub gamma_pull: f64,
    /// First recoherence time, s.
    pub recoherence_time: f64,
    /// Dissipative envelope at the first recoherence.
    pub nu_d_first: f64,
    /// Deepest pull overlap within the first period.
    pub min_overlap: f64,
    pub high_t_damping_exponent: f64,
    pub zener_exponent: f64,
    /// Qubit temperature ratio k_B T / (2 delta U_0), written as
    /// T / T_qubit.
    pub thermal_ratio: f64,
    pub checks: Vec<CheckResult>,
    pub feasible: bool,
}

pub fn feasibility(
    device: &DeviceParams,
    constants: &PhysicalConstants,
    grid: &FluxGrid,
) -> Result<FeasibilityReport> {
    let derived = params::derive(device, constants)?;
    derived.require_double_well()?;
    let two_level = twolevel::extract(derived.beta_l, derived.beta_c, grid)?;
    let coupling = twolevel::derive_coupling(&two_level, device, &derived, constants)?;
    let model = VisibilityModel::new(&coupling, device, &derived);
    model.validate()?;

    let recoherence_time = model.recoherence_time(1);
    let nu_d_first = model.nu_dissipative(recoherence_time);
    let closed = ClosedForm;
    let inputs = model.overlap_inputs();
    let mut min_overlap = f64::INFINITY;
    for i in 0..=720 {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / 720.0;
        min_overlap = min_overlap.min(closed.evaluate(&inputs, theta)?.norm());
    }
    let zener = model.zener_exponent();
    let high_t = visibility::high_t_damping_exponent(&model, device.temperature, constants);
    // Qubit splitting 2 delta U_0 expressed as a temperature.
    let qubit_kelvin = 2.0 * two_level.delta * derived.u0 / constants.boltzmann;
    let thermal_ratio = device.temperature / qubit_kelvin;

    let checks = vec![
        check_below(
            "weak-pull",
            "frequency pull stays perturbative",
            coupling.zeta,
            0.05,
        ),
        check_above(
            "doublet-isolation",
            "third level is spectrally separated from the qubit doublet",
            two_level.gap_ratio,
            3.0,
        ),
        check_above(
            "adiabatic-sweep",
            "beam-driven gap sweep cannot excite the qubit",
            zener,
            10.0,
        ),
        check_below(
            "qubit-thermal",
            "bath is cold compared with the qubit splitting",
            thermal_ratio,
            0.1,
        ),
        check_above(
            "first-recoherence-visible",
            "dissipation leaves a visible first revival",
            nu_d_first,
            0.1,
        ),
        check_below(
            "collapse-resolved",
            "visibility collapses measurably between revivals",
            min_overlap,
            0.5,
        ),
    ];
    let feasible = checks.iter().all(|c| c.pass);
    Ok(FeasibilityReport {
        derived,
        two_level,
        coupling,
        gamma_pull: model.gamma_pull(),
        recoherence_time,
        nu_d_first,
        min_overlap,
        high_t_damping_exponent: high_t,
        zener_exponent: zener,
        thermal_ratio,
        checks,
        feasible,
    })
}
