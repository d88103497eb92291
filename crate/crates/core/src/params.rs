//! Device parameters and the scales derived directly from them. Quantities
//! that require the eigenspectrum (tunnel splitting, flux sensitivity) live
//! in `twolevel`; everything here follows from closed-form expressions.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Physical description of the device: an rf SQUID loop of inductance L
/// interrupted by one junction, with a doubly clamped beam of mass m and
/// angular frequency omega_0 forming part of the loop. A magnetic field
/// threads flux B*l*x when the beam deflects by x. The loop is biased near
/// half a flux quantum; `bias` is the dimensionless offset from that point
/// in units of the reduced flux (radians of junction phase).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceParams {
    /// Loop inductance L in henry.
    pub inductance: f64,
    /// Junction capacitance C in farad.
    pub capacitance: f64,
    /// Junction critical current I_c in ampere.
    pub critical_current: f64,
    /// Beam effective mass m in kilogram.
    pub beam_mass: f64,
    /// Beam angular frequency omega_0 in radian per second.
    pub beam_frequency: f64,
    /// Coupling strength B*l in tesla meter.
    pub coupling_bl: f64,
    /// Beam quality factor Q (dimensionless).
    pub quality_factor: f64,
    /// Bath temperature T in kelvin; zero is allowed.
    pub temperature: f64,
    /// Dimensionless flux bias b away from the half-quantum point.
    #[serde(default)]
    pub bias: f64,
}

/// Scales derived from the device alone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedParams {
    /// Flux energy scale U_0 = Phi_0^2 / (8 pi^2 L) in joule.
    pub u0: f64,
    /// U_0 expressed as a temperature, U_0 / k_B, in kelvin.
    pub u0_kelvin: f64,
    /// Screening parameter beta_L = 2 pi L I_c / Phi_0; a double well
    /// requires beta_L > 1.
    pub beta_l: f64,
    /// Kinetic parameter beta_C multiplying the flux Laplacian in the
    /// dimensionless eigenproblem.
    pub beta_c: f64,
    /// Mechanical quantum over the flux scale, hbar omega_0 / U_0.
    pub beta_h: f64,
    /// Electrical plasma scale 1 / sqrt(L C) in radian per second.
    pub omega_lc: f64,
    /// Beam zero-point length sqrt(hbar / (2 m omega_0)) in meter.
    pub x_zero_point: f64,
    /// Beam displacement threading one flux quantum, Phi_0 / (B l), meter.
    pub x_flux_quantum: f64,
    /// Thermal occupation of the beam mode at temperature T.
    pub n_thermal: f64,
    /// Thermal de Broglie length hbar / sqrt(2 m k_B T) in meter;
    /// undefined at T = 0.
    pub thermal_length: Option<f64>,
}

impl DeviceParams {
    /// Bundled reference device used by the examples and the test suite:
    /// a niobium-scale loop with a nanomechanical beam at 640 MHz.
    pub fn reference() -> Self {
        DeviceParams {
            inductance: 6.5e-11,
            capacitance: 7.4e-17,
            critical_current: 1.0e-5,
            beam_mass: 1.0e-16,
            beam_frequency: 2.0 * std::f64::consts::PI * 6.4e8,
            coupling_bl: 1.0e-6,
            quality_factor: 1.0e4,
            temperature: 0.05,
            bias: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("inductance", self.inductance),
            ("capacitance", self.capacitance),
            ("critical_current", self.critical_current),
            ("beam_mass", self.beam_mass),
            ("beam_frequency", self.beam_frequency),
            ("coupling_bl", self.coupling_bl),
            ("quality_factor", self.quality_factor),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::ParameterDomain {
                    name: name.into(),
                    value,
                    requirement: "a finite positive number".into(),
                });
            }
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::ParameterDomain {
                name: "temperature".into(),
                value: self.temperature,
                requirement: "finite and non-negative".into(),
            });
        }
        if !self.bias.is_finite() {
            return Err(Error::ParameterDomain {
                name: "bias".into(),
                value: self.bias,
                requirement: "finite".into(),
            });
        }
        Ok(())
    }
}

/// Thermal occupation 1 / (exp(hbar omega / k_B T) - 1); zero at T = 0.
pub fn n_thermal(omega: f64, temperature: f64, constants: &PhysicalConstants) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    let x = constants.hbar * omega / (constants.boltzmann * temperature);
    1.0 / x.exp_m1()
}

pub fn derive(device: &DeviceParams, constants: &PhysicalConstants) -> Result<DerivedParams> {
    device.validate()?;
    constants.validate()?;
    let phi0 = constants.flux_quantum;
    let two_pi = 2.0 * std::f64::consts::PI;
    let u0 = phi0 * phi0 / (2.0 * two_pi * two_pi * device.inductance);
    let beta_l = two_pi * device.inductance * device.critical_current / phi0;
    let beta_c = {
        // Kinetic coefficient of the dimensionless eigenproblem,
        // hbar^2 (2 pi / Phi_0)^2 / (2 C U_0).
        let k = constants.hbar * two_pi / phi0;
        k * k / (2.0 * device.capacitance * u0)
    };
    let beta_h = constants.hbar * device.beam_frequency / u0;
    let omega_lc = 1.0 / (device.inductance * device.capacitance).sqrt();
    let x_zero_point =
        (constants.hbar / (2.0 * device.beam_mass * device.beam_frequency)).sqrt();
    let x_flux_quantum = phi0 / device.coupling_bl;
    let n_th = n_thermal(device.beam_frequency, device.temperature, constants);
    let thermal_length = if device.temperature > 0.0 {
        Some(
            constants.hbar
                / (2.0 * device.beam_mass * constants.boltzmann * device.temperature).sqrt(),
        )
    } else {
        None
    };
    Ok(DerivedParams {
        u0,
        u0_kelvin: u0 / constants.boltzmann,
        beta_l,
        beta_c,
        beta_h,
        omega_lc,
        x_zero_point,
        x_flux_quantum,
        n_thermal: n_th,
        thermal_length,
    })
}

impl DerivedParams {
    /// A double well around the half-quantum point needs beta_L > 1.
    pub fn require_double_well(&self) -> Result<()> {
        if self.beta_l > 1.0 {
            Ok(())
        } else {
            Err(Error::NoDoubleWell {
                beta_l: self.beta_l,
            })
        }
    }
}
