//! Rabi-visibility model: the qubit coherence factorizes as
//! nu(t) = nu_d(t) * nu_0(theta(t)), where nu_0 (see `overlap`) carries the
//! reversible frequency-pull dephasing with theta = zeta omega_0 t, and
//!
//!   nu_d(t) = exp[-(4 alpha_0^2 omega_0 t / Q)(1 + 2 n)(1 - sinc(theta))]
//!
//! carries the irreversible loss from beam dissipation while the two
//! qubit-state trajectories are separated. Coherence revives at
//! t_k = 2 pi k / (zeta omega_0) with visibility nu_d(t_1)^k.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::overlap::{OverlapInputs, OverlapMethod};
use crate::params::{DeviceParams, DerivedParams};
use crate::twolevel::CouplingParams;
use num_complex::Complex64;
use serde::Serialize;

/// 1 - sin(x)/x, switching to the Taylor form x^2/6 - x^4/120 near zero
/// where the direct expression loses all significant digits.
pub fn one_minus_sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        x2 / 6.0 - x2 * x2 / 120.0
    } else {
        1.0 - x.sin() / x
    }
}

/// Everything the visibility model needs, in laboratory units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VisibilityModel {
    pub alpha0: f64,
    pub zeta: f64,
    /// Beam angular frequency, rad/s.
    pub omega0: f64,
    pub quality_factor: f64,
    pub n_thermal: f64,
    /// Qubit angular splitting 2 delta U_0 / hbar, rad/s.
    pub rabi_angular_frequency: f64,
}

impl VisibilityModel {
    pub fn new(
        coupling: &CouplingParams,
        device: &DeviceParams,
        derived: &DerivedParams,
    ) -> Self {
        VisibilityModel {
            alpha0: coupling.alpha0,
            zeta: coupling.zeta,
            omega0: device.beam_frequency,
            quality_factor: device.quality_factor,
            n_thermal: derived.n_thermal,
            rabi_angular_frequency: coupling.rabi_angular_frequency,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.overlap_inputs().validate()?;
        for (name, value) in [
            ("omega0", self.omega0),
            ("quality_factor", self.quality_factor),
            ("rabi_angular_frequency", self.rabi_angular_frequency),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::ParameterDomain {
                    name: name.into(),
                    value,
                    requirement: "a finite positive number".into(),
                });
            }
        }
        Ok(())
    }

    pub fn overlap_inputs(&self) -> OverlapInputs {
        OverlapInputs {
            alpha0: self.alpha0,
            n_thermal: self.n_thermal,
            zeta: self.zeta,
        }
    }

    /// Pulled phase accumulated by time t.
    pub fn theta(&self, t: f64) -> f64 {
        self.zeta * self.omega0 * t
    }

    /// coth(hbar omega_0 / 2 k_B T) expressed through the occupation.
    pub fn thermal_coth(&self) -> f64 {
        1.0 + 2.0 * self.n_thermal
    }

    /// Dissipative envelope nu_d(t).
    pub fn nu_dissipative(&self, t: f64) -> f64 {
        let exponent = 4.0 * self.alpha0 * self.alpha0 * self.omega0 * t
            / self.quality_factor
            * self.thermal_coth()
            * one_minus_sinc(self.theta(t));
        (-exponent).exp()
    }

    /// Instantaneous dissipative decoherence rate, the log-derivative of
    /// nu_d: gamma_d(t) = (2 omega_0 / Q) |alpha_1 - alpha_2|^2 coth, with
    /// the trajectory separation |alpha_1 - alpha_2| = 2 alpha_0
    /// sin(theta/2).
    pub fn gamma_dissipative(&self, t: f64) -> f64 {
        let separation = 2.0 * self.alpha0 * (0.5 * self.theta(t)).sin();
        2.0 * self.omega0 / self.quality_factor * separation * separation * self.thermal_coth()
    }

    /// Initial Gaussian decay rate of |nu_0|: the energy spread of the
    /// displaced thermal state under the pulled Hamiltonian,
    /// gamma_m = zeta omega_0 sqrt((1 + 2n) alpha_0^2 + n(1 + n)).
    pub fn gamma_pull(&self) -> f64 {
        let a2 = self.alpha0 * self.alpha0;
        let n = self.n_thermal;
        self.zeta
            * self.omega0
            * ((1.0 + 2.0 * n) * a2 + n * (1.0 + n)).sqrt()
    }

    /// k-th recoherence time 2 pi k / (zeta omega_0).
    pub fn recoherence_time(&self, k: u32) -> f64 {
        2.0 * std::f64::consts::PI * k as f64 / (self.zeta * self.omega0)
    }

    /// Landau-Zener adiabaticity exponent of the gap sweep driven by the
    /// beam, pi delta U_0 / (hbar zeta omega_0); large values mean the
    /// qubit follows its branch.
    pub fn zener_exponent(&self) -> f64 {
        0.5 * std::f64::consts::PI * self.rabi_angular_frequency / (self.zeta * self.omega0)
    }
}

/// Damping exponent at the first recoherence in the high-temperature
/// approximation coth -> 2 k_B T / (hbar omega_0); the crude estimate the
/// exact nu_d refines.
pub fn high_t_damping_exponent(
    model: &VisibilityModel,
    temperature: f64,
    constants: &PhysicalConstants,
) -> f64 {
    let coth_high_t =
        2.0 * constants.boltzmann * temperature / (constants.hbar * model.omega0);
    4.0 * model.alpha0 * model.alpha0 * model.omega0 * model.recoherence_time(1)
        / model.quality_factor
        * coth_high_t
}

/// Visibility time series; all vectors share the length of `times`.
#[derive(Debug, Clone)]
pub struct VisibilitySeries {
    pub times: Vec<f64>,
    pub thetas: Vec<f64>,
    /// Frequency-pull overlap nu_0.
    pub nu_pull: Vec<Complex64>,
    /// Dissipative envelope nu_d.
    pub nu_dissipative: Vec<f64>,
    /// |nu| = |nu_0| nu_d, the Rabi fringe visibility.
    pub visibility: Vec<f64>,
    /// State probability 1/2 + Re[nu exp(-i Omega_R t)] / 2.
    pub probability: Vec<f64>,
}

/// Evaluate the model over a time grid with the chosen overlap route.
pub fn series(
    model: &VisibilityModel,
    method: &dyn OverlapMethod,
    times: &[f64],
) -> Result<VisibilitySeries> {
    model.validate()?;
    let thetas: Vec<f64> = times.iter().map(|&t| model.theta(t)).collect();
    let nu_pull = method.evaluate_many(&model.overlap_inputs(), &thetas)?;
    let nu_dissipative: Vec<f64> = times.iter().map(|&t| model.nu_dissipative(t)).collect();
    let mut visibility = Vec::with_capacity(times.len());
    let mut probability = Vec::with_capacity(times.len());
    for ((&t, &nu0), &nud) in times.iter().zip(nu_pull.iter()).zip(nu_dissipative.iter()) {
        let nu = nu0 * nud;
        visibility.push(nu.norm());
        let rabi = Complex64::from_polar(1.0, -model.rabi_angular_frequency * t);
        probability.push(0.5 + 0.5 * (nu * rabi).re);
    }
    Ok(VisibilitySeries {
        times: times.to_vec(),
        thetas,
        nu_pull,
        nu_dissipative,
        visibility,
        probability,
    })
}

/// Visibility at the first `count` recoherence times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecoherencePeak {
    pub index: u32,
    pub time: f64,
    pub visibility: f64,
}

pub fn recoherence_peaks(
    model: &VisibilityModel,
    method: &dyn OverlapMethod,
    count: u32,
) -> Result<Vec<RecoherencePeak>> {
    model.validate()?;
    let mut peaks = Vec::with_capacity(count as usize);
    for k in 1..=count {
        let time = model.recoherence_time(k);
        let nu0 = method.evaluate(&model.overlap_inputs(), model.theta(time))?;
        peaks.push(RecoherencePeak {
            index: k,
            time,
            visibility: nu0.norm() * model.nu_dissipative(time),
        });
    }
    Ok(peaks)
}

/// Uniform grid over [0, t_max] including both ends.
pub fn time_grid(t_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::ParameterDomain {
            name: "t_max".into(),
            value: t_max,
            requirement: "a finite positive duration".into(),
        });
    }
    if points < 2 {
        return Err(Error::Grid(format!(
            "{points} time samples cannot span an interval"
        )));
    }
    Ok((0..points)
        .map(|i| t_max * i as f64 / (points - 1) as f64)
        .collect())
}
