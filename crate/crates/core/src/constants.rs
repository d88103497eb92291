use crate::error::{Error, Result};
use serde::Deserialize;

/// CODATA-2018 defining constants (exact by SI definition). hbar is
/// h/(2 pi) at full f64 precision, not the 10-digit published rounding,
/// so identities like flux_quantum = pi*hbar/e hold to machine accuracy.
pub const PLANCK: f64 = 6.626_070_15e-34; // J s
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI); // J s
pub const ELECTRON_CHARGE: f64 = 1.602_176_634e-19; // C
pub const BOLTZMANN: f64 = 1.380_649e-23; // J/K

/// Fundamental constants used throughout the pipeline. Compiled-in CODATA
/// values by default; each field can be overridden from the config.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Elementary charge, C.
    pub electron_charge: f64,
    /// Boltzmann constant, J/K.
    pub boltzmann: f64,
    /// Superconducting flux quantum h/2e, Wb.
    pub flux_quantum: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            hbar: HBAR,
            electron_charge: ELECTRON_CHARGE,
            boltzmann: BOLTZMANN,
            flux_quantum: PLANCK / (2.0 * ELECTRON_CHARGE),
        }
    }
}

impl PhysicalConstants {
    /// All constants positive and the flux quantum consistent with
    /// pi*hbar/e to one part in 1e12.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("hbar", self.hbar),
            ("electron_charge", self.electron_charge),
            ("boltzmann", self.boltzmann),
            ("flux_quantum", self.flux_quantum),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::ParameterDomain {
                    name,
                    value,
                    requirement: "finite and positive",
                });
            }
        }
        let derived = std::f64::consts::PI * self.hbar / self.electron_charge;
        let rel = ((self.flux_quantum - derived) / derived).abs();
        if rel > 1e-12 {
            return Err(Error::ParameterDomain {
                name: "flux_quantum",
                value: self.flux_quantum,
                requirement: "consistent with pi*hbar/e to 1e-12",
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_constants_validate() {
        PhysicalConstants::default().validate().unwrap();
    }

    #[test]
    fn flux_quantum_value() {
        let c = PhysicalConstants::default();
        assert!((c.flux_quantum - 2.067_833_848e-15).abs() < 1e-24);
    }

    #[test]
    fn inconsistent_flux_quantum_rejected() {
        let c = PhysicalConstants {
            flux_quantum: 2.1e-15,
            ..PhysicalConstants::default()
        };
        assert!(c.validate().is_err());
    }
}
