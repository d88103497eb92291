//! Run configuration: a strict JSON schema (unknown fields rejected) with
//! a required `device` block and optional `constants`, `grid`,
//! `simulation`, `sweep`, and `output` blocks. Shape problems are config
//! errors; physics problems surface later as domain errors.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::params::DeviceParams;
use crate::spectrum::FluxGrid;
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub device: DeviceParams,
    #[serde(default)]
    pub constants: PhysicalConstants,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub simulation: SimulationConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub phi_min: f64,
    pub phi_max: f64,
    pub points: usize,
    /// Number of levels to solve and export.
    pub levels: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        let grid = FluxGrid::default();
        GridConfig {
            phi_min: grid.phi_min,
            phi_max: grid.phi_max,
            points: grid.points,
            levels: 3,
        }
    }
}

impl GridConfig {
    pub fn to_grid(&self) -> Result<FluxGrid> {
        if self.levels == 0 || self.levels > 16 {
            return Err(Error::Config(format!(
                "grid.levels must be between 1 and 16, got {}",
                self.levels
            )));
        }
        FluxGrid::new(self.phi_min, self.phi_max, self.points)
            .map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationConfig {
    /// Overlap route: closed-form, quadrature, or fock-exact.
    pub overlap_method: String,
    /// Samples of the visibility time series. The default carries 2000
    /// points per default recoherence period.
    pub time_points: usize,
    /// Length of the series in recoherence periods.
    pub recoherence_periods: u32,
    /// Number of recoherence peaks to tabulate.
    pub recoherence_count: u32,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            overlap_method: "closed-form".into(),
            time_points: 6000,
            recoherence_periods: 3,
            recoherence_count: 3,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.time_points < 2 {
            return Err(Error::Config(format!(
                "simulation.time_points must be at least 2, got {}",
                self.time_points
            )));
        }
        if self.recoherence_periods == 0 || self.recoherence_count == 0 {
            return Err(Error::Config(
                "simulation.recoherence_periods and recoherence_count must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Device field to vary in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Inductance,
    Capacitance,
    CriticalCurrent,
    BeamMass,
    BeamFrequency,
    CouplingBl,
    QualityFactor,
    Temperature,
    Bias,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::Inductance => "inductance",
            SweepParameter::Capacitance => "capacitance",
            SweepParameter::CriticalCurrent => "critical_current",
            SweepParameter::BeamMass => "beam_mass",
            SweepParameter::BeamFrequency => "beam_frequency",
            SweepParameter::CouplingBl => "coupling_bl",
            SweepParameter::QualityFactor => "quality_factor",
            SweepParameter::Temperature => "temperature",
            SweepParameter::Bias => "bias",
        }
    }

    pub fn apply(&self, device: &mut DeviceParams, value: f64) {
        match self {
            SweepParameter::Inductance => device.inductance = value,
            SweepParameter::Capacitance => device.capacitance = value,
            SweepParameter::CriticalCurrent => device.critical_current = value,
            SweepParameter::BeamMass => device.beam_mass = value,
            SweepParameter::BeamFrequency => device.beam_frequency = value,
            SweepParameter::CouplingBl => device.coupling_bl = value,
            SweepParameter::QualityFactor => device.quality_factor = value,
            SweepParameter::Temperature => device.temperature = value,
            SweepParameter::Bias => device.bias = value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SweepScale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: SweepScale,
}

impl SweepConfig {
    /// Parameter values, start to stop inclusive.
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points < 2 {
            return Err(Error::Config(format!(
                "sweep.points must be at least 2, got {}",
                self.points
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Config("sweep bounds must be finite".into()));
        }
        match self.scale {
            SweepScale::Linear => Ok((0..self.points)
                .map(|i| {
                    self.start
                        + (self.stop - self.start) * i as f64 / (self.points - 1) as f64
                })
                .collect()),
            SweepScale::Log => {
                if self.start <= 0.0 || self.stop <= 0.0 {
                    return Err(Error::Config(
                        "log-scale sweep bounds must be positive".into(),
                    ));
                }
                let (a, b) = (self.start.ln(), self.stop.ln());
                Ok((0..self.points)
                    .map(|i| (a + (b - a) * i as f64 / (self.points - 1) as f64).exp())
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!(
                "output format {name:?}; expected csv or json"
            ))),
        }
    }

    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: OutputFormat,
}

impl Config {
    pub fn from_path(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let config: Config = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        config.simulation.validate()?;
        Ok(config)
    }

    pub fn grid(&self) -> Result<FluxGrid> {
        self.grid.to_grid()
    }

    /// The sweep block, required by the sweep command.
    pub fn sweep_required(&self) -> Result<&SweepConfig> {
        self.sweep.as_ref().ok_or_else(|| {
            Error::Config("this command requires a sweep block in the config".into())
        })
    }
}
