use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical or numerical input lies outside its admissible domain.
    #[error("parameter `{name}` must be {requirement}, got {value:e}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// A quantity has no defined value for the given inputs (for example
    /// the thermal de Broglie length at zero temperature).
    #[error("`{name}` is undefined: {reason}")]
    Undefined { name: &'static str, reason: String },

    /// The potential has no double-well structure, so the qubit reduction
    /// does not apply.
    #[error("no double-well regime: beta_L = {beta_l} is not > 1")]
    NoDoubleWell { beta_l: f64 },

    /// An eigenfunction does not decay below the contract bound at the
    /// grid endpoints; the flux window is too narrow for the request.
    #[error(
        "grid too small: level {level} has relative endpoint amplitude \
         {amplitude:.3e} (bound {bound:.0e})"
    )]
    GridTooSmall {
        level: usize,
        amplitude: f64,
        bound: f64,
    },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    /// The Fock-space truncation needed to meet the tail bound exceeds the
    /// configured cap.
    #[error("Fock truncation cap {cap} exceeded: tail bound needs more than {required} levels")]
    TruncationCap { required: usize, cap: usize },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown overlap method `{0}`")]
    UnknownMethod(String),

    /// A runtime cross-validation check exceeded its tolerance.
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code contract: 2 config, 3 domain, 4 validation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) | Error::UnknownMethod(_) => 2,
            Error::Validation(_) => 4,
            _ => 3,
        }
    }
}
