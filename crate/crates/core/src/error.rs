//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("vanishing curvature at sample {index}: k1 = {value:.3e}")]
    VanishingCurvature { index: usize, value: f64 },

    #[error("curve is not sampled at unit speed: |speed - 1| = {dev:.3e} at sample {index} (tolerance {tol:.3e})")]
    NonUnitSpeed { index: usize, dev: f64, tol: f64 },

    #[error("singular data in {what} at sample {index}: |value| = {value:.3e} below divisor floor")]
    SingularData {
        what: &'static str,
        index: usize,
        value: f64,
    },

    #[error("solution blew up at t = {time:.6e}: max norm {norm:.3e}")]
    BlowUp { time: f64, norm: f64 },

    #[error("sphere constraint violated at t = {time:.6e}: max | |u| - 1 | = {dev:.3e}")]
    NotOnSphere { time: f64, dev: f64 },

    #[error("degenerate normal rotation: h4_22 and |phi2| both vanish at sample {index}")]
    DegenerateRotation { index: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable process exit code for the CLI, one per error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 3,
            Error::Io(_) | Error::Parse(_) => 4,
            Error::VanishingCurvature { .. }
            | Error::NonUnitSpeed { .. }
            | Error::NotOnSphere { .. } => 5,
            Error::SingularData { .. }
            | Error::DegenerateRotation { .. }
            | Error::InsufficientData(_) => 6,
            Error::BlowUp { .. } => 7,
        }
    }
}
