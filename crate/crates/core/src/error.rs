use thiserror::Error;

use crate::gaussian::Mode;

/// Errors raised by the simulators and the closed-form formulas.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("invalid mode {0:?}: expected 'a' or 'b'")]
    InvalidMode(String),
    #[error("formula requires balanced configuration (g1 = g2, theta2 - theta1 = pi)")]
    Unbalanced,
    #[error("zero signal slope: {0}")]
    ZeroSignalSlope(&'static str),
    #[error("blind phase point: |cos Phi| = {0:e}")]
    BlindPhasePoint(f64),
    #[error("blind phase point: numeric slope {0:e} vanishes")]
    VanishingSlope(f64),
    #[error("intensity detection blind at phi=0: |sin phi| = {0:e}")]
    IntensityBlind(f64),
    #[error("no photons inside the interferometer")]
    NoPhotons,
    #[error("no bracketed minimum in [{lo}, {hi}]")]
    NoBracketedMinimum { lo: f64, hi: f64 },
    #[error("cutoff {cutoff} too small for mode {mode:?}: expected occupation {occupation:.4} needs cutoff >= {required}")]
    CutoffTooSmall {
        cutoff: usize,
        mode: Mode,
        occupation: f64,
        required: usize,
    },
    #[error("cutoff {0} outside supported range 1..=64")]
    CutoffOutOfRange(usize),
    #[error("truncation tail mass {tail:e} exceeds tolerance {tolerance:e}")]
    TailMassExceeded { tail: f64, tolerance: f64 },
    #[error("series for {0} did not converge within the iteration budget")]
    NoConvergence(&'static str),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

pub type Result<T> = std::result::Result<T, Error>;
