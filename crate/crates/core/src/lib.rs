//! Phase sensitivity of an SU(1,1) interferometer fed with a coherent state
//! and a squeezed vacuum.
//!
//! Three independent computation paths are provided:
//!
//! * [`closed_form`]: analytic sensitivities for the balanced configuration,
//!   homodyne and intensity detection, with internal/external loss;
//! * [`gaussian`]: exact two-mode Gaussian-state propagation (means and
//!   covariances), including loss channels and photon-number statistics;
//! * [`fock`]: brute-force truncated Fock-space evolution of the lossless
//!   interferometer.
//!
//! [`analysis`] builds sweeps, the optimal-amplitude search and figure
//! datasets on top of them, and [`validation`] cross-checks all three paths.
//!
//! Everything numeric is generic over [`Real`] (`f32`/`f64`); the aliases
//! below fix the scalar to `f64`.

pub mod analysis;
pub mod closed_form;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod interferometer;
pub mod scalar;
pub mod validation;

pub use closed_form::{Backend, SensitivityReport};
pub use error::{Error, Result};
pub use gaussian::{GaussianState, Mode, SymplecticOp};
pub use interferometer::{
    derived_angles, transfer_coefficients, DerivedAngles, FwmStage, InputState,
    InterferometerConfig, TransferCoefficients,
};
pub use scalar::Real;

pub type Config = InterferometerConfig<f64>;
pub type Input = InputState<f64>;
pub type Stage = FwmStage<f64>;
pub type Coefficients = TransferCoefficients<f64>;
pub type State = GaussianState<f64>;
pub type Report = SensitivityReport<f64>;
pub type Fock = fock::FockState<f64>;
pub type Params = analysis::Parameters<f64>;

pub type ConfigF32 = InterferometerConfig<f32>;
pub type InputF32 = InputState<f32>;
pub type StateF32 = GaussianState<f32>;
