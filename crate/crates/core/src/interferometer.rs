//! Interferometer and input-state parameterization, and the composed
//! SU(1,1) transfer coefficients.
//!
//! Each four-wave-mixing stage is a two-mode squeezer acting as
//!
//! ```text
//! a_out = cosh g * a - e^{i theta} sinh g * b^dag
//! b_out = cosh g * b - e^{i theta} sinh g * a^dag
//! ```
//!
//! and the phase shift `b -> e^{i phi} b` sits between the two stages. With
//! the squeezed vacuum in `a0` and the coherent state in `b0`, the output of
//! the detected mode is `a2 = U a0 - V b0^dag`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Real};

/// One four-wave-mixing stage: gain `g` and pump phase `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwmStage<T> {
    pub gain: T,
    /// Stored as given; consumers reduce mod 2pi.
    pub phase: T,
}

impl<T: Real> FwmStage<T> {
    pub fn new(gain: T, phase: T) -> Result<Self> {
        let stage = Self { gain, phase };
        stage.validate()?;
        Ok(stage)
    }

    pub fn identity() -> Self {
        Self {
            gain: T::zero(),
            phase: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gain >= T::zero()) || !self.gain.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gain",
                value: self.gain.as_f64(),
                reason: "must be finite and >= 0",
            });
        }
        if !self.phase.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phase",
                value: self.phase.as_f64(),
                reason: "must be finite",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerConfig<T> {
    pub stage1: FwmStage<T>,
    pub stage2: FwmStage<T>,
    /// Phase shift on the `b` arm between the stages.
    pub phi: T,
    /// Internal loss L1, applied to both arms between the stages.
    pub loss_internal: T,
    /// External loss L2, applied to the detected output.
    pub loss_external: T,
}

impl<T: Real> InterferometerConfig<T> {
    pub fn new(stage1: FwmStage<T>, stage2: FwmStage<T>, phi: T) -> Result<Self> {
        let config = Self {
            stage1,
            stage2,
            phi,
            loss_internal: T::zero(),
            loss_external: T::zero(),
        };
        config.validate()?;
        Ok(config)
    }

    /// Equal gains with `theta2 = theta1 + pi`: the second stage undoes the
    /// first at `phi = 0`.
    pub fn balanced(gain: T, theta1: T, phi: T) -> Result<Self> {
        Self::new(
            FwmStage::new(gain, theta1)?,
            FwmStage::new(gain, theta1 + T::PI())?,
            phi,
        )
    }

    pub fn with_losses(mut self, internal: T, external: T) -> Result<Self> {
        self.loss_internal = internal;
        self.loss_external = external;
        self.validate()?;
        Ok(self)
    }

    pub fn with_phi(mut self, phi: T) -> Self {
        self.phi = phi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.stage1.validate()?;
        self.stage2.validate()?;
        if !self.phi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phi",
                value: self.phi.as_f64(),
                reason: "must be finite",
            });
        }
        check_loss("loss_internal", self.loss_internal)?;
        check_loss("loss_external", self.loss_external)
    }

    /// True when `g1 = g2` and `theta2 - theta1 = pi (mod 2pi)` to within
    /// 1e-12 (relative for the gains).
    pub fn is_balanced(&self) -> bool {
        let tol = T::lit(1e-12);
        let (g1, g2) = (self.stage1.gain, self.stage2.gain);
        let gain_ok = (g1 - g2).abs() <= tol * T::one().max(g1.abs().max(g2.abs()));
        let offset = wrap_angle(self.stage2.phase - self.stage1.phase - T::PI());
        gain_ok && offset.abs() <= tol
    }

    /// Common gain of a balanced configuration.
    pub fn balanced_gain(&self) -> Result<T> {
        if self.is_balanced() {
            Ok(self.stage1.gain)
        } else {
            Err(Error::Unbalanced)
        }
    }
}

pub(crate) fn check_loss<T: Real>(name: &'static str, loss: T) -> Result<()> {
    if loss >= T::zero() && loss < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: loss.as_f64(),
            reason: "loss must lie in [0, 1)",
        })
    }
}

/// Coherent state `|beta>` in port `b0` and squeezed vacuum `|0, r e^{i eta}>`
/// in port `a0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputState<T> {
    pub beta_mag: T,
    pub beta_phase: T,
    pub squeeze_r: T,
    pub squeeze_eta: T,
}

impl<T: Real> InputState<T> {
    pub fn new(beta_mag: T, beta_phase: T, squeeze_r: T, squeeze_eta: T) -> Result<Self> {
        let input = Self {
            beta_mag,
            beta_phase,
            squeeze_r,
            squeeze_eta,
        };
        input.validate()?;
        Ok(input)
    }

    pub fn vacuum() -> Self {
        Self {
            beta_mag: T::zero(),
            beta_phase: T::zero(),
            squeeze_r: T::zero(),
            squeeze_eta: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = |name, v: T| {
            if v >= T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value: v.as_f64(),
                    reason: "must be finite and >= 0",
                })
            }
        };
        nonneg("beta_mag", self.beta_mag)?;
        nonneg("squeeze_r", self.squeeze_r)?;
        for (name, v) in [
            ("beta_phase", self.beta_phase),
            ("squeeze_eta", self.squeeze_eta),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value: v.as_f64(),
                    reason: "must be finite",
                });
            }
        }
        Ok(())
    }

    /// Complex coherent amplitude `|beta| e^{i theta_beta}`.
    pub fn beta(&self) -> Complex<T> {
        Complex::from_polar(self.beta_mag, self.beta_phase)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferCoefficients<T> {
    pub u: Complex<T>,
    pub v: Complex<T>,
    /// `arg(u)`.
    pub theta_u: T,
}

impl<T: Real> TransferCoefficients<T> {
    /// `|U|^2 - |V|^2`, which is 1 for every configuration.
    pub fn unitarity(&self) -> T {
        self.u.norm_sqr() - self.v.norm_sqr()
    }
}

pub fn transfer_coefficients<T: Real>(config: &InterferometerConfig<T>) -> TransferCoefficients<T> {
    let (g1, g2) = (config.stage1.gain, config.stage2.gain);
    let (t1, t2) = (config.stage1.phase, config.stage2.phase);
    let (c1, s1) = (g1.cosh(), g1.sinh());
    let (c2, s2) = (g2.cosh(), g2.sinh());
    let rot = Complex::from_polar(T::one(), -config.phi);
    let u = Complex::new(c1 * c2, T::zero()) + rot * Complex::from_polar(s1 * s2, t2 - t1);
    let v = Complex::from_polar(s1 * c2, t1) + rot * Complex::from_polar(c1 * s2, t2);
    TransferCoefficients {
        u,
        v,
        theta_u: u.arg(),
    }
}

/// Angles entering the homodyne noise and slope formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedAngles<T> {
    /// `eta + 2 theta_U`, wrapped into (-pi, pi].
    pub theta_big: T,
    /// `theta2 - theta_beta - phi - pi/2`, wrapped into (-pi, pi].
    pub phi_big: T,
}

pub fn derived_angles<T: Real>(
    config: &InterferometerConfig<T>,
    input: &InputState<T>,
    coeffs: &TransferCoefficients<T>,
) -> DerivedAngles<T> {
    let two = T::lit(2.0);
    DerivedAngles {
        theta_big: wrap_angle(input.squeeze_eta + two * coeffs.theta_u),
        phi_big: wrap_angle(config.stage2.phase - input.beta_phase - config.phi - T::FRAC_PI_2()),
    }
}
