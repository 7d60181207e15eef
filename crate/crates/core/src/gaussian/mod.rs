//! Two-mode Gaussian-state engine.
//!
//! States are a mean vector and a symmetrized covariance matrix in the
//! quadrature ordering `(x_a, p_a, x_b, p_b)` with `x = (a + a^dag)/sqrt 2`
//! and `p = (a - a^dag)/(i sqrt 2)`, so the vacuum covariance is `I/2`.
//! Gaussian unitaries act as `mean -> S mean + d`, `cov -> S cov S^T`.

mod linalg;
mod moments;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::interferometer::{check_loss, InputState, InterferometerConfig};
use crate::scalar::Real;

pub use linalg::{symmetric_eigenvalues, Mat4, Vec4};
pub use moments::{photon_number_variance_closed_form, PhotonStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    A,
    B,
}

impl Mode {
    fn offset(self) -> usize {
        match self {
            Mode::A => 0,
            Mode::B => 2,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::A => "a",
            Mode::B => "b",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "a" | "A" => Ok(Mode::A),
            "b" | "B" => Ok(Mode::B),
            other => Err(Error::InvalidMode(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState<T> {
    pub mean: Vec4<T>,
    pub cov: Mat4<T>,
}

impl<T: Real> GaussianState<T> {
    pub fn vacuum() -> Self {
        Self {
            mean: [T::zero(); 4],
            cov: Mat4::identity().scale(T::lit(0.5)),
        }
    }

    pub fn symmetry_error(&self) -> T {
        self.cov.max_abs_diff(&self.cov.transpose())
    }

    /// Smallest eigenvalue of `cov + (i/2) Omega`; non-negative for
    /// physical states.
    pub fn uncertainty_min_eigenvalue(&self) -> T {
        // Hermitian H = C + iB is checked through the real symmetric
        // embedding [[C, -B], [B, C]], which has the same spectrum.
        let half = T::lit(0.5);
        let omega = Mat4::<T>::omega();
        let mut big = [[T::zero(); 8]; 8];
        for i in 0..4 {
            for j in 0..4 {
                let c = self.cov.0[i][j];
                let b = half * omega.0[i][j];
                big[i][j] = c;
                big[i + 4][j + 4] = c;
                big[i][j + 4] = -b;
                big[i + 4][j] = b;
            }
        }
        symmetric_eigenvalues(big)[0]
    }

    /// Symmetry and uncertainty checks, with round-off slack proportional
    /// to the scalar's epsilon and the size of the covariance.
    pub fn is_physical(&self) -> bool {
        let scale = T::one().max(self.cov.trace());
        let slack = T::epsilon() * T::lit(1e4) * scale;
        self.symmetry_error() <= slack && self.uncertainty_min_eigenvalue() >= -T::lit(10.0) * slack
    }

    /// `det(2 cov)`, equal to 1 for pure states.
    pub fn purity_indicator(&self) -> T {
        self.cov.scale(T::lit(2.0)).determinant()
    }

    /// Mean and variance of `cos(angle) x + sin(angle) p` on `mode`.
    pub fn quadrature_stats(&self, mode: Mode, angle: T) -> (T, T) {
        let o = mode.offset();
        let (c, s) = (angle.cos(), angle.sin());
        let mean = c * self.mean[o] + s * self.mean[o + 1];
        let cv = &self.cov.0;
        let var = c * c * cv[o][o] + s * s * cv[o + 1][o + 1] + T::lit(2.0) * c * s * cv[o][o + 1];
        (mean, var)
    }

    pub fn photon_stats(&self) -> PhotonStats<T> {
        moments::photon_stats(self)
    }

    pub fn apply(&self, op: &SymplecticOp<T>) -> Self {
        let mut mean = op.matrix.apply(&self.mean);
        for (m, d) in mean.iter_mut().zip(op.displacement) {
            *m += d;
        }
        Self {
            mean,
            cov: op.matrix.congruence(&self.cov),
        }
    }
}

/// Affine symplectic map `R -> S R + d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticOp<T> {
    pub matrix: Mat4<T>,
    pub displacement: Vec4<T>,
}

impl<T: Real> SymplecticOp<T> {
    pub fn identity() -> Self {
        Self {
            matrix: Mat4::identity(),
            displacement: [T::zero(); 4],
        }
    }

    /// Builds the quadrature representation of the Bogoliubov map
    /// `a_k -> sum_j (m_kj a_j + n_kj a_j^dag)`.
    pub fn from_bogoliubov(m: [[Complex<T>; 2]; 2], n: [[Complex<T>; 2]; 2]) -> Self {
        let mut s = Mat4::zero();
        for k in 0..2 {
            for j in 0..2 {
                let plus = m[k][j] + n[k][j];
                let minus = m[k][j] - n[k][j];
                s.0[2 * k][2 * j] = plus.re;
                s.0[2 * k][2 * j + 1] = -minus.im;
                s.0[2 * k + 1][2 * j] = plus.im;
                s.0[2 * k + 1][2 * j + 1] = minus.re;
            }
        }
        Self {
            matrix: s,
            displacement: [T::zero(); 4],
        }
    }

    /// `self` applied after `first`.
    pub fn after(&self, first: &Self) -> Self {
        let mut displacement = self.matrix.apply(&first.displacement);
        for (d, e) in displacement.iter_mut().zip(self.displacement) {
            *d += e;
        }
        Self {
            matrix: self.matrix * first.matrix,
            displacement,
        }
    }

    /// `max |S^T Omega S - Omega|`.
    pub fn symplectic_error(&self) -> T {
        let omega = Mat4::omega();
        (self.matrix.transpose() * omega * self.matrix).max_abs_diff(&omega)
    }
}

/// Sign of the pair-creation term in a four-wave-mixing stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqueezerConvention {
    /// `a_out = cosh g a - e^{i theta} sinh g b^dag` (used throughout).
    #[default]
    Minus,
    /// `a_out = cosh g a + e^{i theta} sinh g b^dag`.
    Plus,
}

pub fn two_mode_squeezer_op<T: Real>(
    g: T,
    theta: T,
    convention: SqueezerConvention,
) -> SymplecticOp<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let c = Complex::new(g.cosh(), T::zero());
    let sign = match convention {
        SqueezerConvention::Minus => -T::one(),
        SqueezerConvention::Plus => T::one(),
    };
    let mix = Complex::from_polar(sign * g.sinh(), theta);
    SymplecticOp::from_bogoliubov([[c, zero], [zero, c]], [[zero, mix], [mix, zero]])
}

/// Single-mode squeezer `S(r e^{i eta})` with `a -> cosh r a - e^{i eta} sinh r a^dag`.
pub fn single_mode_squeezer_op<T: Real>(r: T, eta: T, mode: Mode) -> SymplecticOp<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut m = [[one, zero], [zero, one]];
    let mut n = [[zero; 2]; 2];
    let k = mode.offset() / 2;
    m[k][k] = Complex::new(r.cosh(), T::zero());
    n[k][k] = -Complex::from_polar(r.sinh(), eta);
    SymplecticOp::from_bogoliubov(m, n)
}

/// `a_mode -> e^{i phi} a_mode`.
pub fn phase_shift_op<T: Real>(phi: T, mode: Mode) -> SymplecticOp<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut m = [[one, zero], [zero, one]];
    let k = mode.offset() / 2;
    m[k][k] = Complex::from_polar(T::one(), phi);
    SymplecticOp::from_bogoliubov(m, [[zero; 2]; 2])
}

pub fn displacement_op<T: Real>(alpha: Complex<T>, mode: Mode) -> SymplecticOp<T> {
    let mut op = SymplecticOp::identity();
    let o = mode.offset();
    op.displacement[o] = T::SQRT_2() * alpha.re;
    op.displacement[o + 1] = T::SQRT_2() * alpha.im;
    op
}

/// Squeezed vacuum `(r, eta)` in mode `a`, coherent `beta` in mode `b`.
pub fn prepare_input<T: Real>(input: &InputState<T>) -> GaussianState<T> {
    GaussianState::vacuum()
        .apply(&single_mode_squeezer_op(
            input.squeeze_r,
            input.squeeze_eta,
            Mode::A,
        ))
        .apply(&displacement_op(input.beta(), Mode::B))
}

pub fn apply_phase_shift<T: Real>(
    state: &GaussianState<T>,
    phi: T,
    mode: Mode,
) -> GaussianState<T> {
    state.apply(&phase_shift_op(phi, mode))
}

/// Same as [`apply_phase_shift`] with the mode given by name (`"a"` or `"b"`).
pub fn apply_phase_shift_named<T: Real>(
    state: &GaussianState<T>,
    phi: T,
    mode: &str,
) -> Result<GaussianState<T>> {
    Ok(apply_phase_shift(state, phi, mode.parse()?))
}

/// Pure-loss channel with transmissivity `1 - loss` on one mode.
pub fn apply_loss<T: Real>(
    state: &GaussianState<T>,
    loss: T,
    mode: Mode,
) -> Result<GaussianState<T>> {
    check_loss("loss", loss)?;
    let t = (T::one() - loss).sqrt();
    let o = mode.offset();
    let mut k = [T::one(); 4];
    k[o] = t;
    k[o + 1] = t;
    let kmat = Mat4::diagonal(k);
    let mut cov = kmat * state.cov * kmat;
    let half = T::lit(0.5);
    cov.0[o][o] += loss * half;
    cov.0[o + 1][o + 1] += loss * half;
    let mut mean = state.mean;
    mean[o] *= t;
    mean[o + 1] *= t;
    Ok(GaussianState { mean, cov })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EngineOptions {
    /// Apply the external loss to the undetected output `b2` too.
    pub external_loss_on_both_outputs: bool,
    pub convention: SqueezerConvention,
}

/// Lossless stage-by-stage symplectic map of the interferometer (no input
/// preparation).
pub fn interferometer_op<T: Real>(
    config: &InterferometerConfig<T>,
    convention: SqueezerConvention,
) -> SymplecticOp<T> {
    let s1 = two_mode_squeezer_op(config.stage1.gain, config.stage1.phase, convention);
    let p = phase_shift_op(config.phi, Mode::B);
    let s2 = two_mode_squeezer_op(config.stage2.gain, config.stage2.phase, convention);
    s2.after(&p.after(&s1))
}

/// State inside the interferometer, right after the first stage.
pub fn state_after_first_stage<T: Real>(
    config: &InterferometerConfig<T>,
    input: &InputState<T>,
    convention: SqueezerConvention,
) -> GaussianState<T> {
    prepare_input(input).apply(&two_mode_squeezer_op(
        config.stage1.gain,
        config.stage1.phase,
        convention,
    ))
}

pub fn run_interferometer<T: Real>(
    config: &InterferometerConfig<T>,
    input: &InputState<T>,
) -> Result<GaussianState<T>> {
    run_interferometer_with(config, input, &EngineOptions::default())
}

/// prepare -> stage 1 -> internal loss (both arms) -> phase on b -> stage 2
/// -> external loss on a (optionally b).
pub fn run_interferometer_with<T: Real>(
    config: &InterferometerConfig<T>,
    input: &InputState<T>,
    options: &EngineOptions,
) -> Result<GaussianState<T>> {
    config.validate()?;
    input.validate()?;
    let mut state = state_after_first_stage(config, input, options.convention);
    let l1 = config.loss_internal;
    if l1 > T::zero() {
        state = apply_loss(&state, l1, Mode::A)?;
        state = apply_loss(&state, l1, Mode::B)?;
    }
    state = apply_phase_shift(&state, config.phi, Mode::B);
    state = state.apply(&two_mode_squeezer_op(
        config.stage2.gain,
        config.stage2.phase,
        options.convention,
    ));
    let l2 = config.loss_external;
    if l2 > T::zero() {
        state = apply_loss(&state, l2, Mode::A)?;
        if options.external_loss_on_both_outputs {
            state = apply_loss(&state, l2, Mode::B)?;
        }
    }
    Ok(state)
}
