//! Closed-form phase sensitivities for the balanced configuration
//! (`g1 = g2 = g`, `theta2 - theta1 = pi`).
//!
//! General configurations go through [`crate::gaussian`] instead; every
//! function here returns [`Error::Unbalanced`] otherwise.

use crate::error::{Error, Result};
use crate::interferometer::{
    check_loss, derived_angles, transfer_coefficients, InputState, InterferometerConfig,
};
use crate::scalar::Real;

/// Threshold on `|cos Phi|` (homodyne) and `|sin phi|` (intensity) below
/// which the phase point is treated as blind.
pub const BLIND_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Homodyne,
    Intensity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityReport<T> {
    /// Phase uncertainty (standard deviation, radians).
    pub delta_phi: T,
    /// Variance of the detected observable.
    pub noise: T,
    /// `|d<observable>/d phi|`.
    pub slope: T,
    pub backend: Backend,
    pub hl: T,
    pub sql: T,
    pub n_total: T,
}

impl<T: Real> SensitivityReport<T> {
    /// Builds a report and fills in the Heisenberg and shot-noise references.
    pub fn new(delta_phi: T, noise: T, slope: T, backend: Backend, n_total: T) -> Result<Self> {
        Ok(Self {
            delta_phi,
            noise,
            slope,
            backend,
            hl: T::one() / positive_photons(n_total)?,
            sql: sql_limit(n_total)?,
            n_total,
        })
    }

    /// `delta_phi / hl`.
    pub fn ratio_to_hl(&self) -> T {
        self.delta_phi / self.hl
    }
}

fn positive_photons<T: Real>(n: T) -> Result<T> {
    if n > T::zero() {
        Ok(n)
    } else {
        Err(Error::NoPhotons)
    }
}

fn require_balanced<T: Real>(config: &InterferometerConfig<T>) -> Result<T> {
    config.validate()?;
    config.balanced_gain()
}

/// Quadrature noise `(|V|^2 + |U|^2 [cosh 2r - sinh 2r cos Theta]) / 2` of
/// the homodyned output, lossless.
pub fn homodyne_noise<T: Real>(
    config: &InterferometerConfig<T>,
    input: &InputState<T>,
) -> Result<T> {
    require_balanced(config)?;
    input.validate()?;
    let tc = transfer_coefficients(config);
    let ang = derived_angles(config, input, &tc);
    let two_r = T::lit(2.0) * input.squeeze_r;
    Ok(
        (tc.v.norm_sqr() + tc.u.norm_sqr() * (two_r.cosh() - two_r.sinh() * ang.theta_big.cos()))
            * T::lit(0.5),
    )
}

/// `|d<X>/d phi| = |beta| sinh(2g) |cos Phi| / sqrt 2`, guarded against
/// degenerate gain, empty coherent port and blind points.
fn homodyne_slope<T: Real>(
    config: &InterferometerConfig<T>,
    input: &InputState<T>,
    g: T,
) -> Result<(T, T)> {
    if g <= T::zero() {
        return Err(Error::ZeroSignalSlope(
            "gain g = 0 gives no interference signal",
        ));
    }
    if input.beta_mag <= T::zero() {
        return Err(Error::ZeroSignalSlope("coherent amplitude |beta| = 0"));
    }
    let tc = transfer_coefficients(config);
    let cos_phi = derived_angles(config, input, &tc).phi_big.cos();
    if cos_phi.abs() < T::lit(BLIND_THRESHOLD) {
        return Err(Error::BlindPhasePoint(cos_phi.abs().as_f64()));
    }
    let slope = input.beta_mag * (T::lit(2.0) * g).sinh() * cos_phi.abs() * T::FRAC_1_SQRT_2();
    Ok((slope, cos_phi))
}

/// Lossless homodyne sensitivity
/// `(dphi)^2 = 2 <(dX)^2> / (|beta|^2 sinh^2(2g) cos^2 Phi)`.
///
/// Losses stored in `config` are ignored; see [`lossy_homodyne_sensitivity`].
pub fn homodyne_sensitivity<T: Real>(
    config: &InterferometerConfig<T>,
    input: &InputState<T>,
) -> Result<SensitivityReport<T>> {
    let g = require_balanced(config)?;
    let noise = homodyne_noise(config, input)?;
    let (slope, cos_phi) = homodyne_slope(config, input, g)?;
    let denom = (input.beta_mag * (T::lit(2.0) * g).sinh() * cos_phi).powi(2);
    let delta_phi = (T::lit(2.0) * noise / denom).sqrt();
    SensitivityReport::new(
        delta_phi,
        noise,
        slope,
        Backend::Homodyne,
        total_photons(g, input.squeeze_r, input.beta_mag),
    )
}

/// Photons inside the interferometer, `cosh(2g)(|beta|^2 + sinh^2 r) + 2 sinh^2 g`.
pub fn total_photons<T: Real>(g: T, r: T, beta_mag: T) -> T {
    let two = T::lit(2.0);
    (two * g).cosh() * (beta_mag * beta_mag + r.sinh().powi(2)) + two * g.sinh().powi(2)
}

/// Heisenberg limit `1 / N_tot`.
pub fn heisenberg_limit<T: Real>(g: T, r: T, beta_mag: T) -> Result<T> {
    Ok(T::one() / positive_photons(total_photons(g, r, beta_mag))?)
}

/// Shot-noise limit `1 / sqrt(N)`.
pub fn sql_limit<T: Real>(n_total: T) -> Result<T> {
    if n_total > T::zero() {
        Ok(n_total.sqrt().recip())
    } else {
        Err(Error::InvalidParameter {
            name: "n_total",
            value: n_total.as_f64(),
            reason: "photon number must be > 0",
        })
    }
}

/// Coherent amplitude at which the optimal-point sensitivity approaches the
/// Heisenberg limit, `|beta| ~ e^r tanh(2g) / 2`.
pub fn optimal_beta<T: Real>(g: T, r: T) -> Result<T> {
    if !(g > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "g",
            value: g.as_f64(),
            reason: "optimal coherent amplitude needs g > 0",
        });
    }
    Ok(r.exp() * (T::lit(2.0) * g).tanh() * T::lit(0.5))
}

/// Optimal-point sensitivity `e^{-r} / (|beta| sinh 2g)` (phi = 0, Phi = 0).
pub fn optimal_point_sensitivity<T: Real>(g: T, r: T, beta_mag: T) -> Result<T> {
    if g <= T::zero() {
        return Err(Error::ZeroSignalSlope(
            "gain g = 0 gives no interference signal",
        ));
    }
    if beta_mag <= T::zero() {
        return Err(Error::ZeroSignalSlope("coherent amplitude |beta| = 0"));
    }
    Ok((-r).exp() / (beta_mag * (T::lit(2.0) * g).sinh()))
}

/// Homodyne sensitivity with internal loss `l1` on both arms and external
/// loss `l2` on the detected mode:
///
/// ```text
/// (dphi_L)^2 = (dphi)^2 + [cosh(2g) L1 (1-L2) + L2]
///              / [(1-L1)(1-L2) |beta|^2 sinh^2(2g) cos^2 Phi]
/// ```
pub fn lossy_homodyne_sensitivity<T: Real>(
    config: &InterferometerConfig<T>,
    input: &InputState<T>,
    l1: T,
    l2: T,
) -> Result<SensitivityReport<T>> {
    check_loss("loss_internal", l1)?;
    check_loss("loss_external", l2)?;
    let lossless = homodyne_sensitivity(config, input)?;
    let g = config.stage1.gain;
    let one = T::one();
    let two = T::lit(2.0);
    let cosh2g = (two * g).cosh();
    let (slope0, cos_phi) = homodyne_slope(config, input, g)?;
    let base = (input.beta_mag * (two * g).sinh() * cos_phi).powi(2);
    let transmission = (one - l1) * (one - l2);
    let extra = (cosh2g * l1 * (one - l2) + l2) / (transmission * base);
    let delta_phi = (lossless.delta_phi.powi(2) + extra).sqrt();
    // Mixing with vacuum at each loss point, expressed for the detected quadrature.
    let half = T::lit(0.5);
    let noise = transmission * lossless.noise + (one - l2) * l1 * cosh2g * half + l2 * half;
    SensitivityReport::new(
        delta_phi,
        noise,
        slope0 * transmission.sqrt(),
        Backend::Homodyne,
        lossless.n_total,
    )
}

/// Intensity-detection sensitivity, implemented term by term as
///
/// ```text
/// (dphi_s)^2 = (|b|^2+1)^2 / (|b|^2+1+sinh^2 r)^2 (dphi_c)^2 + A
/// (dphi_c)^2 = [|b|^2 (|U|^2+|V|^2)^2 + 4|U|^2|V|^2 (|b|^2+1)]
///              / [16 (|b|^2+1)^2 sin^2 phi sinh^4 g cosh^4 g]
/// A          = Lambda / [16 (|b|^2+1+sinh^2 r)^2 sin^2 phi sinh^2 g cosh^2 g]
/// Lambda     = (|U|^2+|V|^2)^2 (1+cosh^2 r) sinh^2 r
///              + 4|U|^2|V|^2 (1+2|b|^2) sinh^2 r
///              + [4 U^2 V*^2 beta^2 cosh r sinh r e^{i eta} + c.c.]
/// ```
///
/// and cross-checked against the Gaussian engine in
/// [`crate::analysis::intensity_deviation`].
pub fn intensity_sensitivity<T: Real>(
    config: &InterferometerConfig<T>,
    input: &InputState<T>,
) -> Result<SensitivityReport<T>> {
    let g = require_balanced(config)?;
    input.validate()?;
    if g <= T::zero() {
        return Err(Error::ZeroSignalSlope(
            "gain g = 0 gives no interference signal",
        ));
    }
    let sin_phi = config.phi.sin();
    if sin_phi.abs() < T::lit(BLIND_THRESHOLD) {
        return Err(Error::IntensityBlind(sin_phi.abs().as_f64()));
    }
    let tc = transfer_coefficients(config);
    let (u2, v2) = (tc.u.norm_sqr(), tc.v.norm_sqr());
    let b2 = input.beta_mag * input.beta_mag;
    let r = input.squeeze_r;
    let (shr, chr) = (r.sinh(), r.cosh());
    let (shg, chg) = (g.sinh(), g.cosh());
    let one = T::one();
    let four = T::lit(4.0);
    let sixteen = T::lit(16.0);
    let sin2 = sin_phi * sin_phi;
    let n_coh = b2 + one;
    let n_sq = b2 + one + shr * shr;

    let coherent_num = b2 * (u2 + v2).powi(2) + four * u2 * v2 * n_coh;
    let coherent = coherent_num / (sixteen * n_coh * n_coh * sin2 * shg.powi(4) * chg.powi(4));

    let beta = input.beta();
    let cross = tc.u
        * tc.u
        * tc.v.conj()
        * tc.v.conj()
        * beta
        * beta
        * num_complex::Complex::from_polar(four * chr * shr, input.squeeze_eta);
    let lambda = (u2 + v2).powi(2) * (one + chr * chr) * shr * shr
        + four * u2 * v2 * (one + T::lit(2.0) * b2) * shr * shr
        + T::lit(2.0) * cross.re;
    let a_term = lambda / (sixteen * n_sq * n_sq * sin2 * shg * shg * chg * chg);

    let variance = (n_coh / n_sq).powi(2) * coherent + a_term;
    if !(variance > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "intensity variance",
            value: variance.as_f64(),
            reason: "closed form evaluated to a non-positive squared sensitivity",
        });
    }
    let delta_phi = variance.sqrt();
    // <N> = |b|^2 + sinh^2 r + 2|V|^2 (|b|^2 + 1 + sinh^2 r)
    let slope = four * shg * shg * chg * chg * n_sq * sin_phi.abs();
    let noise = (delta_phi * slope).powi(2);
    SensitivityReport::new(
        delta_phi,
        noise,
        slope,
        Backend::Intensity,
        total_photons(g, r, input.beta_mag),
    )
}
