use crate::closed_form::{intensity_sensitivity, sql_limit, Backend, SensitivityReport};
use crate::error::{Error, Result};
use crate::gaussian::{run_interferometer_with, state_after_first_stage, EngineOptions, Mode};
use crate::interferometer::{InputState, InterferometerConfig};
use crate::scalar::{relative_deviation, Real};

/// Finite-difference step in phi (radians).
pub const FD_STEP: f64 = 1e-5;
/// Slopes below this are treated as a blind phase point.
pub const MIN_SLOPE: f64 = 1e-14;

/// Central difference with one Richardson level:
/// `(4 D(h/2) - D(h)) / 3`, `D(h) = (f(x+h) - f(x-h)) / 2h`.
pub fn richardson_central<T: Real, F>(f: F, x: T, h: T) -> Result<T>
where
    F: Fn(T) -> Result<T>,
{
    let two = T::lit(2.0);
    let d = |step: T| -> Result<T> { Ok((f(x + step)? - f(x - step)?) / (two * step)) };
    let coarse = d(h)?;
    let fine = d(h / two)?;
    Ok((T::lit(4.0) * fine - coarse) / T::lit(3.0))
}

/// Observable fed through the error-propagation formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    /// `X = (a2 + a2^dag)/sqrt 2`.
    Quadrature,
    /// `N = n_a2 + n_b2`.
    PhotonNumber,
}

fn observable_moments<T: Real>(
    config: &InterferometerConfig<T>,
    input: &InputState<T>,
    observable: Observable,
    options: &EngineOptions,
) -> Result<(T, T)> {
    let state = run_interferometer_with(config, input, options)?;
    Ok(match observable {
        Observable::Quadrature => state.quadrature_stats(Mode::A, T::zero()),
        Observable::PhotonNumber => {
            let st = state.photon_stats();
            (st.n_total, st.var_n_total)
        }
    })
}

/// Error-propagation sensitivity evaluated through the Gaussian engine:
/// exact variance, finite-difference slope.
pub fn numeric_sensitivity<T: Real>(
    config: &InterferometerConfig<T>,
    input: &InputState<T>,
    observable: Observable,
    options: &EngineOptions,
) -> Result<SensitivityReport<T>> {
    let (_, noise) = observable_moments(config, input, observable, options)?;
    let mean_at = |phi: T| -> Result<T> {
        Ok(observable_moments(&config.with_phi(phi), input, observable, options)?.0)
    };
    let slope = richardson_central(mean_at, config.phi, T::lit(FD_STEP))?.abs();
    if !(slope > T::lit(MIN_SLOPE)) {
        return Err(Error::VanishingSlope(slope.as_f64()));
    }
    let n_total = state_after_first_stage(config, input, options.convention)
        .photon_stats()
        .n_total;
    if !(n_total > T::zero()) {
        return Err(Error::NoPhotons);
    }
    let backend = match observable {
        Observable::Quadrature => Backend::Homodyne,
        Observable::PhotonNumber => Backend::Intensity,
    };
    Ok(SensitivityReport {
        delta_phi: noise.sqrt() / slope,
        noise,
        slope,
        backend,
        hl: n_total.recip(),
        sql: sql_limit(n_total)?,
        n_total,
    })
}

/// Printed intensity formula next to the engine's numeric propagation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityDeviation<T> {
    pub closed_form: T,
    pub engine: T,
    pub relative: T,
}

impl<T: Real> IntensityDeviation<T> {
    pub fn within(&self, tolerance: T) -> bool {
        self.relative <= tolerance
    }
}

pub fn intensity_deviation<T: Real>(
    config: &InterferometerConfig<T>,
    input: &InputState<T>,
) -> Result<IntensityDeviation<T>> {
    let closed = intensity_sensitivity(config, input)?.delta_phi;
    let engine = numeric_sensitivity(
        config,
        input,
        Observable::PhotonNumber,
        &EngineOptions::default(),
    )?
    .delta_phi;
    Ok(IntensityDeviation {
        closed_form: closed,
        engine,
        relative: relative_deviation(closed, engine, T::min_positive_value()),
    })
}
