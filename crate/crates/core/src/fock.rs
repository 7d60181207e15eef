//! Brute-force truncated Fock-space simulator of the lossless interferometer.
//!
//! The two-mode state is a dense `cutoff x cutoff` amplitude tensor indexed
//! by `(n_a, n_b)`. Unitaries are applied as `exp(G) psi` with `G` the
//! truncated anti-Hermitian generator, summed as a Taylor series in several
//! sub-steps so that each series stays well conditioned. Truncating the
//! ladder operators keeps `G` anti-Hermitian, so the evolution is unitary
//! inside the truncated space; accuracy is monitored through the probability
//! carried by the highest retained level.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::gaussian::Mode;
use crate::interferometer::{InputState, InterferometerConfig};
use crate::scalar::Real;

pub const MAX_CUTOFF: usize = 64;
const SERIES_RESIDUAL: f64 = 1e-14;
const SERIES_BUDGET: usize = 400;

#[derive(Debug, Clone, PartialEq)]
pub struct FockState<T> {
    cutoff: usize,
    amplitudes: Vec<Complex<T>>,
    /// Largest `|1 - norm^2|` seen after any operation.
    max_norm_drift: T,
    tail_tolerance: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockObservables<T> {
    pub mean_x_a: T,
    pub var_x_a: T,
    pub n_a: T,
    pub n_b: T,
    pub var_n_total: T,
    /// Probability in the highest retained level of either mode.
    pub tail_mass: T,
}

impl<T: Real> FockObservables<T> {
    pub fn n_total(&self) -> T {
        self.n_a + self.n_b
    }
}

impl<T: Real> FockState<T> {
    /// Two-mode vacuum with `cutoff` levels per mode and the default tail
    /// tolerance of 1e-10.
    pub fn vacuum(cutoff: usize) -> Result<Self> {
        Self::vacuum_with_tolerance(cutoff, T::lit(1e-10))
    }

    pub fn vacuum_with_tolerance(cutoff: usize, tail_tolerance: T) -> Result<Self> {
        if cutoff == 0 || cutoff > MAX_CUTOFF {
            return Err(Error::CutoffOutOfRange(cutoff));
        }
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); cutoff * cutoff];
        amplitudes[0] = Complex::new(T::one(), T::zero());
        Ok(Self {
            cutoff,
            amplitudes,
            max_norm_drift: T::zero(),
            tail_tolerance,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitude(&self, n_a: usize, n_b: usize) -> Complex<T> {
        self.amplitudes[n_a * self.cutoff + n_b]
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_norm_drift(&self) -> T {
        self.max_norm_drift
    }

    /// Marginal photon-number distribution of one mode.
    pub fn photon_distribution(&self, mode: Mode) -> Vec<T> {
        let d = self.cutoff;
        let mut p = vec![T::zero(); d];
        for na in 0..d {
            for nb in 0..d {
                let w = self.amplitudes[na * d + nb].norm_sqr();
                match mode {
                    Mode::A => p[na] += w,
                    Mode::B => p[nb] += w,
                }
            }
        }
        p
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> T {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
            .norm_sqr()
    }

    pub fn tail_mass(&self) -> T {
        let d = self.cutoff;
        let top = d - 1;
        let mut tail = T::zero();
        for na in 0..d {
            for nb in 0..d {
                if na == top || nb == top {
                    tail += self.amplitudes[na * d + nb].norm_sqr();
                }
            }
        }
        tail
    }

    fn mean_number(&self, mode: Mode) -> T {
        self.photon_distribution(mode)
            .iter()
            .enumerate()
            .map(|(n, p)| T::lit(n as f64) * *p)
            .sum()
    }

    fn guard(&self, mode: Mode, occupation: T) -> Result<()> {
        let need = occupation + T::lit(6.0) * occupation.sqrt();
        if need < T::lit(self.cutoff as f64) {
            Ok(())
        } else {
            Err(Error::CutoffTooSmall {
                cutoff: self.cutoff,
                mode,
                occupation: occupation.as_f64(),
                required: need.as_f64().ceil() as usize + 1,
            })
        }
    }

    fn track_norm(&mut self) {
        let drift = (T::one() - self.norm_sqr()).abs();
        self.max_norm_drift = self.max_norm_drift.max(drift);
    }

    /// `psi <- exp(G) psi` using `steps` equal sub-steps.
    fn evolve<F>(&mut self, steps: usize, what: &'static str, generator: F) -> Result<()>
    where
        F: Fn(&[Complex<T>], &mut [Complex<T>]),
    {
        let n = self.amplitudes.len();
        let inv_steps = T::one() / T::lit(steps as f64);
        let residual = T::lit(SERIES_RESIDUAL);
        let mut term = vec![Complex::new(T::zero(), T::zero()); n];
        let mut next = vec![Complex::new(T::zero(), T::zero()); n];
        for _ in 0..steps {
            term.copy_from_slice(&self.amplitudes);
            let mut converged = false;
            for k in 1..=SERIES_BUDGET {
                generator(&term, &mut next);
                let scale = inv_steps / T::lit(k as f64);
                let mut term_norm = T::zero();
                for (t, x) in term.iter_mut().zip(&next) {
                    *t = x.scale(scale);
                    term_norm += t.norm_sqr();
                }
                for (a, t) in self.amplitudes.iter_mut().zip(&term) {
                    *a += *t;
                }
                if term_norm.sqrt() < residual {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::NoConvergence(what));
            }
        }
        self.track_norm();
        Ok(())
    }

    /// Applies the displacement `exp(beta c^dag - beta* c)` to `mode`.
    pub fn displace(mut self, beta: Complex<T>, mode: Mode) -> Result<Self> {
        if beta.norm() == T::zero() {
            return Ok(self);
        }
        let estimate = (self.mean_number(mode).sqrt() + beta.norm()).powi(2);
        self.guard(mode, estimate)?;
        let d = self.cutoff;
        let sqrt: Vec<T> = (0..=d).map(|n| T::lit(n as f64).sqrt()).collect();
        let bound = beta.norm() * T::lit(2.0) * sqrt[d - 1];
        let steps = bound.ceil().as_f64().max(1.0) as usize;
        self.evolve(steps, "displacement", |psi, out| {
            for na in 0..d {
                for nb in 0..d {
                    let n = match mode {
                        Mode::A => na,
                        Mode::B => nb,
                    };
                    let index = |k: usize| match mode {
                        Mode::A => k * d + nb,
                        Mode::B => na * d + k,
                    };
                    let mut acc = Complex::new(T::zero(), T::zero());
                    // beta c^dag: |n-1> -> sqrt(n) |n>
                    if n > 0 {
                        acc += beta * psi[index(n - 1)].scale(sqrt[n]);
                    }
                    // -beta* c: |n+1> -> sqrt(n+1) |n>
                    if n + 1 < d {
                        acc -= beta.conj() * psi[index(n + 1)].scale(sqrt[n + 1]);
                    }
                    out[na * d + nb] = acc;
                }
            }
        })?;
        Ok(self)
    }

    /// Single-mode squeeze `exp[(xi* c^2 - xi c^dag^2)/2]`, `xi = r e^{i eta}`,
    /// so that `c -> cosh r c - e^{i eta} sinh r c^dag`.
    pub fn squeeze_single(mut self, r: T, eta: T, mode: Mode) -> Result<Self> {
        if r == T::zero() {
            return Ok(self);
        }
        let n = self.mean_number(mode);
        let (sh, ch) = (r.sinh(), r.cosh());
        let estimate = (ch * n.sqrt() + sh * (n + T::one()).sqrt()).powi(2);
        self.guard(mode, estimate)?;
        let d = self.cutoff;
        let sqrt: Vec<T> = (0..=d).map(|k| T::lit(k as f64).sqrt()).collect();
        let xi = Complex::from_polar(r, eta);
        let half = T::lit(0.5);
        let bound = r.abs() * T::lit(d as f64);
        let steps = bound.ceil().as_f64().max(1.0) as usize;
        self.evolve(steps, "single-mode squeeze", |psi, out| {
            for na in 0..d {
                for nb in 0..d {
                    let k = match mode {
                        Mode::A => na,
                        Mode::B => nb,
                    };
                    let index = |m: usize| match mode {
                        Mode::A => m * d + nb,
                        Mode::B => na * d + m,
                    };
                    let mut acc = Complex::new(T::zero(), T::zero());
                    // (xi*/2) c^2: |k+2> -> sqrt((k+1)(k+2)) |k>
                    if k + 2 < d {
                        acc +=
                            xi.conj() * psi[index(k + 2)].scale(half * sqrt[k + 1] * sqrt[k + 2]);
                    }
                    // -(xi/2) c^dag^2: |k-2> -> sqrt(k(k-1)) |k>
                    if k >= 2 {
                        acc -= xi * psi[index(k - 2)].scale(half * sqrt[k] * sqrt[k - 1]);
                    }
                    out[na * d + nb] = acc;
                }
            }
        })?;
        Ok(self)
    }

    /// Two-mode squeeze `exp[g (e^{-i theta} a b - e^{i theta} a^dag b^dag)]`,
    /// so that `a -> cosh g a - e^{i theta} sinh g b^dag`.
    pub fn squeeze_two_mode(mut self, g: T, theta: T) -> Result<Self> {
        if g == T::zero() {
            return Ok(self);
        }
        let (na0, nb0) = (self.mean_number(Mode::A), self.mean_number(Mode::B));
        let (sh, ch) = (g.sinh(), g.cosh());
        let est_a = (ch * na0.sqrt() + sh * (nb0 + T::one()).sqrt()).powi(2);
        let est_b = (ch * nb0.sqrt() + sh * (na0 + T::one()).sqrt()).powi(2);
        self.guard(Mode::A, est_a)?;
        self.guard(Mode::B, est_b)?;
        let d = self.cutoff;
        let sqrt: Vec<T> = (0..=d).map(|k| T::lit(k as f64).sqrt()).collect();
        let zeta = Complex::from_polar(g, theta);
        let bound = g.abs() * T::lit(2.0 * d as f64);
        let steps = bound.ceil().as_f64().max(1.0) as usize;
        self.evolve(steps, "two-mode squeeze", |psi, out| {
            for na in 0..d {
                for nb in 0..d {
                    let mut acc = Complex::new(T::zero(), T::zero());
                    // zeta* a b: |na+1, nb+1> -> sqrt((na+1)(nb+1)) |na, nb>
                    if na + 1 < d && nb + 1 < d {
                        acc += zeta.conj()
                            * psi[(na + 1) * d + nb + 1].scale(sqrt[na + 1] * sqrt[nb + 1]);
                    }
                    // -zeta a^dag b^dag: |na-1, nb-1> -> sqrt(na nb) |na, nb>
                    if na > 0 && nb > 0 {
                        acc -= zeta * psi[(na - 1) * d + nb - 1].scale(sqrt[na] * sqrt[nb]);
                    }
                    out[na * d + nb] = acc;
                }
            }
        })?;
        Ok(self)
    }

    /// Multiplies the amplitude of level `n` of `mode` by `e^{i n phi}`.
    pub fn phase_shift(mut self, phi: T, mode: Mode) -> Self {
        let d = self.cutoff;
        let phases: Vec<Complex<T>> = (0..d)
            .map(|n| Complex::from_polar(T::one(), T::lit(n as f64) * phi))
            .collect();
        for na in 0..d {
            for nb in 0..d {
                let n = match mode {
                    Mode::A => na,
                    Mode::B => nb,
                };
                self.amplitudes[na * d + nb] *= phases[n];
            }
        }
        self
    }

    /// Expectation values in the truncated space, refused when the tail mass
    /// exceeds the state's tolerance.
    pub fn observables(&self) -> Result<FockObservables<T>> {
        let tail = self.tail_mass();
        if tail > self.tail_tolerance {
            return Err(Error::TailMassExceeded {
                tail: tail.as_f64(),
                tolerance: self.tail_tolerance.as_f64(),
            });
        }
        let d = self.cutoff;
        let zero = Complex::new(T::zero(), T::zero());
        let mut a1 = zero;
        let mut a2 = zero;
        let (mut n_a, mut n_b, mut n_sq) = (T::zero(), T::zero(), T::zero());
        // Fixed summation order keeps results bit-identical.
        for na in 0..d {
            let fa = T::lit(na as f64);
            for nb in 0..d {
                let c = self.amplitudes[na * d + nb];
                let w = c.norm_sqr();
                let fb = T::lit(nb as f64);
                n_a += fa * w;
                n_b += fb * w;
                n_sq += (fa + fb) * (fa + fb) * w;
                if na + 1 < d {
                    // <a> = sum c*_{na,nb} sqrt(na+1) c_{na+1,nb}
                    a1 += c.conj()
                        * self.amplitudes[(na + 1) * d + nb].scale(T::lit((na + 1) as f64).sqrt());
                }
                if na + 2 < d {
                    let s = T::lit(((na + 1) * (na + 2)) as f64).sqrt();
                    a2 += c.conj() * self.amplitudes[(na + 2) * d + nb].scale(s);
                }
            }
        }
        let norm = self.norm_sqr();
        let (a1, a2) = (a1.unscale(norm), a2.unscale(norm));
        let (n_a, n_b, n_sq) = (n_a / norm, n_b / norm, n_sq / norm);
        let mean_x_a = T::SQRT_2() * a1.re;
        // X^2 = (a^2 + a^dag^2 + 2 n + 1) / 2
        let x2 = a2.re + n_a + T::lit(0.5);
        let n_total = n_a + n_b;
        Ok(FockObservables {
            mean_x_a,
            var_x_a: x2 - mean_x_a * mean_x_a,
            n_a,
            n_b,
            var_n_total: n_sq - n_total * n_total,
            tail_mass: tail,
        })
    }
}

/// Squeezed vacuum in `a`, coherent state in `b`.
pub fn prepare_input<T: Real>(
    input: &InputState<T>,
    cutoff: usize,
    tail_tolerance: T,
) -> Result<FockState<T>> {
    input.validate()?;
    FockState::vacuum_with_tolerance(cutoff, tail_tolerance)?
        .squeeze_single(input.squeeze_r, input.squeeze_eta, Mode::A)?
        .displace(input.beta(), Mode::B)
}

/// State right after the first stage.
pub fn run_first_stage<T: Real>(
    config: &InterferometerConfig<T>,
    input: &InputState<T>,
    cutoff: usize,
    tail_tolerance: T,
) -> Result<FockState<T>> {
    prepare_input(input, cutoff, tail_tolerance)?
        .squeeze_two_mode(config.stage1.gain, config.stage1.phase)
}

/// Full lossless pipeline; losses in `config` are rejected.
pub fn run_interferometer<T: Real>(
    config: &InterferometerConfig<T>,
    input: &InputState<T>,
    cutoff: usize,
    tail_tolerance: T,
) -> Result<FockState<T>> {
    config.validate()?;
    if config.loss_internal > T::zero() || config.loss_external > T::zero() {
        return Err(Error::InvalidParameter {
            name: "loss",
            value: config.loss_internal.max(config.loss_external).as_f64(),
            reason: "the Fock oracle is lossless",
        });
    }
    run_first_stage(config, input, cutoff, tail_tolerance)?
        .phase_shift(config.phi, Mode::B)
        .squeeze_two_mode(config.stage2.gain, config.stage2.phase)
}
