//! Photon-number statistics of two-mode Gaussian states.
//!
//! Higher moments are expanded with Isserlis' theorem on the ordered
//! fluctuation operators: for a zero-mean Gaussian state
//! `<ABCD> = <AB><CD> + <AC><BD> + <AD><BC>` with each pair kept in
//! operator order.

use num_complex::Complex;

use super::{GaussianState, Mat4};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonStats<T> {
    pub n_a: T,
    pub n_b: T,
    pub n_total: T,
    /// Variance of `n_a + n_b`.
    pub var_n_total: T,
}

/// Linear combination of the quadratures `(x_a, p_a, x_b, p_b)`.
#[derive(Clone, Copy)]
struct LinearOp<T>([Complex<T>; 4]);

impl<T: Real> LinearOp<T> {
    fn annihilation(mode: usize) -> Self {
        let h = T::FRAC_1_SQRT_2();
        let mut c = [Complex::new(T::zero(), T::zero()); 4];
        c[2 * mode] = Complex::new(h, T::zero());
        c[2 * mode + 1] = Complex::new(T::zero(), h);
        Self(c)
    }

    fn creation(mode: usize) -> Self {
        let a = Self::annihilation(mode);
        Self(a.0.map(|z| z.conj()))
    }
}

struct Moments<T> {
    mean: [T; 4],
    /// `<dR_i dR_j> = cov_ij + (i/2) Omega_ij`.
    second: [[Complex<T>; 4]; 4],
}

impl<T: Real> Moments<T> {
    fn new(state: &GaussianState<T>) -> Self {
        let omega = Mat4::<T>::omega();
        let half = T::lit(0.5);
        let mut second = [[Complex::new(T::zero(), T::zero()); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                second[i][j] = Complex::new(state.cov.0[i][j], half * omega.0[i][j]);
            }
        }
        Self {
            mean: state.mean,
            second,
        }
    }

    fn first(&self, op: &LinearOp<T>) -> Complex<T> {
        op.0.iter()
            .zip(self.mean)
            .map(|(c, m)| c.scale(m))
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
    }

    /// Ordered second moment of the fluctuations `<dA dB>`.
    fn fluct2(&self, a: &LinearOp<T>, b: &LinearOp<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..4 {
            for j in 0..4 {
                acc += a.0[i] * b.0[j] * self.second[i][j];
            }
        }
        acc
    }

    fn moment2(&self, a: &LinearOp<T>, b: &LinearOp<T>) -> Complex<T> {
        self.first(a) * self.first(b) + self.fluct2(a, b)
    }

    /// `<ABCD>` for operators with nonzero means, odd fluctuation moments vanishing.
    fn moment4(&self, ops: [&LinearOp<T>; 4]) -> Complex<T> {
        let m = ops.map(|o| self.first(o));
        let f = |i: usize, j: usize| self.fluct2(ops[i], ops[j]);
        let means_only = m[0] * m[1] * m[2] * m[3];
        let two_fluct = m[0] * m[1] * f(2, 3)
            + m[0] * m[2] * f(1, 3)
            + m[0] * m[3] * f(1, 2)
            + m[1] * m[2] * f(0, 3)
            + m[1] * m[3] * f(0, 2)
            + m[2] * m[3] * f(0, 1);
        let four_fluct = f(0, 1) * f(2, 3) + f(0, 2) * f(1, 3) + f(0, 3) * f(1, 2);
        means_only + two_fluct + four_fluct
    }
}

pub(super) fn photon_stats<T: Real>(state: &GaussianState<T>) -> PhotonStats<T> {
    let mom = Moments::new(state);
    let ann = [LinearOp::annihilation(0), LinearOp::annihilation(1)];
    let cre = [LinearOp::creation(0), LinearOp::creation(1)];
    let n: Vec<T> = (0..2).map(|k| mom.moment2(&cre[k], &ann[k]).re).collect();
    let mut second = T::zero();
    for k in 0..2 {
        for l in 0..2 {
            second += mom.moment4([&cre[k], &ann[k], &cre[l], &ann[l]]).re;
        }
    }
    let n_total = n[0] + n[1];
    PhotonStats {
        n_a: n[0],
        n_b: n[1],
        n_total,
        var_n_total: second - n_total * n_total,
    }
}

/// `Var(N) = tr(C^2)/2 - M/4 + m^T C m` for `M = 2` modes; independent
/// check of the Isserlis expansion.
pub fn photon_number_variance_closed_form<T: Real>(state: &GaussianState<T>) -> T {
    let c = &state.cov;
    let c2 = (*c * *c).trace();
    let cm = c.apply(&state.mean);
    let mcm: T = state.mean.iter().zip(cm).map(|(a, b)| *a * b).sum();
    T::lit(0.5) * c2 - T::lit(0.5) + mcm
}
