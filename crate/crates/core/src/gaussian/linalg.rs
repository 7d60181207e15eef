//! Dense fixed-size real matrices for the two-mode phase space.

use std::ops::{Add, Mul, Sub};

use crate::scalar::Real;

pub type Vec4<T> = [T; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4<T>(pub [[T; 4]; 4]);

impl<T: Real> Mat4<T> {
    pub fn zero() -> Self {
        Mat4([[T::zero(); 4]; 4])
    }

    pub fn identity() -> Self {
        Self::diagonal([T::one(); 4])
    }

    pub fn diagonal(d: [T; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = d[i];
        }
        m
    }

    /// Standard symplectic form for ordering (x_a, p_a, x_b, p_b).
    pub fn omega() -> Self {
        let mut m = Self::zero();
        for k in 0..2 {
            m.0[2 * k][2 * k + 1] = T::one();
            m.0[2 * k + 1][2 * k] = -T::one();
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn scale(&self, s: T) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|x| *x *= s);
        m
    }

    pub fn apply(&self, v: &Vec4<T>) -> Vec4<T> {
        let mut out = [T::zero(); 4];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(&a, &b)| a * b).sum();
        }
        out
    }

    /// `S M S^T`.
    pub fn congruence(&self, m: &Self) -> Self {
        *self * *m * self.transpose()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }

    pub fn trace(&self) -> T {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    /// Determinant by cofactor expansion over 2x2 minors.
    pub fn determinant(&self) -> T {
        let m = &self.0;
        let s0 = m[0][0] * m[1][1] - m[1][0] * m[0][1];
        let s1 = m[0][0] * m[1][2] - m[1][0] * m[0][2];
        let s2 = m[0][0] * m[1][3] - m[1][0] * m[0][3];
        let s3 = m[0][1] * m[1][2] - m[1][1] * m[0][2];
        let s4 = m[0][1] * m[1][3] - m[1][1] * m[0][3];
        let s5 = m[0][2] * m[1][3] - m[1][2] * m[0][3];
        let c5 = m[2][2] * m[3][3] - m[3][2] * m[2][3];
        let c4 = m[2][1] * m[3][3] - m[3][1] * m[2][3];
        let c3 = m[2][1] * m[3][2] - m[3][1] * m[2][2];
        let c2 = m[2][0] * m[3][3] - m[3][0] * m[2][3];
        let c1 = m[2][0] * m[3][2] - m[3][0] * m[2][2];
        let c0 = m[2][0] * m[3][1] - m[3][0] * m[2][1];
        s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0
    }
}

impl<T: Real> Mul for Mat4<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        m
    }
}

impl<T: Real> Add for Mat4<T> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (a, &b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a += b;
        }
        self
    }
}

impl<T: Real> Sub for Mat4<T> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for (a, &b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a -= b;
        }
        self
    }
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// returned in ascending order.
pub fn symmetric_eigenvalues<T: Real, const N: usize>(mut a: [[T; N]; N]) -> [T; N] {
    let off = |a: &[[T; N]; N]| -> T {
        let mut s = T::zero();
        for i in 0..N {
            for j in 0..N {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s
    };
    let scale: T = a
        .iter()
        .flatten()
        .map(|x| *x * *x)
        .sum::<T>()
        .max(T::min_positive_value());
    let eps = T::epsilon() * T::epsilon() * scale;
    for _sweep in 0..64 {
        if off(&a) <= eps {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::lit(2.0) * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev = [T::zero(); N];
    for i in 0..N {
        ev[i] = a[i][i];
    }
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_known_spectrum() {
        let m = [[2.0_f64, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, -1.0]];
        let ev = symmetric_eigenvalues(m);
        assert!((ev[0] + 1.0).abs() < 1e-14);
        assert!((ev[1] - 1.0).abs() < 1e-14);
        assert!((ev[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn determinant_matches_diagonal_and_permutation() {
        let d = Mat4::diagonal([1.0, 2.0, 3.0, 4.0]);
        assert_eq!(d.determinant(), 24.0);
        assert!((Mat4::<f64>::omega().determinant() - 1.0).abs() < 1e-15);
        let m = Mat4([
            [1.0_f64, 2.0, 0.0, 1.0],
            [0.0, 1.0, 3.0, 0.0],
            [2.0, 0.0, 1.0, 1.0],
            [1.0, 1.0, 0.0, 2.0],
        ]);
        assert!((m.determinant() - 16.0).abs() < 1e-12);
    }
}
