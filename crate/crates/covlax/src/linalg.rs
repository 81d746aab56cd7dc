//! Dense square matrices of side `D <= 10`, generic over the scalar type.
//!
//! Nothing here is tuned for large problems; the point is exact generic
//! arithmetic so the same kernels run on `f64` and on dual numbers.

use crate::dual::Scalar;
use crate::error::{Error, Result};

/// Row-major `dim x dim` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SqMatrix<T = f64> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> SqMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        SqMatrix {
            dim,
            data: vec![T::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = T::ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matmul(&self, other: &SqMatrix<T>) -> SqMatrix<T> {
        let d = self.dim;
        SqMatrix::from_fn(d, |i, j| {
            let mut acc = T::ZERO;
            for k in 0..d {
                acc += self[(i, k)] * other[(k, j)];
            }
            acc
        })
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        let d = self.dim;
        (0..d)
            .map(|i| {
                let mut acc = T::ZERO;
                for k in 0..d {
                    acc += self[(i, k)] * v[k];
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> SqMatrix<T> {
        SqMatrix::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: T) -> SqMatrix<T> {
        SqMatrix::from_fn(self.dim, |i, j| self[(i, j)] * s)
    }

    pub fn add(&self, other: &SqMatrix<T>) -> SqMatrix<T> {
        SqMatrix::from_fn(self.dim, |i, j| self[(i, j)] + other[(i, j)])
    }

    pub fn sub(&self, other: &SqMatrix<T>) -> SqMatrix<T> {
        SqMatrix::from_fn(self.dim, |i, j| self[(i, j)] - other[(i, j)])
    }

    pub fn trace(&self) -> T {
        let mut acc = T::ZERO;
        for i in 0..self.dim {
            acc += self[(i, i)];
        }
        acc
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &SqMatrix<T>) -> SqMatrix<T> {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.value().abs())
            .fold(0.0, f64::max)
    }

    /// Largest |value| asymmetry `|m_ij - m_ji|`.
    pub fn symmetry_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..i {
                r = r.max((self[(i, j)] - self[(j, i)]).value().abs());
            }
        }
        r
    }

    /// Gauss-Jordan inverse with partial pivoting on the value part.
    ///
    /// Returns the inverse together with a crude condition estimate
    /// `max|A| * max|A^{-1}| * dim`.
    pub fn inverse(&self) -> Result<(SqMatrix<T>, f64)> {
        let d = self.dim;
        let mut a = self.clone();
        let mut inv = SqMatrix::<T>::identity(d);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..d {
            let mut pivot = col;
            let mut best = a[(col, col)].value().abs();
            for row in (col + 1)..d {
                let cand = a[(row, col)].value().abs();
                if cand > best {
                    best = cand;
                    pivot = row;
                }
            }
            if best <= f64::EPSILON * scale * d as f64 {
                return Err(Error::Singular {
                    cond: scale / best.max(f64::MIN_POSITIVE),
                });
            }
            if pivot != col {
                a.swap_rows(col, pivot);
                inv.swap_rows(col, pivot);
            }
            let diag = a[(col, col)];
            for j in 0..d {
                a[(col, j)] /= diag;
                inv[(col, j)] /= diag;
            }
            for row in 0..d {
                if row == col {
                    continue;
                }
                let factor = a[(row, col)];
                if factor.value() == 0.0 && factor == T::ZERO {
                    continue;
                }
                for j in 0..d {
                    let s = a[(col, j)] * factor;
                    a[(row, j)] -= s;
                    let s = inv[(col, j)] * factor;
                    inv[(row, j)] -= s;
                }
            }
        }
        let cond = self.max_abs() * inv.max_abs() * d as f64;
        Ok((inv, cond))
    }

    /// Determinant by LU with partial pivoting on the value part.
    pub fn det(&self) -> T {
        let d = self.dim;
        let mut a = self.clone();
        let mut det = T::ONE;
        let mut sign = 1.0;
        for col in 0..d {
            let mut pivot = col;
            let mut best = a[(col, col)].value().abs();
            for row in (col + 1)..d {
                let cand = a[(row, col)].value().abs();
                if cand > best {
                    best = cand;
                    pivot = row;
                }
            }
            if best == 0.0 {
                return T::ZERO;
            }
            if pivot != col {
                a.swap_rows(col, pivot);
                sign = -sign;
            }
            let diag = a[(col, col)];
            det *= diag;
            for row in (col + 1)..d {
                let factor = a[(row, col)] / diag;
                for j in col..d {
                    let s = a[(col, j)] * factor;
                    a[(row, j)] -= s;
                }
            }
        }
        det * T::from_f64(sign)
    }

    fn swap_rows(&mut self, r: usize, s: usize) {
        if r == s {
            return;
        }
        for j in 0..self.dim {
            self.data.swap(r * self.dim + j, s * self.dim + j);
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> SqMatrix<U> {
        SqMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl SqMatrix<crate::dual::Dual> {
    /// Value and derivative parts as real matrices.
    pub fn value_part(&self) -> SqMatrix<f64> {
        self.map(|d| d.re)
    }
    pub fn deriv_part(&self) -> SqMatrix<f64> {
        self.map(|d| d.du)
    }
}

impl SqMatrix<f64> {
    /// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
    pub fn symmetric_eigenvalues(&self) -> Vec<f64> {
        let d = self.dim;
        let mut a = self.clone();
        for _sweep in 0..60 {
            let mut off: f64 = 0.0;
            for i in 0..d {
                for j in (i + 1)..d {
                    off = off.max(a[(i, j)].abs());
                }
            }
            if off < 1e-14 * self.max_abs().max(1.0) {
                break;
            }
            for p in 0..d {
                for q in (p + 1)..d {
                    if a[(p, q)].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..d {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..d {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..d).map(|i| a[(i, i)]).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
        eig
    }
}

impl<T> std::ops::Index<(usize, usize)> for SqMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.dim + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for SqMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.dim + j]
    }
}

/// `a . b` over matching slices.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::ZERO;
    for (&x, &y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::Dual;

    #[test]
    fn inverse_roundtrip() {
        let m = SqMatrix::from_fn(3, |i, j| if i == j { 2.0 + i as f64 } else { 0.3 });
        let (inv, _) = m.inverse().unwrap();
        let prod = m.matmul(&inv);
        let id = SqMatrix::<f64>::identity(3);
        assert!(prod.sub(&id).max_abs() < 1e-13);
    }

    #[test]
    fn singular_detected() {
        let mut m = SqMatrix::<f64>::zeros(2);
        m[(0, 0)] = 1.0;
        m[(0, 1)] = 2.0;
        m[(1, 0)] = 2.0;
        m[(1, 1)] = 4.0;
        assert!(m.inverse().is_err());
    }

    #[test]
    fn dual_inverse_differentiates() {
        // d/dt inverse of diag(1 + t, 2) at t = 0 has d(1/(1+t))/dt = -1.
        let mut m = SqMatrix::<Dual>::zeros(2);
        m[(0, 0)] = Dual::new(1.0, 1.0);
        m[(1, 1)] = Dual::constant(2.0);
        let (inv, _) = m.inverse().unwrap();
        assert!((inv[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((inv[(0, 0)].du + 1.0).abs() < 1e-15);
    }

    #[test]
    fn det_matches_expansion() {
        let m = SqMatrix::from_fn(3, |i, j| (i * 3 + j) as f64 + if i == j { 5.0 } else { 0.0 });
        // direct cofactor expansion
        let a = |i: usize, j: usize| m[(i, j)];
        let expect = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
            - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
        assert!((m.det() - expect).abs() < 1e-10);
    }

    #[test]
    fn jacobi_eigenvalues_of_known_matrix() {
        let mut m = SqMatrix::<f64>::zeros(2);
        m[(0, 0)] = 2.0;
        m[(0, 1)] = 1.0;
        m[(1, 0)] = 1.0;
        m[(1, 1)] = 2.0;
        let eig = m.symmetric_eigenvalues();
        assert!((eig[0] - 1.0).abs() < 1e-12);
        assert!((eig[1] - 3.0).abs() < 1e-12);
    }
}
