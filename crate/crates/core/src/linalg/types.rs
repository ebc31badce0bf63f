//! Structural newtypes over [`Matrix`]: each one certifies a class
//! (Hermitian, positive semidefinite, unitary, symmetry) at construction.

use std::ops::Deref;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::eigen::eigh_values;
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative and absolute tolerances used by every pass/fail decision.
///
/// The inequalities being checked are exact; these only absorb rounding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceCfg<T> {
    pub rel: T,
    pub abs: T,
}

impl<T: Real> ToleranceCfg<T> {
    pub fn new(rel: T, abs: T) -> Result<Self> {
        if !(rel > T::zero() && abs > T::zero()) {
            return Err(Error::InvalidTolerance {
                rel: rel.as_f64(),
                abs: abs.as_f64(),
            });
        }
        Ok(Self { rel, abs })
    }

    /// `rel * max(1, scale)`, the slack allowed on a quantity of size `scale`.
    #[inline]
    pub fn slack(&self, scale: T) -> T {
        self.rel * scale.abs().max(T::one())
    }
}

impl<T: Real> Default for ToleranceCfg<T> {
    /// `rel = 1e-9`, `abs = 1e-12` in double precision; single precision is
    /// widened to a fixed multiple of its machine epsilon.
    fn default() -> Self {
        let eps = T::epsilon();
        Self {
            rel: T::lit(1e-9).max(eps * T::lit(1e3)),
            abs: T::lit(1e-12).max(eps * T::lit(10.0)),
        }
    }
}

/// Real values sorted non-increasing. `lambda(i)` is 1-based and returns zero
/// past the natural dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum<T> {
    values: Vec<T>,
    natural_dim: usize,
}

impl<T: Real> Spectrum<T> {
    /// Sorts `values` non-increasing; `natural_dim` defaults to the length.
    pub fn new(mut values: Vec<T>) -> Self {
        values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        let natural_dim = values.len();
        Self { values, natural_dim }
    }

    pub fn with_natural_dim(values: Vec<T>, natural_dim: usize) -> Self {
        let mut s = Self::new(values);
        s.natural_dim = natural_dim;
        s
    }

    /// `λ_i^↓`, 1-based; zero for `i > natural_dim` or `i == 0`.
    pub fn lambda(&self, i: usize) -> T {
        if i == 0 || i > self.natural_dim {
            return T::zero();
        }
        self.values.get(i - 1).copied().unwrap_or_else(T::zero)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn natural_dim(&self) -> usize {
        self.natural_dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn min(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    /// Largest modulus among the values.
    pub fn abs_max(&self) -> T {
        self.max().abs().max(self.min().abs())
    }

    /// Entrywise map followed by re-sorting.
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::with_natural_dim(self.values.iter().map(|&x| f(x)).collect(), self.natural_dim)
    }

    /// Concatenation, as the spectrum of a direct sum.
    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.values.clone();
        v.extend_from_slice(&other.values);
        Self::with_natural_dim(v, self.natural_dim + other.natural_dim)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|x| x.as_f64()).collect()
    }
}

/// Hermitian matrix, stored in explicitly symmetrized form.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian<T: Real>(Matrix<T>);

impl<T: Real> Hermitian<T> {
    /// Accepts `m` when `max |M - M*| <= abs * max(1, max |M|)`.
    pub fn new(m: Matrix<T>, tol: &ToleranceCfg<T>) -> Result<Self> {
        m.check_finite()?;
        let dev = m.hermitian_deviation();
        if dev > tol.abs * m.norm_max().max(T::one()) {
            return Err(Error::NotHermitian {
                deviation: dev.as_f64(),
            });
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Takes the Hermitian part of an expression that is Hermitian in exact
    /// arithmetic.
    pub fn symmetrized(m: &Matrix<T>) -> Self {
        Self(m.hermitian_part())
    }

    pub fn from_real_diag(d: &[T]) -> Self {
        Self(Matrix::from_diag(d))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(Matrix::zeros(n))
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::symmetrized(&(&self.0 + &o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::symmetrized(&(&self.0 - &o.0))
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.scale(s))
    }

    /// `V H V*`, Hermitian for any `V`.
    pub fn congruence(&self, v: &Matrix<T>) -> Self {
        Self::symmetrized(&self.0.conjugate_by(v))
    }

    /// Eigenvalues only, sorted non-increasing.
    pub fn eigenvalues(&self) -> Result<Spectrum<T>> {
        eigh_values(self)
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        Self(self.0.direct_sum(&o.0).into_inner())
    }

    /// Operator (spectral) norm.
    pub fn norm_op(&self) -> Result<T> {
        Ok(self.eigenvalues()?.abs_max())
    }
}

impl<T: Real> Deref for Hermitian<T> {
    type Target = Matrix<T>;
    fn deref(&self) -> &Matrix<T> {
        &self.0
    }
}

/// Positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Psd<T: Real>(Hermitian<T>);

impl<T: Real> Psd<T> {
    /// Accepts `h` when `λ_min >= -rel * max(1, λ_max)`.
    pub fn new(h: Hermitian<T>, tol: &ToleranceCfg<T>) -> Result<Self> {
        let spec = h.eigenvalues()?;
        let allowed = -tol.slack(spec.max());
        if spec.min() < allowed {
            return Err(Error::NotPsd {
                lambda_min: spec.min().as_f64(),
                allowed: allowed.as_f64(),
            });
        }
        Ok(Self(h))
    }

    pub fn from_matrix(m: Matrix<T>, tol: &ToleranceCfg<T>) -> Result<Self> {
        Self::new(Hermitian::new(m, tol)?, tol)
    }

    /// Wraps a matrix that is PSD by construction (Gram products, spectral
    /// functions with nonnegative values).
    pub(crate) fn trusted(h: Hermitian<T>) -> Self {
        Self(h)
    }

    pub fn identity(n: usize) -> Self {
        Self(Hermitian::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(Hermitian::zeros(n))
    }

    pub fn scalar(n: usize, s: T) -> Self {
        assert!(s >= T::zero(), "Psd::scalar: negative scalar");
        Self(Hermitian::symmetrized(&Matrix::scalar(n, s)))
    }

    pub fn from_nonneg_diag(d: &[T]) -> Self {
        assert!(d.iter().all(|&x| x >= T::zero()), "Psd::from_nonneg_diag: negative entry");
        Self(Hermitian::from_real_diag(d))
    }

    pub fn hermitian(&self) -> &Hermitian<T> {
        &self.0
    }

    pub fn into_hermitian(self) -> Hermitian<T> {
        self.0
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.add(&o.0))
    }

    pub fn scale(&self, s: T) -> Self {
        assert!(s >= T::zero());
        Self(self.0.scale(s))
    }

    /// `V P V*` stays PSD for any `V`.
    pub fn congruence(&self, v: &Matrix<T>) -> Self {
        Self(self.0.congruence(v))
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        Self(self.0.direct_sum(&o.0))
    }

    /// Schur product of two PSD matrices is PSD.
    pub fn schur(&self, o: &Self) -> Self {
        Self(Hermitian::symmetrized(&self.matrix().hadamard(o.matrix())))
    }
}

impl<T: Real> Deref for Psd<T> {
    type Target = Hermitian<T>;
    fn deref(&self) -> &Hermitian<T> {
        &self.0
    }
}

/// Unitary matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary<T: Real>(Matrix<T>);

impl<T: Real> Unitary<T> {
    /// Accepts `m` when `max |VV* - I| <= rel`.
    pub fn new(m: Matrix<T>, tol: &ToleranceCfg<T>) -> Result<Self> {
        m.check_finite()?;
        let dev = m.unitary_deviation();
        if dev > tol.rel {
            return Err(Error::NotUnitary {
                deviation: dev.as_f64(),
            });
        }
        Ok(Self(m))
    }

    pub(crate) fn trusted(m: Matrix<T>) -> Self {
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn compose(&self, o: &Self) -> Self {
        Self(&self.0 * &o.0)
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        Self(self.0.direct_sum(&o.0).into_inner())
    }
}

impl<T: Real> Deref for Unitary<T> {
    type Target = Matrix<T>;
    fn deref(&self) -> &Matrix<T> {
        &self.0
    }
}

/// Hermitian unitary: `V = V* = V⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct Symmetry<T: Real>(Matrix<T>);

impl<T: Real> Symmetry<T> {
    pub fn new(m: Matrix<T>, tol: &ToleranceCfg<T>) -> Result<Self> {
        let u = Unitary::new(m, tol)?;
        let dev = u.hermitian_deviation();
        if dev > tol.rel {
            return Err(Error::NotSymmetry {
                deviation: dev.as_f64(),
            });
        }
        Ok(Self(u.0.hermitian_part()))
    }

    pub(crate) fn trusted(m: Matrix<T>) -> Self {
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    /// The swap `[[0, 1], [1, 0]]` lifted to `n = 2`.
    pub fn swap2() -> Self {
        let o = Complex::new(T::one(), T::zero());
        let z = Complex::new(T::zero(), T::zero());
        Self(Matrix::from_vec(2, vec![z, o, o, z]).expect("finite"))
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn to_unitary(&self) -> Unitary<T> {
        Unitary(self.0.clone())
    }
}

impl<T: Real> Deref for Symmetry<T> {
    type Target = Matrix<T>;
    fn deref(&self) -> &Matrix<T> {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_zero_padding() {
        let s = Spectrum::new(vec![1.0, 3.0, 2.0]);
        assert_eq!(s.values(), &[3.0, 2.0, 1.0]);
        assert_eq!(s.lambda(1), 3.0);
        assert_eq!(s.lambda(3), 1.0);
        assert_eq!(s.lambda(4), 0.0);
        assert_eq!(s.lambda(0), 0.0);
    }

    #[test]
    fn default_tolerances() {
        let t = ToleranceCfg::<f64>::default();
        assert_eq!(t.rel, 1e-9);
        assert_eq!(t.abs, 1e-12);
        let t32 = ToleranceCfg::<f32>::default();
        assert!(t32.rel > 1e-5 && t32.abs > 1e-7);
        assert!(ToleranceCfg::new(0.0, 1e-12).is_err());
    }

    #[test]
    fn psd_rejects_indefinite() {
        let tol = ToleranceCfg::default();
        let h = Hermitian::from_real_diag(&[1.0, -0.5]);
        assert!(matches!(Psd::new(h, &tol), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn hermitian_rejects_skew() {
        let tol = ToleranceCfg::default();
        let m = Matrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        assert!(matches!(Hermitian::new(m, &tol), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn symmetry_classes() {
        let tol = ToleranceCfg::default();
        assert!(Symmetry::new(Symmetry::<f64>::swap2().matrix().clone(), &tol).is_ok());
        let rot = Matrix::from_real_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        assert!(Unitary::new(rot.clone(), &tol).is_ok());
        assert!(matches!(Symmetry::new(rot, &tol), Err(Error::NotSymmetry { .. })));
    }
}
