//! Matrix functions: absolute value, square root, polar factor, sign
//! symmetry, geometric mean.

use super::eigen::{eigh, svd};
use super::matrix::Matrix;
use super::types::{Hermitian, Psd, Spectrum, Symmetry, ToleranceCfg, Unitary};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative size of the diagonal shift used for the singular geometric mean.
pub const GEOMEAN_REGULARIZATION: f64 = 1e-12;

/// `U f(Λ) U*` for the spectral decomposition of `h`.
pub fn spectral_apply<T: Real>(h: &Hermitian<T>, f: impl Fn(T) -> T) -> Result<Hermitian<T>> {
    let (spec, u) = eigh(h)?;
    let d: Vec<T> = spec.values().iter().map(|&x| f(x)).collect();
    Ok(Hermitian::symmetrized(&Matrix::congruence_diag(&u, &d)))
}

/// `|M| = (M*M)^{1/2}`, computed from the SVD so that its spectrum is σ(M).
pub fn matrix_abs<T: Real>(m: &Matrix<T>) -> Result<Psd<T>> {
    let (_, sigma, w) = svd(m)?;
    Ok(Psd::trusted(Hermitian::symmetrized(&Matrix::congruence_diag(
        &w,
        sigma.values(),
    ))))
}

/// `|H|` for Hermitian `H` via its eigendecomposition.
pub fn hermitian_abs<T: Real>(h: &Hermitian<T>) -> Result<Psd<T>> {
    Ok(Psd::trusted(spectral_apply(h, |x| x.abs())?))
}

/// Principal square root; eigenvalues down to `-rel * max(1, λ_max)` are
/// clamped to zero, anything more negative is rejected.
pub fn sqrt_psd<T: Real>(p: &Psd<T>, tol: &ToleranceCfg<T>) -> Result<Psd<T>> {
    let (spec, u) = eigh(p.hermitian())?;
    check_psd_spectrum(&spec, tol)?;
    let d: Vec<T> = spec.values().iter().map(|&x| x.max(T::zero()).sqrt()).collect();
    Ok(Psd::trusted(Hermitian::symmetrized(&Matrix::congruence_diag(&u, &d))))
}

fn check_psd_spectrum<T: Real>(spec: &Spectrum<T>, tol: &ToleranceCfg<T>) -> Result<()> {
    let allowed = -tol.slack(spec.max());
    if spec.min() < allowed {
        return Err(Error::NotPsd {
            lambda_min: spec.min().as_f64(),
            allowed: allowed.as_f64(),
        });
    }
    Ok(())
}

/// Unitary polar factor `U` with `M = U|M|`, taken as `U_svd W_svd*`.
pub fn polar_unitary<T: Real>(m: &Matrix<T>) -> Result<Unitary<T>> {
    let (u, _, w) = svd(m)?;
    Ok(Unitary::trusted(u.matrix() * &w.adjoint()))
}

/// Sign symmetry `V = Σ sign(λ_i) u_i u_i*` of a Hermitian matrix, so that
/// `H = V|H| = |H|V`. Eigenvalues with `|λ| <= abs * max(1, ‖H‖)` get sign
/// `+1`, which keeps `V` a symmetry for singular `H`.
pub fn hermitian_sign_symmetry<T: Real>(
    h: &Hermitian<T>,
    tol: &ToleranceCfg<T>,
) -> Result<Symmetry<T>> {
    Ok(sign_and_abs(h, tol)?.0)
}

/// Sign symmetry and absolute value from one eigendecomposition.
pub fn sign_and_abs<T: Real>(
    h: &Hermitian<T>,
    tol: &ToleranceCfg<T>,
) -> Result<(Symmetry<T>, Psd<T>)> {
    let (spec, u) = eigh(h)?;
    let zero_band = tol.abs * spec.abs_max().max(T::one());
    let signs: Vec<T> = spec
        .values()
        .iter()
        .map(|&x| if x < -zero_band { -T::one() } else { T::one() })
        .collect();
    let abs: Vec<T> = spec.values().iter().map(|x| x.abs()).collect();
    let v = Matrix::congruence_diag(&u, &signs).hermitian_part();
    let a = Hermitian::symmetrized(&Matrix::congruence_diag(&u, &abs));
    Ok((Symmetry::trusted(v), Psd::trusted(a)))
}

/// Matrix geometric mean `A # B`.
///
/// For definite inputs this is `A^{1/2}(A^{-1/2} B A^{-1/2})^{1/2}A^{1/2}`,
/// evaluated in the eigenbasis of whichever argument is better conditioned.
/// If either argument has `λ_min <= ε` with `ε = 1e-12 · max(1, λ_max(A),
/// λ_max(B))`, both are shifted by `εI` first (continuous extension).
pub fn geometric_mean<T: Real>(a: &Psd<T>, b: &Psd<T>, tol: &ToleranceCfg<T>) -> Result<Psd<T>> {
    a.ensure_same_dim(b)?;
    let n = a.dim();
    if n == 0 {
        return Ok(Psd::zeros(0));
    }
    let (sa, ua) = eigh(a.hermitian())?;
    let (sb, ub) = eigh(b.hermitian())?;
    check_psd_spectrum(&sa, tol)?;
    check_psd_spectrum(&sb, tol)?;

    let scale = T::one().max(sa.max()).max(sb.max());
    let eps = T::lit(GEOMEAN_REGULARIZATION) * scale;
    let shift = if sa.min() <= eps || sb.min() <= eps { eps } else { T::zero() };

    let cond = |s: &Spectrum<T>| (s.max() + shift) / (s.min().max(T::zero()) + shift);
    let (outer_spec, outer_u, inner) = if cond(&sa) <= cond(&sb) {
        (sa, ua, b)
    } else {
        (sb, ub, a)
    };

    // Work in the eigenbasis of the outer argument: D = diag(outer + shift).
    let d: Vec<T> = outer_spec
        .values()
        .iter()
        .map(|&x| x.max(T::zero()) + shift)
        .collect();
    let rt: Vec<T> = d.iter().map(|x| x.sqrt()).collect();
    let inner_rot = outer_u.adjoint().matrix() * &(inner.matrix() * outer_u.matrix());
    let mid = Matrix::from_fn(n, |i, j| {
        let mut z = inner_rot[(i, j)];
        if i == j {
            z.re += shift;
        }
        z / (rt[i] * rt[j])
    });
    let (sm, um) = eigh(&Hermitian::symmetrized(&mid))?;
    let sqrt_mid: Vec<T> = sm.values().iter().map(|&x| x.max(T::zero()).sqrt()).collect();
    let root = Matrix::congruence_diag(&um, &sqrt_mid);
    let scaled = Matrix::from_fn(n, |i, j| root[(i, j)] * (rt[i] * rt[j]));
    let g = scaled.conjugate_by(outer_u.matrix());
    Ok(Psd::trusted(Hermitian::symmetrized(&g)))
}

/// The unitary `W = A^{-1/2}(A#B)B^{-1/2}` linking `A # B = A^{1/2} W B^{1/2}`
/// for positive definite `A`, `B`.
pub fn geo_mean_unitary_link<T: Real>(
    a: &Psd<T>,
    b: &Psd<T>,
    tol: &ToleranceCfg<T>,
) -> Result<Unitary<T>> {
    a.ensure_same_dim(b)?;
    let inv_sqrt = |p: &Psd<T>| -> Result<Matrix<T>> {
        let (s, u) = eigh(p.hermitian())?;
        if s.min() <= tol.rel * s.max() || s.min() <= T::zero() {
            return Err(Error::SingularInput {
                lambda_min: s.min().as_f64(),
                lambda_max: s.max().as_f64(),
            });
        }
        let d: Vec<T> = s.values().iter().map(|x| T::one() / x.sqrt()).collect();
        Ok(Matrix::congruence_diag(&u, &d))
    };
    let ai = inv_sqrt(a)?;
    let bi = inv_sqrt(b)?;
    let g = geometric_mean(a, b, tol)?;
    Ok(Unitary::trusted(&(&ai * g.matrix()) * &bi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn tol() -> ToleranceCfg<f64> {
        ToleranceCfg::default()
    }

    fn real(rows: &[Vec<f64>]) -> Matrix<f64> {
        Matrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn abs_of_swap_and_nilpotent() {
        let a = matrix_abs(&real(&[vec![0., 1.], vec![1., 0.]])).unwrap();
        assert!((a.matrix() - &Matrix::identity(2)).norm_max() < 1e-15);
        let a = matrix_abs(&real(&[vec![0., 1.], vec![0., 0.]])).unwrap();
        assert!((a.matrix() - &Matrix::from_diag(&[0., 1.])).norm_max() < 1e-15);
    }

    #[test]
    fn sqrt_examples() {
        let r = sqrt_psd(&Psd::from_nonneg_diag(&[4., 9.]), &tol()).unwrap();
        assert!((r.matrix() - &Matrix::from_diag(&[2., 3.])).norm_max() < 1e-15);
        let z = sqrt_psd(&Psd::<f64>::zeros(2), &tol()).unwrap();
        assert_eq!(z.norm_max(), 0.0);
    }

    #[test]
    fn polar_of_nilpotent_is_swap() {
        let m = real(&[vec![0., 1.], vec![0., 0.]]);
        let u = polar_unitary(&m).unwrap();
        assert!((u.matrix() - &real(&[vec![0., 1.], vec![1., 0.]])).norm_max() < 1e-15);
        let back = u.matrix() * matrix_abs(&m).unwrap().matrix();
        assert!((&back - &m).norm_max() < 1e-15);
    }

    #[test]
    fn polar_of_positive_definite_is_identity() {
        let p = real(&[vec![2., 1.], vec![1., 3.]]);
        let u = polar_unitary(&p).unwrap();
        assert!((u.matrix() - &Matrix::identity(2)).norm_max() < 1e-14);
    }

    #[test]
    fn sign_of_singular_diagonal() {
        let h = Hermitian::from_real_diag(&[3., -2., 0.]);
        let v = hermitian_sign_symmetry(&h, &tol()).unwrap();
        assert_eq!(v.matrix(), &Matrix::from_diag(&[1., -1., 1.]));
        let s = Hermitian::new(real(&[vec![0., 1.], vec![1., 0.]]), &tol()).unwrap();
        let v = hermitian_sign_symmetry(&s, &tol()).unwrap();
        assert!((v.matrix() - s.matrix()).norm_max() < 1e-15);
    }

    #[test]
    fn geometric_mean_commuting_cases() {
        let g = geometric_mean(&Psd::scalar(3, 4.0), &Psd::scalar(3, 9.0), &tol()).unwrap();
        assert!((g.matrix() - &Matrix::scalar(3, 6.0)).norm_max() < 1e-13);
        let t = 0.5;
        let g = geometric_mean(
            &Psd::from_nonneg_diag(&[t, 1. / t]),
            &Psd::from_nonneg_diag(&[1. / t, t]),
            &tol(),
        )
        .unwrap();
        assert!((g.matrix() - &Matrix::identity(2)).norm_max() < 1e-14);
    }

    #[test]
    fn geometric_mean_singular_commuting() {
        // diag(1,0) # diag(1,0) = diag(1, eps) in the regularized extension
        let p = Psd::from_nonneg_diag(&[1.0, 0.0]);
        let g = geometric_mean(&p, &p, &tol()).unwrap();
        assert!((g.matrix() - p.matrix()).norm_max() < 1e-11);
    }

    #[test]
    fn unitary_link_trivial() {
        let w = geo_mean_unitary_link(&Psd::scalar(2, 4.0), &Psd::scalar(2, 9.0), &tol()).unwrap();
        assert!((w.matrix() - &Matrix::identity(2)).norm_max() < 1e-14);
        let err = geo_mean_unitary_link(&Psd::from_nonneg_diag(&[1.0, 0.0]), &Psd::identity(2), &tol());
        assert!(matches!(err, Err(Error::SingularInput { .. })));
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let h = Hermitian::from_real_diag(&[1.0, -0.1]);
        let p = Psd::trusted(h);
        assert!(matches!(sqrt_psd(&p, &tol()), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn abs_complex_phase() {
        let m = Matrix::scalar(2, 1.0).scale_complex(Complex::new(0.0, 2.0));
        let a = matrix_abs(&m).unwrap();
        assert!((a.matrix() - &Matrix::scalar(2, 2.0)).norm_max() < 1e-15);
    }
}
