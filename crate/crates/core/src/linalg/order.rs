//! Loewner order, majorization, and the small structural products.

use serde::Serialize;

use super::matrix::Matrix;
use super::types::{Hermitian, Spectrum, ToleranceCfg};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Outcome of `L <= R`: `margin = λ_min(R - L)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LoewnerVerdict<T> {
    pub pass: bool,
    pub margin: T,
    /// `‖R - L‖_op`, the scale the pass threshold is relative to.
    pub scale: T,
}

/// Tests `l <= r` in the Loewner order.
///
/// Passes iff `λ_min(r - l) >= -rel · max(1, ‖r - l‖_op)`.
pub fn loewner_leq<T: Real>(
    l: &Hermitian<T>,
    r: &Hermitian<T>,
    tol: &ToleranceCfg<T>,
) -> Result<LoewnerVerdict<T>> {
    l.ensure_same_dim(r)?;
    let diff = r.sub(l);
    let spec = diff.eigenvalues()?;
    let margin = spec.min();
    let scale = spec.abs_max();
    Ok(LoewnerVerdict {
        pass: margin >= -tol.slack(scale),
        margin,
        scale,
    })
}

fn validated<T: Real>(s: &Spectrum<T>, tol: &ToleranceCfg<T>) -> Result<Vec<T>> {
    let slack = tol.slack(s.abs_max());
    s.values()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if v < -slack {
                Err(Error::InvalidSpectrum {
                    index: i,
                    value: v.as_f64(),
                })
            } else {
                Ok(v.max(T::zero()))
            }
        })
        .collect()
}

/// Weak log-majorization `x ≺_wlog y`: every leading partial product of `x`
/// is at most `(1 + rel)` times that of `y`, with zero-padding.
///
/// Entries below the noise floor `rel · max(1, x_1, y_1)` cannot be resolved
/// in floating point: they count as zero on the `x` side and are raised to
/// the floor on the `y` side.
pub fn weak_log_majorization<T: Real>(
    x: &Spectrum<T>,
    y: &Spectrum<T>,
    tol: &ToleranceCfg<T>,
) -> Result<bool> {
    let xs = validated(x, tol)?;
    let ys = validated(y, tol)?;
    let top = xs.first().copied().unwrap_or_else(T::zero).max(ys.first().copied().unwrap_or_else(T::zero));
    let floor = tol.slack(top);
    let slack = tol.rel.ln_1p();
    let len = xs.len().max(ys.len());
    let (mut lx, mut ly) = (T::zero(), T::zero());
    for k in 0..len {
        let xv = xs.get(k).copied().unwrap_or_else(T::zero);
        if xv < floor {
            return Ok(true);
        }
        let yv = ys.get(k).copied().unwrap_or_else(T::zero).max(floor);
        lx += xv.ln();
        ly += yv.ln();
        if lx > ly + slack {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Weak majorization `x ≺_w y` on leading partial sums (Ky Fan norms).
pub fn kyfan_weak_majorization<T: Real>(
    x: &Spectrum<T>,
    y: &Spectrum<T>,
    tol: &ToleranceCfg<T>,
) -> Result<bool> {
    Ok(kyfan_worst(x, y, tol)?.0)
}

/// Like [`kyfan_weak_majorization`] but also returns the partial sums at the
/// tightest `k` (1-based) as `(pass, k, lhs, rhs)`.
pub fn kyfan_worst<T: Real>(
    x: &Spectrum<T>,
    y: &Spectrum<T>,
    tol: &ToleranceCfg<T>,
) -> Result<(bool, usize, T, T)> {
    let xs = validated(x, tol)?;
    let ys = validated(y, tol)?;
    let len = xs.len().max(ys.len());
    let (mut sx, mut sy) = (T::zero(), T::zero());
    let mut worst = (true, 0, T::zero(), T::zero());
    let mut worst_gap = T::infinity();
    for k in 0..len {
        sx += xs.get(k).copied().unwrap_or_else(T::zero);
        sy += ys.get(k).copied().unwrap_or_else(T::zero);
        let gap = (sy - sx) / sy.max(T::one());
        if gap < worst_gap {
            worst_gap = gap;
            worst = (sx <= sy + tol.slack(sy), k + 1, sx, sy);
        }
        if sx > sy + tol.slack(sy) {
            return Ok((false, k + 1, sx, sy));
        }
    }
    Ok(worst)
}

/// Checked entrywise product.
pub fn schur_product<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    a.ensure_same_dim(b)?;
    Ok(a.hadamard(b))
}

/// `a ⊕ b`.
pub fn direct_sum<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    a.direct_sum(b).into_inner()
}

/// Diagonal entries of a Hermitian matrix sorted non-increasing (`δ_k^↓`).
pub fn diag_entries_desc<T: Real>(h: &Hermitian<T>) -> Spectrum<T> {
    Spectrum::new(h.diag().into_iter().map(|z| z.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Psd;

    fn tol() -> ToleranceCfg<f64> {
        ToleranceCfg::default()
    }

    fn sp(v: &[f64]) -> Spectrum<f64> {
        Spectrum::new(v.to_vec())
    }

    #[test]
    fn loewner_examples() {
        let l = Hermitian::from_real_diag(&[1., 1.]);
        let r = Hermitian::from_real_diag(&[2., 0.5]);
        let v = loewner_leq(&l, &r, &tol()).unwrap();
        assert!(!v.pass);
        assert!((v.margin + 0.5).abs() < 1e-15);

        let p = Psd::from_nonneg_diag(&[3., 0.2]);
        let v = loewner_leq(&Hermitian::zeros(2), p.hermitian(), &tol()).unwrap();
        assert!(v.pass);

        let pi = p.hermitian().add(&Hermitian::identity(2));
        let v = loewner_leq(p.hermitian(), &pi, &tol()).unwrap();
        assert!((v.margin - 1.0).abs() < 1e-14 && v.pass);
    }

    #[test]
    fn log_majorization_examples() {
        assert!(weak_log_majorization(&sp(&[1., 1.]), &sp(&[2., 0.5]), &tol()).unwrap());
        assert!(!weak_log_majorization(&sp(&[2., 0.5]), &sp(&[1., 1.]), &tol()).unwrap());
        let x = sp(&[3., 1., 0.25]);
        assert!(weak_log_majorization(&x, &x, &tol()).unwrap());
        assert!(matches!(
            weak_log_majorization(&sp(&[1., -1.]), &x, &tol()),
            Err(Error::InvalidSpectrum { index: 1, .. })
        ));
    }

    #[test]
    fn kyfan_examples() {
        assert!(kyfan_weak_majorization(&sp(&[1., 1.]), &sp(&[2., 0.5]), &tol()).unwrap());
        assert!(!kyfan_weak_majorization(&sp(&[2., 0.5]), &sp(&[1., 1.]), &tol()).unwrap());
        let x = sp(&[3., 1., 0.25]);
        assert!(kyfan_weak_majorization(&x, &x, &tol()).unwrap());
    }

    #[test]
    fn structural_products() {
        let m = Matrix::from_real_rows(&[vec![1., 5.], vec![7., 3.]]).unwrap();
        let d = schur_product(&Matrix::identity(2), &m).unwrap();
        assert_eq!(d, Matrix::from_diag(&[1., 3.]));
        assert!(schur_product(&Matrix::identity(3), &m).is_err());
        let h = Hermitian::new(
            Matrix::from_real_rows(&[vec![1., 5.], vec![5., 3.]]).unwrap(),
            &tol(),
        )
        .unwrap();
        assert_eq!(diag_entries_desc(&h).values(), &[3., 1.]);
        let s = direct_sum(&Matrix::scalar(1, 1.0), &Matrix::scalar(1, 2.0));
        assert_eq!(s, Matrix::from_diag(&[1., 2.]));
    }
}
