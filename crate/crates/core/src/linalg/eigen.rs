//! Cyclic Jacobi eigensolver for complex Hermitian matrices and one-sided
//! (Hestenes) Jacobi SVD.

use num_complex::Complex;

use super::matrix::Matrix;
use super::types::{Hermitian, Spectrum, Unitary};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Sweep cap shared by both Jacobi variants.
pub const MAX_SWEEPS: usize = 64;

/// Unitary plane rotation `G` acting on coordinates `(p, q)`:
/// `G_pp = c`, `G_pq = s`, `G_qp = -s·conj(e)`, `G_qq = c·conj(e)`.
/// Chosen so that `(G* H G)_pq = 0` for the 2×2 Hermitian
/// `[[h_pp, h_pq], [conj h_pq, h_qq]]`.
#[derive(Clone, Copy)]
struct Rotation<T: Real> {
    c: T,
    s: T,
    phase: Complex<T>,
}

impl<T: Real> Rotation<T> {
    fn annihilating(hpp: T, hqq: T, hpq: Complex<T>) -> Option<Self> {
        let r = hpq.norm();
        if r == T::zero() {
            return None;
        }
        let phase = hpq / r;
        let theta = (hqq - hpp) / (r + r);
        let t = if theta.abs() > T::lit(1e150) {
            T::one() / (theta + theta)
        } else {
            let sgn = if theta >= T::zero() { T::one() } else { -T::one() };
            sgn / (theta.abs() + (theta * theta + T::one()).sqrt())
        };
        let c = T::one() / (t * t + T::one()).sqrt();
        Some(Self { c, s: t * c, phase })
    }

    /// `M <- M G` (columns p, q).
    fn apply_right(&self, m: &mut Matrix<T>, p: usize, q: usize) {
        let pc = self.phase.conj();
        for k in 0..m.dim() {
            let mp = m[(k, p)];
            let mq = m[(k, q)];
            m[(k, p)] = mp * self.c - mq * pc * self.s;
            m[(k, q)] = mp * self.s + mq * pc * self.c;
        }
    }

    /// `M <- G* M` (rows p, q).
    fn apply_left_adjoint(&self, m: &mut Matrix<T>, p: usize, q: usize) {
        for k in 0..m.dim() {
            let mp = m[(p, k)];
            let mq = m[(q, k)];
            m[(p, k)] = mp * self.c - mq * self.phase * self.s;
            m[(q, k)] = mp * self.s + mq * self.phase * self.c;
        }
    }
}

fn off_diagonal_norm<T: Real>(a: &Matrix<T>) -> T {
    let n = a.dim();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi<T: Real>(h: &Hermitian<T>, want_vectors: bool) -> Result<(Vec<T>, Option<Matrix<T>>)> {
    let n = h.dim();
    let mut a = h.matrix().clone();
    let mut v = want_vectors.then(|| Matrix::identity(n));
    let scale = a.norm_fro();
    let target = T::epsilon() * scale * T::lit(0.5);

    let mut converged = scale == T::zero();
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off = off_diagonal_norm(&a);
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let Some(rot) = Rotation::annihilating(a[(p, p)].re, a[(q, q)].re, a[(p, q)]) else {
                    continue;
                };
                rot.apply_right(&mut a, p, q);
                rot.apply_left_adjoint(&mut a, p, q);
                a[(p, q)] = Complex::new(T::zero(), T::zero());
                a[(q, p)] = Complex::new(T::zero(), T::zero());
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
                if let Some(v) = v.as_mut() {
                    rot.apply_right(v, p, q);
                }
            }
        }
    }
    if !converged {
        let off = off_diagonal_norm(&a);
        if off > target {
            return Err(Error::NotConverged {
                sweeps: MAX_SWEEPS,
                residual: off.as_f64(),
            });
        }
    }
    Ok(((0..n).map(|i| a[(i, i)].re).collect(), v))
}

/// Descending permutation of `vals`; ties keep their original order.
fn descending_order<T: Real>(vals: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..vals.len()).collect();
    idx.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap_or(std::cmp::Ordering::Equal));
    idx
}

/// Eigendecomposition `H = U diag(λ) U*` with `λ` sorted non-increasing.
pub fn eigh<T: Real>(h: &Hermitian<T>) -> Result<(Spectrum<T>, Unitary<T>)> {
    let (vals, vecs) = jacobi(h, true)?;
    let vecs = vecs.expect("vectors requested");
    let order = descending_order(&vals);
    let n = h.dim();
    let u = Matrix::from_fn(n, |i, j| vecs[(i, order[j])]);
    let sorted = order.iter().map(|&k| vals[k]).collect();
    Ok((Spectrum::new(sorted), Unitary::trusted(u)))
}

pub(crate) fn eigh_values<T: Real>(h: &Hermitian<T>) -> Result<Spectrum<T>> {
    let (vals, _) = jacobi(h, false)?;
    Ok(Spectrum::new(vals))
}

/// Singular value decomposition `M = U diag(σ) W*`, σ sorted non-increasing.
///
/// One-sided Jacobi on the columns of `M`; left vectors for (numerically)
/// zero singular values are completed deterministically from the standard
/// basis.
pub fn svd<T: Real>(m: &Matrix<T>) -> Result<(Unitary<T>, Spectrum<T>, Unitary<T>)> {
    m.check_finite()?;
    let n = m.dim();
    let mut w = m.clone();
    let mut v = Matrix::identity(n);
    let eps = T::epsilon();
    // γ carries rounding of order n·eps·‖w_p‖‖w_q‖; a tighter cutoff can stall
    let orth_tol = eps * T::from_usize_lossy(n.max(1));

    let mut converged = false;
    let mut worst = T::zero();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        worst = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = Complex::new(T::zero(), T::zero());
                for k in 0..n {
                    let wp = w[(k, p)];
                    let wq = w[(k, q)];
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                let g = gamma.norm();
                let bound = (alpha * beta).sqrt();
                if g == T::zero() || g <= orth_tol * bound {
                    continue;
                }
                worst = worst.max(g / bound);
                if let Some(rot) = Rotation::annihilating(alpha, beta, gamma) {
                    rot.apply_right(&mut w, p, q);
                    rot.apply_right(&mut v, p, q);
                    rotated = true;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged {
            sweeps: MAX_SWEEPS,
            residual: worst.as_f64(),
        });
    }

    let norms: Vec<T> = (0..n)
        .map(|j| (0..n).map(|k| w[(k, j)].norm_sqr()).sum::<T>().sqrt())
        .collect();
    let order = descending_order(&norms);
    let sigma: Vec<T> = order.iter().map(|&j| norms[j]).collect();
    let smax = sigma.first().copied().unwrap_or_else(T::zero);
    let cutoff = smax * eps * T::from_usize_lossy(n.max(1));

    let mut u = Matrix::zeros(n);
    let mut filled = Vec::with_capacity(n);
    for (col, &j) in order.iter().enumerate() {
        if sigma[col] > cutoff && sigma[col] > T::min_positive_value() {
            for k in 0..n {
                u[(k, col)] = w[(k, j)] / sigma[col];
            }
            filled.push(col);
        }
    }
    complete_orthonormal(&mut u, &filled);
    let wmat = Matrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok((
        Unitary::trusted(u),
        Spectrum::new(sigma),
        Unitary::trusted(wmat),
    ))
}

/// Fills the columns of `u` not listed in `filled` with an orthonormal
/// completion, greedily taking the standard basis vector with the largest
/// residual after projection.
fn complete_orthonormal<T: Real>(u: &mut Matrix<T>, filled: &[usize]) {
    let n = u.dim();
    let mut basis: Vec<Vec<Complex<T>>> = filled.iter().map(|&c| u.column(c)).collect();
    let missing: Vec<usize> = (0..n).filter(|c| !filled.contains(c)).collect();
    for col in missing {
        let mut best: Option<(T, Vec<Complex<T>>)> = None;
        for e in 0..n {
            let mut x = vec![Complex::new(T::zero(), T::zero()); n];
            x[e] = Complex::new(T::one(), T::zero());
            for _ in 0..2 {
                for b in &basis {
                    let dot: Complex<T> = b.iter().zip(&x).map(|(bi, xi)| bi.conj() * xi).sum();
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi -= bi * dot;
                    }
                }
            }
            let nrm = x.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            if best.as_ref().is_none_or(|(bn, _)| nrm > *bn) {
                best = Some((nrm, x));
            }
        }
        let (nrm, x) = best.expect("n > 0");
        let x: Vec<Complex<T>> = x.into_iter().map(|z| z / nrm).collect();
        for k in 0..n {
            u[(k, col)] = x[k];
        }
        basis.push(x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ToleranceCfg;

    fn herm(rows: &[Vec<f64>]) -> Hermitian<f64> {
        Hermitian::new(Matrix::from_real_rows(rows).unwrap(), &ToleranceCfg::default()).unwrap()
    }

    #[test]
    fn diagonal_input_sorted() {
        let (s, u) = eigh(&herm(&[vec![1., 0., 0.], vec![0., 3., 0.], vec![0., 0., 2.]])).unwrap();
        assert_eq!(s.values(), &[3.0, 2.0, 1.0]);
        // permutation matrix
        for j in 0..3 {
            let col = u.column(j);
            assert_eq!(col.iter().filter(|z| z.norm() == 1.0).count(), 1);
        }
    }

    #[test]
    fn swap_spectrum() {
        let (s, _) = eigh(&herm(&[vec![0., 1.], vec![1., 0.]])).unwrap();
        assert!((s.lambda(1) - 1.0).abs() < 1e-15);
        assert!((s.lambda(2) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let i = Complex::new(0.0, 1.0);
        let o = Complex::new(1.0, 0.0);
        let m: Matrix<f64> = Matrix::from_vec(2, vec![o * 2.0, i, -i, o * 2.0]).unwrap();
        let h = Hermitian::new(m.clone(), &ToleranceCfg::default()).unwrap();
        let (s, u) = eigh(&h).unwrap();
        assert!((s.lambda(1) - 3.0).abs() < 1e-14 && (s.lambda(2) - 1.0).abs() < 1e-14);
        let r = Matrix::congruence_diag(&u, s.values());
        assert!((&r - &m).norm_max() < 1e-14);
    }

    #[test]
    fn svd_identity_and_rank_one() {
        let (u, s, w) = svd(&Matrix::<f64>::identity(3)).unwrap();
        assert_eq!(s.values(), &[1.0, 1.0, 1.0]);
        assert!((&(&u.matrix().clone() * &w.adjoint()) - &Matrix::identity(3)).norm_max() < 1e-15);

        let m = Matrix::from_real_rows(&[vec![0., 2.], vec![0., 0.]]).unwrap();
        let (u, s, w) = svd(&m).unwrap();
        assert_eq!(s.values(), &[2.0, 0.0]);
        let back = &(&u.matrix().clone() * &Matrix::from_diag(s.values())) * &w.adjoint();
        assert!((&back - &m).norm_max() < 1e-15);
        assert!(u.unitary_deviation() < 1e-15);
    }

    #[test]
    fn svd_zero_matrix() {
        let (u, s, w) = svd(&Matrix::<f64>::zeros(3)).unwrap();
        assert_eq!(s.values(), &[0.0; 3]);
        assert!(u.unitary_deviation() < 1e-15 && w.unitary_deviation() < 1e-15);
    }
}
