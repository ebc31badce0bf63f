//! Independent oracles shared by the integration tests. None of these route
//! through the Jacobi solver.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

use blockineq::linalg::{Hermitian, Matrix};
use blockineq::random::complex_gaussian;

pub type C = Complex64;

/// Characteristic polynomial coefficients `c[0..=n]` (`c[n] = 1`) of a square
/// matrix by Faddeev-LeVerrier.
pub fn charpoly(m: &Matrix<f64>) -> Vec<C> {
    let n = m.dim();
    let mut c = vec![C::new(0.0, 0.0); n + 1];
    c[n] = C::new(1.0, 0.0);
    let mut mk = Matrix::<f64>::zeros(n);
    for k in 1..=n {
        let mut next = m * &mk;
        for i in 0..n {
            next[(i, i)] += c[n - k + 1];
        }
        mk = next;
        let t = (m * &mk).trace();
        c[n - k] = -t / k as f64;
    }
    c
}

fn horner(c: &[C], z: C) -> (C, C) {
    let mut p = C::new(0.0, 0.0);
    let mut dp = C::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All roots of a monic polynomial: Durand-Kerner iteration, then Newton
/// polishing on each root.
pub fn poly_roots(c: &[C]) -> Vec<C> {
    let n = c.len() - 1;
    let bound = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let seed = C::new(0.4, 0.9);
    let mut z: Vec<C> = (0..n).map(|i| seed.powu(i as u32) * bound).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let (p, _) = horner(c, z[i]);
            let mut den = C::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            let step = p / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..5 {
            let (p, dp) = horner(c, *r);
            if dp.norm() == 0.0 {
                break;
            }
            *r -= p / dp;
        }
    }
    z
}

/// Eigenvalues of a Hermitian matrix as real roots of its characteristic
/// polynomial, sorted non-increasing.
pub fn charpoly_eigenvalues(h: &Hermitian<f64>) -> Vec<f64> {
    let mut r: Vec<f64> = poly_roots(&charpoly(h.matrix())).iter().map(|z| z.re).collect();
    r.sort_by(|a, b| b.total_cmp(a));
    r
}

/// `min v*Hv` over `samples` random complex unit vectors.
pub fn quadratic_form_min<R: Rng>(h: &Hermitian<f64>, samples: usize, rng: &mut R) -> f64 {
    let n = h.dim();
    let m = h.matrix();
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        let v: Vec<C> = (0..n).map(|_| complex_gaussian::<f64, _>(rng)).collect();
        let norm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        let mut q = C::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                q += v[i].conj() * m[(i, j)] * v[j];
            }
        }
        best = best.min(q.re / norm2);
    }
    best
}

/// `U diag(d) U*` for a Haar unitary built by Gram-Schmidt on a Ginibre
/// matrix (no SVD involved).
pub fn hermitian_with_spectrum<R: Rng>(d: &[f64], rng: &mut R) -> Hermitian<f64> {
    let n = d.len();
    let mut cols: Vec<Vec<C>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C> = (0..n).map(|_| complex_gaussian::<f64, _>(rng)).collect();
        for u in &cols {
            let p: C = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= p * y;
            }
        }
        let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if nv > 1e-8 {
            cols.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    let u = Matrix::from_fn(n, |i, j| cols[j][i]);
    Hermitian::symmetrized(&Matrix::congruence_diag(&u, d))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn matrix_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    (a - b).norm_max()
}
