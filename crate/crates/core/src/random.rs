//! Seeded random matrices (complex Ginibre and derived ensembles).

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{polar_unitary, Hermitian, Matrix, Psd, Unitary};
use crate::scalar::Real;

/// Generator used everywhere a seed is accepted.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer applied to `seed + (index + 1)·γ`; gives independent
/// child seeds `hash(seed, index)` for restarts and corpus items.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Complex::new(T::lit(re * s), T::lit(im * s))
}

/// `rows × cols` matrix of iid standard complex Gaussians, row-major.
pub fn gaussian_rect<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Vec<Vec<Complex<T>>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| complex_gaussian(rng)).collect())
        .collect()
}

/// Square complex Ginibre matrix.
pub fn ginibre<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<T> {
    Matrix::from_fn(n, |_, _| complex_gaussian(rng))
}

/// Real Gaussian matrix (imaginary parts zero).
pub fn real_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix<T> {
    Matrix::from_fn(n, |_, _| {
        let x: f64 = rng.sample(StandardNormal);
        Complex::new(T::lit(x), T::zero())
    })
}

/// Gram matrix `G*G` of a `rank × cols` Ginibre factor.
pub fn gram_of_factor<T: Real>(g: &[Vec<Complex<T>>], cols: usize) -> Psd<T> {
    let m = Matrix::from_fn(cols, |i, j| {
        g.iter()
            .map(|row| row[i].conj() * row[j])
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    });
    Psd::trusted(Hermitian::symmetrized(&m))
}

/// Random PSD matrix of the given rank (Wishart-type).
pub fn random_psd<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> Psd<T> {
    let g = gaussian_rect(rng, rank, n);
    gram_of_factor(&g, n)
}

/// Random Hermitian matrix `(G + G*)/2`.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Hermitian<T> {
    Hermitian::symmetrized(&ginibre(rng, n))
}

/// Haar-distributed unitary: the polar factor of a Ginibre matrix.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Unitary<T> {
    polar_unitary(&ginibre::<T, R>(rng, n)).expect("Jacobi SVD converges on Ginibre input")
}

/// Random contraction: Ginibre matrix divided by its largest singular value
/// times `shrink`.
pub fn random_contraction<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, shrink: T) -> Matrix<T> {
    let g = ginibre::<T, R>(rng, n);
    let (_, s, _) = crate::linalg::svd(&g).expect("Jacobi SVD converges on Ginibre input");
    g.scale(shrink / s.max().max(T::min_positive_value()))
}
