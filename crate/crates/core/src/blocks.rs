//! Positive semidefinite partitioned matrices `[[A, X], [X*, B]]` and their
//! standard constructions.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_abs, loewner_leq, matrix_abs, Hermitian, Matrix, Psd, ToleranceCfg};
use crate::random::{gaussian_rect, gram_of_factor, rng_from_seed};
use crate::scalar::Real;

/// A validated positive semidefinite `2n × 2n` matrix with named `n × n`
/// blocks. Validation is eager; holders may assume positivity.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdBlock<T: Real> {
    a: Psd<T>,
    x: Matrix<T>,
    b: Psd<T>,
    margin: T,
}

impl<T: Real> PsdBlock<T> {
    /// `make_block`: checks conformity, Hermitian diagonal blocks, and
    /// positivity of the assembled matrix; stores `λ_min` as the margin.
    pub fn new(a: Matrix<T>, x: Matrix<T>, b: Matrix<T>, tol: &ToleranceCfg<T>) -> Result<Self> {
        a.ensure_same_dim(&x)?;
        a.ensure_same_dim(&b)?;
        x.check_finite()?;
        let ha = Hermitian::new(a, tol)?;
        let hb = Hermitian::new(b, tol)?;
        // cheap precondition: the diagonal of a PSD matrix is nonnegative
        let diag_floor = -tol.slack(ha.norm_max().max(hb.norm_max()));
        if let Some(z) = ha.diag().iter().chain(hb.diag().iter()).find(|z| z.re < diag_floor) {
            return Err(Error::NotPsd {
                lambda_min: z.re.as_f64(),
                allowed: diag_floor.as_f64(),
            });
        }
        let full = Hermitian::symmetrized(&Matrix::from_blocks(ha.matrix(), &x, &x.adjoint(), hb.matrix()));
        let spec = full.eigenvalues()?;
        let allowed = -tol.slack(spec.max());
        if spec.min() < allowed {
            return Err(Error::NotPsd {
                lambda_min: spec.min().as_f64(),
                allowed: allowed.as_f64(),
            });
        }
        Ok(Self {
            a: Psd::trusted(ha),
            x,
            b: Psd::trusted(hb),
            margin: spec.min(),
        })
    }

    pub fn n(&self) -> usize {
        self.x.dim()
    }

    pub fn a(&self) -> &Psd<T> {
        &self.a
    }

    pub fn x(&self) -> &Matrix<T> {
        &self.x
    }

    pub fn b(&self) -> &Psd<T> {
        &self.b
    }

    /// `λ_min` of the assembled matrix at construction.
    pub fn margin(&self) -> T {
        self.margin
    }

    pub fn assembled(&self) -> Hermitian<T> {
        Hermitian::symmetrized(&Matrix::from_blocks(
            self.a.matrix(),
            &self.x,
            &self.x.adjoint(),
            self.b.matrix(),
        ))
    }

    /// `[[B, X*], [X, A]]`, the congruence by the block swap.
    pub fn swapped(&self, tol: &ToleranceCfg<T>) -> Result<Self> {
        Self::new(self.b.matrix().clone(), self.x.adjoint(), self.a.matrix().clone(), tol)
    }

    /// Entrywise product of the assembled matrices (positive by the Schur
    /// product theorem; validated anyway).
    pub fn schur(&self, o: &Self, tol: &ToleranceCfg<T>) -> Result<Self> {
        self.a.ensure_same_dim(&o.a)?;
        Self::new(
            self.a.matrix().hadamard(o.a.matrix()),
            self.x.hadamard(&o.x),
            self.b.matrix().hadamard(o.b.matrix()),
            tol,
        )
    }

    /// Blockwise sum.
    pub fn sum(&self, o: &Self, tol: &ToleranceCfg<T>) -> Result<Self> {
        self.a.ensure_same_dim(&o.a)?;
        Self::new(
            self.a.matrix() + o.a.matrix(),
            &self.x + &o.x,
            self.b.matrix() + o.b.matrix(),
            tol,
        )
    }

    /// Simultaneous congruence by `W ⊕ W`.
    pub fn congruence(&self, w: &Matrix<T>, tol: &ToleranceCfg<T>) -> Result<Self> {
        Self::new(
            self.a.matrix().conjugate_by(w),
            self.x.conjugate_by(w),
            self.b.matrix().conjugate_by(w),
            tol,
        )
    }

    pub fn cast<U: Real>(&self, tol: &ToleranceCfg<U>) -> Result<PsdBlock<U>> {
        PsdBlock::new(self.a.matrix().cast(), self.x.cast(), self.b.matrix().cast(), tol)
    }
}

/// Pairs `(A_i, B_i)` of equally sized square matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorList<T: Real> {
    pairs: Vec<(Matrix<T>, Matrix<T>)>,
}

impl<T: Real> FactorList<T> {
    pub fn new(pairs: Vec<(Matrix<T>, Matrix<T>)>) -> Result<Self> {
        let first = pairs.first().ok_or(Error::EmptyFactorList)?;
        let d = first.0.dim();
        for (a, b) in &pairs {
            for m in [a, b] {
                if m.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: m.dim(),
                    });
                }
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(Matrix<T>, Matrix<T>)] {
        &self.pairs
    }

    pub fn dim(&self) -> usize {
        self.pairs[0].0.dim()
    }

    /// `Σ A_i* A_i`.
    pub fn sum_a_star_a(&self) -> Psd<T> {
        self.sum_of(|a, _| &a.adjoint() * a)
    }

    /// `Σ B_i* B_i`.
    pub fn sum_b_star_b(&self) -> Psd<T> {
        self.sum_of(|_, b| &b.adjoint() * b)
    }

    /// `Σ A_i* B_i`.
    pub fn sum_a_star_b(&self) -> Matrix<T> {
        self.pairs
            .iter()
            .fold(Matrix::zeros(self.dim()), |acc, (a, b)| &acc + &(&a.adjoint() * b))
    }

    /// `Σ B_i* A_i`.
    pub fn sum_b_star_a(&self) -> Matrix<T> {
        self.sum_a_star_b().adjoint()
    }

    fn sum_of(&self, f: impl Fn(&Matrix<T>, &Matrix<T>) -> Matrix<T>) -> Psd<T> {
        let m = self
            .pairs
            .iter()
            .fold(Matrix::zeros(self.dim()), |acc, (a, b)| &acc + &f(a, b));
        Psd::trusted(Hermitian::symmetrized(&m))
    }
}

/// Gram block `[[Σ A_i*A_i, Σ A_i*B_i], [Σ B_i*A_i, Σ B_i*B_i]]`.
pub fn gram_block<T: Real>(f: &FactorList<T>, tol: &ToleranceCfg<T>) -> Result<PsdBlock<T>> {
    PsdBlock::new(
        f.sum_a_star_a().into_hermitian().into_matrix(),
        f.sum_a_star_b(),
        f.sum_b_star_b().into_hermitian().into_matrix(),
        tol,
    )
}

/// `[[A*A, A*B], [B*A, B*B]]`.
pub fn gram_pair_block<T: Real>(a: &Matrix<T>, b: &Matrix<T>, tol: &ToleranceCfg<T>) -> Result<PsdBlock<T>> {
    a.ensure_same_dim(b)?;
    gram_block(&FactorList::new(vec![(a.clone(), b.clone())])?, tol)
}

/// `[[|Z*|, Z], [Z*, |Z|]]`.
pub fn polar_block<T: Real>(z: &Matrix<T>, tol: &ToleranceCfg<T>) -> Result<PsdBlock<T>> {
    let left = matrix_abs(&z.adjoint())?;
    let right = matrix_abs(z)?;
    PsdBlock::new(
        left.into_hermitian().into_matrix(),
        z.clone(),
        right.into_hermitian().into_matrix(),
        tol,
    )
}

/// `[[T, S], [S, T]]` for Hermitian `S`, `T` with `±S <= T`.
pub fn dominance_block<T: Real>(
    s: &Hermitian<T>,
    t: &Hermitian<T>,
    tol: &ToleranceCfg<T>,
) -> Result<PsdBlock<T>> {
    s.ensure_same_dim(t)?;
    for (which, signed) in [("S", s.clone()), ("-S", s.scale(-T::one()))] {
        let v = loewner_leq(&signed, t, tol)?;
        if !v.pass {
            return Err(Error::DominanceViolated {
                which,
                amount: (-v.margin).as_f64(),
            });
        }
    }
    PsdBlock::new(t.matrix().clone(), s.matrix().clone(), t.matrix().clone(), tol)
}

/// Hermitian dilation `[[0, A], [A*, 0]]`.
pub fn hermitian_dilation<T: Real>(a: &Matrix<T>) -> Hermitian<T> {
    let z = Matrix::zeros(a.dim());
    Hermitian::symmetrized(&Matrix::from_blocks(&z, a, &a.adjoint(), &z))
}

/// `|[[0, A], [A*, 0]]| = |A*| ⊕ |A|`, computed blockwise.
pub fn dilation_abs<T: Real>(a: &Matrix<T>) -> Result<Psd<T>> {
    Ok(matrix_abs(&a.adjoint())?.direct_sum(&matrix_abs(a)?))
}

/// Partition of `G*G` for a `rank × 2n` complex Ginibre factor `G` drawn
/// from the seeded generator.
pub fn sample_psd_block<T: Real>(n: usize, rank: usize, seed: u64, tol: &ToleranceCfg<T>) -> Result<PsdBlock<T>> {
    let mut rng = rng_from_seed(seed);
    sample_psd_block_with(&mut rng, n, rank, tol)
}

pub fn sample_psd_block_with<T: Real, R: rand::Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    rank: usize,
    tol: &ToleranceCfg<T>,
) -> Result<PsdBlock<T>> {
    if n == 0 || rank == 0 || rank > 2 * n {
        return Err(Error::InvalidRank { rank, max: 2 * n });
    }
    let g = gaussian_rect(rng, rank, 2 * n);
    let full = gram_of_factor::<T>(&g, 2 * n);
    PsdBlock::new(full.block(0, 0, n), full.block(0, n, n), full.block(n, n, n), tol)
}

/// `|H|` of a Hermitian dilation computed through the full eigensolver; used
/// to cross-check [`dilation_abs`].
pub fn dilation_abs_direct<T: Real>(a: &Matrix<T>) -> Result<Psd<T>> {
    hermitian_abs(&hermitian_dilation(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{ginibre, rng_from_seed};

    fn tol() -> ToleranceCfg<f64> {
        ToleranceCfg::default()
    }

    fn eye(n: usize) -> Matrix<f64> {
        Matrix::identity(n)
    }

    #[test]
    fn identity_block_margin_zero() {
        let b = PsdBlock::new(eye(2), eye(2), eye(2), &tol()).unwrap();
        assert!(b.margin().abs() < 1e-15);
        assert!(matches!(
            PsdBlock::new(eye(2), eye(2).scale(2.0), eye(2), &tol()),
            Err(Error::NotPsd { .. })
        ));
        assert!(matches!(
            PsdBlock::new(eye(2), eye(3), eye(2), &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn niceex_block_valid() {
        let t = 0.5;
        let a = Matrix::from_diag(&[t, 0.0]);
        let x = Matrix::from_real_rows(&[vec![0., 1.], vec![0., 0.]]).unwrap();
        let b = Matrix::from_diag(&[0.0, 1.0 / t]);
        let blk = PsdBlock::new(a, x, b, &tol()).unwrap();
        assert!(blk.margin().abs() < 1e-15);
    }

    #[test]
    fn gram_constructions() {
        let g = gram_pair_block(&eye(2), &eye(2), &tol()).unwrap();
        assert_eq!(g.x(), &eye(2));
        assert_eq!(g.a().matrix(), &eye(2));
        assert!(matches!(FactorList::<f64>::new(vec![]), Err(Error::EmptyFactorList)));

        let mut rng = rng_from_seed(9);
        let p: Matrix<f64> = ginibre(&mut rng, 3);
        let q: Matrix<f64> = ginibre(&mut rng, 3);
        let g = gram_pair_block(&p, &q, &tol()).unwrap();
        let direct = &p.adjoint() * &q;
        assert!((g.x() - &direct).norm_max() < 1e-12);
        assert!((g.a().matrix() - &(&p.adjoint() * &p)).norm_max() < 1e-12);
        assert!((g.b().matrix() - &(&q.adjoint() * &q)).norm_max() < 1e-12);
    }

    #[test]
    fn polar_block_cases() {
        let z = Matrix::from_real_rows(&[vec![0., 1.], vec![0., 0.]]).unwrap();
        let blk = polar_block(&z, &tol()).unwrap();
        assert!((blk.a().matrix() - &Matrix::from_diag(&[1., 0.])).norm_max() < 1e-15);
        assert!((blk.b().matrix() - &Matrix::from_diag(&[0., 1.])).norm_max() < 1e-15);

        let mut rng = rng_from_seed(4);
        let u = crate::random::haar_unitary::<f64, _>(&mut rng, 3);
        let blk = polar_block(u.matrix(), &tol()).unwrap();
        assert!((blk.a().matrix() - &eye(3)).norm_max() < 1e-12);
        assert!((blk.b().matrix() - &eye(3)).norm_max() < 1e-12);
    }

    #[test]
    fn dominance_cases() {
        let s = Hermitian::zeros(2);
        let t = Hermitian::identity(2);
        assert!(dominance_block(&s, &t, &tol()).is_ok());
        let t = Hermitian::from_real_diag(&[2.0, 0.5]);
        let s = Hermitian::new(
            Matrix::from_real_rows(&[vec![0., 1.], vec![1., 0.]]).unwrap(),
            &tol(),
        )
        .unwrap();
        assert!(dominance_block(&s, &t, &tol()).is_ok());
        let err = dominance_block(&Hermitian::identity(2), &Hermitian::zeros(2), &tol());
        assert!(matches!(err, Err(Error::DominanceViolated { which: "S", .. })));
    }

    #[test]
    fn dilation_cases() {
        let d = hermitian_dilation(&eye(2));
        assert_eq!(d.block(0, 2, 2), eye(2));
        assert_eq!(hermitian_dilation(&Matrix::<f64>::zeros(2)).norm_max(), 0.0);
        let mut rng = rng_from_seed(21);
        let a: Matrix<f64> = ginibre(&mut rng, 4);
        let lhs = dilation_abs_direct(&a).unwrap();
        let rhs = dilation_abs(&a).unwrap();
        assert!((lhs.matrix() - rhs.matrix()).norm_max() < 1e-9);
    }

    #[test]
    fn sampling_is_deterministic_and_ranked() {
        let a = sample_psd_block::<f64>(3, 2, 77, &tol()).unwrap();
        let b = sample_psd_block::<f64>(3, 2, 77, &tol()).unwrap();
        assert_eq!(a, b);
        let r1 = sample_psd_block::<f64>(3, 1, 5, &tol()).unwrap();
        let spec = r1.assembled().eigenvalues().unwrap();
        assert!(spec.lambda(2).abs() < 1e-12 * spec.lambda(1));
        let full = sample_psd_block::<f64>(3, 6, 5, &tol()).unwrap();
        assert!(full.assembled().eigenvalues().unwrap().min() > 0.0);
        assert!(matches!(
            sample_psd_block::<f64>(3, 7, 5, &tol()),
            Err(Error::InvalidRank { rank: 7, max: 6 })
        ));
    }

    #[test]
    fn swap_preserves_margin() {
        let blk = sample_psd_block::<f64>(3, 4, 8, &tol()).unwrap();
        let sw = blk.swapped(&tol()).unwrap();
        assert!((blk.margin() - sw.margin()).abs() < 1e-12);
    }
}
