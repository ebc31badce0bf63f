//! The explicit extremal families for the constants `1/4` and `k/4`.

use serde::{Deserialize, Serialize};

use crate::checks::projection_ratio;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_abs, matrix_abs, svd, Hermitian, Matrix, ToleranceCfg};
use crate::witness::{diamond_parts, DiamondOp};
use crate::blocks::PsdBlock;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeFamily {
    Niceex,
    SchurNiceex,
    DominancePair,
    NormalSchurPair,
    Referee,
    Projection,
}

impl std::str::FromStr for ProbeFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "niceex" => Ok(ProbeFamily::Niceex),
            "schur" | "schur_niceex" => Ok(ProbeFamily::SchurNiceex),
            "dominance" | "dominance_pair" => Ok(ProbeFamily::DominancePair),
            "normal-schur" | "normal_schur" | "normal_schur_pair" => Ok(ProbeFamily::NormalSchurPair),
            "referee" => Ok(ProbeFamily::Referee),
            "projection" => Ok(ProbeFamily::Projection),
            other => Err(Error::InvalidConfig(format!("unknown probe family {other:?}"))),
        }
    }
}

impl ProbeFamily {
    pub fn is_parametrized(&self) -> bool {
        matches!(self, ProbeFamily::Niceex | ProbeFamily::SchurNiceex | ProbeFamily::Projection)
    }
}

/// One evaluated family member. For the projection family `bound` is the
/// closed form of the ratio rather than an upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub family: ProbeFamily,
    pub param: Option<f64>,
    pub ratio: f64,
    pub bound: f64,
    /// `bound - ratio`.
    pub gap: f64,
}

impl ProbeResult {
    fn new(family: ProbeFamily, param: Option<f64>, ratio: f64, bound: f64) -> Self {
        Self {
            family,
            param,
            ratio,
            bound,
            gap: bound - ratio,
        }
    }
}

fn tol() -> ToleranceCfg<f64> {
    ToleranceCfg::default()
}

fn swap() -> Matrix<f64> {
    Matrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).expect("finite")
}

/// `λ₁(lhs - base) / λ₁(base)`.
pub fn excess_ratio(lhs: &Hermitian<f64>, base: &Hermitian<f64>) -> Result<f64> {
    let top = lhs.sub(base).eigenvalues()?.max();
    Ok(top / base.eigenvalues()?.max())
}

/// `[[diag(t, 0), e₁e₂ᵀ], [e₂e₁ᵀ, diag(0, 1/t)]]`.
pub fn niceex_block(t: f64) -> Result<PsdBlock<f64>> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveParam(t));
    }
    PsdBlock::new(
        Matrix::from_diag(&[t, 0.0]),
        Matrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]])?,
        Matrix::from_diag(&[0.0, 1.0 / t]),
        &tol(),
    )
}

/// `A = B = diag(√t, 1/√t)` with `X` the 2×2 swap.
pub fn schur_niceex_block(t: f64) -> Result<PsdBlock<f64>> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveParam(t));
    }
    let d = Matrix::from_diag(&[t.sqrt(), 1.0 / t.sqrt()]);
    PsdBlock::new(d.clone(), swap(), d, &tol())
}

/// `λ₁(|X⋄X*| - A⋄B) / λ₁(A⋄B)` on a block.
pub fn block_ratio(blk: &PsdBlock<f64>, op: DiamondOp) -> Result<f64> {
    let (h, c) = diamond_parts(blk, op);
    excess_ratio(hermitian_abs(&h)?.hermitian(), c.hermitian())
}

/// `op = Plus` uses the niceex block, `op = Schur` its Schur analogue.
pub fn probe_niceex(t: f64, op: DiamondOp) -> Result<ProbeResult> {
    let (blk, family) = match op {
        DiamondOp::Plus => (niceex_block(t)?, ProbeFamily::Niceex),
        DiamondOp::Schur => (schur_niceex_block(t)?, ProbeFamily::SchurNiceex),
        DiamondOp::Minus => return Err(Error::InvalidConfig("niceex probes use plus or schur".into())),
    };
    Ok(ProbeResult::new(family, Some(t), block_ratio(&blk, op)?, 0.25))
}

/// `T = diag(2, 1/2)`, `S` the swap.
pub fn dominance_pair() -> (Hermitian<f64>, Hermitian<f64>) {
    (Hermitian::symmetrized(&swap()), Hermitian::from_real_diag(&[2.0, 0.5]))
}

/// Ratio `λ₁(|S| - T) / λ₁(T)` for the dominance pair with `T` shifted by
/// `shift · I`.
pub fn probe_dominance_shifted(shift: f64) -> Result<ProbeResult> {
    let (s, t) = dominance_pair();
    let t = t.add(&Hermitian::symmetrized(&Matrix::scalar(2, shift)));
    let ratio = excess_ratio(hermitian_abs(&s)?.hermitian(), &t)?;
    Ok(ProbeResult::new(ProbeFamily::DominancePair, (shift != 0.0).then_some(shift), ratio, 0.25))
}

pub fn probe_dominance_pair() -> Result<ProbeResult> {
    probe_dominance_shifted(0.0)
}

/// `A = [[2, 1], [1, 1/2]]`, `B` the swap.
pub fn normal_schur_pair() -> (Matrix<f64>, Matrix<f64>) {
    (
        Matrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 0.5]]).expect("finite"),
        swap(),
    )
}

/// Ratio `λ₁(|A∘B + A*∘B*|/2 - |A|∘|B|) / λ₁(|A|∘|B|)`.
pub fn probe_normal_schur_pair() -> Result<ProbeResult> {
    let (a, b) = normal_schur_pair();
    let h = Hermitian::symmetrized(&(&a.hadamard(&b) + &a.adjoint().hadamard(&b.adjoint())).scale(0.5));
    let base = matrix_abs(&a)?.schur(&matrix_abs(&b)?);
    let ratio = excess_ratio(hermitian_abs(&h)?.hermitian(), base.hermitian())?;
    Ok(ProbeResult::new(ProbeFamily::NormalSchurPair, None, ratio, 0.25))
}

/// The two orthogonal rank-one projections `P`, `Q` of the referee example.
pub fn referee_projections() -> (Matrix<f64>, Matrix<f64>) {
    let r3 = 3f64.sqrt();
    let half = |rows: [[f64; 3]; 3]| {
        Matrix::from_real_rows(&rows.iter().map(|r| r.iter().map(|x| x / 2.0).collect()).collect::<Vec<_>>())
            .expect("finite")
    };
    (
        half([[1.0, 0.5, r3 / 2.0], [0.5, 0.25, r3 / 4.0], [r3 / 2.0, r3 / 4.0, 0.75]]),
        half([[1.0, -0.5, -r3 / 2.0], [-0.5, 0.25, r3 / 4.0], [-r3 / 2.0, r3 / 4.0, 0.75]]),
    )
}

/// `C₁ = P - Q`, `C₂ = V C₁ V*` with `V = diag(1, 1, -1)`.
pub fn referee_pair() -> (Matrix<f64>, Matrix<f64>) {
    let (p, q) = referee_projections();
    let c1 = &p - &q;
    let v = Matrix::from_diag(&[1.0, 1.0, -1.0]);
    let c2 = c1.conjugate_by(&v);
    (c1, c2)
}

/// Everything the referee construction asserts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefereeDetail {
    pub result: ProbeResult,
    /// `max(‖PQ‖_max, ‖QP‖_max)`.
    pub orthogonality: f64,
    pub abs_sum_spectrum: Vec<f64>,
    pub sum_abs_spectrum: Vec<f64>,
}

pub fn referee_detail() -> Result<RefereeDetail> {
    let (p, q) = referee_projections();
    let orthogonality = (&p * &q).norm_max().max((&q * &p).norm_max());
    let (c1, c2) = referee_pair();
    let abs_sum = matrix_abs(&(&c1 + &c2))?;
    let sum_abs = matrix_abs(&c1)?.add(&matrix_abs(&c2)?);
    let value = triangle_objective(&[c1, c2])?;
    Ok(RefereeDetail {
        result: ProbeResult::new(ProbeFamily::Referee, None, value, 0.5),
        orthogonality,
        abs_sum_spectrum: abs_sum.eigenvalues()?.values().to_vec(),
        sum_abs_spectrum: sum_abs.eigenvalues()?.values().to_vec(),
    })
}

pub fn probe_referee() -> Result<ProbeResult> {
    Ok(referee_detail()?.result)
}

pub fn probe_projection(a: f64) -> Result<ProbeResult> {
    let r = projection_ratio(a)?;
    Ok(ProbeResult::new(ProbeFamily::Projection, Some(a), r.ratio, r.closed_form))
}

/// `λ_max(|Σ A_j| - Σ |A_j|)`, the quantity bounded by `k/4`.
pub fn triangle_objective(contractions: &[Matrix<f64>]) -> Result<f64> {
    let first = contractions.first().ok_or(Error::EmptyFactorList)?;
    let n = first.dim();
    let mut sum = Matrix::zeros(n);
    let mut bad = Vec::new();
    let mut sig = Vec::new();
    let mut abs_sum = Matrix::zeros(n);
    for (i, m) in contractions.iter().enumerate() {
        first.ensure_same_dim(m)?;
        let (_, s, w) = svd(m)?;
        if s.max() > 1.0 + tol().rel {
            bad.push(i);
            sig.push(s.max());
        }
        abs_sum = &abs_sum + &Matrix::congruence_diag(w.matrix(), s.values());
        sum = &sum + m;
    }
    if !bad.is_empty() {
        return Err(Error::NotContraction {
            positions: bad,
            sigma_max: sig,
        });
    }
    let lhs = matrix_abs(&sum)?;
    Ok(Hermitian::symmetrized(&(lhs.matrix() - &abs_sum)).eigenvalues()?.max())
}

/// Nearest contraction in spectral norm: singular values clipped at 1.
pub fn project_contraction(m: &Matrix<f64>) -> Result<Matrix<f64>> {
    let (u, s, w) = svd(m)?;
    if s.max() <= 1.0 {
        return Ok(m.clone());
    }
    let us = Matrix::from_fn(m.dim(), |i, j| u.matrix()[(i, j)] * s.values()[j].min(1.0));
    Ok(&us * &w.adjoint().into_matrix())
}

/// Sweep of a parametrized family over `points` evenly spaced values in
/// `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeScan {
    pub rows: Vec<ProbeResult>,
    /// First parameter attaining the largest ratio.
    pub argmax: Option<f64>,
    pub max_ratio: f64,
}

pub fn probe_scan(family: ProbeFamily, lo: f64, hi: f64, points: usize) -> Result<ProbeScan> {
    let rows = match family {
        ProbeFamily::Niceex | ProbeFamily::SchurNiceex | ProbeFamily::Projection => {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) || points == 0 || (points == 1 && lo != hi) {
                return Err(Error::InvalidConfig(format!("bad range [{lo}, {hi}] with {points} points")));
            }
            (0..points)
                .map(|i| {
                    let p = if points == 1 { lo } else { lo + (hi - lo) * i as f64 / (points - 1) as f64 };
                    match family {
                        ProbeFamily::Niceex => probe_niceex(p, DiamondOp::Plus),
                        ProbeFamily::SchurNiceex => probe_niceex(p, DiamondOp::Schur),
                        _ => probe_projection(p),
                    }
                })
                .collect::<Result<Vec<_>>>()?
        }
        ProbeFamily::DominancePair => vec![probe_dominance_pair()?],
        ProbeFamily::NormalSchurPair => vec![probe_normal_schur_pair()?],
        ProbeFamily::Referee => vec![probe_referee()?],
    };
    let (argmax, max_ratio) = rows.iter().fold((None, f64::NEG_INFINITY), |(a, m), r| {
        if r.ratio > m {
            (r.param, r.ratio)
        } else {
            (a, m)
        }
    });
    Ok(ProbeScan { rows, argmax, max_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn niceex_closed_form() {
        for t in [0.1, 0.3, 0.5, 0.9] {
            let r = probe_niceex(t, DiamondOp::Plus).unwrap();
            assert!((r.ratio - t * (1.0 - t)).abs() < 1e-14);
            let s = probe_niceex(1.0 / t, DiamondOp::Plus).unwrap();
            assert!((r.ratio - s.ratio).abs() < 1e-12);
        }
        assert!(probe_niceex(1.0, DiamondOp::Plus).unwrap().ratio.abs() < 1e-15);
        assert!(matches!(probe_niceex(0.0, DiamondOp::Plus), Err(Error::NonpositiveParam(_))));
    }

    #[test]
    fn fixed_pairs() {
        assert!(probe_dominance_pair().unwrap().gap.abs() < 1e-12);
        assert!(probe_normal_schur_pair().unwrap().gap.abs() < 1e-12);
        assert!(probe_dominance_shifted(0.1).unwrap().gap > probe_dominance_pair().unwrap().gap);
        let d = referee_detail().unwrap();
        assert!(d.orthogonality < 1e-12);
        assert!((d.result.ratio - 0.5).abs() < 1e-12);
    }

    #[test]
    fn projection_idempotent() {
        let m = Matrix::from_real_rows(&[vec![3.0, 1.0], vec![0.0, 0.5]]).unwrap();
        let p = project_contraction(&m).unwrap();
        let pp = project_contraction(&p).unwrap();
        assert!((&p - &pp).norm_max() < 1e-12);
        assert!(svd(&p).unwrap().1.max() <= 1.0 + 1e-12);
    }

    #[test]
    fn scan_argmax() {
        let s = probe_scan(ProbeFamily::Niceex, 0.1, 10.0, 199).unwrap();
        assert!((s.argmax.unwrap() - 0.5).abs() < 1e-9);
        assert!((s.max_ratio - 0.25).abs() < 1e-12);
        assert!(probe_scan(ProbeFamily::Niceex, 1.0, 0.5, 10).is_err());
    }
}
