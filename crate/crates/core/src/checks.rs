//! Eigenvalue, diagonal-entry, norm and determinant consequences of the
//! block inequalities, each returning the two compared numbers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::blocks::{gram_block, gram_pair_block, polar_block, FactorList, PsdBlock};
use crate::error::{Error, Result};
use crate::linalg::{
    diag_entries_desc, kyfan_worst, matrix_abs, svd, weak_log_majorization, Hermitian, Matrix, Spectrum,
    ToleranceCfg,
};
use crate::scalar::Real;
use crate::witness::{abs_spectrum, diamond_parts, theorem_witness, DiamondOp, WitnessReport};

/// Exponents used for the Ky Fan spot checks of `|·|^α`.
pub const ALPHA_GRID: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 4.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    Tao,
    WeylGeo,
    GramGeo,
    Norm,
    GramNorm,
    Diag,
    Zpolar,
    Akext,
    AudehKittaneh,
    Akext2,
    BhatiaDavis,
    DetSchwarz,
}

impl CheckId {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::Tao => "tao",
            CheckId::WeylGeo => "weyl_geo",
            CheckId::GramGeo => "gram_geo",
            CheckId::Norm => "norm",
            CheckId::GramNorm => "gram_norm",
            CheckId::Diag => "diag",
            CheckId::Zpolar => "zpolar",
            CheckId::Akext => "akext",
            CheckId::AudehKittaneh => "audeh_kittaneh",
            CheckId::Akext2 => "akext2",
            CheckId::BhatiaDavis => "bhatia_davis",
            CheckId::DetSchwarz => "det_schwarz",
        }
    }
}

/// Index parameters of a check; unset fields do not apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub op: Option<DiamondOp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Ky Fan index (1-based).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_index: Option<usize>,
}

impl CheckParams {
    pub fn j(j: usize) -> Self {
        Self { j: Some(j), ..Self::default() }
    }

    pub fn with_op(mut self, op: DiamondOp) -> Self {
        self.op = Some(op);
        self
    }

    fn jk(j: usize, k: usize) -> Self {
        Self { j: Some(j), k: Some(k), ..Self::default() }
    }

    fn jkl(j: usize, k: usize, l: usize) -> Self {
        Self { j: Some(j), k: Some(k), l: Some(l), ..Self::default() }
    }
}

impl fmt::Display for CheckParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(op) = self.op {
            parts.push(format!("op={}", op.as_str()));
        }
        for (name, v) in [("j", self.j), ("k", self.k), ("l", self.l)] {
            if let Some(v) = v {
                parts.push(format!("{name}={v}"));
            }
        }
        if let Some(a) = self.alpha {
            parts.push(format!("alpha={a}"));
        }
        if let Some(k) = self.norm_index {
            parts.push(format!("norm_index={k}"));
        }
        f.write_str(&parts.join(";"))
    }
}

/// One evaluated inequality `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport<T: Real> {
    pub check_id: CheckId,
    pub params: CheckParams,
    pub lhs: T,
    pub rhs: T,
    pub pass: bool,
    /// `lhs - rhs`; positive means violated before tolerance.
    pub worst_violation: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

impl<T: Real> CheckReport<T> {
    /// Passes iff `lhs <= rhs + rel · max(1, |rhs|)`. For log-domain checks
    /// `rhs = -∞` passes only with `lhs = -∞`.
    pub fn compare(check_id: CheckId, params: CheckParams, lhs: T, rhs: T, tol: &ToleranceCfg<T>) -> Self {
        let pass = if rhs == T::neg_infinity() {
            lhs == T::neg_infinity()
        } else {
            lhs <= rhs + tol.slack(rhs)
        };
        let worst_violation = if lhs == rhs { T::zero() } else { lhs - rhs };
        Self {
            check_id,
            params,
            lhs,
            rhs,
            pass,
            worst_violation,
            note: None,
        }
    }

    /// Violation relative to `max(1, |rhs|)`, the quantity the pass rule
    /// thresholds.
    pub fn relative_violation(&self) -> T {
        if self.worst_violation == T::zero() {
            return T::zero();
        }
        self.worst_violation / self.rhs.abs().max(T::one())
    }

    /// The report with the largest relative violation (first on ties).
    pub fn worst(reports: impl IntoIterator<Item = Self>) -> Option<Self> {
        reports.into_iter().fold(None, |best: Option<Self>, r| match best {
            Some(b) if !(r.relative_violation() > b.relative_violation()) => Some(b),
            _ => Some(r),
        })
    }

    pub fn to_f64(&self) -> CheckReport<f64> {
        CheckReport {
            check_id: self.check_id,
            params: self.params,
            lhs: self.lhs.as_f64(),
            rhs: self.rhs.as_f64(),
            pass: self.pass,
            worst_violation: self.worst_violation.as_f64(),
            note: self.note,
        }
    }
}

/// Spectrum with entries below `rel · max(1, top)` set to zero. Powers with
/// small exponents would otherwise amplify rounding noise in null directions.
fn denoise<T: Real>(s: &Spectrum<T>, tol: &ToleranceCfg<T>) -> Spectrum<T> {
    let floor = tol.slack(s.abs_max());
    s.map(|x| if x < floor { T::zero() } else { x })
}

fn powered<T: Real>(s: &Spectrum<T>, alpha: T, tol: &ToleranceCfg<T>) -> Spectrum<T> {
    denoise(s, tol).map(|x| if x > T::zero() { x.powf(alpha) } else { T::zero() })
}

fn require_not_minus(op: DiamondOp) -> Result<()> {
    if op == DiamondOp::Minus {
        return Err(Error::InvalidConfig("this check is stated for plus and schur only".into()));
    }
    Ok(())
}

/// `λ²_{1+j+k}(|X⋄X*|) <= λ_{1+j}(A⋄B) · λ_{1+k}(A⋄B)`; for `⋄ = -` the
/// right side uses `A + B`.
pub fn weyl_geo_check<T: Real>(blk: &PsdBlock<T>, op: DiamondOp, j: usize, k: usize, tol: &ToleranceCfg<T>) -> Result<CheckReport<T>> {
    let (h, c) = diamond_parts(blk, op);
    let x = abs_spectrum(&h)?;
    let y = c.eigenvalues()?;
    Ok(weyl_from_spectra(&x, &y, op, j, k, CheckId::WeylGeo, tol))
}

fn weyl_from_spectra<T: Real>(x: &Spectrum<T>, y: &Spectrum<T>, op: DiamondOp, j: usize, k: usize, id: CheckId, tol: &ToleranceCfg<T>) -> CheckReport<T> {
    let l = x.lambda(1 + j + k);
    let mut r = CheckReport::compare(id, CheckParams::jk(j, k).with_op(op), l * l, y.lambda(1 + j) * y.lambda(1 + k), tol);
    if op == DiamondOp::Minus {
        r.note = Some("interpretation-dependent: minus read with A+B on the right");
    }
    r
}

/// All `(j, k)` with `0 <= j, k < n` (indices past `n` exercise the zero
/// padding).
pub fn weyl_geo_sweep<T: Real>(blk: &PsdBlock<T>, op: DiamondOp, tol: &ToleranceCfg<T>) -> Result<Vec<CheckReport<T>>> {
    let (h, c) = diamond_parts(blk, op);
    let x = abs_spectrum(&h)?;
    let y = c.eigenvalues()?;
    let n = blk.n();
    Ok((0..n)
        .flat_map(|j| (0..n).map(move |k| (j, k)))
        .map(|(j, k)| weyl_from_spectra(&x, &y, op, j, k, CheckId::WeylGeo, tol))
        .collect())
}

/// `λ²_{1+j+k}(|A*B ⋄ B*A|) <= λ_{1+j}(A*A ⋄ B*B) · λ_{1+k}(A*A ⋄ B*B)`.
pub fn gram_geo_check<T: Real>(a: &Matrix<T>, b: &Matrix<T>, op: DiamondOp, j: usize, k: usize, tol: &ToleranceCfg<T>) -> Result<CheckReport<T>> {
    require_not_minus(op)?;
    let blk = gram_pair_block(a, b, tol)?;
    let mut r = weyl_geo_check(&blk, op, j, k, tol)?;
    r.check_id = CheckId::GramGeo;
    Ok(r)
}

/// Detailed outcome of [`norm_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct NormVerdict<T: Real> {
    /// `|X⋄X*| ≺_wlog A⋄B`.
    pub wlog: bool,
    /// Every Ky Fan `k`-norm of `|·|^α` for `α` in [`ALPHA_GRID`].
    pub kyfan: bool,
    /// Tightest Ky Fan comparison.
    pub report: CheckReport<T>,
}

fn norm_verdict<T: Real>(x: &Spectrum<T>, y: &Spectrum<T>, id: CheckId, op: DiamondOp, tol: &ToleranceCfg<T>) -> Result<NormVerdict<T>> {
    let wlog = weak_log_majorization(x, y, tol)?;
    let mut kyfan = true;
    let mut reports = Vec::with_capacity(ALPHA_GRID.len());
    for &alpha in &ALPHA_GRID {
        let a = T::lit(alpha);
        let (pass, k, lhs, rhs) = kyfan_worst(&powered(x, a, tol), &powered(y, a, tol), tol)?;
        kyfan &= pass;
        let params = CheckParams {
            op: Some(op),
            alpha: Some(alpha),
            norm_index: Some(k),
            ..CheckParams::default()
        };
        reports.push(CheckReport::compare(id, params, lhs, rhs, tol));
    }
    let mut report = CheckReport::worst(reports).expect("grid is nonempty");
    report.pass = report.pass && wlog && kyfan;
    Ok(NormVerdict { wlog, kyfan, report })
}

/// `|X⋄X*|^α` is dominated by `(A⋄B)^α` in every unitarily invariant norm,
/// for every `α > 0`.
pub fn norm_check_detail<T: Real>(blk: &PsdBlock<T>, op: DiamondOp, tol: &ToleranceCfg<T>) -> Result<NormVerdict<T>> {
    require_not_minus(op)?;
    let (h, c) = diamond_parts(blk, op);
    norm_verdict(&abs_spectrum(&h)?, &c.eigenvalues()?, CheckId::Norm, op, tol)
}

pub fn norm_check<T: Real>(blk: &PsdBlock<T>, op: DiamondOp, tol: &ToleranceCfg<T>) -> Result<CheckReport<T>> {
    Ok(norm_check_detail(blk, op, tol)?.report)
}

/// `‖|A*B ⋄ B*A|^α‖ <= ‖|A*A ⋄ B*B|^α‖`.
pub fn gram_norm_check<T: Real>(a: &Matrix<T>, b: &Matrix<T>, op: DiamondOp, tol: &ToleranceCfg<T>) -> Result<CheckReport<T>> {
    let blk = gram_pair_block(a, b, tol)?;
    let mut r = norm_check(&blk, op, tol)?;
    r.check_id = CheckId::GramNorm;
    Ok(r)
}

/// `λ_{1+2j}(|Z∘Z*|) <= min{δ_{1+j}(Z*Z), δ_{1+j}(ZZ*)}`.
pub fn diag_check<T: Real>(z: &Matrix<T>, j: usize, tol: &ToleranceCfg<T>) -> Result<CheckReport<T>> {
    let lhs = matrix_abs(&z.hadamard(&z.adjoint()))?.eigenvalues()?;
    let d1 = diag_entries_desc(&Hermitian::symmetrized(&(&z.adjoint() * z)));
    let d2 = diag_entries_desc(&Hermitian::symmetrized(&(z * &z.adjoint())));
    Ok(CheckReport::compare(
        CheckId::Diag,
        CheckParams::j(j),
        lhs.lambda(1 + 2 * j),
        d1.lambda(1 + j).min(d2.lambda(1 + j)),
        tol,
    ))
}

/// `|Z⋄Z*| ≺_wlog |Z|⋄|Z*|` and the geometric-mean bound with the sign
/// symmetry of `Z⋄Z*`, both on the polar block of `Z`.
pub fn zpolar_checks<T: Real>(z: &Matrix<T>, op: DiamondOp, tol: &ToleranceCfg<T>) -> Result<(CheckReport<T>, WitnessReport<T>)> {
    require_not_minus(op)?;
    let blk = polar_block(z, tol)?;
    let mut v = norm_check_detail(&blk, op, tol)?;
    v.report.check_id = CheckId::Zpolar;
    let w = theorem_witness(&blk, op, tol)?;
    Ok((v.report, w.geo))
}

fn check_index(j: usize, k: usize, l: usize) -> Result<()> {
    if 2 * j != k + l {
        return Err(Error::IndexConstraint { j, k, l });
    }
    Ok(())
}

/// `λ_{j+1}(|X|) <= {λ_{k+1}(A⊕B) · λ_{l+1}(A⊕B)}^{1/2}` for `2j = k + l`.
pub fn akext_check<T: Real>(blk: &PsdBlock<T>, j: usize, k: usize, l: usize, tol: &ToleranceCfg<T>) -> Result<CheckReport<T>> {
    check_index(j, k, l)?;
    let (_, s, _) = svd(blk.x())?;
    let d = blk.a().eigenvalues()?.concat(&blk.b().eigenvalues()?);
    Ok(akext_from_spectra(&s, &d, j, k, l, tol))
}

fn akext_from_spectra<T: Real>(s: &Spectrum<T>, d: &Spectrum<T>, j: usize, k: usize, l: usize, tol: &ToleranceCfg<T>) -> CheckReport<T> {
    let rhs = (d.lambda(k + 1).max(T::zero()) * d.lambda(l + 1).max(T::zero())).sqrt();
    CheckReport::compare(CheckId::Akext, CheckParams::jkl(j, k, l), s.lambda(j + 1), rhs, tol)
}

/// Every admissible `(j, k, l)` with `j < n`, `k <= l`, `l < 2n`.
pub fn akext_sweep<T: Real>(blk: &PsdBlock<T>, tol: &ToleranceCfg<T>) -> Result<Vec<CheckReport<T>>> {
    let (_, s, _) = svd(blk.x())?;
    let d = blk.a().eigenvalues()?.concat(&blk.b().eigenvalues()?);
    let n = blk.n();
    let mut out = Vec::new();
    for j in 0..n {
        for k in 0..=j {
            let l = 2 * j - k;
            if l < 2 * n {
                out.push(akext_from_spectra(&s, &d, j, k, l, tol));
            }
        }
    }
    Ok(out)
}

/// `λ_{j+1}(|X|) <= λ_{j+1}(A⊕B)`, evaluated directly.
pub fn audeh_kittaneh_check<T: Real>(blk: &PsdBlock<T>, j: usize, tol: &ToleranceCfg<T>) -> Result<CheckReport<T>> {
    let (_, s, _) = svd(blk.x())?;
    let d = Spectrum::new(
        blk.a()
            .direct_sum(blk.b())
            .eigenvalues()?
            .values()
            .to_vec(),
    );
    Ok(CheckReport::compare(CheckId::AudehKittaneh, CheckParams::j(j), s.lambda(j + 1), d.lambda(j + 1), tol))
}

/// `λ_{j+1}(|A+B|) <= {λ_{k+1}(D) · λ_{l+1}(D)}^{1/2}` with
/// `D = (|A|+|B|) ⊕ (|A*|+|B*|)`, via the sum of the two polar blocks.
pub fn akext2_check<T: Real>(a: &Matrix<T>, b: &Matrix<T>, j: usize, k: usize, l: usize, tol: &ToleranceCfg<T>) -> Result<CheckReport<T>> {
    check_index(j, k, l)?;
    let blk = polar_block(a, tol)?.sum(&polar_block(b, tol)?, tol)?;
    let mut r = akext_check(&blk, j, k, l, tol)?;
    r.check_id = CheckId::Akext2;
    Ok(r)
}

/// `‖|ΣB_i*A_i|^α‖² <= ‖|ΣB_i*B_i|^α‖ · ‖|ΣA_i*A_i|^α‖` for every Ky Fan
/// norm and every `α` in `alphas`; reports the tightest instance.
pub fn bhatia_davis_check<T: Real>(f: &FactorList<T>, alphas: &[T], tol: &ToleranceCfg<T>) -> Result<CheckReport<T>> {
    if alphas.is_empty() {
        return Err(Error::InvalidConfig("empty alpha grid".into()));
    }
    if let Some(&a) = alphas.iter().find(|&&a| !(a > T::zero())) {
        return Err(Error::NonpositiveParam(a.as_f64()));
    }
    let (_, s, _) = svd(&f.sum_b_star_a())?;
    let p = f.sum_b_star_b().eigenvalues()?;
    let q = f.sum_a_star_a().eigenvalues()?;
    let mut reports = Vec::new();
    for &alpha in alphas {
        let (s, p, q) = (powered(&s, alpha, tol), powered(&p, alpha, tol), powered(&q, alpha, tol));
        let (mut ss, mut sp, mut sq) = (T::zero(), T::zero(), T::zero());
        for k in 1..=f.dim() {
            ss += s.lambda(k);
            sp += p.lambda(k);
            sq += q.lambda(k);
            let params = CheckParams {
                alpha: Some(alpha.as_f64()),
                norm_index: Some(k),
                ..CheckParams::default()
            };
            reports.push(CheckReport::compare(CheckId::BhatiaDavis, params, ss * ss, sp * sq, tol));
        }
    }
    Ok(CheckReport::worst(reports).expect("nonempty"))
}

/// `det²|ΣB_i*A_i| <= det(ΣB_i*B_i) · det(ΣA_i*A_i)`, compared as sums of
/// logarithms. Values below the noise floor count as exact zeros.
pub fn det_schwarz_check<T: Real>(f: &FactorList<T>, tol: &ToleranceCfg<T>) -> Result<CheckReport<T>> {
    let logdet = |s: &Spectrum<T>| -> T {
        denoise(s, tol).values().iter().fold(T::zero(), |acc, &x| {
            if x > T::zero() {
                acc + x.ln()
            } else {
                T::neg_infinity()
            }
        })
    };
    let (_, s, _) = svd(&f.sum_b_star_a())?;
    let lhs = logdet(&s) * T::lit(2.0);
    let rhs = logdet(&f.sum_b_star_b().eigenvalues()?) + logdet(&f.sum_a_star_a().eigenvalues()?);
    Ok(CheckReport::compare(CheckId::DetSchwarz, CheckParams::default(), lhs, rhs, tol))
}

/// Ratio `λ₂(|P-Q|) / λ₂(P+Q)` for the projections onto `e₁` and
/// `(cos a, sin a)`, with its closed form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProjectionRatio {
    pub ratio: f64,
    /// `sin a / (1 - |cos a|)`.
    pub closed_form: f64,
}

pub fn projection_ratio(a: f64) -> Result<ProjectionRatio> {
    if !(a > 0.0 && a < std::f64::consts::PI) {
        return Err(Error::DegenerateAngle(a));
    }
    let (s, c) = a.sin_cos();
    let p = Hermitian::<f64>::from_real_diag(&[1.0, 0.0]);
    let q = Hermitian::symmetrized(&Matrix::from_real_rows(&[vec![c * c, c * s], vec![c * s, s * s]])?);
    let lhs = abs_spectrum(&p.sub(&q))?;
    let rhs = p.add(&q).eigenvalues()?;
    Ok(ProjectionRatio {
        ratio: lhs.lambda(2) / rhs.lambda(2),
        closed_form: s / (1.0 - c.abs()),
    })
}

/// Gram-block route for factor lists, used by the corpus `gram` suite.
pub fn gram_list_block<T: Real>(f: &FactorList<T>, tol: &ToleranceCfg<T>) -> Result<PsdBlock<T>> {
    gram_block(f, tol)
}
