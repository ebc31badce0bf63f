//! Explicit unitaries and symmetries realizing the "for some unitary V"
//! inequalities on PSD blocks, each certified by the minimum eigenvalue of
//! `rhs - lhs`.
//!
//! Every witness is the canonical object singled out by the construction: the
//! sign symmetry of a Hermitian off-diagonal combination, or the polar factor
//! of an off-diagonal block. No witness is ever searched for.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::blocks::{dilation_abs, dominance_block, gram_pair_block, hermitian_dilation, polar_block, FactorList, PsdBlock};
use crate::checks::{CheckId, CheckParams, CheckReport};
use crate::error::{Error, Result};
use crate::io::MatrixJson;
use crate::linalg::{
    eigh, geometric_mean, hermitian_abs, loewner_leq, matrix_abs, polar_unitary, sign_and_abs, svd, Hermitian,
    Matrix, Psd, Spectrum, Symmetry, ToleranceCfg, Unitary,
};
use crate::scalar::Real;

/// Operation combining `X` with `X*` and `A` with `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiamondOp {
    /// `X + X*` against `A + B`.
    Plus,
    /// `X ∘ X*` against `A ∘ B`.
    Schur,
    /// `X - X*` against `A + B`.
    Minus,
}

impl DiamondOp {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiamondOp::Plus => "plus",
            DiamondOp::Schur => "schur",
            DiamondOp::Minus => "minus",
        }
    }
}

impl std::str::FromStr for DiamondOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(DiamondOp::Plus),
            "schur" | "o" => Ok(DiamondOp::Schur),
            "minus" | "-" => Ok(DiamondOp::Minus),
            other => Err(Error::InvalidConfig(format!("unknown op {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimId {
    TheoremPlusAgm,
    TheoremPlusGeo,
    TheoremSchurAgm,
    TheoremSchurGeo,
    MinusGeo,
    MinusAgm,
    MeanPlus,
    MeanMinus,
    OffdiagStarGeo,
    OffdiagStarMean,
    OffdiagAbsGeo,
    OffdiagAbsMean,
    BhatiaKittaneh,
    AndoGeo,
    AndoMean,
    Prop0,
    NormalSchur,
    PmDominance,
    Triangle,
}

impl ClaimId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClaimId::TheoremPlusAgm => "theorem_plus_agm",
            ClaimId::TheoremPlusGeo => "theorem_plus_geo",
            ClaimId::TheoremSchurAgm => "theorem_schur_agm",
            ClaimId::TheoremSchurGeo => "theorem_schur_geo",
            ClaimId::MinusGeo => "minus_geo",
            ClaimId::MinusAgm => "minus_agm",
            ClaimId::MeanPlus => "mean_plus",
            ClaimId::MeanMinus => "mean_minus",
            ClaimId::OffdiagStarGeo => "offdiag_star_geo",
            ClaimId::OffdiagStarMean => "offdiag_star_mean",
            ClaimId::OffdiagAbsGeo => "offdiag_abs_geo",
            ClaimId::OffdiagAbsMean => "offdiag_abs_mean",
            ClaimId::BhatiaKittaneh => "bhatia_kittaneh",
            ClaimId::AndoGeo => "ando_geo",
            ClaimId::AndoMean => "ando_mean",
            ClaimId::Prop0 => "prop0",
            ClaimId::NormalSchur => "normal_schur",
            ClaimId::PmDominance => "pm_dominance",
            ClaimId::Triangle => "triangle",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitaryClass {
    Unitary,
    Symmetry,
}

/// A constructed witness together with the certified inequality `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport<T: Real> {
    pub claim: ClaimId,
    pub class: UnitaryClass,
    /// The witness unitaries, in the order the claim names them.
    pub witnesses: Vec<Matrix<T>>,
    pub lhs: Hermitian<T>,
    pub rhs: Hermitian<T>,
    /// `λ_min(rhs - lhs)`.
    pub margin: T,
    /// `‖rhs - lhs‖_op`.
    pub scale: T,
    pub pass: bool,
    /// Worst class violation among the witnesses: `max |VV* - I|`, and for
    /// symmetries also `max |V - V*|`.
    pub class_deviation: T,
    /// Named auxiliary values (spectra, secondary margins).
    pub aux: Vec<(String, Vec<T>)>,
}

impl<T: Real> WitnessReport<T> {
    pub fn certify(
        claim: ClaimId,
        class: UnitaryClass,
        witnesses: Vec<Matrix<T>>,
        lhs: Hermitian<T>,
        rhs: Hermitian<T>,
        tol: &ToleranceCfg<T>,
    ) -> Result<Self> {
        let v = loewner_leq(&lhs, &rhs, tol)?;
        let class_deviation = witnesses.iter().fold(T::zero(), |m, w| {
            let mut d = w.unitary_deviation();
            if class == UnitaryClass::Symmetry {
                d = d.max(w.hermitian_deviation());
            }
            m.max(d)
        });
        Ok(Self {
            claim,
            class,
            witnesses,
            lhs,
            rhs,
            margin: v.margin,
            scale: v.scale,
            pass: v.pass,
            class_deviation,
            aux: Vec::new(),
        })
    }

    pub fn with_aux(mut self, name: impl Into<String>, values: Vec<T>) -> Self {
        self.aux.push((name.into(), values));
        self
    }

    pub fn aux(&self, name: &str) -> Option<&[T]> {
        self.aux.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_slice())
    }

    /// Margin divided by `max(1, scale)`.
    pub fn normalized_margin(&self) -> T {
        self.margin / self.scale.max(T::one())
    }

    pub fn witness(&self) -> &Matrix<T> {
        &self.witnesses[0]
    }

    pub fn to_json(&self) -> WitnessReportJson {
        WitnessReportJson {
            claim_id: self.claim,
            class: self.class,
            margin: self.margin.as_f64(),
            scale: self.scale.as_f64(),
            pass: self.pass,
            class_deviation: self.class_deviation.as_f64(),
            witnesses: self.witnesses.iter().map(MatrixJson::from_matrix).collect(),
            lhs_spectrum: self.lhs.eigenvalues().map(|s| s.to_f64()).unwrap_or_default(),
            rhs_spectrum: self.rhs.eigenvalues().map(|s| s.to_f64()).unwrap_or_default(),
            lhs: MatrixJson::from_matrix(self.lhs.matrix()),
            rhs: MatrixJson::from_matrix(self.rhs.matrix()),
            aux: self
                .aux
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(|x| x.as_f64()).collect()))
                .collect(),
        }
    }
}

/// Serialized form of a [`WitnessReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReportJson {
    pub claim_id: ClaimId,
    pub class: UnitaryClass,
    pub margin: f64,
    pub scale: f64,
    pub pass: bool,
    pub class_deviation: f64,
    pub witnesses: Vec<MatrixJson>,
    pub lhs_spectrum: Vec<f64>,
    pub rhs_spectrum: Vec<f64>,
    pub lhs: MatrixJson,
    pub rhs: MatrixJson,
    pub aux: Vec<(String, Vec<f64>)>,
}

/// The two certified forms of the main block inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoremWitness<T: Real> {
    /// `|H| <= C + (1/4) V C V`.
    pub agm: WitnessReport<T>,
    /// `|H| <= C # (V C V)`.
    pub geo: WitnessReport<T>,
}

/// Hermitian combination `H` of the off-diagonal block and the PSD
/// combination `C` of the diagonal blocks for the given operation.
/// For `Minus`, `H = i(X - X*)` so that `|H| = |X - X*|`.
pub fn diamond_parts<T: Real>(blk: &PsdBlock<T>, op: DiamondOp) -> (Hermitian<T>, Psd<T>) {
    let x = blk.x();
    let xs = x.adjoint();
    match op {
        DiamondOp::Plus => (Hermitian::symmetrized(&(x + &xs)), blk.a().add(blk.b())),
        DiamondOp::Schur => (Hermitian::symmetrized(&x.hadamard(&xs)), blk.a().schur(blk.b())),
        DiamondOp::Minus => (
            Hermitian::symmetrized(&(x - &xs).scale_complex(Complex::new(T::zero(), T::one()))),
            blk.a().add(blk.b()),
        ),
    }
}

fn quarter<T: Real>() -> T {
    T::lit(0.25)
}

fn half<T: Real>() -> T {
    T::lit(0.5)
}

/// Both forms of the main inequality for `⋄ ∈ {+, ∘}` (and, via
/// [`minus_witness`], for `-`), with `V = sign(X ⋄ X*)`.
pub fn theorem_witness<T: Real>(blk: &PsdBlock<T>, op: DiamondOp, tol: &ToleranceCfg<T>) -> Result<TheoremWitness<T>> {
    if op == DiamondOp::Minus {
        return minus_witness(blk, tol);
    }
    let (h, c) = diamond_parts(blk, op);
    let (v, abs_h) = sign_and_abs(&h, tol)?;
    let vcv = c.congruence(v.matrix());
    let agm_rhs = c.hermitian().add(&vcv.hermitian().scale(quarter()));
    let geo_rhs = geometric_mean(&c, &vcv, tol)?.into_hermitian();
    let (agm_id, geo_id) = match op {
        DiamondOp::Plus => (ClaimId::TheoremPlusAgm, ClaimId::TheoremPlusGeo),
        _ => (ClaimId::TheoremSchurAgm, ClaimId::TheoremSchurGeo),
    };
    let lhs = abs_h.into_hermitian();
    let vm = v.matrix().clone();
    Ok(TheoremWitness {
        agm: WitnessReport::certify(agm_id, UnitaryClass::Symmetry, vec![vm.clone()], lhs.clone(), agm_rhs, tol)?,
        geo: WitnessReport::certify(geo_id, UnitaryClass::Symmetry, vec![vm], lhs, geo_rhs, tol)?,
    })
}

/// The minus variant: `V = sign(i(X - X*))`, certifying
/// `|X - X*| <= (A+B) # V(A+B)V` and `|X - X*| <= (A+B) + (1/4)V(A+B)V`.
///
/// For real `X` with `X - Xᵀ` invertible the symmetry `V` is purely
/// imaginary (`i` times a real orthogonal matrix) while `V(A+B)V` is real.
/// The aux entries `witness_real_part`, `witness_imag_part` and
/// `conjugated_sum_imag_part` record this. A kernel of `X - Xᵀ` (always
/// present for odd `n`) gets the `+1` sign and breaks both facts.
pub fn minus_witness<T: Real>(blk: &PsdBlock<T>, tol: &ToleranceCfg<T>) -> Result<TheoremWitness<T>> {
    let (h, c) = diamond_parts(blk, DiamondOp::Minus);
    let (v, abs_h) = sign_and_abs(&h, tol)?;
    let vcv = c.congruence(v.matrix());
    let lhs = abs_h.into_hermitian();
    let geo_rhs = geometric_mean(&c, &vcv, tol)?.into_hermitian();
    let agm_rhs = c.hermitian().add(&vcv.hermitian().scale(quarter()));
    let vm = v.matrix().clone();
    let mut geo = WitnessReport::certify(ClaimId::MinusGeo, UnitaryClass::Symmetry, vec![vm.clone()], lhs.clone(), geo_rhs, tol)?;
    let mut agm = WitnessReport::certify(ClaimId::MinusAgm, UnitaryClass::Symmetry, vec![vm.clone()], lhs, agm_rhs, tol)?;
    if blk.x().is_real() && blk.a().is_real() && blk.b().is_real() {
        let real_part_max = vm.map(|z| Complex::new(z.re, T::zero())).norm_max();
        for r in [&mut geo, &mut agm] {
            r.aux.push(("witness_real_part".into(), vec![real_part_max]));
            r.aux.push(("witness_imag_part".into(), vec![vm.imag_max()]));
            r.aux.push(("conjugated_sum_imag_part".into(), vec![vcv.imag_max()]));
        }
    }
    Ok(TheoremWitness { agm, geo })
}

/// Arithmetic-mean form `|X ⋄ X*| <= ((A+B) + V(A+B)V) / 2` for `⋄ ∈ {+, -}`.
pub fn mean_witness<T: Real>(blk: &PsdBlock<T>, op: DiamondOp, tol: &ToleranceCfg<T>) -> Result<WitnessReport<T>> {
    let claim = match op {
        DiamondOp::Plus => ClaimId::MeanPlus,
        DiamondOp::Minus => ClaimId::MeanMinus,
        DiamondOp::Schur => {
            return Err(Error::InvalidConfig("the arithmetic-mean form is stated for plus and minus only".into()))
        }
    };
    let (h, c) = diamond_parts(blk, op);
    let (v, abs_h) = sign_and_abs(&h, tol)?;
    let vcv = c.congruence(v.matrix());
    let rhs = c.hermitian().add(vcv.hermitian()).scale(half());
    WitnessReport::certify(claim, UnitaryClass::Symmetry, vec![v.matrix().clone()], abs_h.into_hermitian(), rhs, tol)
}

/// Geometric-mean bounds from the polar factor `U` of the off-diagonal block
/// (`X = U|X| = |X*|U`), with their arithmetic relaxations.
#[derive(Clone, Debug, PartialEq)]
pub struct OffdiagBound<T: Real> {
    /// `|X*| <= A # (U B U*)`.
    pub star_geo: WitnessReport<T>,
    /// `|X*| <= (A + U B U*) / 2`.
    pub star_mean: WitnessReport<T>,
    /// `|X| <= B # (U* A U)`.
    pub abs_geo: WitnessReport<T>,
    /// `|X| <= (B + U* A U) / 2`.
    pub abs_mean: WitnessReport<T>,
}

impl<T: Real> OffdiagBound<T> {
    pub fn reports(&self) -> [&WitnessReport<T>; 4] {
        [&self.star_geo, &self.star_mean, &self.abs_geo, &self.abs_mean]
    }
}

pub fn offdiag_bound<T: Real>(blk: &PsdBlock<T>, tol: &ToleranceCfg<T>) -> Result<OffdiagBound<T>> {
    let x = blk.x();
    let u = polar_unitary(x)?;
    let ubu = blk.b().congruence(u.matrix());
    let uau = blk.a().congruence(&u.adjoint());
    let abs_star = matrix_abs(&x.adjoint())?.into_hermitian();
    let abs_x = matrix_abs(x)?.into_hermitian();
    let w = vec![u.matrix().clone()];
    let class = UnitaryClass::Unitary;
    Ok(OffdiagBound {
        star_geo: WitnessReport::certify(
            ClaimId::OffdiagStarGeo,
            class,
            w.clone(),
            abs_star.clone(),
            geometric_mean(blk.a(), &ubu, tol)?.into_hermitian(),
            tol,
        )?,
        star_mean: WitnessReport::certify(
            ClaimId::OffdiagStarMean,
            class,
            w.clone(),
            abs_star,
            blk.a().add(&ubu).hermitian().scale(half()),
            tol,
        )?,
        abs_geo: WitnessReport::certify(
            ClaimId::OffdiagAbsGeo,
            class,
            w.clone(),
            abs_x.clone(),
            geometric_mean(blk.b(), &uau, tol)?.into_hermitian(),
            tol,
        )?,
        abs_mean: WitnessReport::certify(
            ClaimId::OffdiagAbsMean,
            class,
            w,
            abs_x,
            blk.b().add(&uau).hermitian().scale(half()),
            tol,
        )?,
    })
}

/// `2 λ_j(|X|) <= λ_j([[A, X], [X*, B]])` for `j = 1..n`; reports the
/// tightest index.
pub fn tao_bound<T: Real>(blk: &PsdBlock<T>, tol: &ToleranceCfg<T>) -> Result<CheckReport<T>> {
    let (_, sx, _) = svd(blk.x())?;
    let full = blk.assembled().eigenvalues()?;
    let reports = (1..=blk.n()).map(|j| {
        CheckReport::compare(
            CheckId::Tao,
            CheckParams::j(j - 1),
            sx.lambda(j) * T::lit(2.0),
            full.lambda(j),
            tol,
        )
    });
    Ok(CheckReport::worst(reports).expect("n >= 1"))
}

/// Unitary `U` with `|AB| <= U ((A*A + BB*)/2) U*`.
///
/// `U = E₁E₂*` aligns the eigenbases of `|AB|` and `(A*A + BB*)/2`
/// (both sorted non-increasing); the inequality then holds because
/// `λ_j(|AB|) <= λ_j((A*A + BB*)/2)`, which is the Tao bound on the Gram
/// block of the pair `(A*, B)`. The aux entries carry that block's spectrum
/// and the off-diagonal bound margins on it.
pub fn bhatia_kittaneh_witness<T: Real>(a: &Matrix<T>, b: &Matrix<T>, tol: &ToleranceCfg<T>) -> Result<WitnessReport<T>> {
    a.ensure_same_dim(b)?;
    let lhs = matrix_abs(&(a * b))?.into_hermitian();
    let mean = Hermitian::symmetrized(&(&(&a.adjoint() * a) + &(b * &b.adjoint()))).scale(half());
    let (_, e_lhs) = eigh(&lhs)?;
    let (s_mean, e_mean) = eigh(&mean)?;
    let u = e_lhs.compose(&e_mean.adjoint());
    let rhs = Hermitian::symmetrized(&Matrix::congruence_diag(e_lhs.matrix(), s_mean.values()));

    let gram = gram_pair_block(&a.adjoint(), b, tol)?;
    let tao = tao_bound(&gram, tol)?;
    let off = offdiag_bound(&gram, tol)?;
    Ok(WitnessReport::certify(
        ClaimId::BhatiaKittaneh,
        UnitaryClass::Unitary,
        vec![u.into_matrix()],
        lhs,
        rhs,
        tol,
    )?
    .with_aux("gram_block_spectrum", gram.assembled().eigenvalues()?.values().to_vec())
    .with_aux("tao_worst_violation", vec![tao.worst_violation])
    .with_aux("offdiag_abs_geo_margin", vec![off.abs_geo.margin]))
}

/// `|Σ B_i*A_i| <= (Σ A_i*A_i) # V*(Σ B_i*B_i)V` and its arithmetic
/// relaxation, with `V` the polar factor of `Σ B_i*A_i`.
pub fn ando_sum_bound<T: Real>(f: &FactorList<T>, tol: &ToleranceCfg<T>) -> Result<(WitnessReport<T>, WitnessReport<T>)> {
    let s = f.sum_b_star_a();
    let v = polar_unitary(&s)?;
    let p = f.sum_a_star_a();
    let q = f.sum_b_star_b().congruence(&v.adjoint());
    let lhs = matrix_abs(&s)?.into_hermitian();
    let w = vec![v.matrix().clone()];
    let geo = WitnessReport::certify(
        ClaimId::AndoGeo,
        UnitaryClass::Unitary,
        w.clone(),
        lhs.clone(),
        geometric_mean(&p, &q, tol)?.into_hermitian(),
        tol,
    )?;
    let mean = WitnessReport::certify(
        ClaimId::AndoMean,
        UnitaryClass::Unitary,
        w,
        lhs,
        p.add(&q).hermitian().scale(half()),
        tol,
    )?;
    Ok((geo, mean))
}

/// `|X| ⊕ |X| <= U₁(A⊕B)U₁* # U₂(A⊕B)U₂*` with `U₁ = U* ⊕ I` and
/// `U₂ = [[0, I], [U*, 0]]`, `U` the polar factor of `X`.
///
/// The single-unitary form holds for the congruent left side
/// `U₁*(|X|⊕|X|)U₁ = |X*| ⊕ |X|` with `U = U₁*U₂`; its margin is kept in aux
/// as `single_unitary_margin`, and both left sides have the same spectrum.
pub fn prop0_witness<T: Real>(blk: &PsdBlock<T>, tol: &ToleranceCfg<T>) -> Result<WitnessReport<T>> {
    let n = blk.n();
    let u = polar_unitary(blk.x())?;
    let ua = u.adjoint();
    let id = Unitary::identity(n);
    let u1 = ua.direct_sum(&id);
    let mut u2 = Matrix::zeros(2 * n);
    u2.set_block(0, n, id.matrix());
    u2.set_block(n, 0, ua.matrix());
    let u2 = Unitary::new(u2, tol)?;
    let d = blk.a().direct_sum(blk.b());
    let abs_x = matrix_abs(blk.x())?;
    let lhs = abs_x.direct_sum(&abs_x).into_hermitian();
    let rhs = geometric_mean(&d.congruence(u1.matrix()), &d.congruence(u2.matrix()), tol)?.into_hermitian();

    let single = u1.adjoint().compose(&u2);
    let lhs_single = lhs.congruence(u1.adjoint().matrix());
    let rhs_single = geometric_mean(&d, &d.congruence(single.matrix()), tol)?.into_hermitian();
    let single_margin = loewner_leq(&lhs_single, &rhs_single, tol)?.margin;
    let spectral_gap = {
        let a = lhs.eigenvalues()?;
        let b = lhs_single.eigenvalues()?;
        a.values().iter().zip(b.values()).fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs()))
    };
    Ok(WitnessReport::certify(
        ClaimId::Prop0,
        UnitaryClass::Unitary,
        vec![u1.into_matrix(), u2.into_matrix()],
        lhs,
        rhs,
        tol,
    )?
    .with_aux("single_unitary", vec![])
    .with_aux("single_unitary_margin", vec![single_margin])
    .with_aux("lhs_spectral_gap", vec![spectral_gap]))
}

fn check_normal<T: Real>(m: &Matrix<T>, tol: &ToleranceCfg<T>) -> Result<()> {
    let comm = (&(m * &m.adjoint()) - &(&m.adjoint() * m)).norm_max();
    let scale = m.norm_max();
    if comm > tol.slack(scale * scale) {
        return Err(Error::NotNormal {
            commutator: comm.as_f64(),
        });
    }
    Ok(())
}

/// For normal `A`, `B`:
/// `|A∘B + A*∘B*| / 2 <= |A|∘|B| + (1/4) V (|A|∘|B|) V*`, obtained from the
/// plus-form of the main inequality on the Schur product of the two polar
/// blocks `[[|A|∘|B|, A∘B], [A*∘B*, |A|∘|B|]]`.
pub fn normal_schur_witness<T: Real>(a: &Matrix<T>, b: &Matrix<T>, tol: &ToleranceCfg<T>) -> Result<WitnessReport<T>> {
    a.ensure_same_dim(b)?;
    check_normal(a, tol)?;
    check_normal(b, tol)?;
    let blk = polar_block(a, tol)?.schur(&polar_block(b, tol)?, tol)?;
    let th = theorem_witness(&blk, DiamondOp::Plus, tol)?;
    let rep = th.agm;
    WitnessReport::certify(
        ClaimId::NormalSchur,
        UnitaryClass::Symmetry,
        rep.witnesses,
        rep.lhs.scale(half()),
        rep.rhs.scale(half()),
        tol,
    )
}

/// For Hermitian `S`, `T` with `±S <= T`: `|S| <= T + (1/4) V T V`, from the
/// plus-form on `[[T, S], [S, T]]` (where `X + X* = 2S` and `A + B = 2T`).
pub fn pm_dominance_witness<T: Real>(s: &Hermitian<T>, t: &Hermitian<T>, tol: &ToleranceCfg<T>) -> Result<WitnessReport<T>> {
    let blk = dominance_block(s, t, tol)?;
    let th = theorem_witness(&blk, DiamondOp::Plus, tol)?;
    let rep = th.agm;
    WitnessReport::certify(
        ClaimId::PmDominance,
        UnitaryClass::Symmetry,
        rep.witnesses,
        rep.lhs.scale(half()),
        rep.rhs.scale(half()),
        tol,
    )
}

/// Largest singular value of each input; errors if any exceeds `1 + rel`.
pub fn check_contractions<T: Real>(ms: &[Matrix<T>], tol: &ToleranceCfg<T>) -> Result<Vec<T>> {
    let sig: Vec<T> = ms
        .iter()
        .map(|m| svd(m).map(|(_, s, _)| s.max()))
        .collect::<Result<_>>()?;
    let bad: Vec<usize> = sig
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > T::one() + tol.rel)
        .map(|(i, _)| i)
        .collect();
    if !bad.is_empty() {
        return Err(Error::NotContraction {
            sigma_max: bad.iter().map(|&i| sig[i].as_f64()).collect(),
            positions: bad,
        });
    }
    Ok(sig)
}

/// `|Σ A_j| <= (k/4) I + Σ |A_j|` for contractions `A_1..A_k`, `k > 1`.
///
/// Hermitian inputs go straight through [`pm_dominance_witness`] with
/// `S = Σ A_j`, `T = Σ |A_j|`. General inputs are lifted to their Hermitian
/// dilations, whose absolute values are `|A_j*| ⊕ |A_j|`; the certified
/// inequality is the lower-right `n × n` corner. The intermediate symmetry is
/// the reported witness and its margin is in aux as `dominance_margin`.
pub fn triangle_bound<T: Real>(contractions: &[Matrix<T>], tol: &ToleranceCfg<T>) -> Result<WitnessReport<T>> {
    let k = contractions.len();
    if k < 2 {
        return Err(Error::InvalidConfig(format!("need at least two summands, got {k}")));
    }
    let n = contractions[0].dim();
    for m in contractions {
        contractions[0].ensure_same_dim(m)?;
    }
    check_contractions(contractions, tol)?;
    let kq = T::from_usize_lossy(k) * quarter();
    let sum = contractions
        .iter()
        .fold(Matrix::zeros(n), |acc, m| &acc + m);
    let hermitian = contractions
        .iter()
        .all(|m| m.hermitian_deviation() <= tol.abs * m.norm_max().max(T::one()));

    let abs_sum = contractions
        .iter()
        .map(matrix_abs)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Psd::zeros(n), |acc, p| acc.add(&p));
    let rhs = abs_sum.hermitian().add(&Hermitian::symmetrized(&Matrix::scalar(n, kq)));

    let (dominance, lhs) = if hermitian {
        let s = Hermitian::symmetrized(&sum);
        let pm = pm_dominance_witness(&s, abs_sum.hermitian(), tol)?;
        let lhs = hermitian_abs(&s)?.into_hermitian();
        (pm, lhs)
    } else {
        let s = hermitian_dilation(&sum);
        let t = contractions
            .iter()
            .map(dilation_abs)
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(Psd::zeros(2 * n), |acc, p| acc.add(&p));
        let pm = pm_dominance_witness(&s, t.hermitian(), tol)?;
        let lhs = matrix_abs(&sum)?.into_hermitian();
        (pm, lhs)
    };
    Ok(WitnessReport::certify(
        ClaimId::Triangle,
        UnitaryClass::Symmetry,
        dominance.witnesses.clone(),
        lhs,
        rhs,
        tol,
    )?
    .with_aux("dominance_margin", vec![dominance.margin])
    .with_aux("hermitian_route", vec![if hermitian { T::one() } else { T::zero() }]))
}

/// `λ_max(|Σ A_j| - Σ |A_j|)`, the quantity capped by `k/4`.
pub fn triangle_excess<T: Real>(contractions: &[Matrix<T>]) -> Result<T> {
    let n = contractions.first().map_or(0, |m| m.dim());
    let sum = contractions.iter().fold(Matrix::zeros(n), |acc, m| &acc + m);
    let mut diff = matrix_abs(&sum)?.into_hermitian().into_matrix();
    for m in contractions {
        diff = &diff - matrix_abs(m)?.matrix();
    }
    Ok(Hermitian::symmetrized(&diff).eigenvalues()?.max())
}

/// Spectrum helper shared with the checks: `λ(|H|)` for Hermitian `H`.
pub(crate) fn abs_spectrum<T: Real>(h: &Hermitian<T>) -> Result<Spectrum<T>> {
    Ok(h.eigenvalues()?.map(|x| x.abs()))
}

/// Symmetry accessor used by callers that need the typed witness back.
pub fn witness_symmetry<T: Real>(r: &WitnessReport<T>, tol: &ToleranceCfg<T>) -> Result<Symmetry<T>> {
    Symmetry::new(r.witness().clone(), tol)
}
