//! Seeded verification corpus: random blocks, factor lists and matrices run
//! through every witness and check.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::{gram_pair_block, sample_psd_block_with, FactorList, PsdBlock};
use crate::checks::{
    akext2_check, akext_sweep, audeh_kittaneh_check, bhatia_davis_check, det_schwarz_check, diag_check,
    gram_geo_check, gram_norm_check, norm_check, weyl_geo_sweep, zpolar_checks, CheckReport, ALPHA_GRID,
};
use crate::error::{Error, Result};
use crate::linalg::{Hermitian, Matrix, ToleranceCfg};
use crate::random::{complex_gaussian, derive_seed, ginibre, haar_unitary, random_contraction, random_hermitian, random_psd, rng_from_seed, SeededRng};
use crate::witness::{
    ando_sum_bound, bhatia_kittaneh_witness, mean_witness, minus_witness, normal_schur_witness, offdiag_bound,
    pm_dominance_witness, prop0_witness, tao_bound, theorem_witness, triangle_bound, DiamondOp, WitnessReport,
};

pub const MAX_DIM: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Theorem,
    Corollaries,
    Norms,
    Gram,
}

impl Suite {
    fn includes(self, s: Suite) -> bool {
        self == Suite::All || self == s
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "theorem" => Ok(Suite::Theorem),
            "corollaries" => Ok(Suite::Corollaries),
            "norms" => Ok(Suite::Norms),
            "gram" => Ok(Suite::Gram),
            other => Err(Error::InvalidConfig(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub suite: Suite,
    pub tol: ToleranceCfg<f64>,
    /// Evaluate items on the rayon pool. Output order is the same either way.
    #[serde(skip)]
    pub parallel: bool,
}

impl CorpusConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&n| n == 0 || n > MAX_DIM) {
            return Err(Error::InvalidConfig(format!("dims must be nonempty and within 1..={MAX_DIM}")));
        }
        Ok(())
    }
}

/// One CSV/JSON row: a single inequality instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusRow {
    pub check_id: String,
    pub n: usize,
    pub params: String,
    /// For checks the compared numbers; for witnesses `λ_max` of each side.
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs` for checks, `λ_min(rhs - lhs)` for witnesses.
    pub margin: f64,
    pub pass: bool,
    /// Seed of the corpus item that produced the row.
    #[serde(skip)]
    pub item_seed: u64,
    #[serde(skip)]
    pub normalized_margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub checks_run: usize,
    pub failures: usize,
    /// Smallest margin relative to `max(1, scale)` over all rows.
    pub worst_margin: f64,
}

/// Where to regenerate a failing item.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reproducer {
    pub n: usize,
    pub trial: usize,
    pub item_seed: u64,
    pub check_id: String,
    pub params: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub summary: CorpusSummary,
    pub reproducer: Option<Reproducer>,
    pub rows: Vec<CorpusRow>,
}

/// Seed of trial `t` at dimension `n`.
pub fn item_seed(seed: u64, n: usize, trial: usize) -> u64 {
    derive_seed(derive_seed(seed, n as u64), trial as u64)
}

/// Rank of the sampled block for a trial; cycles through `1..=2n`.
pub fn item_rank(n: usize, trial: usize) -> usize {
    1 + trial % (2 * n)
}

/// Random inputs for one corpus item.
#[derive(Clone, Debug)]
pub struct CorpusItem {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub block: PsdBlock<f64>,
    pub z: Matrix<f64>,
    pub pair: (Matrix<f64>, Matrix<f64>),
    pub factors: FactorList<f64>,
    pub normal_pair: (Matrix<f64>, Matrix<f64>),
    pub dominance: (Hermitian<f64>, Hermitian<f64>),
    pub contractions: Vec<Matrix<f64>>,
}

fn low_rank(rng: &mut SeededRng, n: usize, rank: usize) -> Matrix<f64> {
    let g = ginibre::<f64, _>(rng, n);
    let p = random_psd::<f64, _>(rng, n, rank);
    &g * p.matrix()
}

fn normal_matrix(rng: &mut SeededRng, n: usize) -> Matrix<f64> {
    let u = haar_unitary::<f64, _>(rng, n);
    let eig: Vec<Complex<f64>> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let d = Matrix::from_fn(n, |i, j| if i == j { eig[i] } else { Complex::new(0.0, 0.0) });
    &(u.matrix() * &d) * u.adjoint().matrix()
}

impl CorpusItem {
    pub fn generate(n: usize, trial: usize, seed: u64, tol: &ToleranceCfg<f64>) -> Result<Self> {
        let s = item_seed(seed, n, trial);
        let mut rng = rng_from_seed(s);
        let block = sample_psd_block_with(&mut rng, n, item_rank(n, trial), tol)?;
        let deficient = trial.is_multiple_of(4) && n > 1;
        let z = if deficient { low_rank(&mut rng, n, n - 1) } else { ginibre(&mut rng, n) };
        let pair = if deficient {
            (low_rank(&mut rng, n, 1), ginibre(&mut rng, n))
        } else {
            (ginibre(&mut rng, n), ginibre(&mut rng, n))
        };
        let m = 1 + trial % 3;
        let pairs = (0..m)
            .map(|i| {
                if deficient && i == 0 {
                    (low_rank(&mut rng, n, 1), low_rank(&mut rng, n, 1))
                } else {
                    (ginibre(&mut rng, n), ginibre(&mut rng, n))
                }
            })
            .collect();
        let factors = FactorList::new(pairs)?;
        let normal_pair = (normal_matrix(&mut rng, n), normal_matrix(&mut rng, n));
        let ds = random_hermitian::<f64, _>(&mut rng, n);
        let extra_rank = 1 + rng.random_range(0..n);
        let extra = random_psd::<f64, _>(&mut rng, n, extra_rank);
        let dt = crate::linalg::hermitian_abs(&ds)?.add(&extra.scale(if deficient { 0.0 } else { 0.3 }));
        let k = 2 + trial % 3;
        let hermitian_contractions = trial % 2 == 1;
        let contractions = (0..k)
            .map(|_| {
                let shrink = if trial.is_multiple_of(3) { 1.0 } else { rng.random_range(0.3..1.0) };
                if hermitian_contractions {
                    let h = random_hermitian::<f64, _>(&mut rng, n);
                    let s = h.norm_op().unwrap_or(1.0).max(f64::MIN_POSITIVE);
                    h.matrix().scale(shrink / s)
                } else {
                    random_contraction(&mut rng, n, shrink)
                }
            })
            .collect();
        Ok(Self {
            n,
            trial,
            seed: s,
            block,
            z,
            pair,
            factors,
            normal_pair,
            dominance: (ds, dt.into_hermitian()),
            contractions,
        })
    }
}

fn check_row(n: usize, seed: u64, r: &CheckReport<f64>) -> CorpusRow {
    CorpusRow {
        check_id: r.check_id.as_str().to_string(),
        n,
        params: r.params.to_string(),
        lhs: r.lhs,
        rhs: r.rhs,
        margin: if r.lhs == r.rhs { 0.0 } else { r.rhs - r.lhs },
        pass: r.pass,
        item_seed: seed,
        normalized_margin: -r.relative_violation(),
    }
}

fn witness_row(n: usize, seed: u64, params: &str, r: &WitnessReport<f64>, tol: &ToleranceCfg<f64>) -> CorpusRow {
    let top = |h: &Hermitian<f64>| h.eigenvalues().map(|s| s.max()).unwrap_or(f64::NAN);
    CorpusRow {
        check_id: r.claim.as_str().to_string(),
        n,
        params: params.to_string(),
        lhs: top(&r.lhs),
        rhs: top(&r.rhs),
        margin: r.margin,
        pass: r.pass && r.class_deviation <= tol.rel,
        item_seed: seed,
        normalized_margin: r.normalized_margin(),
    }
}

fn error_row(n: usize, seed: u64, id: &str, e: &Error) -> CorpusRow {
    CorpusRow {
        check_id: id.to_string(),
        n,
        params: format!("error={e}"),
        lhs: f64::NAN,
        rhs: f64::NAN,
        margin: f64::NAN,
        pass: false,
        item_seed: seed,
        normalized_margin: f64::NEG_INFINITY,
    }
}

struct Rows<'a> {
    n: usize,
    seed: u64,
    tol: &'a ToleranceCfg<f64>,
    out: Vec<CorpusRow>,
}

impl Rows<'_> {
    fn checks(&mut self, id: &str, r: Result<Vec<CheckReport<f64>>>) {
        match r {
            Ok(v) => self.out.extend(v.iter().map(|c| check_row(self.n, self.seed, c))),
            Err(e) => self.out.push(error_row(self.n, self.seed, id, &e)),
        }
    }

    fn check(&mut self, id: &str, r: Result<CheckReport<f64>>) {
        self.checks(id, r.map(|c| vec![c]));
    }

    fn witnesses(&mut self, id: &str, params: &str, r: Result<Vec<WitnessReport<f64>>>) {
        match r {
            Ok(v) => {
                let rows: Vec<_> = v.iter().map(|w| witness_row(self.n, self.seed, params, w, self.tol)).collect();
                self.out.extend(rows);
            }
            Err(e) => self.out.push(error_row(self.n, self.seed, id, &e)),
        }
    }
}

/// Every row for one item under `suite`, in a fixed order.
pub fn run_item(item: &CorpusItem, suite: Suite, tol: &ToleranceCfg<f64>) -> Vec<CorpusRow> {
    let mut rows = Rows {
        n: item.n,
        seed: item.seed,
        tol,
        out: Vec::new(),
    };
    let blk = &item.block;
    let (a, b) = (&item.pair.0, &item.pair.1);
    let f = &item.factors;

    if suite.includes(Suite::Theorem) {
        for op in [DiamondOp::Plus, DiamondOp::Schur, DiamondOp::Minus] {
            rows.witnesses("theorem", op.as_str(), theorem_witness(blk, op, tol).map(|w| vec![w.agm, w.geo]));
        }
        rows.witnesses("minus", "", minus_witness(blk, tol).map(|w| vec![w.agm, w.geo]));
        for op in [DiamondOp::Plus, DiamondOp::Minus] {
            rows.witnesses("mean", op.as_str(), mean_witness(blk, op, tol).map(|w| vec![w]));
        }
        rows.witnesses(
            "offdiag",
            "",
            offdiag_bound(blk, tol).map(|o| o.reports().into_iter().cloned().collect()),
        );
        rows.witnesses("prop0", "", prop0_witness(blk, tol).map(|w| vec![w]));
    }
    if suite.includes(Suite::Corollaries) {
        rows.check("tao", tao_bound(blk, tol));
        for op in [DiamondOp::Plus, DiamondOp::Schur, DiamondOp::Minus] {
            rows.checks("weyl_geo", weyl_geo_sweep(blk, op, tol));
        }
        rows.checks("diag", (0..item.n).map(|j| diag_check(&item.z, j, tol)).collect());
        rows.checks("akext", akext_sweep(blk, tol));
        rows.checks("audeh_kittaneh", (0..item.n).map(|j| audeh_kittaneh_check(blk, j, tol)).collect());
        rows.checks(
            "akext2",
            (0..item.n)
                .flat_map(|j| (0..=j).map(move |k| (j, k)))
                .map(|(j, k)| akext2_check(a, b, j, k, 2 * j - k, tol))
                .collect(),
        );
        for op in [DiamondOp::Plus, DiamondOp::Schur] {
            match zpolar_checks(&item.z, op, tol) {
                Ok((c, w)) => {
                    rows.out.push(check_row(item.n, item.seed, &c));
                    rows.witnesses("zpolar", op.as_str(), Ok(vec![w]));
                }
                Err(e) => rows.out.push(error_row(item.n, item.seed, "zpolar", &e)),
            }
        }
        rows.witnesses(
            "normal_schur",
            "",
            normal_schur_witness(&item.normal_pair.0, &item.normal_pair.1, tol).map(|w| vec![w]),
        );
        rows.witnesses(
            "pm_dominance",
            "",
            pm_dominance_witness(&item.dominance.0, &item.dominance.1, tol).map(|w| vec![w]),
        );
        let k = item.contractions.len();
        rows.witnesses("triangle", &format!("k={k}"), triangle_bound(&item.contractions, tol).map(|w| vec![w]));
    }
    if suite.includes(Suite::Norms) {
        for op in [DiamondOp::Plus, DiamondOp::Schur] {
            rows.check("norm", norm_check(blk, op, tol));
        }
        let alphas: Vec<f64> = ALPHA_GRID.to_vec();
        rows.check("bhatia_davis", bhatia_davis_check(f, &alphas, tol));
        rows.check("det_schwarz", det_schwarz_check(f, tol));
    }
    if suite.includes(Suite::Gram) || suite.includes(Suite::Norms) {
        for op in [DiamondOp::Plus, DiamondOp::Schur] {
            rows.check("gram_norm", gram_norm_check(a, b, op, tol));
        }
    }
    if suite.includes(Suite::Gram) {
        for op in [DiamondOp::Plus, DiamondOp::Schur] {
            rows.checks(
                "gram_geo",
                (0..item.n)
                    .flat_map(|j| (0..item.n).map(move |k| (j, k)))
                    .map(|(j, k)| gram_geo_check(a, b, op, j, k, tol))
                    .collect(),
            );
        }
        rows.witnesses("ando", "", ando_sum_bound(f, tol).map(|(g, m)| vec![g, m]));
        rows.witnesses("bhatia_kittaneh", "", bhatia_kittaneh_witness(a, b, tol).map(|w| vec![w]));
        rows.witnesses(
            "gram_theorem",
            "pair",
            gram_pair_block(a, b, tol).and_then(|g| theorem_witness(&g, DiamondOp::Plus, tol)).map(|w| vec![w.agm, w.geo]),
        );
    }
    rows.out
}

pub fn run_corpus(cfg: &CorpusConfig) -> Result<CorpusReport> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = cfg
        .dims
        .iter()
        .flat_map(|&n| (0..cfg.trials).map(move |t| (n, t)))
        .collect();
    let eval = |&(n, t): &(usize, usize)| -> Vec<CorpusRow> {
        match CorpusItem::generate(n, t, cfg.seed, &cfg.tol) {
            Ok(item) => run_item(&item, cfg.suite, &cfg.tol),
            Err(e) => vec![error_row(n, item_seed(cfg.seed, n, t), "generate", &e)],
        }
    };
    let per_item: Vec<Vec<CorpusRow>> = if cfg.parallel {
        jobs.par_iter().map(eval).collect()
    } else {
        jobs.iter().map(eval).collect()
    };
    let mut reproducer = None;
    for ((n, t), rows) in jobs.iter().zip(&per_item) {
        if let Some(r) = rows.iter().find(|r| !r.pass) {
            reproducer = Some(Reproducer {
                n: *n,
                trial: *t,
                item_seed: r.item_seed,
                check_id: r.check_id.clone(),
                params: r.params.clone(),
            });
            break;
        }
    }
    let rows: Vec<CorpusRow> = per_item.into_iter().flatten().collect();
    let summary = CorpusSummary {
        checks_run: rows.len(),
        failures: rows.iter().filter(|r| !r.pass).count(),
        worst_margin: rows.iter().map(|r| r.normalized_margin).fold(f64::INFINITY, f64::min),
    };
    Ok(CorpusReport {
        summary,
        reproducer,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(parallel: bool) -> CorpusConfig {
        CorpusConfig {
            dims: vec![1, 2, 3],
            trials: 6,
            seed: 5,
            suite: Suite::All,
            tol: ToleranceCfg::default(),
            parallel,
        }
    }

    #[test]
    fn small_corpus_passes_and_is_deterministic() {
        let a = run_corpus(&cfg(true)).unwrap();
        let b = run_corpus(&cfg(false)).unwrap();
        assert_eq!(a.summary.failures, 0, "{:?}", a.reproducer);
        assert_eq!(a.rows, b.rows);
        assert!(a.summary.checks_run > 100);
    }

    #[test]
    fn rejects_bad_config() {
        let mut c = cfg(false);
        c.trials = 0;
        assert!(run_corpus(&c).is_err());
        let mut c = cfg(false);
        c.dims = vec![17];
        assert!(run_corpus(&c).is_err());
    }
}
