//! Derivative-free search for configurations approaching the sharp
//! constants.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::probes::{project_contraction, referee_pair, triangle_objective};
use crate::error::{Error, Result};
use crate::io::MatrixJson;
use crate::linalg::{hermitian_abs, Hermitian, Matrix};
use crate::random::{derive_seed, ginibre, rng_from_seed, SeededRng};

/// Failed proposals in a row before the step shrinks.
pub const FAILURE_STREAK: usize = 20;
/// Improvements between retained trajectory entries.
pub const TRAJECTORY_STRIDE: usize = 100;
/// Absolute slack on the proved bounds before a visited value counts as a
/// breach.
pub const BREACH_SLACK: f64 = 1e-9;
pub const DEFAULT_STEP_INIT: f64 = 0.5;
pub const DEFAULT_STEP_DECAY: f64 = 0.9;
/// Restart count that spreads a budget of `2·10⁵` triangle evaluations
/// before the step collapses.
pub const DEFAULT_RESTARTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchKind {
    Triangle,
    TheoremPlus,
    TheoremSchur,
}

impl std::str::FromStr for SearchKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triangle" => Ok(SearchKind::Triangle),
            "theorem_plus" | "theorem-plus" => Ok(SearchKind::TheoremPlus),
            "theorem_schur" | "theorem-schur" => Ok(SearchKind::TheoremSchur),
            other => Err(Error::InvalidConfig(format!("unknown search kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub kind: SearchKind,
    /// Number of contractions (triangle only).
    pub k: usize,
    pub n: usize,
    /// Total objective evaluations across restarts.
    pub budget: u64,
    pub restarts: usize,
    pub seed: u64,
    pub step_init: f64,
    pub step_decay: f64,
    /// Start point for restart 0: `k` contractions, or one `2n × 2n` Gram
    /// factor for the theorem kinds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<MatrixJson>>,
}

impl SearchConfig {
    pub fn new(kind: SearchKind, k: usize, n: usize, budget: u64, restarts: usize, seed: u64) -> Self {
        Self {
            kind,
            k,
            n,
            budget,
            restarts,
            seed,
            step_init: DEFAULT_STEP_INIT,
            step_decay: DEFAULT_STEP_DECAY,
            start: None,
        }
    }

    /// Starts restart 0 at the referee pair (triangle, `k = 2`, `n = 3`).
    pub fn with_referee_start(mut self) -> Self {
        let (c1, c2) = referee_pair();
        self.start = Some(vec![MatrixJson::from_matrix(&c1), MatrixJson::from_matrix(&c2)]);
        self
    }

    pub fn bound(&self) -> f64 {
        match self.kind {
            SearchKind::Triangle => self.k as f64 / 4.0,
            _ => 0.25,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.n == 0 {
            return bad("n must be at least 1");
        }
        if self.restarts == 0 || self.budget < self.restarts as u64 {
            return bad("need budget >= restarts >= 1");
        }
        if self.kind == SearchKind::Triangle && self.k < 2 {
            return bad("triangle search needs k >= 2");
        }
        if !(self.step_init > 0.0 && self.step_init.is_finite()) {
            return bad("step_init must be positive");
        }
        if !(self.step_decay > 0.0 && self.step_decay < 1.0) {
            return bad("step_decay must lie in (0, 1)");
        }
        if let Some(start) = &self.start {
            let (count, dim) = match self.kind {
                SearchKind::Triangle => (self.k, self.n),
                _ => (1, 2 * self.n),
            };
            if start.len() != count || start.iter().any(|m| m.n != dim) {
                return bad("start point has the wrong shape");
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub restart: usize,
    /// Evaluation index within the restart (0 is the start point).
    pub eval: u64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub index: usize,
    pub seed: u64,
    pub best_value: f64,
    pub evals: u64,
    pub final_step: f64,
}

/// A visited point whose value exceeded the bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Breach {
    pub restart: usize,
    pub eval: u64,
    pub value: f64,
    pub point: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub config: SearchConfig,
    pub best_value: f64,
    pub bound: f64,
    pub best_restart: usize,
    pub best_point: Vec<MatrixJson>,
    pub eval_count: u64,
    pub trajectory: Vec<TrajectoryPoint>,
    pub restarts: Vec<RestartSummary>,
    pub breach: Option<Breach>,
}

fn normalize(g: Matrix<f64>) -> Matrix<f64> {
    let f = g.norm_fro();
    if f > 0.0 {
        g.scale(1.0 / f)
    } else {
        Matrix::identity(g.dim()).scale(1.0 / (g.dim() as f64).sqrt())
    }
}

/// `λ₁(|X⋄X*| - A⋄B) / λ₁(A⋄B)` for the block `G*G`.
pub fn theorem_objective(g: &Matrix<f64>, schur: bool) -> f64 {
    let m = &g.adjoint() * g;
    let n = m.dim() / 2;
    let a = m.block(0, 0, n);
    let x = m.block(0, n, n);
    let b = m.block(n, n, n);
    let xs = x.adjoint();
    let (h, c) = if schur {
        (x.hadamard(&xs), a.hadamard(&b))
    } else {
        (&x + &xs, &a + &b)
    };
    let c = Hermitian::symmetrized(&c);
    let value = (|| -> Result<f64> {
        let abs_h = hermitian_abs(&Hermitian::symmetrized(&h))?;
        let top = c.eigenvalues()?.max();
        if !(top > f64::MIN_POSITIVE) {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(abs_h.hermitian().sub(&c).eigenvalues()?.max() / top)
    })();
    value.unwrap_or(f64::NEG_INFINITY)
}

fn evaluate(kind: SearchKind, point: &[Matrix<f64>]) -> f64 {
    match kind {
        SearchKind::Triangle => triangle_objective(point).unwrap_or(f64::NEG_INFINITY),
        SearchKind::TheoremPlus => theorem_objective(&point[0], false),
        SearchKind::TheoremSchur => theorem_objective(&point[0], true),
    }
}

fn feasible(kind: SearchKind, m: Matrix<f64>) -> Matrix<f64> {
    match kind {
        SearchKind::Triangle => project_contraction(&m).unwrap_or(m),
        _ => normalize(m),
    }
}

fn start_point(cfg: &SearchConfig, restart: usize, rng: &mut SeededRng) -> Result<Vec<Matrix<f64>>> {
    if restart == 0 {
        if let Some(start) = &cfg.start {
            return start
                .iter()
                .map(|m| Ok(feasible(cfg.kind, m.to_matrix()?)))
                .collect();
        }
    }
    Ok(match cfg.kind {
        SearchKind::Triangle => (0..cfg.k).map(|_| feasible(cfg.kind, ginibre(rng, cfg.n))).collect(),
        _ => {
            // Gram factor of a block of rank cycling through 1..=2n
            let dim = 2 * cfg.n;
            let rank = 1 + restart % dim;
            let g = ginibre::<f64, _>(rng, dim);
            let g = Matrix::from_fn(dim, |i, j| if i < rank { g[(i, j)] } else { Complex::new(0.0, 0.0) });
            vec![normalize(g)]
        }
    })
}

struct RestartOutcome {
    summary: RestartSummary,
    best_point: Vec<Matrix<f64>>,
    trajectory: Vec<TrajectoryPoint>,
    breach: Option<Breach>,
}

fn run_restart(cfg: &SearchConfig, restart: usize, budget: u64) -> Result<RestartOutcome> {
    let seed = derive_seed(cfg.seed, restart as u64);
    let mut rng = rng_from_seed(seed);
    let bound = cfg.bound();
    let to_json = |p: &[Matrix<f64>]| p.iter().map(MatrixJson::from_matrix).collect::<Vec<_>>();

    let mut current = start_point(cfg, restart, &mut rng)?;
    let mut value = evaluate(cfg.kind, &current);
    let mut improvements = vec![TrajectoryPoint { restart, eval: 0, value }];
    let mut step = cfg.step_init;
    let mut streak = 0;
    let mut evals = 1;
    let mut breach = (value > bound + BREACH_SLACK).then(|| Breach {
        restart,
        eval: 0,
        value,
        point: to_json(&current),
    });

    while evals < budget && breach.is_none() {
        let candidate: Vec<Matrix<f64>> = current
            .iter()
            .map(|m| {
                let noise = ginibre::<f64, _>(&mut rng, m.dim()).scale(step);
                feasible(cfg.kind, m + &noise)
            })
            .collect();
        let v = evaluate(cfg.kind, &candidate);
        let eval = evals;
        evals += 1;
        if v > bound + BREACH_SLACK {
            breach = Some(Breach {
                restart,
                eval,
                value: v,
                point: to_json(&candidate),
            });
        }
        if v > value {
            current = candidate;
            value = v;
            streak = 0;
            improvements.push(TrajectoryPoint { restart, eval, value });
        } else {
            streak += 1;
            if streak == FAILURE_STREAK {
                step *= cfg.step_decay;
                streak = 0;
            }
        }
    }

    let last = improvements.len() - 1;
    let trajectory = improvements
        .into_iter()
        .enumerate()
        .filter(|(i, _)| i % TRAJECTORY_STRIDE == 0 || *i == last)
        .map(|(_, p)| p)
        .collect();
    Ok(RestartOutcome {
        summary: RestartSummary {
            index: restart,
            seed,
            best_value: value,
            evals,
            final_step: step,
        },
        best_point: current,
        trajectory,
        breach,
    })
}

/// Multi-restart (1+1) evolution strategy. Restarts run in parallel with
/// independent streams and are merged by restart index.
pub fn search(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let r = cfg.restarts as u64;
    let outcomes = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let share = cfg.budget / r + u64::from((i as u64) < cfg.budget % r);
            run_restart(cfg, i, share)
        })
        .collect::<Result<Vec<_>>>()?;

    let best = outcomes
        .iter()
        .enumerate()
        .fold(0, |b, (i, o)| if o.summary.best_value > outcomes[b].summary.best_value { i } else { b });
    Ok(SearchResult {
        config: cfg.clone(),
        best_value: outcomes[best].summary.best_value,
        bound: cfg.bound(),
        best_restart: best,
        best_point: outcomes[best].best_point.iter().map(MatrixJson::from_matrix).collect(),
        eval_count: outcomes.iter().map(|o| o.summary.evals).sum(),
        trajectory: outcomes.iter().flat_map(|o| o.trajectory.iter().copied()).collect(),
        breach: outcomes.iter().find_map(|o| o.breach.clone()),
        restarts: outcomes.into_iter().map(|o| o.summary).collect(),
    })
}

/// Evidence summary for the odd-`k` sharpness question.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureSummary {
    pub k: usize,
    pub n: usize,
    pub best_value: f64,
    pub conjectured_bound: f64,
    /// `best_value / (k/4)`.
    pub gap_closed: f64,
    /// A visited value exceeded `k/4 + tol`: a numerical bug or a
    /// counterexample candidate, to be re-verified independently.
    pub flagged: bool,
    /// Re-evaluation of a flagged point through the certified witness.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reverified_margin: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub summary: ConjectureSummary,
    pub result: SearchResult,
}

/// Triangle search for odd `k > 1`. Even `k` is settled and rejected.
pub fn conjecture_report(k: usize, n: usize, mut cfg: SearchConfig) -> Result<ConjectureReport> {
    if k.is_multiple_of(2) {
        return Err(Error::EvenK(k));
    }
    if k < 2 {
        return Err(Error::InvalidConfig("k must exceed 1".into()));
    }
    cfg.kind = SearchKind::Triangle;
    cfg.k = k;
    cfg.n = n;
    let result = search(&cfg)?;
    let bound = cfg.bound();
    let reverified_margin = match &result.breach {
        Some(b) => {
            let tight = crate::linalg::ToleranceCfg::new(1e-13, 1e-15)?;
            let point = b.point.iter().map(|m| m.to_matrix()).collect::<Result<Vec<Matrix<f64>>>>()?;
            Some(crate::witness::triangle_bound(&point, &tight)?.margin)
        }
        None => None,
    };
    Ok(ConjectureReport {
        summary: ConjectureSummary {
            k,
            n,
            best_value: result.best_value,
            conjectured_bound: bound,
            gap_closed: result.best_value / bound,
            flagged: result.breach.is_some(),
            reverified_margin,
        },
        result,
    })
}
