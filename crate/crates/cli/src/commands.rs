use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use blockineq::blocks::gram_block;
use blockineq::corpus::{run_corpus, CorpusConfig, Suite};
use blockineq::extremal::{
    conjecture_report, probe_scan, referee_detail, search as run_search, ProbeFamily, SearchConfig, SearchKind,
};
use blockineq::io::{parse_block, parse_factor_list, BlockJson, MatrixJson};
use blockineq::witness::{mean_witness, offdiag_bound, theorem_witness, DiamondOp, WitnessReportJson};
use blockineq::Tolerance;

use crate::manifest::{Envelope, RunManifest};
use crate::{TolArgs, EXIT_BREACH, EXIT_VIOLATION};

fn tolerance(t: &TolArgs) -> Result<Tolerance> {
    Ok(Tolerance::new(t.tol_rel, t.tol_abs)?)
}

fn read_input(path: &Path, manifest: &mut RunManifest) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    manifest.add_input(path, &bytes);
    String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
}

fn emit<R: Serialize>(out: Option<&Path>, manifest: &RunManifest, report: R) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&Envelope { manifest, report })?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// `2..4` (inclusive), `1,3,5`, or a single value.
pub fn parse_dims(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().context("bad dims range start")?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().context("bad dims range end")?;
        if lo > hi {
            bail!("empty dims range {s}");
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|p| p.trim().parse::<usize>().with_context(|| format!("bad dimension {p:?}")))
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn verify(
    argv: Vec<String>,
    dims: &str,
    trials: usize,
    seed: u64,
    suite: &str,
    out: Option<PathBuf>,
    csv_path: Option<PathBuf>,
    tol: &TolArgs,
) -> Result<u8> {
    let tol = tolerance(tol)?;
    let cfg = CorpusConfig {
        dims: parse_dims(dims)?,
        trials,
        seed,
        suite: suite.parse::<Suite>()?,
        tol,
        parallel: true,
    };
    cfg.validate()?;
    let started = Instant::now();
    let report = run_corpus(&cfg)?;
    eprintln!(
        "checks_run={} failures={} worst_margin={:e} ({:.2?})",
        report.summary.checks_run,
        report.summary.failures,
        report.summary.worst_margin,
        started.elapsed()
    );
    if let Some(r) = &report.reproducer {
        eprintln!(
            "first failure: {} [{}] at n={} trial={} item_seed={}",
            r.check_id, r.params, r.n, r.trial, r.item_seed
        );
    }
    if let Some(p) = &csv_path {
        let mut w = csv::Writer::from_path(p).with_context(|| format!("writing {}", p.display()))?;
        for row in &report.rows {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    let manifest = RunManifest::new(argv, Some(seed), tol);
    let failed = report.summary.failures > 0;
    emit(out.as_deref(), &manifest, &report)?;
    Ok(if failed { EXIT_VIOLATION } else { 0 })
}

#[derive(Serialize)]
struct WitnessOutput {
    op: DiamondOp,
    reports: Vec<WitnessReportJson>,
}

pub fn witness(argv: Vec<String>, block: &Path, op: &str, out: Option<PathBuf>, tol: &TolArgs) -> Result<u8> {
    let tol = tolerance(tol)?;
    let op: DiamondOp = op.parse()?;
    let mut manifest = RunManifest::new(argv, None, tol);
    let text = read_input(block, &mut manifest)?;
    let blk = parse_block::<f64>(&text, &tol).with_context(|| format!("loading {}", block.display()))?;

    let th = theorem_witness(&blk, op, &tol)?;
    let mut reports = vec![th.agm, th.geo];
    if op != DiamondOp::Schur {
        reports.push(mean_witness(&blk, op, &tol)?);
    }
    if op == DiamondOp::Plus {
        reports.extend(offdiag_bound(&blk, &tol)?.reports().into_iter().cloned());
    }
    for r in &reports {
        eprintln!(
            "{:<20} margin={:+.3e} scale={:.3e} {}",
            r.claim.as_str(),
            r.margin,
            r.scale,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    let v = MatrixJson::from_matrix(reports[0].witness());
    eprintln!("V = {}", serde_json::to_string(&v)?);
    let failed = reports.iter().any(|r| !r.pass);
    let output = WitnessOutput {
        op,
        reports: reports.iter().map(|r| r.to_json()).collect(),
    };
    emit(out.as_deref(), &manifest, output)?;
    Ok(if failed { EXIT_VIOLATION } else { 0 })
}

#[derive(Serialize)]
struct ProbeOutput {
    family: ProbeFamily,
    scan: blockineq::extremal::ProbeScan,
    #[serde(skip_serializing_if = "Option::is_none")]
    referee: Option<blockineq::extremal::RefereeDetail>,
}

/// Gap allowed below zero before a probe counts as a failure.
const PROBE_TOL: f64 = 1e-9;
/// Relative agreement required between the projection ratio and its closed
/// form.
const PROJECTION_TOL: f64 = 1e-8;

pub fn probe(
    argv: Vec<String>,
    family: &str,
    t_min: Option<f64>,
    t_max: Option<f64>,
    t_steps: Option<usize>,
    out: Option<PathBuf>,
) -> Result<u8> {
    let family: ProbeFamily = family.parse()?;
    let (lo, hi, steps) = match family {
        ProbeFamily::Projection => (t_min.unwrap_or(0.01), t_max.unwrap_or(3.0), t_steps.unwrap_or(300)),
        _ => (t_min.unwrap_or(0.1), t_max.unwrap_or(10.0), t_steps.unwrap_or(199)),
    };
    let scan = probe_scan(family, lo, hi, steps)?;
    let failed = scan.rows.iter().any(|r| match family {
        ProbeFamily::Projection => (r.ratio / r.bound - 1.0).abs() > PROJECTION_TOL,
        _ => r.gap < -PROBE_TOL,
    });
    match scan.argmax {
        Some(p) => eprintln!("max ratio {:.12} at {p}", scan.max_ratio),
        None => eprintln!("ratio {:.12}", scan.max_ratio),
    }
    let referee = (family == ProbeFamily::Referee).then(referee_detail).transpose()?;
    let manifest = RunManifest::new(argv, None, Tolerance::default());
    emit(out.as_deref(), &manifest, ProbeOutput { family, scan, referee })?;
    Ok(if failed { EXIT_VIOLATION } else { 0 })
}

pub struct SearchArgs {
    pub kind: String,
    pub k: usize,
    pub n: usize,
    pub budget: u64,
    pub restarts: usize,
    pub seed: u64,
    pub step_init: f64,
    pub step_decay: f64,
    pub start: Option<String>,
}

pub fn search(argv: Vec<String>, a: SearchArgs, out: Option<PathBuf>) -> Result<u8> {
    let kind: SearchKind = a.kind.parse()?;
    let mut cfg = SearchConfig::new(kind, a.k, a.n, a.budget, a.restarts, a.seed);
    cfg.step_init = a.step_init;
    cfg.step_decay = a.step_decay;
    let mut manifest = RunManifest::new(argv, Some(a.seed), Tolerance::default());
    match a.start.as_deref() {
        None => {}
        Some("referee") => cfg = cfg.with_referee_start(),
        Some(path) => {
            let text = read_input(Path::new(path), &mut manifest)?;
            let mats: Vec<MatrixJson> = serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
            cfg.start = Some(mats);
        }
    }
    cfg.validate()?;
    let started = Instant::now();
    let (result, summary) = if kind == SearchKind::Triangle && a.k % 2 == 1 {
        let rep = conjecture_report(a.k, a.n, cfg)?;
        (rep.result, Some(rep.summary))
    } else {
        (run_search(&cfg)?, None)
    };
    eprintln!(
        "best_value={:.12} bound={} evals={} ({:.2?})",
        result.best_value,
        result.bound,
        result.eval_count,
        started.elapsed()
    );
    let breach = result.breach.is_some();
    if let Some(b) = &result.breach {
        eprintln!(
            "BOUND EXCEEDED: value {:.15} at restart {} eval {}; reproducer in report field \"breach\"",
            b.value, b.restart, b.eval
        );
    }
    #[derive(Serialize)]
    struct SearchOutput {
        #[serde(skip_serializing_if = "Option::is_none")]
        conjecture: Option<blockineq::extremal::ConjectureSummary>,
        result: blockineq::extremal::SearchResult,
    }
    emit(
        out.as_deref(),
        &manifest,
        SearchOutput {
            conjecture: summary,
            result,
        },
    )?;
    Ok(if breach { EXIT_BREACH } else { 0 })
}

pub fn gram(argv: Vec<String>, factors: &Path, out: Option<PathBuf>, tol: &TolArgs) -> Result<u8> {
    let tol = tolerance(tol)?;
    let mut manifest = RunManifest::new(argv, None, tol);
    let text = read_input(factors, &mut manifest)?;
    let f = parse_factor_list::<f64>(&text).with_context(|| format!("loading {}", factors.display()))?;
    let blk = gram_block(&f, &tol)?;
    eprintln!("n={} psd_margin={:e}", blk.n(), blk.margin());
    emit(out.as_deref(), &manifest, BlockJson::from_block(&blk))?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::parse_dims;

    #[test]
    fn dims_forms() {
        assert_eq!(parse_dims("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_dims("1,3").unwrap(), vec![1, 3]);
        assert_eq!(parse_dims("5").unwrap(), vec![5]);
        assert!(parse_dims("4..2").is_err());
        assert!(parse_dims("x").is_err());
    }
}
