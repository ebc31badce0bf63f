mod common;

use proptest::prelude::*;

use blockineq::blocks::{sample_psd_block, FactorList, PsdBlock};
use blockineq::checks::{
    akext2_check, akext_check, akext_sweep, audeh_kittaneh_check, bhatia_davis_check, det_schwarz_check,
    diag_check, gram_geo_check, gram_norm_check, norm_check_detail, projection_ratio, weyl_geo_sweep,
    zpolar_checks, ALPHA_GRID,
};
use blockineq::linalg::{matrix_abs, Hermitian};
use blockineq::random::{ginibre, random_psd, rng_from_seed};
use blockineq::witness::DiamondOp;
use blockineq::Tolerance;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn block(seed: u64, n: usize) -> PsdBlock<f64> {
    let rank = 1 + (seed % (2 * n as u64)) as usize;
    sample_psd_block(n, rank, seed, &tol()).unwrap()
}

#[test]
fn projection_ratio_closed_form_values() {
    let r = projection_ratio(std::f64::consts::FRAC_PI_2).unwrap();
    assert!((r.ratio - 1.0).abs() < 1e-12);
    let r = projection_ratio(0.02).unwrap();
    assert!((r.ratio * 0.02 / 2.0 - 1.0).abs() < 0.01);
    assert!(projection_ratio(0.0).is_err());
    assert!(projection_ratio(std::f64::consts::PI).is_err());
}

#[test]
fn projection_ratio_matches_closed_form_on_grid() {
    for i in 0..=299 {
        let a = 0.01 + (3.0 - 0.01) * i as f64 / 299.0;
        let r = projection_ratio(a).unwrap();
        // sin a / (1 - cos a) for a <= π/2; past π/2 the smaller eigenvalue
        // of P + Q is 1 + cos a
        let (s, c) = a.sin_cos();
        let expect = s / (1.0 - c.abs());
        assert!((r.ratio / expect - 1.0).abs() < 1e-8, "a = {a}");
        if a <= std::f64::consts::FRAC_PI_2 {
            assert!((r.ratio * (1.0 - c) / s - 1.0).abs() < 1e-8);
        }
    }
}

#[test]
fn schur_case_of_intro_inequality() {
    // λ₃(|AB∘BA|) <= λ₂(A²∘B²) for PSD A, B, computed without the block route
    for seed in 0..50 {
        let mut rng = rng_from_seed(seed);
        let n = 3 + (seed as usize % 3);
        let a = random_psd::<f64, _>(&mut rng, n, n);
        let b = random_psd::<f64, _>(&mut rng, n, 1 + seed as usize % n);
        let r = gram_geo_check(a.matrix(), b.matrix(), DiamondOp::Schur, 1, 1, &tol()).unwrap();
        let ab = a.matrix() * b.matrix();
        let ba = b.matrix() * a.matrix();
        let lhs = matrix_abs(&ab.hadamard(&ba)).unwrap().eigenvalues().unwrap().lambda(3);
        let a2 = a.matrix() * a.matrix();
        let b2 = b.matrix() * b.matrix();
        let rhs = Hermitian::symmetrized(&a2.hadamard(&b2)).eigenvalues().unwrap().lambda(2);
        assert!((r.lhs.sqrt() - lhs).abs() <= 1e-9 * lhs.max(1.0));
        assert!((r.rhs.sqrt() - rhs).abs() <= 1e-9 * rhs.max(1.0));
        assert!(r.pass && lhs <= rhs + 1e-9 * rhs.max(1.0));
    }
}

#[test]
fn akext_index_constraint() {
    let blk = block(1, 3);
    assert!(akext_check(&blk, 1, 0, 1, &tol()).is_err());
    assert!(akext_check(&blk, 1, 0, 2, &tol()).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn akext_diagonal_case_is_audeh_kittaneh(seed in any::<u64>(), n in 1usize..=5) {
        let blk = block(seed, n);
        for j in 0..n {
            let ext = akext_check(&blk, j, j, j, &tol()).unwrap();
            let ak = audeh_kittaneh_check(&blk, j, &tol()).unwrap();
            let scale = ak.rhs.max(1.0);
            prop_assert!((ext.lhs - ak.lhs).abs() <= 1e-12 * scale);
            prop_assert!((ext.rhs - ak.rhs).abs() <= 1e-12 * scale);
            prop_assert!(ext.pass && ak.pass);
        }
        for r in akext_sweep(&blk, &tol()).unwrap() {
            prop_assert!(r.pass, "{} {:?}", r.params, r);
        }
    }

    #[test]
    fn log_majorization_implies_kyfan(seed in any::<u64>(), n in 1usize..=5) {
        let blk = block(seed, n);
        for op in [DiamondOp::Plus, DiamondOp::Schur] {
            let v = norm_check_detail(&blk, op, &tol()).unwrap();
            prop_assert!(!v.wlog || v.kyfan);
            prop_assert!(v.report.pass);
        }
    }

    #[test]
    fn spectral_checks_pass(seed in any::<u64>(), n in 1usize..=4) {
        let blk = block(seed, n);
        let mut rng = rng_from_seed(seed ^ 0x5555);
        let a = ginibre::<f64, _>(&mut rng, n);
        let b = ginibre::<f64, _>(&mut rng, n);
        for op in [DiamondOp::Plus, DiamondOp::Schur, DiamondOp::Minus] {
            for r in weyl_geo_sweep(&blk, op, &tol()).unwrap() {
                prop_assert!(r.pass, "{:?}", r);
            }
        }
        for op in [DiamondOp::Plus, DiamondOp::Schur] {
            prop_assert!(gram_norm_check(&a, &b, op, &tol()).unwrap().pass);
            let (r, w) = zpolar_checks(&a, op, &tol()).unwrap();
            prop_assert!(r.pass && w.pass);
        }
        for j in 0..n {
            prop_assert!(diag_check(&a, j, &tol()).unwrap().pass);
            prop_assert!(akext2_check(&a, &b, j, j, j, &tol()).unwrap().pass);
        }
        let f = FactorList::new(vec![(a.clone(), b.clone()), (b, a)]).unwrap();
        prop_assert!(bhatia_davis_check(&f, &ALPHA_GRID, &tol()).unwrap().pass);
        prop_assert!(det_schwarz_check(&f, &tol()).unwrap().pass);
    }
}
