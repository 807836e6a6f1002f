mod common;

use clusterpursuit::diagnostics::erc_check;
use clusterpursuit::operator::ColumnOperator;
use clusterpursuit::solvers::{lsqr_solve, omp, subspace_pursuit, LsqrOptions, OmpOptions, RecoveryProblem, SpOptions, StopReason};
use clusterpursuit::IndexSet;
use common::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::seq::index;
use rand::Rng;

/// `Φ_S^T r` relative to `‖Φ_S‖_F ‖r‖`.
fn orthogonality_gap<O: ColumnOperator>(op: &O, support: &IndexSet, r: &[f64]) -> f64 {
    let mut c = vec![0.0; support.len()];
    op.correlate_columns(support.as_slice(), r, &mut c);
    let fro: f64 = support.iter().map(|j| norm(&op.column(j)).powi(2)).sum::<f64>().sqrt();
    norm(&c) / (fro * norm(r)).max(f64::MIN_POSITIVE)
}

fn residual<O: ColumnOperator>(op: &O, support: &IndexSet, coef: &[f64], y: &[f64]) -> Vec<f64> {
    let mut ax = vec![0.0; y.len()];
    op.apply_columns(support.as_slice(), coef, &mut ax);
    y.iter().zip(&ax).map(|(a, b)| a - b).collect()
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn omp_residual_is_orthogonal_and_shrinks(m in 10usize..30, n in 10usize..40, budget in 1usize..8, seed: u64) {
        let a = dense_matrix(m, n, seed);
        let y: Vec<f64> = (0..m).map(|i| ((i as f64) * 0.7 + seed as f64).sin()).collect();
        let budget = budget.min(m).min(n);
        for t in 1..=budget {
            let res = omp(&RecoveryProblem::new(&a, y.clone(), t).unwrap(), OmpOptions::default()).unwrap();
            let r = residual(&a, &res.support, &res.coefficients, &y);
            prop_assert!((norm(&r) - res.residual_norm).abs() < 1e-9 * (1.0 + norm(&y)));
            if res.residual_norm > 1e-6 * norm(&y) {
                prop_assert!(orthogonality_gap(&a, &res.support, &r) < 1e-7);
            }
            prop_assert!(res.residual_history.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-14));
        }
    }

    #[test]
    fn omp_on_laplacian_keeps_orthogonality(n in 6usize..30, seed: u64) {
        let g = connected_graph(n, 0.3, false, seed);
        let lap = clusterpursuit::LaplacianView::new(&g).unwrap();
        let phi = clusterpursuit::ColumnSubset::new(&lap, (1..n).collect());
        let y: Vec<f64> = lap.column(0).iter().map(|v| -v).collect();
        let res = omp(&RecoveryProblem::new(&phi, y.clone(), n - 1).unwrap(), OmpOptions::default()).unwrap();
        prop_assert_eq!(res.stop, StopReason::ResidualTolerance);
        prop_assert_eq!(res.support.len(), n - 1);
        for t in 1..res.support.len() {
            let part = omp(&RecoveryProblem::new(&phi, y.clone(), t).unwrap(), OmpOptions::default()).unwrap();
            let r = residual(&phi, &part.support, &part.coefficients, &y);
            if part.residual_norm > 1e-6 * norm(&y) {
                prop_assert!(orthogonality_gap(&phi, &part.support, &r) < 1e-7);
            }
        }
    }

    #[test]
    fn sp_support_has_exactly_s_entries(m in 8usize..30, n in 8usize..40, s in 0usize..10, seed: u64) {
        let a = dense_matrix(m, n, seed);
        let y: Vec<f64> = (0..m).map(|i| ((i * 3) as f64 + seed as f64 * 0.1).cos()).collect();
        let s = s.min(n);
        let res = subspace_pursuit(&RecoveryProblem::new(&a, y, s).unwrap(), SpOptions::default()).unwrap();
        if s == 0 {
            prop_assert_eq!(res.stop, StopReason::EmptyBudget);
            prop_assert!(res.support.is_empty());
        } else {
            prop_assert_eq!(res.support.len(), s);
            prop_assert_eq!(res.coefficients.len(), s);
        }
    }

    #[test]
    fn sp_history_never_increases(m in 15usize..40, n in 20usize..60, seed: u64) {
        let a = unit_columns(dense_matrix(m, n, seed));
        let y: Vec<f64> = (0..m).map(|i| ((i as f64) * 1.1 + seed as f64).sin()).collect();
        let res = subspace_pursuit(&RecoveryProblem::new(&a, y, 3).unwrap(), SpOptions::default()).unwrap();
        let h = &res.residual_history;
        let accepted = if res.stop == StopReason::ResidualIncreased {
            prop_assert!(h[h.len() - 1] >= h[h.len() - 2]);
            &h[..h.len() - 1]
        } else {
            &h[..]
        };
        prop_assert!(accepted.windows(2).all(|w| w[1] < w[0]));
        prop_assert_eq!(res.residual_norm, *accepted.last().unwrap());
    }

    #[test]
    fn erc_implies_omp_recovery(m in 12usize..24, n in 12usize..32, k in 1usize..5, seed: u64) {
        let a = unit_columns(dense_matrix(m, n, seed));
        let mut rng = clusterpursuit::rng::stream(seed ^ 0xABCD);
        let supp = IndexSet::from_unsorted(index::sample(&mut rng, n, k).into_vec());
        let erc = erc_check(&a, &supp).unwrap();
        prop_assume!(erc.holds);
        let x: Vec<f64> = (0..k).map(|_| rng.random_range(0.5..2.0) * if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
        let y = matvec(&a, supp.as_slice(), &x);
        let opts = OmpOptions { residual_tol: 1e-10, ..OmpOptions::default() };
        let res = omp(&RecoveryProblem::new(&a, y, n).unwrap(), opts).unwrap();
        prop_assert_eq!(res.support, supp);
        for (c, want) in res.coefficients.iter().zip(&x) {
            prop_assert!((c - want).abs() < 1e-8);
        }
    }

    #[test]
    fn lsqr_matches_normal_equations(m in 10usize..40, k in 1usize..8, seed: u64) {
        let a = dense_matrix(m, k + 5, seed);
        let cols: Vec<usize> = (0..k).collect();
        let y: Vec<f64> = (0..m).map(|i| (i as f64 * 0.3 + 1.0).ln()).collect();
        let out = lsqr_solve(&a, &cols, &y, None, LsqrOptions::default()).unwrap();
        let sub = DMatrix::from_fn(m, k, |i, j| a.get(i, cols[j]));
        let gram = sub.transpose() * &sub;
        let rhs = sub.transpose() * DVector::from_column_slice(&y);
        let want = gram.cholesky().unwrap().solve(&rhs);
        let err: f64 = out.x.iter().zip(want.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-8 * want.norm().max(1e-300), "err {err}");
    }
}

#[test]
fn identity_examples() {
    let eye = clusterpursuit::DenseMatrix::identity(3);
    let res = omp(&RecoveryProblem::new(&eye, vec![0.0, 1.0, 0.0], 3).unwrap(), OmpOptions::default()).unwrap();
    assert_eq!(res.support.as_slice(), &[1]);
    assert_eq!(res.coefficients, vec![1.0]);
    assert_eq!(res.iterations, 1);

    let eye = clusterpursuit::DenseMatrix::identity(6);
    let y = vec![0.0, 2.0, 0.0, -1.0, 0.0, 0.5];
    let res = subspace_pursuit(&RecoveryProblem::new(&eye, y, 3).unwrap(), SpOptions::default()).unwrap();
    assert_eq!(res.support.as_slice(), &[1, 3, 5]);
    assert!(res.residual_norm < 1e-12);
}

#[test]
fn warm_start_does_not_change_the_solution() {
    let a = dense_matrix(30, 8, 3);
    let cols: Vec<usize> = (0..8).collect();
    let y: Vec<f64> = (0..30).map(|i| i as f64).collect();
    let cold = lsqr_solve(&a, &cols, &y, None, LsqrOptions::default()).unwrap();
    let guess: Vec<f64> = cold.x.iter().map(|v| v * 0.9).collect();
    let warm = lsqr_solve(&a, &cols, &y, Some(&guess), LsqrOptions::default()).unwrap();
    for (c, w) in cold.x.iter().zip(&warm.x) {
        assert!((c - w).abs() < 1e-8 * (1.0 + c.abs()));
    }
}
