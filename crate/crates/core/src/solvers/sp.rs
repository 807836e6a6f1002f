use super::{residual, select_largest, LsqrOptions, RecoveryProblem, RecoveryResult, StopReason};
use crate::error::Result;
use crate::index_set::IndexSet;
use crate::operator::ColumnOperator;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpOptions {
    /// `None` means [`default_k_max`] of the column count.
    pub k_max: Option<usize>,
    /// Stop once `‖r‖₂ ≤ tol · ‖y‖₂`.
    pub tol: f64,
    pub lsqr: LsqrOptions,
}

impl Default for SpOptions {
    fn default() -> Self {
        SpOptions {
            k_max: None,
            tol: 1e-10,
            lsqr: LsqrOptions::default(),
        }
    }
}

/// `max(10, ⌈log₂ N⌉)`.
pub fn default_k_max(ncols: usize) -> usize {
    let log = if ncols <= 1 { 0 } else { usize::BITS - (ncols - 1).leading_zeros() } as usize;
    log.max(10)
}

/// Subspace Pursuit.
///
/// Starts from the `s` largest correlations with `y`, then repeatedly merges
/// in the `s` largest correlations with the residual, solves least squares on
/// the merged set and keeps its `s` largest coefficients. Returns the previous
/// iterate as soon as the residual stops decreasing. The support always has
/// exactly `min(s, N)` indices.
pub fn subspace_pursuit<O: ColumnOperator>(problem: &RecoveryProblem<O>, opts: SpOptions) -> Result<RecoveryResult> {
    let op = &problem.operator;
    let y = &problem.target;
    let s = problem.sparsity.min(op.ncols());
    let ynorm = crate::operator::norm2(y);
    if s == 0 {
        return Ok(RecoveryResult::from_pairs(Vec::new(), ynorm, 0, StopReason::EmptyBudget, true, vec![ynorm]));
    }
    let k_max = opts.k_max.unwrap_or_else(|| default_k_max(op.ncols()));
    let mut lsqr_ok = true;

    let mut t = select_largest(&op.correlate_all(y), s);
    let fit = super::lsqr_solve(op, t.as_slice(), y, None, opts.lsqr)?;
    lsqr_ok &= fit.converged;
    let mut x = fit.x;
    let (mut r, mut rnorm) = residual(op, t.as_slice(), &x, y);
    let mut history = vec![rnorm];
    let mut iterations = 0;

    let stop = loop {
        if rnorm <= opts.tol * ynorm {
            break StopReason::ResidualTolerance;
        }
        if iterations >= k_max {
            break StopReason::MaxIterations;
        }
        let expanded = t.union(&select_largest(&op.correlate_all(&r), s));
        let warm: Vec<f64> = expanded
            .iter()
            .map(|j| t.as_slice().binary_search(&j).map_or(0.0, |p| x[p]))
            .collect();
        let fit = super::lsqr_solve(op, expanded.as_slice(), y, Some(&warm), opts.lsqr)?;
        lsqr_ok &= fit.converged;
        let keep = select_largest(&fit.x, s);
        let new_t: IndexSet = keep.map_through(expanded.as_slice());
        let new_x: Vec<f64> = keep.iter().map(|p| fit.x[p]).collect();
        let (new_r, new_norm) = residual(op, new_t.as_slice(), &new_x, y);
        iterations += 1;
        history.push(new_norm);
        if new_norm >= rnorm {
            break StopReason::ResidualIncreased;
        }
        (t, x, r, rnorm) = (new_t, new_x, new_r, new_norm);
    };
    Ok(RecoveryResult::from_pairs(
        t.iter().zip(x).collect(),
        rnorm,
        iterations,
        stop,
        lsqr_ok,
        history,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::two_triangles;
    use crate::graph::LaplacianView;
    use crate::operator::{ColumnSubset, DenseMatrix};
    use approx::assert_relative_eq;

    #[test]
    fn k_max_default() {
        assert_eq!(default_k_max(1), 10);
        assert_eq!(default_k_max(1024), 10);
        assert_eq!(default_k_max(1025), 11);
        assert_eq!(default_k_max(5000), 13);
    }

    #[test]
    fn orthonormal_exact_recovery() {
        let h = 0.5f64.sqrt();
        let m = DenseMatrix::from_rows(&[
            vec![h, h, 0.0, 0.0],
            vec![h, -h, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        let x_true = [0.0, 2.0, 0.0, -1.0];
        let mut y = vec![0.0; 4];
        m.apply_columns(&[0, 1, 2, 3], &x_true, &mut y);
        let p = RecoveryProblem::new(&m, y, 2).unwrap();
        let res = subspace_pursuit(&p, SpOptions::default()).unwrap();
        assert_eq!(res.support.as_slice(), &[1, 3]);
        assert_eq!(res.iterations, 0);
        assert_relative_eq!(res.coefficients[0], 2.0, epsilon = 1e-12);
        assert_relative_eq!(res.coefficients[1], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn two_triangle_scp_subproblem() {
        let g = two_triangles();
        let lap = LaplacianView::new(&g).unwrap();
        let phi = ColumnSubset::new(&lap, vec![1, 2, 3]);
        let y = lap.column(3);
        let corr = phi.correlate_all(&y);
        assert_eq!(corr[0], 0.0);
        assert_eq!(corr[1], 0.0);
        assert_relative_eq!(corr[2], 1.5);
        let p = RecoveryProblem::new(&phi, y, 1).unwrap();
        let res = subspace_pursuit(&p, SpOptions::default()).unwrap();
        assert_eq!(res.support.as_slice(), &[2]);
        assert!(res.residual_norm < 1e-10);
    }

    #[test]
    fn zero_budget_is_empty() {
        let m = DenseMatrix::identity(3);
        let p = RecoveryProblem::new(&m, vec![1.0, 0.0, 0.0], 0).unwrap();
        let res = subspace_pursuit(&p, SpOptions::default()).unwrap();
        assert!(res.support.is_empty());
        assert_eq!(res.stop, StopReason::EmptyBudget);
        assert_eq!(res.residual_norm, 1.0);
    }

    #[test]
    fn support_size_is_budget_even_for_sparse_truth() {
        let m = DenseMatrix::identity(5);
        let p = RecoveryProblem::new(&m, vec![0.0, 3.0, 0.0, 0.0, 0.0], 3).unwrap();
        let res = subspace_pursuit(&p, SpOptions::default()).unwrap();
        assert_eq!(res.support.len(), 3);
        assert!(res.support.contains(1));
    }
}
