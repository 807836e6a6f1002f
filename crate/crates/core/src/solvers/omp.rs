use super::{residual, LsqrOptions, RecoveryProblem, RecoveryResult, StopReason};
use crate::error::Result;
use crate::operator::ColumnOperator;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmpOptions {
    /// Stop once `‖r‖₂ < residual_tol`.
    pub residual_tol: f64,
    pub lsqr: LsqrOptions,
}

impl Default for OmpOptions {
    fn default() -> Self {
        OmpOptions {
            residual_tol: 1e-8,
            lsqr: LsqrOptions::default(),
        }
    }
}

/// Orthogonal Matching Pursuit.
///
/// Each step adds the column with the largest `|⟨φ_j, r⟩|` (smallest index on
/// ties) and refits all coefficients by least squares, warm-started from the
/// previous fit. Stops on `‖r‖ < residual_tol`, on `|S| = sparsity`, or with
/// [`StopReason::Stagnation`] when the best column is already selected or
/// every correlation is zero.
pub fn omp<O: ColumnOperator>(problem: &RecoveryProblem<O>, opts: OmpOptions) -> Result<RecoveryResult> {
    let op = &problem.operator;
    let y = &problem.target;
    let mut support: Vec<usize> = Vec::new();
    let mut in_support = vec![false; op.ncols()];
    let mut x: Vec<f64> = Vec::new();
    let mut r = y.clone();
    let mut rnorm = crate::operator::norm2(&r);
    let mut history = vec![rnorm];
    let mut lsqr_ok = true;
    let mut iterations = 0;

    let stop = loop {
        if rnorm < opts.residual_tol {
            break StopReason::ResidualTolerance;
        }
        if support.len() >= problem.sparsity {
            break StopReason::SparsityReached;
        }
        let c = op.correlate_all(&r);
        let best = argmax_abs(&c);
        if c[best] == 0.0 || in_support[best] {
            break StopReason::Stagnation;
        }
        support.push(best);
        in_support[best] = true;
        x.push(0.0);
        let fit = super::lsqr_solve(op, &support, y, Some(&x), opts.lsqr)?;
        lsqr_ok &= fit.converged;
        x = fit.x;
        (r, rnorm) = residual(op, &support, &x, y);
        history.push(rnorm);
        iterations += 1;
    };
    Ok(RecoveryResult::from_pairs(
        support.into_iter().zip(x).collect(),
        rnorm,
        iterations,
        stop,
        lsqr_ok,
        history,
    ))
}

fn argmax_abs(c: &[f64]) -> usize {
    let mut best = 0;
    for (j, v) in c.iter().enumerate() {
        if v.abs() > c[best].abs() {
            best = j;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::LaplacianView;
    use crate::index_set::IndexSet;
    use crate::operator::{ColumnSubset, DenseMatrix};
    use approx::assert_relative_eq;

    #[test]
    fn identity_recovers_basis_vector() {
        let m = DenseMatrix::identity(3);
        let p = RecoveryProblem::new(&m, vec![0.0, 1.0, 0.0], 3).unwrap();
        let res = omp(&p, OmpOptions::default()).unwrap();
        assert_eq!(res.support.as_slice(), &[1]);
        assert_relative_eq!(res.coefficients[0], 1.0, epsilon = 1e-12);
        assert_eq!(res.residual_norm, 0.0);
        assert_eq!(res.iterations, 1);
        assert_eq!(res.stop, StopReason::ResidualTolerance);
    }

    fn component_problem(g: &crate::graph::SparseGraph) -> (Vec<usize>, RecoveryResult) {
        let lap = LaplacianView::new(g).unwrap();
        let cols = IndexSet::all_except(g.n(), 0).into_vec();
        let y: Vec<f64> = lap.column(0).iter().map(|v| -v).collect();
        let sub = ColumnSubset::new(&lap, cols.clone());
        let n = cols.len();
        let p = RecoveryProblem::new(sub, y, n).unwrap();
        (cols, omp(&p, OmpOptions::default()).unwrap())
    }

    #[test]
    fn two_edges_component() {
        let (cols, res) = component_problem(&two_edges());
        assert_eq!(res.support.map_through(&cols).as_slice(), &[1]);
        assert_relative_eq!(res.coefficients[0], 1.0, epsilon = 1e-10);
        assert!(res.residual_norm < 1e-12);
    }

    #[test]
    fn two_triangles_component() {
        let (cols, res) = component_problem(&two_triangles());
        assert_eq!(res.support.map_through(&cols).as_slice(), &[1, 2]);
        for c in &res.coefficients {
            assert_relative_eq!(*c, 1.0, epsilon = 1e-8);
        }
        assert!(res.residual_norm < 1e-8);
    }

    #[test]
    fn zero_target_stops_immediately() {
        let m = DenseMatrix::identity(2);
        let p = RecoveryProblem::new(&m, vec![0.0; 2], 2).unwrap();
        let res = omp(&p, OmpOptions::default()).unwrap();
        assert!(res.support.is_empty());
        assert_eq!(res.iterations, 0);
    }

    #[test]
    fn stagnates_when_target_outside_span() {
        let m = DenseMatrix::from_rows(&[vec![1.0], vec![0.0]]).unwrap();
        let p = RecoveryProblem::new(&m, vec![1.0, 1.0], 1).unwrap();
        let res = omp(&p, OmpOptions::default()).unwrap();
        assert_eq!(res.stop, StopReason::SparsityReached);
        let m = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let p = RecoveryProblem::new(&m, vec![1.0, 1.0], 2).unwrap();
        let res = omp(&p, OmpOptions::default()).unwrap();
        assert_eq!(res.stop, StopReason::Stagnation);
        assert!(!res.converged());
    }
}
