//! Greedy sparse recovery over a [`ColumnOperator`].
//!
//! Both solvers correlate with raw inner products `Φᵀr` (no column
//! normalization) and refit coefficients with [`lsqr_solve`].

mod lsqr;
mod omp;
mod sp;

pub use lsqr::{lsqr_solve, LsqrOptions, LsqrOutcome};
pub use omp::{omp, OmpOptions};
pub use sp::{default_k_max, subspace_pursuit, SpOptions};

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::operator::ColumnOperator;

/// Recover a sparse `x` with `Φx ≈ y`, `‖x‖₀ ≤ sparsity`.
#[derive(Debug, Clone)]
pub struct RecoveryProblem<O> {
    pub operator: O,
    pub target: Vec<f64>,
    pub sparsity: usize,
}

impl<O: ColumnOperator> RecoveryProblem<O> {
    pub fn new(operator: O, target: Vec<f64>, sparsity: usize) -> Result<Self> {
        if target.len() != operator.nrows() {
            return Err(Error::DimensionMismatch {
                expected: operator.nrows(),
                got: target.len(),
            });
        }
        if target.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("recovery target"));
        }
        if sparsity > operator.ncols() {
            return Err(Error::InvalidParameter(format!(
                "sparsity {sparsity} exceeds {} columns",
                operator.ncols()
            )));
        }
        Ok(RecoveryProblem {
            operator,
            target,
            sparsity,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Residual fell below the tolerance.
    ResidualTolerance,
    /// Support reached the sparsity budget.
    SparsityReached,
    /// OMP picked a column it already had, or every correlation was zero.
    Stagnation,
    /// SP residual stopped decreasing; the previous iterate was returned.
    ResidualIncreased,
    /// Iteration cap reached.
    MaxIterations,
    /// Sparsity budget was zero.
    EmptyBudget,
}

#[derive(Debug, Clone)]
pub struct RecoveryResult {
    pub support: IndexSet,
    /// Coefficients aligned with `support` in increasing index order.
    pub coefficients: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub stop: StopReason,
    /// False if any inner least-squares solve hit its iteration cap.
    pub lsqr_converged: bool,
    /// Residual norm after initialization and after each iteration.
    pub residual_history: Vec<f64>,
}

impl RecoveryResult {
    pub fn converged(&self) -> bool {
        !matches!(self.stop, StopReason::Stagnation | StopReason::MaxIterations) && self.lsqr_converged
    }

    /// Dense coefficient vector of length `ncols`.
    pub fn dense(&self, ncols: usize) -> Vec<f64> {
        let mut x = vec![0.0; ncols];
        for (j, &c) in self.support.iter().zip(&self.coefficients) {
            x[j] = c;
        }
        x
    }

    fn from_pairs(
        mut pairs: Vec<(usize, f64)>,
        residual_norm: f64,
        iterations: usize,
        stop: StopReason,
        lsqr_converged: bool,
        residual_history: Vec<f64>,
    ) -> Self {
        pairs.sort_unstable_by_key(|p| p.0);
        let support = IndexSet::from_sorted(pairs.iter().map(|p| p.0).collect()).expect("distinct support");
        RecoveryResult {
            support,
            coefficients: pairs.into_iter().map(|p| p.1).collect(),
            residual_norm,
            iterations,
            stop,
            lsqr_converged,
            residual_history,
        }
    }
}

/// Larger magnitude first, then smaller index.
fn magnitude_order(v: &[f64]) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&a, &b| v[b].abs().total_cmp(&v[a].abs()).then(a.cmp(&b))
}

/// Indices of the `s` largest `|v_i|`, smaller index first on ties.
pub fn select_largest(v: &[f64], s: usize) -> IndexSet {
    if s >= v.len() {
        return IndexSet::range(v.len());
    }
    if s == 0 {
        return IndexSet::empty();
    }
    let mut idx: Vec<usize> = (0..v.len()).collect();
    let order = magnitude_order(v);
    idx.select_nth_unstable_by(s - 1, &order);
    idx.truncate(s);
    IndexSet::from_unsorted(idx)
}

/// Keeps the entries on [`select_largest`]`(v, s)` and zeros the rest.
pub fn hard_threshold(v: &[f64], s: usize) -> Vec<f64> {
    let keep = select_largest(v, s);
    let mut out = vec![0.0; v.len()];
    for i in keep.iter() {
        out[i] = v[i];
    }
    out
}

/// `y − Φ_cols x` and its norm.
pub(crate) fn residual<O: ColumnOperator + ?Sized>(op: &O, cols: &[usize], x: &[f64], y: &[f64]) -> (Vec<f64>, f64) {
    let mut r = vec![0.0; op.nrows()];
    op.apply_columns(cols, x, &mut r);
    for (ri, yi) in r.iter_mut().zip(y) {
        *ri = yi - *ri;
    }
    let norm = crate::operator::norm2(&r);
    (r, norm)
}
