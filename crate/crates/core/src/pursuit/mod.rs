//! Single Cluster Pursuit and the algorithms built on it.
//!
//! Everything here works against any square [`ColumnOperator`] whose columns
//! behave like random-walk Laplacian columns, which covers both
//! [`LaplacianView`](crate::graph::LaplacianView) and
//! [`BipartiteLaplacian`](crate::bipartite::BipartiteLaplacian).

mod cocluster;
mod iscp;

pub use cocluster::{cocluster, CoclusterConfig, CoclusterResult};
pub use iscp::{iscp, IscpConfig, IscpResult};

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::operator::{ColumnOperator, ColumnSubset};
use crate::solvers::{omp, select_largest, subspace_pursuit, OmpOptions, RecoveryProblem, RecoveryResult, SpOptions, StopReason};

pub const DEFAULT_OMEGA_FACTOR: f64 = 10.0 / 9.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ScpConfig {
    pub seed_vertex: usize,
    /// Estimated size of the seed's cluster.
    pub n0_hat: usize,
    /// `|Ω| = ⌈omega_factor · (n0_hat − 1)⌉`.
    pub omega_factor: f64,
    pub sp: SpOptions,
}

impl ScpConfig {
    pub fn new(seed_vertex: usize, n0_hat: usize) -> Self {
        ScpConfig {
            seed_vertex,
            n0_hat,
            omega_factor: DEFAULT_OMEGA_FACTOR,
            sp: SpOptions::default(),
        }
    }

    pub fn with_omega_factor(mut self, f: f64) -> Self {
        self.omega_factor = f;
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.seed_vertex >= n {
            return Err(Error::IndexOutOfRange { index: self.seed_vertex, n });
        }
        if self.n0_hat < 2 || self.n0_hat > n {
            return Err(Error::InvalidParameter(format!(
                "n0_hat = {} must lie in [2, {n}]",
                self.n0_hat
            )));
        }
        if !(self.omega_factor > 1.0) || !self.omega_factor.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "omega_factor = {} must be finite and > 1",
                self.omega_factor
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub threshold: Duration,
    pub sparse_recovery: Duration,
    pub total: Duration,
}

#[derive(Debug, Clone)]
pub struct ClusterResult {
    pub cluster: IndexSet,
    pub omega: IndexSet,
    pub lambda_sharp: IndexSet,
    pub sp_result: RecoveryResult,
    /// `|Ω| ≤ n0_hat − 1`, so the sparse step had nothing to remove.
    pub empty_budget: bool,
    /// The requested `|Ω|` exceeded `n − 1`.
    pub omega_clamped: bool,
    pub timings: StageTimings,
}

impl ClusterResult {
    /// Misclassification `|C# ∖ C| / |C#|` against a reference cluster.
    pub fn misclassification(&self, truth: &IndexSet) -> f64 {
        crate::pipeline::misclassification(&self.cluster, truth).expect("cluster contains the seed")
    }
}

/// `⌈f · (n0_hat − 1)⌉`, treating values within 1e-9 of an integer as that
/// integer so that e.g. `10/9 · 9` gives 10.
pub fn omega_budget(n0_hat: usize, omega_factor: f64) -> usize {
    let x = omega_factor * (n0_hat.saturating_sub(1)) as f64;
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r as usize
    } else {
        x.ceil() as usize
    }
}

/// The thresholding set `Ω`: the `⌈f · (n0_hat − 1)⌉` vertices other than
/// the seed whose Laplacian columns correlate most strongly with the seed's.
/// Returns the set and whether the budget had to be clamped to `n − 1`.
pub fn threshold_stage<O: ColumnOperator>(lap: &O, seed_vertex: usize, n0_hat: usize, omega_factor: f64) -> Result<(IndexSet, bool)> {
    let n = lap.ncols();
    if seed_vertex >= n {
        return Err(Error::IndexOutOfRange { index: seed_vertex, n });
    }
    let mut budget = omega_budget(n0_hat, omega_factor);
    let clamped = budget > n - 1;
    if clamped {
        log::warn!("|Ω| = {budget} exceeds n − 1 = {}; clamping", n - 1);
        budget = n - 1;
    }
    let others = IndexSet::all_except(n, seed_vertex);
    let seed_col = lap.column(seed_vertex);
    let mut corr = vec![0.0; n - 1];
    lap.correlate_columns(others.as_slice(), &seed_col, &mut corr);
    let omega = select_largest(&corr, budget).map_through(others.as_slice());
    Ok((omega, clamped))
}

/// Single Cluster Pursuit.
///
/// Builds `y = Σ_{i∈Ω} ℓ_i + ℓ_seed`, recovers the `|Ω| − (n0_hat − 1)`
/// columns of `L_Ω` that explain it (the members of `Ω` outside the seed's
/// cluster) with Subspace Pursuit, and returns `{seed} ∪ (Ω ∖ Λ#)`.
pub fn scp<O: ColumnOperator>(lap: &O, cfg: &ScpConfig) -> Result<ClusterResult> {
    let start = Instant::now();
    let n = lap.ncols();
    cfg.validate(n)?;
    let seed = cfg.seed_vertex;
    let (omega, omega_clamped) = threshold_stage(lap, seed, cfg.n0_hat, cfg.omega_factor)?;
    let threshold = start.elapsed();

    let sp_start = Instant::now();
    let mut with_seed = omega.clone();
    with_seed.insert(seed);
    let mut y = vec![0.0; lap.nrows()];
    lap.apply_columns(with_seed.as_slice(), &vec![1.0; with_seed.len()], &mut y);
    let s_z = omega.len().saturating_sub(cfg.n0_hat - 1);
    let empty_budget = s_z == 0;
    let phi = ColumnSubset::new(lap, omega.as_slice().to_vec());
    let problem = RecoveryProblem::new(phi, y, s_z)?;
    let sp_result = subspace_pursuit(&problem, cfg.sp)?;
    if !sp_result.converged() {
        log::debug!("SP stopped with {:?}, lsqr converged = {}", sp_result.stop, sp_result.lsqr_converged);
    }
    let lambda_sharp = sp_result.support.map_through(omega.as_slice());
    let sparse_recovery = sp_start.elapsed();

    let mut cluster = omega.difference(&lambda_sharp);
    cluster.insert(seed);
    Ok(ClusterResult {
        cluster,
        omega,
        lambda_sharp,
        sp_result,
        empty_budget,
        omega_clamped,
        timings: StageTimings {
            threshold,
            sparse_recovery,
            total: start.elapsed(),
        },
    })
}

/// Runs [`scp`] once per `n0_hat` in `sizes` from the same seed.
pub fn scp_sweep<O: ColumnOperator>(lap: &O, seed_vertex: usize, sizes: &[usize], omega_factor: f64) -> Result<Vec<(usize, ClusterResult)>> {
    sizes
        .iter()
        .map(|&n0| {
            let cfg = ScpConfig::new(seed_vertex, n0).with_omega_factor(omega_factor);
            scp(lap, &cfg).map(|r| (n0, r))
        })
        .collect()
}

/// The connected component of `seed_vertex`, found by OMP on
/// `L x = −ℓ_seed` over the columns other than the seed.
///
/// On a graph made of disconnected pieces the sparsest solution is the
/// indicator of the seed's component minus the seed, so OMP reaches zero
/// residual with exactly that support.
pub fn connected_component_omp<O: ColumnOperator>(lap: &O, seed_vertex: usize) -> Result<IndexSet> {
    let n = lap.ncols();
    if seed_vertex >= n {
        return Err(Error::IndexOutOfRange { index: seed_vertex, n });
    }
    let cols = IndexSet::all_except(n, seed_vertex);
    let y: Vec<f64> = lap.column(seed_vertex).into_iter().map(|v| -v).collect();
    let phi = ColumnSubset::new(lap, cols.as_slice().to_vec());
    let problem = RecoveryProblem::new(phi, y, n - 1)?;
    let res = omp(&problem, OmpOptions::default())?;
    let found = res.support.map_through(cols.as_slice());
    if res.stop != StopReason::ResidualTolerance {
        return Err(Error::OmpStagnation {
            partial: found.into_vec(),
            residual: res.residual_norm,
        });
    }
    let mut component = found;
    component.insert(seed_vertex);
    Ok(component)
}
