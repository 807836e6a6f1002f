use super::{scp, ClusterResult, ScpConfig, DEFAULT_OMEGA_FACTOR};
use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, LaplacianView, SparseGraph};
use crate::index_set::IndexSet;
use crate::partition::Partition;
use crate::solvers::SpOptions;

#[derive(Debug, Clone, PartialEq)]
pub struct IscpConfig {
    pub k: usize,
    /// `n0_hat` per round, or a single value used for every round.
    pub sizes: Vec<usize>,
    pub omega_factor: f64,
    pub sp: SpOptions,
}

impl IscpConfig {
    pub fn uniform(k: usize, n0_hat: usize) -> Self {
        IscpConfig {
            k,
            sizes: vec![n0_hat],
            omega_factor: DEFAULT_OMEGA_FACTOR,
            sp: SpOptions::default(),
        }
    }

    /// One cluster per entry of `sizes`.
    pub fn with_sizes(sizes: Vec<usize>) -> Self {
        IscpConfig {
            k: sizes.len(),
            sizes,
            omega_factor: DEFAULT_OMEGA_FACTOR,
            sp: SpOptions::default(),
        }
    }

    pub(crate) fn size_for_round(&self, round: usize) -> usize {
        if self.sizes.len() == 1 {
            self.sizes[0]
        } else {
            self.sizes[round]
        }
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if self.sizes.len() != 1 && self.sizes.len() != self.k && self.sizes.len() != self.k - 1 {
            return Err(Error::InvalidParameter(format!(
                "size schedule has {} entries; need 1, k − 1 or k = {}",
                self.sizes.len(),
                self.k
            )));
        }
        let planned: usize = (0..self.k - 1).map(|r| self.size_for_round(r)).sum();
        if planned > n {
            return Err(Error::InvalidParameter(format!(
                "size schedule covers {planned} vertices but the graph has {n}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct IscpResult {
    pub partition: Partition,
    /// Vertices left without neighbours among the unassigned vertices at
    /// some round. They are placed in the final cluster.
    pub rejected: Vec<usize>,
    /// Per-round SCP output, in local indices of that round's subgraph.
    pub rounds: Vec<ClusterResult>,
}

/// Iterated Single Cluster Pursuit.
///
/// Each of the first `k − 1` rounds seeds SCP at the lowest-index unassigned
/// vertex on the subgraph induced by the unassigned vertices and removes the
/// cluster it finds. Whatever remains becomes cluster `k − 1`.
pub fn iscp(g: &SparseGraph, cfg: &IscpConfig) -> Result<IscpResult> {
    let n = g.n();
    cfg.validate(n)?;
    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut rejected = Vec::new();
    let mut is_rejected = vec![false; n];
    let mut rounds = Vec::with_capacity(cfg.k.saturating_sub(1));
    let abort = |round: usize, labels: &[Option<usize>], e: Error| Error::IscpAborted {
        round,
        partial: labels.to_vec(),
        source: Box::new(e),
    };

    for round in 0..cfg.k - 1 {
        let remaining: IndexSet = (0..n)
            .filter(|&v| labels[v].is_none() && !is_rejected[v])
            .collect();
        let mut sub = induced_subgraph(g, &remaining).map_err(|e| abort(round, &labels, e))?;
        if !sub.isolated.is_empty() {
            let iso: Vec<usize> = sub.isolated.iter().map(|&v| sub.original[v]).collect();
            log::info!("round {round}: {} isolated vertices moved to the final cluster", iso.len());
            for &v in &iso {
                is_rejected[v] = true;
            }
            rejected.extend(&iso);
            let keep: IndexSet = remaining.iter().filter(|&v| !is_rejected[v]).collect();
            sub = induced_subgraph(g, &keep).map_err(|e| abort(round, &labels, e))?;
        }
        let lap = LaplacianView::new(&sub.graph).map_err(|e| abort(round, &labels, e))?;
        let mut n0_hat = cfg.size_for_round(round);
        if n0_hat > sub.graph.n() {
            log::warn!("round {round}: n0_hat = {n0_hat} exceeds the {} remaining vertices", sub.graph.n());
            n0_hat = sub.graph.n();
        }
        let scfg = ScpConfig {
            seed_vertex: 0,
            n0_hat,
            omega_factor: cfg.omega_factor,
            sp: cfg.sp,
        };
        let res = scp(&lap, &scfg).map_err(|e| abort(round, &labels, e))?;
        for v in res.cluster.iter() {
            labels[sub.original[v]] = Some(round);
        }
        rounds.push(res);
    }

    let last = cfg.k - 1;
    let assignment: Vec<usize> = labels.iter().map(|l| l.unwrap_or(last)).collect();
    rejected.sort_unstable();
    let partition = Partition::new(assignment, cfg.k).map_err(|e| abort(cfg.k - 1, &labels, e))?;
    Ok(IscpResult {
        partition,
        rejected,
        rounds,
    })
}
