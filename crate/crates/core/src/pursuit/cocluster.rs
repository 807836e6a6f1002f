use super::{scp, ClusterResult, ScpConfig, DEFAULT_OMEGA_FACTOR};
use crate::bipartite::{BipartiteLaplacian, NonnegMatrix};
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::partition::Partition;
use crate::solvers::SpOptions;

#[derive(Debug, Clone, PartialEq)]
pub struct CoclusterConfig {
    pub k: usize,
    /// Estimated number of rows per block.
    pub n0x_hat: usize,
    pub omega_factor: f64,
    pub sp: SpOptions,
}

impl CoclusterConfig {
    pub fn new(n0x_hat: usize, k: usize) -> Self {
        CoclusterConfig {
            k,
            n0x_hat,
            omega_factor: DEFAULT_OMEGA_FACTOR,
            sp: SpOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoclusterResult {
    pub rows: Partition,
    pub cols: Partition,
    /// Rows or columns that lost all their mass to earlier blocks; they are
    /// placed in the final block.
    pub rejected_rows: Vec<usize>,
    pub rejected_cols: Vec<usize>,
    pub rounds: Vec<ClusterResult>,
}

/// Simultaneous row and column clustering of a nonnegative matrix.
///
/// Rows are partitioned by iterated SCP on the implicit bipartite Laplacian
/// of the rows and columns still unassigned. After each round the columns
/// whose mass lies mostly (more than half) on the new row block join it.
pub fn cocluster(b: &NonnegMatrix, cfg: &CoclusterConfig) -> Result<CoclusterResult> {
    let (nr, nc) = b.shape();
    BipartiteLaplacian::new(b)?;
    if cfg.k == 0 || cfg.k > nr || cfg.k > nc {
        return Err(Error::InvalidParameter(format!(
            "k = {} must lie in [1, min({nr}, {nc})]",
            cfg.k
        )));
    }
    if cfg.k > 1 && (cfg.k - 1) * cfg.n0x_hat > nr {
        return Err(Error::InvalidParameter(format!(
            "{} blocks of {} rows exceed {nr} rows",
            cfg.k - 1,
            cfg.n0x_hat
        )));
    }
    let mut row_labels: Vec<Option<usize>> = vec![None; nr];
    let mut col_labels: Vec<Option<usize>> = vec![None; nc];
    let mut rejected_rows = Vec::new();
    let mut rejected_cols = Vec::new();
    let mut rounds = Vec::new();
    let abort = |round: usize, labels: &[Option<usize>], e: Error| Error::IscpAborted {
        round,
        partial: labels.to_vec(),
        source: Box::new(e),
    };

    for round in 0..cfg.k - 1 {
        let cols: IndexSet = (0..nc).filter(|&c| col_labels[c].is_none()).collect();
        let rows: IndexSet = (0..nr).filter(|&r| row_labels[r].is_none()).collect();
        let mut sub = b.submatrix(&rows, &cols);
        let (rows, cols) = {
            let rs = sub.row_sums();
            let cs = sub.col_sums();
            let dead_r: Vec<usize> = (0..rows.len()).filter(|&i| rs[i] == 0.0).map(|i| rows[i]).collect();
            let dead_c: Vec<usize> = (0..cols.len()).filter(|&j| cs[j] == 0.0).map(|j| cols[j]).collect();
            if dead_r.is_empty() && dead_c.is_empty() {
                (rows, cols)
            } else {
                for &r in &dead_r {
                    row_labels[r] = Some(cfg.k - 1);
                }
                for &c in &dead_c {
                    col_labels[c] = Some(cfg.k - 1);
                }
                rejected_rows.extend(&dead_r);
                rejected_cols.extend(&dead_c);
                let rows: IndexSet = rows.iter().filter(|&r| row_labels[r].is_none()).collect();
                let cols: IndexSet = cols.iter().filter(|&c| col_labels[c].is_none()).collect();
                sub = b.submatrix(&rows, &cols);
                (rows, cols)
            }
        };
        if rows.is_empty() {
            return Err(abort(round, &row_labels, Error::Empty("rows for the next block")));
        }
        let lap = BipartiteLaplacian::new(&sub).map_err(|e| abort(round, &row_labels, e))?;
        let n0 = cfg.n0x_hat.min(rows.len());
        let scfg = ScpConfig {
            seed_vertex: 0,
            n0_hat: n0,
            omega_factor: cfg.omega_factor,
            sp: cfg.sp,
        };
        let res = scp(&lap, &scfg).map_err(|e| abort(round, &row_labels, e))?;
        for r in res.cluster.iter() {
            row_labels[rows[r]] = Some(round);
        }
        let frac = lap.column_affinity(&res.cluster);
        for (j, f) in frac.iter().enumerate() {
            if *f > 0.5 {
                col_labels[cols[j]] = Some(round);
            }
        }
        rounds.push(res);
    }

    let last = cfg.k - 1;
    let rows_assign: Vec<usize> = row_labels.iter().map(|l| l.unwrap_or(last)).collect();
    let cols_assign: Vec<usize> = col_labels.iter().map(|l| l.unwrap_or(last)).collect();
    rejected_rows.sort_unstable();
    rejected_cols.sort_unstable();
    Ok(CoclusterResult {
        rows: Partition::new(rows_assign, cfg.k).map_err(|e| abort(last, &row_labels, e))?,
        cols: Partition::new(cols_assign, cfg.k).map_err(|e| abort(last, &col_labels, e))?,
        rejected_rows,
        rejected_cols,
        rounds,
    })
}
