use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::partition::Partition;

/// `|found ∖ truth| / |found|`.
pub fn misclassification(found: &IndexSet, truth: &IndexSet) -> Result<f64> {
    if found.is_empty() {
        return Err(Error::Empty("recovered cluster"));
    }
    Ok(found.difference(truth).len() as f64 / found.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Accuracy {
    /// Fraction of vertices whose label agrees after the best relabeling.
    pub accuracy: f64,
    /// `confusion[a][b]` counts vertices in cluster `a` of the first
    /// partition and cluster `b` of the second.
    pub confusion: Vec<Vec<usize>>,
    /// `matching[a]` is the cluster of the second partition paired with `a`,
    /// or `None` if `a` was paired with padding.
    pub matching: Vec<Option<usize>>,
}

/// Agreement between two partitions of the same vertices under the optimal
/// one-to-one matching of cluster labels.
pub fn partition_accuracy(a: &Partition, b: &Partition) -> Result<Accuracy> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), got: b.n() });
    }
    if a.n() == 0 {
        return Err(Error::Empty("partition"));
    }
    let size = a.k().max(b.k());
    let mut confusion = vec![vec![0usize; b.k()]; a.k()];
    for v in 0..a.n() {
        confusion[a.cluster_of(v)][b.cluster_of(v)] += 1;
    }
    let weights = Matrix::from_fn(size, size, |(i, j)| {
        if i < a.k() && j < b.k() {
            confusion[i][j] as i64
        } else {
            0
        }
    });
    let (total, assignment) = kuhn_munkres(&weights);
    let matching = (0..a.k())
        .map(|i| Some(assignment[i]).filter(|&j| j < b.k()))
        .collect();
    Ok(Accuracy {
        accuracy: total as f64 / a.n() as f64,
        confusion,
        matching,
    })
}
