use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, SparseGraph};
use crate::index_set::IndexSet;

#[derive(Debug, Clone)]
pub struct ThresholdResult {
    pub graph: SparseGraph,
    /// Original ids of the kept vertices, in order.
    pub kept: IndexSet,
    pub passes: usize,
    /// Whether another pass on the output would drop more vertices.
    pub second_pass_would_drop: bool,
}

/// Drops vertices with fewer than `d_thresh` neighbours and returns the
/// induced subgraph. Degrees are neighbour counts in the input graph. With
/// `iterate` the pass repeats on its own output until nothing changes.
pub fn degree_threshold(g: &SparseGraph, d_thresh: usize, iterate: bool) -> Result<ThresholdResult> {
    let mut kept = IndexSet::range(g.n());
    let mut graph = g.clone();
    let mut passes = 0;
    loop {
        let keep_local: IndexSet = (0..graph.n()).filter(|&v| graph.neighbor_count(v) >= d_thresh).collect();
        if keep_local.is_empty() {
            return Err(Error::InvalidParameter(format!("every vertex has fewer than {d_thresh} neighbours")));
        }
        passes += 1;
        let changed = keep_local.len() < graph.n();
        if changed {
            let sub = induced_subgraph(&graph, &keep_local)?;
            kept = keep_local.map_through(kept.as_slice());
            graph = sub.graph;
        }
        let would_drop = (0..graph.n()).any(|v| graph.neighbor_count(v) < d_thresh);
        if !iterate || !would_drop {
            return Ok(ThresholdResult {
                graph,
                kept,
                passes,
                second_pass_would_drop: would_drop,
            });
        }
    }
}
