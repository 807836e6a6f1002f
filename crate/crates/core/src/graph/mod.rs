//! Undirected weighted graphs in compressed sparse row layout.
//!
//! [`SparseGraph`] is immutable once built. Every undirected edge is stored
//! twice (once per endpoint) with identical weight, rows are sorted by column
//! index, and `degrees[i]` is the weighted row sum.

mod laplacian;

pub use laplacian::{LaplacianView, SparseVector};

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseGraph {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
}

/// Builds a symmetric graph from undirected `(u, v, weight)` triples.
///
/// Each edge must appear once; listing both `(u, v)` and `(v, u)` counts as a
/// duplicate.
pub fn build_graph(n: usize, edges: &[(usize, usize, f64)]) -> Result<SparseGraph> {
    let mut directed = Vec::with_capacity(2 * edges.len());
    for &(u, v, w) in edges {
        for x in [u, v] {
            if x >= n {
                return Err(Error::IndexOutOfRange { index: x, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::InvalidWeight { u, v, weight: w });
        }
        directed.push((u, v, w));
        directed.push((v, u, w));
    }
    directed.sort_unstable_by_key(|&(u, v, _)| (u, v));
    if let Some(pair) = directed.windows(2).find(|p| p[0].0 == p[1].0 && p[0].1 == p[1].1) {
        let (u, v) = (pair[0].0, pair[0].1);
        return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
    }
    Ok(SparseGraph::from_sorted_directed(n, &directed))
}

impl SparseGraph {
    /// `directed` must be sorted by (row, col), symmetric and free of
    /// duplicates and self-loops.
    pub(crate) fn from_sorted_directed(n: usize, directed: &[(usize, usize, f64)]) -> Self {
        let mut row_offsets = vec![0usize; n + 1];
        for &(u, _, _) in directed {
            row_offsets[u + 1] += 1;
        }
        for i in 0..n {
            row_offsets[i + 1] += row_offsets[i];
        }
        let col_indices = directed.iter().map(|e| e.1).collect();
        let weights: Vec<f64> = directed.iter().map(|e| e.2).collect();
        let degrees = (0..n)
            .map(|i| weights[row_offsets[i]..row_offsets[i + 1]].iter().sum())
            .collect();
        SparseGraph {
            n,
            row_offsets,
            col_indices,
            weights,
            degrees,
        }
    }

    /// Builds directly from per-row adjacency lists. Rows must already be
    /// sorted, symmetric and loop-free.
    pub(crate) fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut row_offsets = Vec::with_capacity(n + 1);
        row_offsets.push(0);
        let nnz = rows.iter().map(Vec::len).sum();
        let mut col_indices = Vec::with_capacity(nnz);
        let mut weights = Vec::with_capacity(nnz);
        let mut degrees = Vec::with_capacity(n);
        for row in rows {
            let mut d = 0.0;
            for (j, w) in row {
                col_indices.push(j);
                weights.push(w);
                d += w;
            }
            degrees.push(d);
            row_offsets.push(col_indices.len());
        }
        SparseGraph {
            n,
            row_offsets,
            col_indices,
            weights,
            degrees,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.col_indices.len() / 2
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> f64 {
        self.degrees[i]
    }

    /// Number of neighbours, ignoring weights.
    pub fn neighbor_count(&self, i: usize) -> usize {
        self.row_offsets[i + 1] - self.row_offsets[i]
    }

    pub fn neighbor_indices(&self, i: usize) -> &[usize] {
        &self.col_indices[self.row_offsets[i]..self.row_offsets[i + 1]]
    }

    pub fn neighbor_weights(&self, i: usize) -> &[f64] {
        &self.weights[self.row_offsets[i]..self.row_offsets[i + 1]]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.neighbor_indices(i)
            .iter()
            .copied()
            .zip(self.neighbor_weights(i).iter().copied())
    }

    /// Edge weight, or 0 when absent.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        match self.neighbor_indices(i).binary_search(&j) {
            Ok(pos) => self.neighbor_weights(i)[pos],
            Err(_) => 0.0,
        }
    }

    /// Undirected edges with `u < v`, in row order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    pub fn is_unweighted(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.neighbor_count(i) == 0).collect()
    }

    /// Component label per vertex (BFS, labels in order of first vertex).
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut labels = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        let mut count = 0;
        for start in 0..self.n {
            if labels[start] != usize::MAX {
                continue;
            }
            labels[start] = count;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbor_indices(u) {
                    if labels[v] == usize::MAX {
                        labels[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (labels, count)
    }

    /// Vertices reachable from `seed`.
    pub fn component_of(&self, seed: usize) -> IndexSet {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([seed]);
        seen[seed] = true;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbor_indices(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        (0..self.n).filter(|&i| seen[i]).collect()
    }

    /// Relabels vertex `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> SparseGraph {
        assert_eq!(perm.len(), self.n);
        let mut rows = vec![Vec::new(); self.n];
        for u in 0..self.n {
            let row = &mut rows[perm[u]];
            row.extend(self.neighbors(u).map(|(v, w)| (perm[v], w)));
            row.sort_unstable_by_key(|e| e.0);
        }
        SparseGraph::from_rows(rows)
    }

    /// Dense row-major adjacency. Intended for small diagnostics only.
    pub fn dense_adjacency(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for (u, v, w) in self.edges() {
            a[u * self.n + v] = w;
            a[v * self.n + u] = w;
        }
        a
    }
}

/// Result of [`induced_subgraph`].
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: SparseGraph,
    /// `original[new_id] = old_id`.
    pub original: Vec<usize>,
    /// Local ids of vertices with no edge inside the subgraph.
    pub isolated: Vec<usize>,
}

impl InducedSubgraph {
    /// Old id to new id, if kept.
    pub fn to_local(&self, old: usize) -> Option<usize> {
        self.original.binary_search(&old).ok()
    }
}

pub fn induced_subgraph(g: &SparseGraph, keep: &IndexSet) -> Result<InducedSubgraph> {
    if keep.is_empty() {
        return Err(Error::Empty("induced subgraph vertex set"));
    }
    keep.check_bound(g.n())?;
    let mut local = vec![usize::MAX; g.n()];
    for (new, old) in keep.iter().enumerate() {
        local[old] = new;
    }
    let rows: Vec<Vec<(usize, f64)>> = keep
        .iter()
        .map(|old| {
            g.neighbors(old)
                .filter(|&(v, _)| local[v] != usize::MAX)
                .map(|(v, w)| (local[v], w))
                .collect()
        })
        .collect();
    let graph = SparseGraph::from_rows(rows);
    let isolated = graph.isolated_vertices();
    Ok(InducedSubgraph {
        graph,
        original: keep.as_slice().to_vec(),
        isolated,
    })
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn degrees_of_small_graphs() {
        assert_eq!(triangle().degrees(), &[2.0, 2.0, 2.0]);
        assert_eq!(path3().degrees(), &[1.0, 2.0, 1.0]);
        assert_eq!(triangle().edge_count(), 3);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            build_graph(3, &[(0, 1, 1.0), (0, 1, 1.0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            build_graph(3, &[(0, 1, 1.0), (1, 0, 1.0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            build_graph(3, &[(2, 2, 1.0)]),
            Err(Error::SelfLoop(2))
        ));
        assert!(matches!(
            build_graph(3, &[(0, 3, 1.0)]),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        ));
        assert!(build_graph(3, &[(0, 1, 0.0)]).is_err());
        assert!(build_graph(3, &[(0, 1, f64::NAN)]).is_err());
    }

    #[test]
    fn symmetric_storage() {
        let g = build_graph(4, &[(0, 3, 2.5), (1, 2, 1.0), (0, 2, 0.5)]).unwrap();
        for u in 0..4 {
            for (v, w) in g.neighbors(u) {
                assert_eq!(g.weight(v, u), w);
            }
            let row_sum: f64 = g.neighbor_weights(u).iter().sum();
            assert_eq!(row_sum, g.degree(u));
        }
        assert_eq!(g.degrees(), &[3.0, 1.0, 1.5, 2.5]);
    }

    #[test]
    fn induced_subgraph_examples() {
        let sub = induced_subgraph(&two_triangles(), &IndexSet::range(3)).unwrap();
        assert_eq!(sub.graph, triangle());
        assert!(sub.isolated.is_empty());

        let sub = induced_subgraph(&path3(), &IndexSet::from_unsorted(vec![0, 2])).unwrap();
        assert_eq!(sub.graph.n(), 2);
        assert_eq!(sub.graph.edge_count(), 0);
        assert_eq!(sub.isolated, vec![0, 1]);
        assert_eq!(sub.to_local(2), Some(1));
        assert_eq!(sub.to_local(1), None);

        let sub = induced_subgraph(&triangle(), &IndexSet::range(3)).unwrap();
        assert_eq!(sub.graph, triangle());

        assert!(induced_subgraph(&triangle(), &IndexSet::empty()).is_err());
    }

    #[test]
    fn components_by_bfs() {
        let (labels, count) = two_triangles().component_labels();
        assert_eq!(count, 2);
        assert_eq!(labels, vec![0, 0, 0, 1, 1, 1]);
        assert_eq!(two_triangles().component_of(4).as_slice(), &[3, 4, 5]);
    }

    #[test]
    fn permutation_preserves_edges() {
        let g = build_graph(4, &[(0, 1, 1.0), (1, 2, 3.0)]).unwrap();
        let perm = [3, 2, 0, 1];
        let h = g.permuted(&perm);
        assert_eq!(h.weight(3, 2), 1.0);
        assert_eq!(h.weight(2, 0), 3.0);
        assert_eq!(h.edge_count(), 2);
    }
}
