#![allow(dead_code)]

use clusterpursuit::{build_graph, SparseGraph};
use rand::Rng;

/// Weighted graph on `n` vertices, each pair present with probability `p`,
/// weights in `[0.5, 2)` unless `unit`.
pub fn random_graph(n: usize, p: f64, unit: bool, seed: u64) -> SparseGraph {
    let mut rng = clusterpursuit::rng::stream(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                let w = if unit { 1.0 } else { rng.random_range(0.5..2.0) };
                edges.push((u, v, w));
            }
        }
    }
    build_graph(n, &edges).unwrap()
}

/// Like [`random_graph`] but every vertex has at least one neighbour: each
/// vertex `i > 0` is first attached to a random earlier vertex.
pub fn connected_graph(n: usize, p: f64, unit: bool, seed: u64) -> SparseGraph {
    let mut rng = clusterpursuit::rng::stream(seed);
    let mut adj = vec![vec![false; n]; n];
    for i in 1..n {
        let j = rng.random_range(0..i);
        adj[i][j] = true;
        adj[j][i] = true;
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if adj[u][v] || rng.random::<f64>() < p {
                let w = if unit { 1.0 } else { rng.random_range(0.5..2.0) };
                edges.push((u, v, w));
            }
        }
    }
    build_graph(n, &edges).unwrap()
}

/// Disjoint union with the second graph's vertices shifted by `a.n()`.
pub fn disjoint_union(a: &SparseGraph, b: &SparseGraph) -> SparseGraph {
    let off = a.n();
    let edges: Vec<_> = a.edges().chain(b.edges().map(|(u, v, w)| (u + off, v + off, w))).collect();
    build_graph(a.n() + b.n(), &edges).unwrap()
}

pub fn dense_matrix(rows: usize, cols: usize, seed: u64) -> clusterpursuit::DenseMatrix {
    let mut rng = clusterpursuit::rng::stream(seed);
    clusterpursuit::DenseMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

pub fn unit_columns(mut m: clusterpursuit::DenseMatrix) -> clusterpursuit::DenseMatrix {
    for j in 0..m.shape().1 {
        let norm = m.col(j).iter().map(|x| x * x).sum::<f64>().sqrt();
        m.col_mut(j).iter_mut().for_each(|x| *x /= norm);
    }
    m
}

pub fn matvec(m: &clusterpursuit::DenseMatrix, cols: &[usize], x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; m.shape().0];
    for (&j, &c) in cols.iter().zip(x) {
        for (yi, a) in y.iter_mut().zip(m.col(j)) {
            *yi += c * a;
        }
    }
    y
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Every vertex of `comp` other than `seed` is adjacent to it or shares a
/// neighbour with it.
pub fn within_two_hops(g: &SparseGraph, seed: usize, comp: &clusterpursuit::IndexSet) -> bool {
    let mut reach = vec![false; g.n()];
    for &j in g.neighbor_indices(seed) {
        reach[j] = true;
        for &k in g.neighbor_indices(j) {
            reach[k] = true;
        }
    }
    comp.iter().all(|v| v == seed || reach[v])
}
