use super::SparseGraph;
use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::operator::{self, ColumnOperator};

/// Sparse vector with strictly increasing indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    pub dim: usize,
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseVector {
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        for (&i, &x) in self.indices.iter().zip(&self.values) {
            v[i] = x;
        }
        v
    }
}

/// The random-walk Laplacian `L = I − D⁻¹A` of a graph, kept implicit.
///
/// Column `i` is `ℓ_i` with `(ℓ_i)_k = δ_ik − A_ik / d_k`. Applying a column
/// subset costs the sum of the selected vertices' neighbour counts.
#[derive(Debug, Clone)]
pub struct LaplacianView<'g> {
    graph: &'g SparseGraph,
    inv_degrees: Vec<f64>,
}

impl<'g> LaplacianView<'g> {
    /// Fails on the first vertex with zero degree.
    pub fn new(graph: &'g SparseGraph) -> Result<Self> {
        let inv_degrees = graph
            .degrees()
            .iter()
            .enumerate()
            .map(|(i, &d)| if d > 0.0 { Ok(1.0 / d) } else { Err(Error::ZeroDegree(i)) })
            .collect::<Result<Vec<_>>>()?;
        Ok(LaplacianView { graph, inv_degrees })
    }

    pub fn graph(&self) -> &'g SparseGraph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn inv_degrees(&self) -> &[f64] {
        &self.inv_degrees
    }

    /// `ℓ_i` in sparse form; one entry per neighbour plus the diagonal.
    pub fn laplacian_column(&self, i: usize) -> SparseVector {
        let g = self.graph;
        let mut indices = Vec::with_capacity(g.neighbor_count(i) + 1);
        let mut values = Vec::with_capacity(g.neighbor_count(i) + 1);
        let mut diag_done = false;
        for (k, w) in g.neighbors(i) {
            if !diag_done && k > i {
                indices.push(i);
                values.push(1.0);
                diag_done = true;
            }
            indices.push(k);
            values.push(-w * self.inv_degrees[k]);
        }
        if !diag_done {
            indices.push(i);
            values.push(1.0);
        }
        SparseVector {
            dim: g.n(),
            indices,
            values,
        }
    }

    /// `L_S x`.
    pub fn apply_submatrix(&self, cols: &IndexSet, x: &[f64]) -> Result<Vec<f64>> {
        operator::apply_submatrix(self, cols.as_slice(), x)
    }

    /// `L_Sᵀ r`.
    pub fn apply_submatrix_transpose(&self, cols: &IndexSet, r: &[f64]) -> Result<Vec<f64>> {
        operator::apply_submatrix_transpose(self, cols.as_slice(), r)
    }

    /// `L x` over all columns.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let g = self.graph;
        (0..g.n())
            .map(|k| {
                let ax: f64 = g.neighbors(k).map(|(j, w)| w * x[j]).sum();
                x[k] - ax * self.inv_degrees[k]
            })
            .collect()
    }

    /// Dense row-major `L`, for diagnostics on small graphs.
    pub fn dense(&self) -> Vec<f64> {
        let n = self.n();
        let mut m = vec![0.0; n * n];
        for k in 0..n {
            m[k * n + k] = 1.0;
            for (j, w) in self.graph.neighbors(k) {
                m[k * n + j] = -w * self.inv_degrees[k];
            }
        }
        m
    }
}

impl ColumnOperator for LaplacianView<'_> {
    fn nrows(&self) -> usize {
        self.graph.n()
    }

    fn ncols(&self) -> usize {
        self.graph.n()
    }

    fn apply_columns(&self, cols: &[usize], x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (&j, &xj) in cols.iter().zip(x) {
            if xj == 0.0 {
                continue;
            }
            out[j] += xj;
            for (k, w) in self.graph.neighbors(j) {
                out[k] -= xj * w * self.inv_degrees[k];
            }
        }
    }

    fn correlate_columns(&self, cols: &[usize], r: &[f64], out: &mut [f64]) {
        for (o, &j) in out.iter_mut().zip(cols) {
            let off: f64 = self
                .graph
                .neighbors(j)
                .map(|(k, w)| w * r[k] * self.inv_degrees[k])
                .sum();
            *o = r[j] - off;
        }
    }

    fn correlate_all(&self, r: &[f64]) -> Vec<f64> {
        let scaled: Vec<f64> = r.iter().zip(&self.inv_degrees).map(|(a, b)| a * b).collect();
        (0..self.graph.n())
            .map(|j| {
                let off: f64 = self.graph.neighbors(j).map(|(k, w)| w * scaled[k]).sum();
                r[j] - off
            })
            .collect()
    }

    fn column(&self, j: usize) -> Vec<f64> {
        self.laplacian_column(j).to_dense()
    }
}
