//! Nonnegative rectangular matrices and the implicit bipartite Laplacian
//! `L^BP = I − D_X⁻¹ B D_Y⁻¹ Bᵀ`.

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::operator::ColumnOperator;

/// Sparse `rows × cols` matrix with nonnegative entries, stored both by row
/// and by column.
#[derive(Debug, Clone, PartialEq)]
pub struct NonnegMatrix {
    rows: usize,
    cols: usize,
    row_offsets: Vec<usize>,
    row_cols: Vec<usize>,
    row_vals: Vec<f64>,
    col_offsets: Vec<usize>,
    col_rows: Vec<usize>,
    col_vals: Vec<f64>,
}

impl NonnegMatrix {
    /// Zero entries are dropped; repeated positions are an error.
    pub fn from_triplets(rows: usize, cols: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let mut t: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len());
        for &(i, j, v) in entries {
            if i >= rows {
                return Err(Error::IndexOutOfRange { index: i, n: rows });
            }
            if j >= cols {
                return Err(Error::IndexOutOfRange { index: j, n: cols });
            }
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidWeight { u: i, v: j, weight: v });
            }
            if v > 0.0 {
                t.push((i, j, v));
            }
        }
        t.sort_unstable_by_key(|e| (e.0, e.1));
        if let Some(w) = t.windows(2).find(|w| w[0].0 == w[1].0 && w[0].1 == w[1].1) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut row_offsets = vec![0; rows + 1];
        for e in &t {
            row_offsets[e.0 + 1] += 1;
        }
        for i in 0..rows {
            row_offsets[i + 1] += row_offsets[i];
        }
        let row_cols = t.iter().map(|e| e.1).collect();
        let row_vals = t.iter().map(|e| e.2).collect();

        let mut col_offsets = vec![0; cols + 1];
        for e in &t {
            col_offsets[e.1 + 1] += 1;
        }
        for j in 0..cols {
            col_offsets[j + 1] += col_offsets[j];
        }
        let mut fill = col_offsets.clone();
        let mut col_rows = vec![0; t.len()];
        let mut col_vals = vec![0.0; t.len()];
        for &(i, j, v) in &t {
            col_rows[fill[j]] = i;
            col_vals[fill[j]] = v;
            fill[j] += 1;
        }
        Ok(NonnegMatrix {
            rows,
            cols,
            row_offsets,
            row_cols,
            row_vals,
            col_offsets,
            col_rows,
            col_vals,
        })
    }

    pub fn from_dense(data: &[Vec<f64>]) -> Result<Self> {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        let mut entries = Vec::new();
        for (i, r) in data.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            for (j, &v) in r.iter().enumerate() {
                if v != 0.0 {
                    entries.push((i, j, v));
                }
            }
        }
        Self::from_triplets(rows, cols, &entries)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.row_cols.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_offsets[i]..self.row_offsets[i + 1];
        self.row_cols[r.clone()].iter().copied().zip(self.row_vals[r].iter().copied())
    }

    pub fn col(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.col_offsets[j]..self.col_offsets[j + 1];
        self.col_rows[r.clone()].iter().copied().zip(self.col_vals[r].iter().copied())
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).map(|e| e.1).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.cols).map(|j| self.col(j).map(|e| e.1).sum()).collect()
    }

    /// The submatrix on the given rows and columns, renumbered.
    pub fn submatrix(&self, rows: &IndexSet, cols: &IndexSet) -> NonnegMatrix {
        let mut col_map = vec![usize::MAX; self.cols];
        for (new, old) in cols.iter().enumerate() {
            col_map[old] = new;
        }
        let mut entries = Vec::new();
        for (ni, i) in rows.iter().enumerate() {
            for (j, v) in self.row(i) {
                if col_map[j] != usize::MAX {
                    entries.push((ni, col_map[j], v));
                }
            }
        }
        NonnegMatrix::from_triplets(rows.len(), cols.len(), &entries).expect("entries already validated")
    }
}

/// `L^BP = I − D_X⁻¹ B D_Y⁻¹ Bᵀ` over the rows of `B`, applied through two
/// sparse products. It is the random-walk Laplacian of the row graph with
/// weights `W = B D_Y⁻¹ Bᵀ` (self-loops included), so the pursuit routines
/// accept it wherever they accept a graph Laplacian.
#[derive(Debug, Clone)]
pub struct BipartiteLaplacian<'a> {
    b: &'a NonnegMatrix,
    inv_dx: Vec<f64>,
    inv_dy: Vec<f64>,
}

impl<'a> BipartiteLaplacian<'a> {
    /// Rejects zero rows and zero columns.
    pub fn new(b: &'a NonnegMatrix) -> Result<Self> {
        let inv = |sums: Vec<f64>, what: &str| -> Result<Vec<f64>> {
            sums.into_iter()
                .enumerate()
                .map(|(i, s)| {
                    if s > 0.0 {
                        Ok(1.0 / s)
                    } else {
                        Err(Error::InvalidParameter(format!("{what} {i} of B is zero")))
                    }
                })
                .collect()
        };
        Ok(BipartiteLaplacian {
            inv_dx: inv(b.row_sums(), "row")?,
            inv_dy: inv(b.col_sums(), "column")?,
            b,
        })
    }

    pub fn matrix(&self) -> &'a NonnegMatrix {
        self.b
    }

    pub fn inv_col_sums(&self) -> &[f64] {
        &self.inv_dy
    }

    /// `D_Y⁻¹ Bᵀ x`.
    fn half(&self, x: &[f64]) -> Vec<f64> {
        (0..self.b.cols)
            .map(|c| self.b.col(c).map(|(i, v)| v * x[i]).sum::<f64>() * self.inv_dy[c])
            .collect()
    }

    /// Fraction of each column's mass that falls on `rows`: `D_Y⁻¹ Bᵀ 1_rows`.
    pub fn column_affinity(&self, rows: &IndexSet) -> Vec<f64> {
        let mut ind = vec![0.0; self.b.rows];
        for i in rows.iter() {
            ind[i] = 1.0;
        }
        self.half(&ind)
    }
}

impl ColumnOperator for BipartiteLaplacian<'_> {
    fn nrows(&self) -> usize {
        self.b.rows
    }

    fn ncols(&self) -> usize {
        self.b.rows
    }

    fn apply_columns(&self, cols: &[usize], x: &[f64], out: &mut [f64]) {
        let mut full = vec![0.0; self.b.rows];
        for (&j, &xj) in cols.iter().zip(x) {
            full[j] += xj;
        }
        let t = self.half(&full);
        for (i, o) in out.iter_mut().enumerate() {
            let bt: f64 = self.b.row(i).map(|(c, v)| v * t[c]).sum();
            *o = full[i] - self.inv_dx[i] * bt;
        }
    }

    fn correlate_columns(&self, cols: &[usize], r: &[f64], out: &mut [f64]) {
        // (L^BP)ᵀ r = r − B D_Y⁻¹ Bᵀ D_X⁻¹ r
        let scaled: Vec<f64> = r.iter().zip(&self.inv_dx).map(|(a, b)| a * b).collect();
        let t = self.half(&scaled);
        for (o, &j) in out.iter_mut().zip(cols) {
            let bt: f64 = self.b.row(j).map(|(c, v)| v * t[c]).sum();
            *o = r[j] - bt;
        }
    }

    fn column(&self, j: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.b.rows];
        out[j] = 1.0;
        for (c, bjc) in self.b.row(j) {
            let s = bjc * self.inv_dy[c];
            for (i, bic) in self.b.col(c) {
                out[i] -= self.inv_dx[i] * bic * s;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::to_dense;
    use approx::assert_relative_eq;

    fn sample() -> NonnegMatrix {
        NonnegMatrix::from_dense(&[
            vec![1.0, 2.0, 0.0],
            vec![0.0, 1.0, 1.0],
            vec![3.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0],
        ])
        .unwrap()
    }

    #[test]
    fn storage_and_sums() {
        let b = sample();
        assert_eq!(b.shape(), (4, 3));
        assert_eq!(b.nnz(), 9);
        assert_eq!(b.row_sums(), vec![3.0, 2.0, 4.0, 3.0]);
        assert_eq!(b.col_sums(), vec![5.0, 4.0, 3.0]);
        assert_eq!(b.col(2).collect::<Vec<_>>(), vec![(1, 1.0), (2, 1.0), (3, 1.0)]);
        assert!(NonnegMatrix::from_dense(&[vec![1.0, -1.0]]).is_err());
        assert!(NonnegMatrix::from_triplets(1, 1, &[(0, 0, 1.0), (0, 0, 2.0)]).is_err());
    }

    #[test]
    fn matches_dense_formula() {
        let b = sample();
        let lap = BipartiteLaplacian::new(&b).unwrap();
        let (dx, dy) = (b.row_sums(), b.col_sums());
        let dense_b: Vec<Vec<f64>> = (0..4)
            .map(|i| {
                let mut r = vec![0.0; 3];
                for (c, v) in b.row(i) {
                    r[c] = v;
                }
                r
            })
            .collect();
        let m = to_dense(&lap);
        for i in 0..4 {
            for j in 0..4 {
                let w: f64 = (0..3).map(|c| dense_b[i][c] * dense_b[j][c] / dy[c]).sum();
                let expect = if i == j { 1.0 } else { 0.0 } - w / dx[i];
                assert_relative_eq!(m.get(i, j), expect, epsilon = 1e-14);
            }
        }
        // row sums of L^BP vanish
        let ones = lap.correlate_all(&[0.25; 4]);
        let mut out = vec![0.0; 4];
        lap.apply_columns(&[0, 1, 2, 3], &[1.0; 4], &mut out);
        for v in out {
            assert_relative_eq!(v, 0.0, epsilon = 1e-14);
        }
        let mut sub = vec![0.0; 4];
        lap.correlate_columns(&[0, 1, 2, 3], &[0.25; 4], &mut sub);
        assert_eq!(ones, sub);
        for j in 0..4 {
            let c = lap.column(j);
            let r = [0.3, -1.0, 2.0, 0.5];
            let mut corr = [0.0];
            lap.correlate_columns(&[j], &r, &mut corr);
            assert_relative_eq!(corr[0], c.iter().zip(&r).map(|(a, b)| a * b).sum::<f64>(), epsilon = 1e-13);
        }
    }

    #[test]
    fn rejects_empty_rows_and_columns() {
        let b = NonnegMatrix::from_dense(&[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(BipartiteLaplacian::new(&b).is_err());
        let b = NonnegMatrix::from_dense(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(BipartiteLaplacian::new(&b).is_err());
    }

    #[test]
    fn column_affinity_is_mass_fraction() {
        let b = sample();
        let lap = BipartiteLaplacian::new(&b).unwrap();
        let f = lap.column_affinity(&IndexSet::from_unsorted(vec![0, 2]));
        assert_relative_eq!(f[0], 4.0 / 5.0);
        assert_relative_eq!(f[1], 2.0 / 4.0);
        assert_relative_eq!(f[2], 1.0 / 3.0);
    }
}
