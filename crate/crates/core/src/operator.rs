//! Column-accessible linear operators.
//!
//! The pursuit solvers only touch a measurement matrix through
//! [`ColumnOperator`]: combinations of a subset of its columns, inner products
//! of a subset of its columns with a vector, and single columns. This is what
//! lets the graph Laplacian stay implicit.

use crate::error::{Error, Result};

pub trait ColumnOperator {
    fn nrows(&self) -> usize;

    fn ncols(&self) -> usize;

    /// Overwrites `out` (length `nrows`) with `Σ_j x[j] · φ_{cols[j]}`.
    fn apply_columns(&self, cols: &[usize], x: &[f64], out: &mut [f64]);

    /// Overwrites `out[j]` with `⟨φ_{cols[j]}, r⟩`.
    fn correlate_columns(&self, cols: &[usize], r: &[f64], out: &mut [f64]);

    /// `Φᵀ r` over every column.
    fn correlate_all(&self, r: &[f64]) -> Vec<f64> {
        let cols: Vec<usize> = (0..self.ncols()).collect();
        let mut out = vec![0.0; cols.len()];
        self.correlate_columns(&cols, r, &mut out);
        out
    }

    /// Column `j` as a dense vector.
    fn column(&self, j: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.nrows()];
        self.apply_columns(&[j], &[1.0], &mut out);
        out
    }
}

impl<T: ColumnOperator + ?Sized> ColumnOperator for &T {
    fn nrows(&self) -> usize {
        (**self).nrows()
    }
    fn ncols(&self) -> usize {
        (**self).ncols()
    }
    fn apply_columns(&self, cols: &[usize], x: &[f64], out: &mut [f64]) {
        (**self).apply_columns(cols, x, out)
    }
    fn correlate_columns(&self, cols: &[usize], r: &[f64], out: &mut [f64]) {
        (**self).correlate_columns(cols, r, out)
    }
    fn correlate_all(&self, r: &[f64]) -> Vec<f64> {
        (**self).correlate_all(r)
    }
    fn column(&self, j: usize) -> Vec<f64> {
        (**self).column(j)
    }
}

/// `Φ_S x` with dimension checks.
pub fn apply_submatrix<O: ColumnOperator + ?Sized>(op: &O, cols: &[usize], x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != cols.len() {
        return Err(Error::DimensionMismatch {
            expected: cols.len(),
            got: x.len(),
        });
    }
    check_cols(op, cols)?;
    let mut out = vec![0.0; op.nrows()];
    op.apply_columns(cols, x, &mut out);
    Ok(out)
}

/// `Φ_Sᵀ r` with dimension checks.
pub fn apply_submatrix_transpose<O: ColumnOperator + ?Sized>(
    op: &O,
    cols: &[usize],
    r: &[f64],
) -> Result<Vec<f64>> {
    if r.len() != op.nrows() {
        return Err(Error::DimensionMismatch {
            expected: op.nrows(),
            got: r.len(),
        });
    }
    check_cols(op, cols)?;
    let mut out = vec![0.0; cols.len()];
    op.correlate_columns(cols, r, &mut out);
    Ok(out)
}

fn check_cols<O: ColumnOperator + ?Sized>(op: &O, cols: &[usize]) -> Result<()> {
    match cols.iter().find(|&&j| j >= op.ncols()) {
        Some(&j) => Err(Error::IndexOutOfRange {
            index: j,
            n: op.ncols(),
        }),
        None => Ok(()),
    }
}

/// Column-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseMatrix {
            nrows,
            ncols,
            data: vec![0.0; nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for j in 0..ncols {
            for i in 0..nrows {
                data.push(f(i, j));
            }
        }
        DenseMatrix { nrows, ncols, data }
    }

    /// Builds from row slices, which must all have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: ncols,
                got: bad.len(),
            });
        }
        Ok(Self::from_fn(nrows, ncols, |i, j| rows[i][j]))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.nrows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.nrows + i] = v;
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.ncols).map(|j| self.get(i, j)).collect()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }
}

impl ColumnOperator for DenseMatrix {
    fn nrows(&self) -> usize {
        self.nrows
    }

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn apply_columns(&self, cols: &[usize], x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (&j, &xj) in cols.iter().zip(x) {
            if xj != 0.0 {
                for (o, &a) in out.iter_mut().zip(self.col(j)) {
                    *o += xj * a;
                }
            }
        }
    }

    fn correlate_columns(&self, cols: &[usize], r: &[f64], out: &mut [f64]) {
        for (o, &j) in out.iter_mut().zip(cols) {
            *o = dot(self.col(j), r);
        }
    }

    fn column(&self, j: usize) -> Vec<f64> {
        self.col(j).to_vec()
    }
}

/// The columns `cols` of `inner`, renumbered `0..cols.len()`.
#[derive(Debug, Clone)]
pub struct ColumnSubset<O> {
    inner: O,
    cols: Vec<usize>,
}

impl<O: ColumnOperator> ColumnSubset<O> {
    pub fn new(inner: O, cols: Vec<usize>) -> Self {
        debug_assert!(cols.iter().all(|&j| j < inner.ncols()));
        ColumnSubset { inner, cols }
    }

    /// Inner column index of local column `j`.
    pub fn original(&self, j: usize) -> usize {
        self.cols[j]
    }

    pub fn columns(&self) -> &[usize] {
        &self.cols
    }

    fn map(&self, cols: &[usize]) -> Vec<usize> {
        cols.iter().map(|&j| self.cols[j]).collect()
    }
}

impl<O: ColumnOperator> ColumnOperator for ColumnSubset<O> {
    fn nrows(&self) -> usize {
        self.inner.nrows()
    }

    fn ncols(&self) -> usize {
        self.cols.len()
    }

    fn apply_columns(&self, cols: &[usize], x: &[f64], out: &mut [f64]) {
        self.inner.apply_columns(&self.map(cols), x, out)
    }

    fn correlate_columns(&self, cols: &[usize], r: &[f64], out: &mut [f64]) {
        self.inner.correlate_columns(&self.map(cols), r, out)
    }

    fn correlate_all(&self, r: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols.len()];
        self.inner.correlate_columns(&self.cols, r, &mut out);
        out
    }

    fn column(&self, j: usize) -> Vec<f64> {
        self.inner.column(self.cols[j])
    }
}

/// Materializes every column. Only for small diagnostic problems.
pub fn to_dense<O: ColumnOperator + ?Sized>(op: &O) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(op.nrows(), op.ncols());
    for j in 0..op.ncols() {
        let c = op.column(j);
        m.col_mut(j).copy_from_slice(&c);
    }
    m
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_column_ops() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
        assert_eq!(apply_submatrix(&m, &[0, 1], &[1.0, -1.0]).unwrap(), vec![-1.0, -1.0, -1.0]);
        assert_eq!(
            apply_submatrix_transpose(&m, &[1], &[1.0, 1.0, 1.0]).unwrap(),
            vec![12.0]
        );
        assert!(apply_submatrix(&m, &[0], &[1.0, 2.0]).is_err());
        assert!(apply_submatrix(&m, &[2], &[1.0]).is_err());
        assert!(apply_submatrix_transpose(&m, &[0], &[1.0]).is_err());
    }

    #[test]
    fn column_subset_renumbers() {
        let m = DenseMatrix::identity(4);
        let sub = ColumnSubset::new(&m, vec![1, 3]);
        assert_eq!(sub.ncols(), 2);
        assert_eq!(sub.column(1), vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(sub.correlate_all(&[1.0, 2.0, 3.0, 4.0]), vec![2.0, 4.0]);
        assert_eq!(to_dense(&sub).col(0), &[0.0, 1.0, 0.0, 0.0]);
    }
}
