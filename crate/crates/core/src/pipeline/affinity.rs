use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{build_graph, SparseGraph};
use crate::operator::DenseMatrix;

/// `n` points in `d` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParameter("a point cloud needs at least two points".into()));
        }
        let d = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: p.len() });
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("point coordinates"));
        }
        Ok(PointCloud { points })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
}

/// `A_ij = exp(−‖x_i − x_j‖² / σ²)` off the diagonal, zero on it.
pub fn gaussian_affinity(pts: &PointCloud, sigma: f64) -> Result<DenseMatrix> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let n = pts.n();
    let s2 = sigma * sigma;
    let rows: Vec<Vec<f64>> = pts
        .points
        .par_iter()
        .enumerate()
        .map(|(i, xi)| {
            pts.points
                .iter()
                .enumerate()
                .map(|(j, xj)| {
                    if i == j {
                        0.0
                    } else {
                        let d2: f64 = xi.iter().zip(xj).map(|(a, b)| (a - b) * (a - b)).sum();
                        (-d2 / s2).exp()
                    }
                })
                .collect()
        })
        .collect();
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("pairwise distances"));
    }
    Ok(DenseMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Keeps `{i, j}` when `j` is among the `K` highest-affinity neighbours of
/// `i` or vice versa, weighted by the affinity. Ties go to the lower index.
pub fn knn_sparsify(aff: &DenseMatrix, k: usize) -> Result<SparseGraph> {
    let (n, m) = aff.shape();
    if n != m {
        return Err(Error::DimensionMismatch { expected: n, got: m });
    }
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!("K = {k} must lie in [1, {}]", n.saturating_sub(1))));
    }
    let picks: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut cand: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let order = |a: &usize, b: &usize| aff.get(i, *b).total_cmp(&aff.get(i, *a)).then(a.cmp(b));
            cand.select_nth_unstable_by(k - 1, order);
            cand.truncate(k);
            cand
        })
        .collect();
    let mut edges: Vec<(usize, usize)> = picks
        .iter()
        .enumerate()
        .flat_map(|(i, js)| js.iter().map(move |&j| (i.min(j), i.max(j))))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let weighted: Vec<(usize, usize, f64)> = edges
        .into_iter()
        .map(|(u, v)| {
            let w = aff.get(u, v);
            if w > 0.0 && w.is_finite() {
                Ok((u, v, w))
            } else {
                Err(Error::InvalidParameter(format!(
                    "neighbour pair ({u}, {v}) has affinity {w}; increase sigma"
                )))
            }
        })
        .collect::<Result<_>>()?;
    build_graph(n, &weighted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn line(xs: &[f64]) -> PointCloud {
        PointCloud::new(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn affinity_examples() {
        let a = gaussian_affinity(&line(&[0.0, 1.0]), 1.0).unwrap();
        assert_relative_eq!(a.get(0, 1), (-1.0f64).exp());
        assert_eq!(a.get(0, 0), 0.0);
        let a = gaussian_affinity(&line(&[2.0, 2.0, 2.0]), 0.5).unwrap();
        assert_eq!(a.get(1, 2), 1.0);
        assert!(gaussian_affinity(&line(&[0.0, 1.0]), 0.0).is_err());
        assert!(PointCloud::new(vec![vec![0.0]]).is_err());
        assert!(PointCloud::new(vec![vec![0.0], vec![f64::NAN]]).is_err());
    }

    #[test]
    fn knn_examples() {
        let a = gaussian_affinity(&line(&[0.0, 1.0, 10.0]), 1.0).unwrap();
        let g = knn_sparsify(&a, 1).unwrap();
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges.len(), 2);
        assert_eq!((edges[0].0, edges[0].1), (0, 1));
        assert_relative_eq!(edges[0].2, (-1.0f64).exp());
        assert_eq!((edges[1].0, edges[1].1), (1, 2));
        assert_relative_eq!(edges[1].2, (-81.0f64).exp());

        let g = knn_sparsify(&a, 2).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(knn_sparsify(&a, 3).is_err());
    }

    #[test]
    fn ties_prefer_lower_index() {
        let a = gaussian_affinity(&line(&[0.0, -1.0, 1.0]), 1.0).unwrap();
        let g = knn_sparsify(&a, 1).unwrap();
        // vertex 0 is equidistant from 1 and 2 and picks 1; 2 picks 0
        assert_eq!(g.weight(0, 1) > 0.0, true);
        assert_eq!(g.weight(0, 2) > 0.0, true);
        assert_eq!(g.weight(1, 2), 0.0);
    }
}
