//! Spectral clustering with a dense eigensolver, as a reference point.

pub mod eigen;
mod kmeans;

pub use kmeans::{kmeans, KMeansConfig, KMeansResult};

use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::partition::Partition;

/// Largest graph the dense baseline accepts.
pub const SC_MAX_N: usize = 5000;

#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub partition: Partition,
    /// Rows of the eigenvector matrix with zero norm; left unnormalized.
    pub zero_rows: Vec<usize>,
    /// The `k` largest eigenvalues of `D^{-1/2} A D^{-1/2}`, decreasing.
    pub eigenvalues: Vec<f64>,
}

/// Spectral clustering: eigenvectors of the `k` largest eigenvalues of
/// `D^{-1/2} A D^{-1/2}`, rows normalized to unit length, clustered by
/// k-means.
pub fn spectral_clustering(g: &SparseGraph, k: usize, seed: u64) -> Result<SpectralResult> {
    let n = g.n();
    if n > SC_MAX_N {
        return Err(Error::InvalidParameter(format!(
            "dense spectral clustering is limited to {SC_MAX_N} vertices, got {n}"
        )));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} must lie in [1, {n}]")));
    }
    let mut isd = Vec::with_capacity(n);
    for i in 0..n {
        let d = g.degree(i);
        if d <= 0.0 {
            return Err(Error::ZeroDegree(i));
        }
        isd.push(1.0 / d.sqrt());
    }
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for (j, w) in g.neighbors(i) {
            m[i * n + j] = w * isd[i] * isd[j];
        }
    }
    let (eigenvalues, vecs) = eigen::top_eigenpairs(m, n, k)?;
    let mut zero_rows = Vec::new();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut r = vecs[i * k..(i + 1) * k].to_vec();
            let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                r.iter_mut().for_each(|x| *x /= norm);
            } else {
                zero_rows.push(i);
            }
            r
        })
        .collect();
    if !zero_rows.is_empty() {
        log::warn!("{} eigenvector rows have zero norm", zero_rows.len());
    }
    let km = kmeans(&rows, &KMeansConfig::new(k, seed))?;
    Ok(SpectralResult {
        partition: Partition::from_labels(&km.labels),
        zero_rows,
        eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn two_triangles_split() {
        let res = spectral_clustering(&two_triangles(), 2, 1).unwrap();
        assert_eq!(res.partition.assignment(), &[0, 0, 0, 1, 1, 1]);
        assert!(res.zero_rows.is_empty());
    }

    #[test]
    fn k4_single_cluster() {
        let res = spectral_clustering(&k4(), 1, 1).unwrap();
        assert_eq!(res.partition.assignment(), &[0; 4]);
        assert!((res.eigenvalues[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_isolated_vertex() {
        let g = crate::graph::build_graph(3, &[(0, 1, 1.0)]).unwrap();
        assert!(matches!(spectral_clustering(&g, 2, 0), Err(Error::ZeroDegree(2))));
    }
}
