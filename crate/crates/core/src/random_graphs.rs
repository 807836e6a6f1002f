//! Seeded Erdős–Rényi and stochastic block model generators.
//!
//! Ground-truth blocks are contiguous index ranges fixed before any edge is
//! drawn. Each unordered pair is an independent Bernoulli trial. Pairs with
//! probability below [`GEOMETRIC_THRESHOLD`] are sampled by geometric skipping
//! along each row instead of one draw per pair; both paths produce the same
//! edge distribution but consume the random stream differently.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bipartite::NonnegMatrix;
use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::partition::Partition;
use crate::rng::{self, StreamRng};

pub const GEOMETRIC_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct SbmParams {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub q: f64,
    /// Per-block sizes; `None` means `k` equal blocks of `n / k`.
    pub sizes: Option<Vec<usize>>,
}

impl SbmParams {
    pub fn equal(n: usize, k: usize, p: f64, q: f64) -> Self {
        SbmParams {
            n,
            k,
            p,
            q,
            sizes: None,
        }
    }

    pub fn with_sizes(sizes: Vec<usize>, p: f64, q: f64) -> Self {
        SbmParams {
            n: sizes.iter().sum(),
            k: sizes.len(),
            p,
            q,
            sizes: Some(sizes),
        }
    }

    /// `p = p_scale · ln n / √n`, `q = q_scale · ln n / n`.
    pub fn log_scaled(n: usize, k: usize, p_scale: f64, q_scale: f64) -> Self {
        let ln = (n as f64).ln();
        Self::equal(n, k, p_scale * ln / (n as f64).sqrt(), q_scale * ln / n as f64)
    }

    pub fn block_sizes(&self) -> Result<Vec<usize>> {
        self.validate()?;
        Ok(match &self.sizes {
            Some(s) => s.clone(),
            None => vec![self.n / self.k; self.k],
        })
    }

    pub fn validate(&self) -> Result<()> {
        let prob_ok = |x: f64| (0.0..=1.0).contains(&x);
        if !prob_ok(self.p) || !prob_ok(self.q) {
            return Err(Error::InvalidParameter(format!(
                "probabilities must lie in [0, 1], got p = {}, q = {}",
                self.p, self.q
            )));
        }
        if self.q > self.p {
            return Err(Error::InvalidParameter(format!(
                "need q <= p, got p = {}, q = {}",
                self.p, self.q
            )));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        match &self.sizes {
            Some(s) => {
                if s.len() != self.k || s.iter().sum::<usize>() != self.n || s.contains(&0) {
                    return Err(Error::InvalidParameter(format!(
                        "sizes {s:?} must be {} positive entries summing to {}",
                        self.k, self.n
                    )));
                }
            }
            None => {
                if self.n % self.k != 0 || self.n == 0 {
                    return Err(Error::InvalidParameter(format!(
                        "k = {} must divide n = {} for equal blocks",
                        self.k, self.n
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SbmSample {
    pub graph: SparseGraph,
    pub partition: Partition,
    /// Vertices left with no edges.
    pub isolated: Vec<usize>,
    /// `Some(perm)` after [`SbmSample::permuted`]: old vertex `v` is now `perm[v]`.
    pub permutation: Option<Vec<usize>>,
}

impl SbmSample {
    /// Applies a seeded uniform relabeling to graph and partition.
    pub fn permuted(self, seed: u64) -> SbmSample {
        let perm = random_permutation(self.graph.n(), seed);
        SbmSample {
            graph: self.graph.permuted(&perm),
            partition: self.partition.permuted(&perm),
            isolated: {
                let mut iso: Vec<usize> = self.isolated.iter().map(|&v| perm[v]).collect();
                iso.sort_unstable();
                iso
            },
            permutation: Some(perm),
        }
    }
}

pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng::stream(seed));
    perm
}

/// Draws `G(n, k, p, q)`.
pub fn gen_sbm(params: &SbmParams, seed: u64) -> Result<SbmSample> {
    let sizes = params.block_sizes()?;
    let partition = Partition::contiguous(&sizes)?;
    let mut starts = Vec::with_capacity(sizes.len() + 1);
    starts.push(0);
    for s in &sizes {
        starts.push(starts.last().unwrap() + s);
    }
    let mut rng = rng::stream(seed);
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); params.n];
    for a in 0..sizes.len() {
        for b in a..sizes.len() {
            let prob = if a == b { params.p } else { params.q };
            if prob <= 0.0 {
                continue;
            }
            for i in starts[a]..starts[a + 1] {
                let lo = if a == b { i + 1 } else { starts[b] };
                sample_row(&mut rng, i, lo, starts[b + 1], prob, &mut rows);
            }
        }
    }
    for row in rows.iter_mut() {
        row.sort_unstable_by_key(|e| e.0);
    }
    let graph = SparseGraph::from_rows(rows);
    let isolated = graph.isolated_vertices();
    Ok(SbmSample {
        graph,
        partition,
        isolated,
        permutation: None,
    })
}

/// Samples edges `{i, j}` for `j` in `lo..hi` with probability `prob`.
fn sample_row(
    rng: &mut StreamRng,
    i: usize,
    lo: usize,
    hi: usize,
    prob: f64,
    rows: &mut [Vec<(usize, f64)>],
) {
    let push = |j: usize, rows: &mut [Vec<(usize, f64)>]| {
        rows[i].push((j, 1.0));
        rows[j].push((i, 1.0));
    };
    if prob >= GEOMETRIC_THRESHOLD {
        for j in lo..hi {
            if rng.random::<f64>() < prob {
                push(j, rows);
            }
        }
    } else {
        let log_miss = (1.0 - prob).ln();
        let mut j = lo;
        loop {
            let u: f64 = rng.random();
            // gap ~ Geometric(prob): number of failures before the next success
            let gap = ((1.0 - u).ln() / log_miss).floor();
            if !gap.is_finite() || gap >= (hi - j) as f64 {
                break;
            }
            j += gap as usize;
            push(j, rows);
            j += 1;
            if j >= hi {
                break;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ErSample {
    pub graph: SparseGraph,
    pub isolated: Vec<usize>,
}

/// Draws `G(n0, p)`.
pub fn gen_er(n0: usize, p: f64, seed: u64) -> Result<ErSample> {
    let s = gen_sbm(&SbmParams::equal(n0, 1, p, 0.0), seed)?;
    Ok(ErSample {
        graph: s.graph,
        isolated: s.isolated,
    })
}

/// In-community degree, out-of-community degree and their ratio for one vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeSplit {
    pub inner: f64,
    pub outer: f64,
    /// `outer / inner`; infinite when `inner == 0`.
    pub ratio: f64,
}

pub fn degree_split(g: &SparseGraph, part: &Partition) -> Result<Vec<DegreeSplit>> {
    if part.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: part.n(),
        });
    }
    Ok((0..g.n())
        .map(|i| {
            let ci = part.cluster_of(i);
            let (mut inner, mut outer) = (0.0, 0.0);
            for (j, w) in g.neighbors(i) {
                if part.cluster_of(j) == ci {
                    inner += w;
                } else {
                    outer += w;
                }
            }
            let ratio = if inner > 0.0 { outer / inner } else { f64::INFINITY };
            DegreeSplit { inner, outer, ratio }
        })
        .collect())
}

/// Planted bipartite block structure for co-clustering.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrixParams {
    pub rows: usize,
    pub cols: usize,
    pub k: usize,
    /// Probability of a one inside a diagonal block.
    pub p: f64,
    /// Probability of a one outside the diagonal blocks.
    pub q: f64,
}

#[derive(Debug, Clone)]
pub struct BlockMatrixSample {
    pub matrix: NonnegMatrix,
    pub row_partition: Partition,
    pub col_partition: Partition,
}

/// Binary `rows × cols` matrix with `k` equal diagonal blocks. Rows and
/// columns are independently shuffled when `permute` is set.
pub fn gen_block_matrix(params: &BlockMatrixParams, seed: u64, permute: bool) -> Result<BlockMatrixSample> {
    let BlockMatrixParams { rows, cols, k, p, q } = *params;
    if k == 0 || rows % k != 0 || cols % k != 0 {
        return Err(Error::InvalidParameter(format!(
            "k = {k} must divide both {rows} rows and {cols} columns"
        )));
    }
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) || q > p {
        return Err(Error::InvalidParameter(format!("need 0 <= q <= p <= 1, got p = {p}, q = {q}")));
    }
    let (rb, cb) = (rows / k, cols / k);
    let mut rng = rng::substream(seed, &[0]);
    let mut row_perm: Vec<usize> = (0..rows).collect();
    let mut col_perm: Vec<usize> = (0..cols).collect();
    if permute {
        let mut prng = rng::substream(seed, &[1]);
        row_perm.shuffle(&mut prng);
        col_perm.shuffle(&mut prng);
    }
    let mut entries = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let prob = if i / rb == j / cb { p } else { q };
            if rng.random::<f64>() < prob {
                entries.push((row_perm[i], col_perm[j], 1.0));
            }
        }
    }
    let matrix = NonnegMatrix::from_triplets(rows, cols, &entries)?;
    let mut row_labels = vec![0; rows];
    for i in 0..rows {
        row_labels[row_perm[i]] = i / rb;
    }
    let mut col_labels = vec![0; cols];
    for j in 0..cols {
        col_labels[col_perm[j]] = j / cb;
    }
    Ok(BlockMatrixSample {
        matrix,
        row_partition: Partition::new(row_labels, k)?,
        col_partition: Partition::new(col_labels, k)?,
    })
}
