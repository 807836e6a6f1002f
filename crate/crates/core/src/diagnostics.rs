//! Numerical checks of the sparse-recovery properties of graph Laplacians.
//!
//! Dense linear algebra here is meant for small instances. Restricted
//! isometry constants are computed from a precomputed Gram matrix: for a
//! column set `S`, `δ(S) = max(1 − λ_min(G_SS), λ_max(G_SS) − 1)` where
//! `G = ΦᵀΦ`, and `δ_s` is the maximum of `δ(S)` over `|S| = s`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::index;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{LaplacianView, SparseGraph};
use crate::index_set::IndexSet;
use crate::operator::{to_dense, ColumnOperator, DenseMatrix};
use crate::partition::Partition;
use crate::rng;

pub const EXHAUSTIVE_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RicMethod {
    Exhaustive,
    /// Random subsets; `delta_s` is a lower bound.
    Sampled { trials: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RicReport {
    pub s: usize,
    pub delta_s: f64,
    /// Lexicographically smallest set achieving `delta_s` among those examined.
    pub worst_set: IndexSet,
    pub method: RicMethod,
    /// Smallest `σ_min(Φ_S)²` seen.
    pub min_sigma_sq: f64,
    /// Largest `σ_max(Φ_S)²` seen.
    pub max_sigma_sq: f64,
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        match acc.checked_mul((n - i) as u128) {
            Some(x) => acc = x / (i + 1) as u128,
            None => return u128::MAX,
        }
    }
    acc
}

fn gram<O: ColumnOperator + ?Sized>(op: &O) -> DMatrix<f64> {
    let d = to_dense(op);
    let (r, c) = d.shape();
    let m = DMatrix::from_fn(r, c, |i, j| d.get(i, j));
    m.transpose() * &m
}

#[derive(Debug, Clone)]
struct Extremes {
    delta: f64,
    set: Vec<usize>,
    min_eig: f64,
    max_eig: f64,
}

impl Extremes {
    fn empty() -> Self {
        Extremes {
            delta: f64::NEG_INFINITY,
            set: Vec::new(),
            min_eig: f64::INFINITY,
            max_eig: f64::NEG_INFINITY,
        }
    }

    fn visit(&mut self, g: &DMatrix<f64>, set: &[usize]) {
        let s = set.len();
        let sub = DMatrix::from_fn(s, s, |a, b| g[(set[a], set[b])]);
        let eig = SymmetricEigen::new(sub).eigenvalues;
        let lo = eig.min();
        let hi = eig.max();
        let delta = (1.0 - lo).max(hi - 1.0);
        self.min_eig = self.min_eig.min(lo);
        self.max_eig = self.max_eig.max(hi);
        if delta > self.delta || (delta == self.delta && set < self.set.as_slice()) {
            self.delta = delta;
            self.set = set.to_vec();
        }
    }

    fn merge(mut self, other: Extremes) -> Extremes {
        self.min_eig = self.min_eig.min(other.min_eig);
        self.max_eig = self.max_eig.max(other.max_eig);
        if other.delta > self.delta || (other.delta == self.delta && other.set < self.set) {
            self.delta = other.delta;
            self.set = other.set;
        }
        self
    }

    fn report(self, s: usize, method: RicMethod) -> RicReport {
        RicReport {
            s,
            delta_s: self.delta.max(0.0),
            worst_set: IndexSet::from_sorted(self.set).expect("combinations are sorted"),
            method,
            min_sigma_sq: self.min_eig,
            max_sigma_sq: self.max_eig,
        }
    }
}

/// Advances `c` to the next `k`-combination of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact `δ_s` by enumerating every `s`-subset of columns.
pub fn ric_bruteforce<O: ColumnOperator + ?Sized>(op: &O, s: usize) -> Result<RicReport> {
    let n = op.ncols();
    if s > n {
        return Err(Error::InvalidParameter(format!("s = {s} exceeds {n} columns")));
    }
    let needed = binomial(n, s);
    if needed > EXHAUSTIVE_BUDGET {
        return Err(Error::EnumerationBudget {
            needed,
            budget: EXHAUSTIVE_BUDGET,
        });
    }
    if s == 0 {
        return Ok(RicReport {
            s,
            delta_s: 0.0,
            worst_set: IndexSet::empty(),
            method: RicMethod::Exhaustive,
            min_sigma_sq: 1.0,
            max_sigma_sq: 1.0,
        });
    }
    let g = gram(op);
    // one chunk per leading index, reduced in order
    let best = (0..=n - s)
        .into_par_iter()
        .map(|first| {
            let mut ext = Extremes::empty();
            let mut rest: Vec<usize> = (first + 1..first + s).collect();
            let mut set = Vec::with_capacity(s);
            loop {
                set.clear();
                set.push(first);
                set.extend(rest.iter().copied());
                ext.visit(&g, &set);
                if rest.is_empty() || !next_tail(&mut rest, first + 1, n) {
                    break;
                }
            }
            ext
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Extremes::empty(), Extremes::merge);
    Ok(best.report(s, RicMethod::Exhaustive))
}

/// Next combination of `lo..n` of the same length.
fn next_tail(c: &mut [usize], lo: usize, n: usize) -> bool {
    for x in c.iter_mut() {
        *x -= lo;
    }
    let more = next_combination(c, n - lo);
    for x in c.iter_mut() {
        *x += lo;
    }
    more
}

/// Lower bound on `δ_s` from `trials` random `s`-subsets. Falls back to full
/// enumeration when `trials ≥ C(N, s)`.
pub fn ric_sampled<O: ColumnOperator + ?Sized>(op: &O, s: usize, trials: usize, seed: u64) -> Result<RicReport> {
    let n = op.ncols();
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if s > n {
        return Err(Error::InvalidParameter(format!("s = {s} exceeds {n} columns")));
    }
    if (trials as u128) >= binomial(n, s) {
        return ric_bruteforce(op, s);
    }
    let g = gram(op);
    let mut rng = rng::stream(seed);
    let mut ext = Extremes::empty();
    for _ in 0..trials {
        let mut set = index::sample(&mut rng, n, s).into_vec();
        set.sort_unstable();
        ext.visit(&g, &set);
    }
    Ok(ext.report(s, RicMethod::Sampled { trials }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coherence {
    /// `max_{i≠j} |⟨φ_i, φ_j⟩| / (‖φ_i‖ ‖φ_j‖)`.
    pub normalized: f64,
    /// `max_{i≠j} |⟨φ_i, φ_j⟩|`.
    pub unnormalized: f64,
}

/// Both coherence variants by enumerating every pair of columns.
pub fn coherence<O: ColumnOperator + ?Sized>(op: &O) -> Result<Coherence> {
    let n = op.ncols();
    if n < 2 {
        return Err(Error::InvalidParameter("coherence needs at least two columns".into()));
    }
    let cols: Vec<Vec<f64>> = (0..n).map(|j| op.column(j)).collect();
    let norms: Vec<f64> = cols.iter().map(|c| crate::operator::norm2(c)).collect();
    if let Some(j) = norms.iter().position(|&x| x == 0.0) {
        return Err(Error::InvalidParameter(format!("column {j} is zero")));
    }
    let all: Vec<usize> = (0..n).collect();
    let (normalized, unnormalized) = (0..n)
        .map(|i| {
            let mut g = vec![0.0; n];
            op.correlate_columns(&all, &cols[i], &mut g);
            let mut best = (0.0f64, 0.0f64);
            for (j, v) in g.iter().enumerate().skip(i + 1) {
                best.0 = best.0.max(v.abs() / (norms[i] * norms[j]));
                best.1 = best.1.max(v.abs());
            }
            best
        })
        .fold((0.0f64, 0.0f64), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    Ok(Coherence { normalized, unnormalized })
}

/// `χ_ij = Σ_k A_ik A_kj`, the weighted count of common neighbours.
pub fn chi_statistic(g: &SparseGraph, i: usize, j: usize) -> Result<f64> {
    let n = g.n();
    for v in [i, j] {
        if v >= n {
            return Err(Error::IndexOutOfRange { index: v, n });
        }
    }
    if i == j {
        return Err(Error::InvalidParameter("χ needs two distinct vertices".into()));
    }
    let (ai, wi) = (g.neighbor_indices(i), g.neighbor_weights(i));
    let (aj, wj) = (g.neighbor_indices(j), g.neighbor_weights(j));
    let (mut x, mut y, mut acc) = (0, 0, 0.0);
    while x < ai.len() && y < aj.len() {
        match ai[x].cmp(&aj[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                acc += wi[x] * wj[y];
                x += 1;
                y += 1;
            }
        }
    }
    Ok(acc)
}

/// Two-sided concentration bracket for `χ_ij` within one Erdős–Rényi block
/// of size `n0`, holding with probability `1 − delta` when every degree lies
/// in `[(1−α) n0 p, (1+α) n0 p]`.
pub fn chi_bounds(n0: usize, p: f64, alpha: f64, delta: f64) -> (f64, f64) {
    let n0 = n0 as f64;
    let dev = ((1.0 + alpha) * n0 * p * (1.0 / delta).ln() / 2.0).sqrt();
    ((1.0 - alpha) * n0 * p * p - dev, (1.0 + alpha) * n0 * p * p + dev)
}

/// Default degree-concentration parameter `α = 1/√ln n`.
pub fn default_alpha(n: usize) -> f64 {
    1.0 / (n as f64).ln().sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntraProductStats {
    pub pairs: usize,
    pub min: f64,
    pub mean: f64,
    pub alpha: f64,
    /// `(1/n0) β² / (1+α)` with `β² = (1+α)/(1−α)`.
    pub floor: f64,
    /// `(1/n0) (1−α) / (1+α)²`, the bound for non-adjacent pairs.
    pub floor_nonadjacent: f64,
    pub fraction_above_floor: f64,
    /// Adjacent pairs against `floor`, non-adjacent against `floor_nonadjacent`.
    pub fraction_above_case_floor: f64,
}

/// Samples `sample_pairs` same-cluster pairs `(i, j)` and summarizes
/// `|⟨ℓ_i, ℓ_j⟩|` against the theoretical floors, with `n0 = n / k`.
pub fn intra_inner_product_floor(
    lap: &LaplacianView,
    part: &Partition,
    sample_pairs: usize,
    seed: u64,
) -> Result<IntraProductStats> {
    use rand::Rng;
    let n = lap.n();
    if part.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: part.n() });
    }
    let alpha = default_alpha(n);
    let n0 = n as f64 / part.k() as f64;
    let beta2 = (1.0 + alpha) / (1.0 - alpha);
    let floor = beta2 / (1.0 + alpha) / n0;
    let floor_nonadjacent = (1.0 - alpha) / ((1.0 + alpha) * (1.0 + alpha)) / n0;
    let mut stats = IntraProductStats {
        pairs: 0,
        min: f64::NAN,
        mean: f64::NAN,
        alpha,
        floor,
        floor_nonadjacent,
        fraction_above_floor: f64::NAN,
        fraction_above_case_floor: f64::NAN,
    };
    let clusters: Vec<Vec<usize>> = part.clusters().into_iter().map(IndexSet::into_vec).collect();
    let eligible: Vec<usize> = (0..n).filter(|&v| clusters[part.cluster_of(v)].len() >= 2).collect();
    if sample_pairs == 0 || eligible.is_empty() {
        return Ok(stats);
    }
    let mut rng = rng::stream(seed);
    let (mut min, mut sum, mut above, mut above_case) = (f64::INFINITY, 0.0, 0usize, 0usize);
    for _ in 0..sample_pairs {
        let i = eligible[rng.random_range(0..eligible.len())];
        let c = &clusters[part.cluster_of(i)];
        let j = loop {
            let j = c[rng.random_range(0..c.len())];
            if j != i {
                break j;
            }
        };
        let li = lap.column(i);
        let mut v = [0.0];
        lap.correlate_columns(&[j], &li, &mut v);
        let x = v[0].abs();
        min = min.min(x);
        sum += x;
        above += (x >= floor) as usize;
        let case = if lap.graph().weight(i, j) > 0.0 { floor } else { floor_nonadjacent };
        above_case += (x >= case) as usize;
    }
    let m = sample_pairs as f64;
    stats.pairs = sample_pairs;
    stats.min = min;
    stats.mean = sum / m;
    stats.fraction_above_floor = above as f64 / m;
    stats.fraction_above_case_floor = above_case as f64 / m;
    Ok(stats)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeHint {
    Above,
    Below,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub value: f64,
    pub hint: RegimeHint,
}

/// `(1/k)(√P − √Q)`, compared against 1. Advisory only.
pub fn recovery_regime(k: usize, p_scaled: f64, q_scaled: f64) -> Result<Regime> {
    if k == 0 || p_scaled < 0.0 || q_scaled < 0.0 {
        return Err(Error::InvalidParameter("need k ≥ 1 and P, Q ≥ 0".into()));
    }
    let value = (p_scaled.sqrt() - q_scaled.sqrt()) / k as f64;
    let hint = if (value - 1.0).abs() <= 1e-12 {
        RegimeHint::Boundary
    } else if value > 1.0 {
        RegimeHint::Above
    } else {
        RegimeHint::Below
    };
    Ok(Regime { value, hint })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErcReport {
    /// `‖Φ_S† Φ_{S^c}‖_{1→1}`, the largest absolute column sum.
    pub value: f64,
    pub holds: bool,
}

pub const ERC_MAX_COLUMNS: usize = 64;

/// Exact-recovery-condition value for support `s_set`.
pub fn erc_check<O: ColumnOperator + ?Sized>(op: &O, s_set: &IndexSet) -> Result<ErcReport> {
    let n = op.ncols();
    if n > ERC_MAX_COLUMNS {
        return Err(Error::InvalidParameter(format!(
            "ERC is evaluated densely; {n} columns exceeds {ERC_MAX_COLUMNS}"
        )));
    }
    s_set.check_bound(n)?;
    if s_set.is_empty() {
        return Err(Error::Empty("ERC support"));
    }
    let d = to_dense(op);
    let rows = op.nrows();
    let phi_s = DMatrix::from_fn(rows, s_set.len(), |i, j| d.get(i, s_set[j]));
    let comp: Vec<usize> = (0..n).filter(|&j| !s_set.contains(j)).collect();
    let svd = phi_s.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if s_set.len() > rows || smin <= f64::EPSILON * smax.max(1.0) * rows.max(s_set.len()) as f64 {
        return Err(Error::RankDeficient { sigma_min: smin });
    }
    if comp.is_empty() {
        return Ok(ErcReport { value: 0.0, holds: true });
    }
    let pinv = svd.pseudo_inverse(0.0).map_err(|e| Error::Eigensolver(e.to_string()))?;
    let phi_c = DMatrix::from_fn(rows, comp.len(), |i, j| d.get(i, comp[j]));
    let prod = pinv * phi_c;
    let value = (0..prod.ncols())
        .map(|j| prod.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    Ok(ErcReport { value, holds: value < 1.0 })
}

/// Eigenvalues of `L_rw` in ascending order, via the similar symmetric
/// matrix `I − D^{-1/2} A D^{-1/2}`.
pub fn laplacian_spectrum(g: &SparseGraph) -> Result<Vec<f64>> {
    let sym = sym_laplacian(g)?;
    let (n, _) = sym.shape();
    let m = DMatrix::from_fn(n, n, |i, j| sym.get(i, j));
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Dense `I − D^{-1/2} A D^{-1/2}`.
pub fn sym_laplacian(g: &SparseGraph) -> Result<DenseMatrix> {
    let n = g.n();
    let mut isd = Vec::with_capacity(n);
    for i in 0..n {
        let d = g.degree(i);
        if d <= 0.0 {
            return Err(Error::ZeroDegree(i));
        }
        isd.push(1.0 / d.sqrt());
    }
    let mut m = DenseMatrix::identity(n);
    for i in 0..n {
        for (j, w) in g.neighbors(i) {
            m.set(i, j, -w * isd[i] * isd[j]);
        }
    }
    Ok(m)
}

/// `max{1 − (1 − s/n) λ₂², λ_n² − 1}` for a connected graph on `n` vertices.
pub fn connected_ric_bound(spectrum: &[f64], s: usize) -> f64 {
    let n = spectrum.len();
    let l2 = spectrum[1];
    let ln = spectrum[n - 1];
    (1.0 - (1.0 - s as f64 / n as f64) * l2 * l2).max(ln * ln - 1.0)
}

/// `γ + (1 − γ) · 8 p^{-1/2} / √n0`, the leading-order RIC bound for an
/// Erdős–Rényi block at `s = γ n0`.
pub fn er_ric_bound(gamma: f64, p: f64, n0: usize) -> f64 {
    gamma + (1.0 - gamma) * 8.0 / p.sqrt() / (n0 as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationReport {
    /// Max row sum of `|E¹|`, the part of `L − L⁰` on within-cluster edges.
    pub e1_inf: f64,
    /// Max row sum of `|E²|`, the part on between-cluster edges.
    pub e2_inf: f64,
    /// `max_i r_i` with `r_i = dᵉ_i / d⁰_i`.
    pub max_r: f64,
    /// `max_i r_i / (1 + r_i)`.
    pub max_r_ratio: f64,
}

/// Splits `E = L − L⁰` (with `L⁰` the Laplacian of the within-cluster
/// subgraph) into its within- and between-cluster supports and reports
/// their row-sum norms.
pub fn perturbation_split(g: &SparseGraph, part: &Partition) -> Result<PerturbationReport> {
    let n = g.n();
    if part.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: part.n() });
    }
    let mut rep = PerturbationReport { e1_inf: 0.0, e2_inf: 0.0, max_r: 0.0, max_r_ratio: 0.0 };
    for i in 0..n {
        let ci = part.cluster_of(i);
        let d = g.degree(i);
        let d0: f64 = g.neighbors(i).filter(|&(j, _)| part.cluster_of(j) == ci).map(|e| e.1).sum();
        if d0 <= 0.0 {
            return Err(Error::ZeroDegree(i));
        }
        let (mut e1, mut e2) = (0.0, 0.0);
        for (j, w) in g.neighbors(i) {
            if part.cluster_of(j) == ci {
                e1 += (w / d0 - w / d).abs();
            } else {
                e2 += (w / d).abs();
            }
        }
        let r = (d - d0) / d0;
        rep.e1_inf = rep.e1_inf.max(e1);
        rep.e2_inf = rep.e2_inf.max(e2);
        rep.max_r = rep.max_r.max(r);
        rep.max_r_ratio = rep.max_r_ratio.max(r / (1.0 + r));
    }
    Ok(rep)
}

/// Dense `L` as an operator, for feeding small graphs to the routines above.
pub fn dense_laplacian(g: &SparseGraph) -> Result<DenseMatrix> {
    let lap = LaplacianView::new(g)?;
    Ok(to_dense(&lap))
}
