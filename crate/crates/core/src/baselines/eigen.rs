//! Dense symmetric eigensolver for the top of the spectrum.
//!
//! Householder reduction to tridiagonal form, eigenvalues by implicit QL,
//! then eigenvectors of the wanted eigenvalues by inverse iteration on the
//! tridiagonal matrix (with Gram–Schmidt inside clusters of close
//! eigenvalues) and back-transformation through the stored reflectors.

use crate::error::{Error, Result};

/// Row-major symmetric matrix reduced in place.
pub struct Tridiagonal {
    n: usize,
    pub diag: Vec<f64>,
    /// `off[i]` couples `i` and `i + 1`.
    pub off: Vec<f64>,
    /// Reflector `k` lives in `reflectors[k * n + k + 1 ..]`.
    reflectors: Vec<f64>,
    betas: Vec<f64>,
}

/// Reduces the symmetric `n × n` row-major matrix `a` to `Qᵀ a Q = T`.
pub fn tridiagonalize(mut a: Vec<f64>, n: usize) -> Tridiagonal {
    assert_eq!(a.len(), n * n);
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut betas = vec![0.0; n.saturating_sub(1)];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let m = n - k - 1;
        let row = k * n + k + 1;
        let xnorm = a[row..row + m].iter().map(|x| x * x).sum::<f64>().sqrt();
        let x0 = a[row];
        let alpha = if x0 >= 0.0 { -xnorm } else { xnorm };
        diag[k] = a[k * n + k];
        off[k] = alpha;
        if m == 1 || xnorm == 0.0 {
            // reflector would be the identity; keep the raw subdiagonal
            off[k] = x0;
            betas[k] = 0.0;
            continue;
        }
        a[row] -= alpha;
        let vtv: f64 = a[row..row + m].iter().map(|x| x * x).sum();
        let beta = 2.0 / vtv;
        betas[k] = beta;
        let (head, tail) = a.split_at_mut((k + 1) * n);
        let v = &head[row..row + m];
        // p = β A22 v
        for i in 0..m {
            let r = &tail[i * n + k + 1..i * n + n];
            p[i] = beta * r.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        }
        // w = p − (β pᵀv / 2) v
        let ptv: f64 = p[..m].iter().zip(v).map(|(a, b)| a * b).sum();
        let c = beta * ptv / 2.0;
        for i in 0..m {
            p[i] -= c * v[i];
        }
        // A22 −= v wᵀ + w vᵀ
        for i in 0..m {
            let (vi, wi) = (v[i], p[i]);
            let r = &mut tail[i * n + k + 1..i * n + n];
            for j in 0..m {
                r[j] -= vi * p[j] + wi * v[j];
            }
        }
    }
    if n > 0 {
        diag[n - 1] = a[n * n - 1];
    }
    Tridiagonal {
        n,
        diag,
        off,
        reflectors: a,
        betas,
    }
}

impl Tridiagonal {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Applies `Q` to a vector in tridiagonal coordinates.
    pub fn back_transform(&self, z: &mut [f64]) {
        let n = self.n;
        for k in (0..n.saturating_sub(1)).rev() {
            let beta = self.betas[k];
            if beta == 0.0 {
                continue;
            }
            let v = &self.reflectors[k * n + k + 1..k * n + n];
            let zz = &mut z[k + 1..];
            let d: f64 = v.iter().zip(zz.iter()).map(|(a, b)| a * b).sum();
            let s = beta * d;
            for (zi, vi) in zz.iter_mut().zip(v) {
                *zi -= s * vi;
            }
        }
    }

    fn norm(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            let mut r = self.diag[i].abs();
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < self.n {
                r += self.off[i].abs();
            }
            m = m.max(r);
        }
        m
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL, ascending.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Eigensolver(format!("QL did not converge for eigenvalue {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// `(T − λI) = P L U` with `U` having two superdiagonals.
struct ShiftedLu {
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    mult: Vec<f64>,
    swap: Vec<bool>,
}

impl ShiftedLu {
    fn new(t: &Tridiagonal, lambda: f64, tiny: f64) -> Self {
        let n = t.n;
        let mut u0: Vec<f64> = t.diag.iter().map(|d| d - lambda).collect();
        let mut u1: Vec<f64> = t.off.clone();
        u1.push(0.0);
        let mut u2 = vec![0.0; n];
        let mut mult = vec![0.0; n.saturating_sub(1)];
        let mut swap = vec![false; n.saturating_sub(1)];
        // row i holds (u0[i], u1[i]) in columns i, i + 1; row i + 1 still has
        // its original sub-diagonal off[i]
        for i in 0..n.saturating_sub(1) {
            let sub = t.off[i];
            if u0[i].abs() >= sub.abs() {
                let m = if u0[i] == 0.0 { 0.0 } else { sub / u0[i] };
                mult[i] = m;
                u0[i + 1] -= m * u1[i];
            } else {
                let m = u0[i] / sub;
                mult[i] = m;
                swap[i] = true;
                let (old_u1, next_d, next_u1) = (u1[i], u0[i + 1], u1[i + 1]);
                u0[i] = sub;
                u1[i] = next_d;
                u2[i] = next_u1;
                u0[i + 1] = old_u1 - m * next_d;
                u1[i + 1] = -m * next_u1;
            }
        }
        for u in u0.iter_mut() {
            if u.abs() < tiny {
                *u = if *u < 0.0 { -tiny } else { tiny };
            }
        }
        ShiftedLu { u0, u1, u2, mult, swap }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.swap[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.mult[i] * b[i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= self.u1[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * b[i + 2];
            }
            b[i] = s / self.u0[i];
        }
    }
}

/// Eigenpairs for the `k` largest eigenvalues of a dense symmetric matrix,
/// in decreasing eigenvalue order. Vectors are returned as columns of an
/// `n × k` row-major array.
pub fn top_eigenpairs(a: Vec<f64>, n: usize, k: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if k > n {
        return Err(Error::InvalidParameter(format!("asked for {k} eigenpairs of an {n}×{n} matrix")));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("eigensolver input"));
    }
    let t = tridiagonalize(a, n);
    let mut vals = tridiagonal_eigenvalues(&t.diag, &t.off)?;
    vals.reverse();
    vals.truncate(k);
    let tnorm = t.norm().max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * tnorm;
    let cluster_gap = 1e-3 * tnorm;
    let mut vecs: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut cluster_start = 0;
    for (idx, &lam) in vals.iter().enumerate() {
        if idx > 0 && (vals[idx - 1] - lam).abs() >= cluster_gap {
            cluster_start = idx;
        }
        let lu = ShiftedLu::new(&t, lam, tiny);
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919 + idx * 104729) % 1009) as f64 / 1009.0).collect();
        normalize(&mut x)?;
        for _ in 0..5 {
            lu.solve(&mut x);
            for prev in &vecs[cluster_start..idx] {
                let d: f64 = x.iter().zip(prev).map(|(a, b)| a * b).sum();
                for (xi, pi) in x.iter_mut().zip(prev) {
                    *xi -= d * pi;
                }
            }
            normalize(&mut x)?;
        }
        vecs.push(x);
    }
    let mut out = vec![0.0; n * k];
    for (j, z) in vecs.iter_mut().enumerate() {
        t.back_transform(z);
        for i in 0..n {
            out[i * k + j] = z[i];
        }
    }
    Ok((vals, out))
}

fn normalize(x: &mut [f64]) -> Result<()> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Error::Eigensolver("inverse iteration broke down".into()));
    }
    x.iter_mut().for_each(|v| *v /= norm);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{DMatrix, SymmetricEigen};
    use rand::Rng;

    fn random_symmetric(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = crate::rng::stream(seed);
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v: f64 = rng.random_range(-1.0..1.0);
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        a
    }

    fn oracle(a: &[f64], n: usize) -> Vec<f64> {
        let m = DMatrix::from_row_slice(n, n, a);
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn eigenvalues_match_oracle() {
        for (n, seed) in [(1, 0), (2, 1), (5, 2), (30, 3), (64, 4)] {
            let a = random_symmetric(n, seed);
            let t = tridiagonalize(a.clone(), n);
            let ours = tridiagonal_eigenvalues(&t.diag, &t.off).unwrap();
            for (x, y) in ours.iter().zip(oracle(&a, n)) {
                assert_relative_eq!(*x, y, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn eigenvectors_satisfy_definition() {
        let n = 40;
        let a = random_symmetric(n, 9);
        let k = 4;
        let (vals, vecs) = top_eigenpairs(a.clone(), n, k).unwrap();
        let ev = oracle(&a, n);
        for j in 0..k {
            assert_relative_eq!(vals[j], ev[n - 1 - j], epsilon = 1e-10);
            let v: Vec<f64> = (0..n).map(|i| vecs[i * k + j]).collect();
            for i in 0..n {
                let av: f64 = (0..n).map(|l| a[i * n + l] * v[l]).sum();
                assert!((av - vals[j] * v[i]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn repeated_eigenvalues_give_orthonormal_vectors() {
        // block diagonal with two identical 3×3 all-ones blocks: top eigenvalue 3 twice
        let n = 6;
        let mut a = vec![0.0; n * n];
        for b in 0..2 {
            for i in 0..3 {
                for j in 0..3 {
                    a[(3 * b + i) * n + 3 * b + j] = 1.0;
                }
            }
        }
        let (vals, vecs) = top_eigenpairs(a, n, 2).unwrap();
        assert_relative_eq!(vals[0], 3.0, epsilon = 1e-12);
        assert_relative_eq!(vals[1], 3.0, epsilon = 1e-12);
        let dot: f64 = (0..n).map(|i| vecs[i * 2] * vecs[i * 2 + 1]).sum();
        assert!(dot.abs() < 1e-10);
    }
}
