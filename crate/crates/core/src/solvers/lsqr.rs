use crate::error::{Error, Result};
use crate::operator::{norm2, ColumnOperator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsqrOptions {
    /// Used as both `atol` and `btol`.
    pub tol: f64,
    /// `None` means four times the number of columns.
    pub max_iter: Option<usize>,
}

impl Default for LsqrOptions {
    fn default() -> Self {
        LsqrOptions {
            tol: 1e-10,
            max_iter: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LsqrOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Estimate of `‖y − Φ_cols x‖₂` from the bidiagonalization.
    pub residual_norm: f64,
}

/// Least squares `min ‖Φ_cols x − y‖₂` by Golub–Kahan bidiagonalization
/// (Paige–Saunders LSQR), optionally warm-started from `x0`.
pub fn lsqr_solve<O: ColumnOperator + ?Sized>(
    op: &O,
    cols: &[usize],
    y: &[f64],
    x0: Option<&[f64]>,
    opts: LsqrOptions,
) -> Result<LsqrOutcome> {
    let m = cols.len();
    if m == 0 {
        return Err(Error::Empty("least-squares column set"));
    }
    if y.len() != op.nrows() {
        return Err(Error::DimensionMismatch {
            expected: op.nrows(),
            got: y.len(),
        });
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("least-squares right-hand side"));
    }
    if let Some(j) = cols.iter().find(|&&j| j >= op.ncols()) {
        return Err(Error::IndexOutOfRange { index: *j, n: op.ncols() });
    }
    let max_iter = opts.max_iter.unwrap_or(4 * m);
    let mut x = match x0 {
        Some(x0) if x0.len() != m => {
            return Err(Error::DimensionMismatch { expected: m, got: x0.len() });
        }
        Some(x0) if x0.iter().any(|v| !v.is_finite()) => return Err(Error::NonFinite("initial guess")),
        Some(x0) => x0.to_vec(),
        None => vec![0.0; m],
    };
    let n = op.nrows();
    let mut u = y.to_vec();
    if x.iter().any(|&v| v != 0.0) {
        let mut ax = vec![0.0; n];
        op.apply_columns(cols, &x, &mut ax);
        for (ui, a) in u.iter_mut().zip(&ax) {
            *ui -= a;
        }
    }
    let mut beta = norm2(&u);
    let bnorm = beta;
    if beta == 0.0 {
        return Ok(LsqrOutcome { x, iterations: 0, converged: true, residual_norm: 0.0 });
    }
    scale(&mut u, 1.0 / beta);
    let mut v = vec![0.0; m];
    op.correlate_columns(cols, &u, &mut v);
    let mut alpha = norm2(&v);
    if alpha == 0.0 {
        return Ok(LsqrOutcome { x, iterations: 0, converged: true, residual_norm: beta });
    }
    scale(&mut v, 1.0 / alpha);
    let mut w = v.clone();
    let mut phibar = beta;
    let mut rhobar = alpha;
    let mut anorm2 = 0.0;
    let mut dx = vec![0.0; m];
    let mut av = vec![0.0; n];
    let mut atu = vec![0.0; m];
    let tol = opts.tol;

    for it in 1..=max_iter {
        op.apply_columns(cols, &v, &mut av);
        for (ui, a) in u.iter_mut().zip(&av) {
            *ui = a - alpha * *ui;
        }
        beta = norm2(&u);
        anorm2 += alpha * alpha + beta * beta;
        if beta > 0.0 {
            scale(&mut u, 1.0 / beta);
            op.correlate_columns(cols, &u, &mut atu);
            for (vi, a) in v.iter_mut().zip(&atu) {
                *vi = a - beta * *vi;
            }
            alpha = norm2(&v);
            if alpha > 0.0 {
                scale(&mut v, 1.0 / alpha);
            }
        } else {
            alpha = 0.0;
        }

        let rho = rhobar.hypot(beta);
        let c = rhobar / rho;
        let s = beta / rho;
        let theta = s * alpha;
        rhobar = -c * alpha;
        let phi = c * phibar;
        phibar *= s;

        let t1 = phi / rho;
        let t2 = -theta / rho;
        for ((d, wi), vi) in dx.iter_mut().zip(w.iter_mut()).zip(&v) {
            *d += t1 * *wi;
            *wi = vi + t2 * *wi;
        }

        let rnorm = phibar;
        let arnorm = phibar * alpha * c.abs();
        let anorm = anorm2.sqrt();
        let xnorm = x.iter().zip(&dx).map(|(a, b)| (a + b) * (a + b)).sum::<f64>().sqrt();
        let small_residual = rnorm <= tol * bnorm + tol * anorm * xnorm;
        let normal_eq = rnorm == 0.0 || arnorm <= tol * anorm * rnorm;
        if small_residual || normal_eq || alpha == 0.0 || beta == 0.0 {
            add(&mut x, &dx);
            return Ok(LsqrOutcome { x, iterations: it, converged: true, residual_norm: rnorm });
        }
    }
    add(&mut x, &dx);
    Ok(LsqrOutcome { x, iterations: max_iter, converged: false, residual_norm: phibar })
}

fn scale(v: &mut [f64], a: f64) {
    v.iter_mut().for_each(|x| *x *= a);
}

fn add(x: &mut [f64], d: &[f64]) {
    x.iter_mut().zip(d).for_each(|(a, b)| *a += b);
}
