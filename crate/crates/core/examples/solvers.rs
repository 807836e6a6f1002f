//! OMP, Subspace Pursuit and LSQR on a random dense matrix.

use clusterpursuit::operator::DenseMatrix;
use clusterpursuit::solvers::{lsqr_solve, omp, subspace_pursuit, LsqrOptions, OmpOptions, RecoveryProblem, SpOptions};
use rand::Rng;

fn main() -> clusterpursuit::Result<()> {
    let mut rng = clusterpursuit::rng::stream(5);
    let (m, n) = (50, 100);
    let mut a = DenseMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0));
    for j in 0..n {
        let norm = a.col(j).iter().map(|x| x * x).sum::<f64>().sqrt();
        a.col_mut(j).iter_mut().for_each(|x| *x /= norm);
    }
    let support = [3, 17, 42, 88];
    let mut y = vec![0.0; m];
    for (&j, c) in support.iter().zip([1.0, -2.0, 0.5, 1.5]) {
        for (yi, aij) in y.iter_mut().zip(a.col(j)) {
            *yi += c * aij;
        }
    }

    let problem = RecoveryProblem::new(&a, y.clone(), 4)?;
    let sp = subspace_pursuit(&problem, SpOptions::default())?;
    println!("SP:  support {:?}, coefficients {:.3?}, residual {:.1e}", sp.support.as_slice(), sp.coefficients, sp.residual_norm);
    let o = omp(&problem, OmpOptions::default())?;
    println!("OMP: support {:?}, stop {:?}", o.support.as_slice(), o.stop);

    let ls = lsqr_solve(&a, &support, &y, None, LsqrOptions::default())?;
    println!("LSQR on the true support: {:.6?} after {} iterations", ls.x, ls.iterations);
    Ok(())
}
