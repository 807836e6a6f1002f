//! Recover one planted cluster with SCP and compare against the truth.

use clusterpursuit::pursuit::{scp, scp_sweep, ScpConfig};
use clusterpursuit::random_graphs::{gen_sbm, SbmParams};
use clusterpursuit::LaplacianView;

fn main() -> clusterpursuit::Result<()> {
    let sample = gen_sbm(&SbmParams::log_scaled(1000, 5, 2.0, 2.0), 1)?;
    let lap = LaplacianView::new(&sample.graph)?;
    let truth = sample.partition.cluster(0);

    let res = scp(&lap, &ScpConfig::new(0, 200))?;
    println!(
        "|Ω| = {}, |Λ#| = {}, found {} vertices, misclassification {}",
        res.omega.len(),
        res.lambda_sharp.len(),
        res.cluster.len(),
        res.misclassification(&truth)
    );
    println!(
        "threshold {:?}, sparse recovery {:?}, SP stop {:?} after {} iterations",
        res.timings.threshold, res.timings.sparse_recovery, res.sp_result.stop, res.sp_result.iterations
    );

    // the cluster size is rarely known exactly
    for (n0, r) in scp_sweep(&lap, 0, &[160, 180, 200, 220, 240], 10.0 / 9.0)? {
        println!("n0_hat = {n0}: found {}, misclassification {:.3}", r.cluster.len(), r.misclassification(&truth));
    }
    Ok(())
}
