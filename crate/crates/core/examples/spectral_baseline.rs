//! The spectral clustering baseline next to ISCP on the same graph.

use std::time::Instant;

use clusterpursuit::baselines::spectral_clustering;
use clusterpursuit::pipeline::partition_accuracy;
use clusterpursuit::pursuit::{iscp, IscpConfig};
use clusterpursuit::random_graphs::{gen_sbm, SbmParams};

fn main() -> clusterpursuit::Result<()> {
    let sample = gen_sbm(&SbmParams::log_scaled(1000, 5, 2.0, 2.0), 11)?;
    let t = Instant::now();
    let sc = spectral_clustering(&sample.graph, 5, 1)?;
    let sc_time = t.elapsed();
    let t = Instant::now();
    let is = iscp(&sample.graph, &IscpConfig::uniform(5, 200))?;
    let iscp_time = t.elapsed();
    println!("top eigenvalues {:?}", sc.eigenvalues);
    println!("SC   accuracy {} in {sc_time:?}", partition_accuracy(&sample.partition, &sc.partition)?.accuracy);
    println!("ISCP accuracy {} in {iscp_time:?}", partition_accuracy(&sample.partition, &is.partition)?.accuracy);
    Ok(())
}
