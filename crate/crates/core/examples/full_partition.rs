//! Partition a whole graph with ISCP and score it against the truth.

use clusterpursuit::pipeline::partition_accuracy;
use clusterpursuit::pursuit::{iscp, IscpConfig};
use clusterpursuit::random_graphs::{gen_sbm, SbmParams};

fn main() -> clusterpursuit::Result<()> {
    let sample = gen_sbm(&SbmParams::log_scaled(2000, 8, 3.0, 2.0), 4)?.permuted(5);
    let start = std::time::Instant::now();
    let res = iscp(&sample.graph, &IscpConfig::uniform(8, 250))?;
    let acc = partition_accuracy(&sample.partition, &res.partition)?;
    println!("ISCP: {:?} in {:?}", res.partition.sizes(), start.elapsed());
    println!("accuracy {}, rejected {}", acc.accuracy, res.rejected.len());

    let unequal = gen_sbm(&SbmParams::with_sizes(vec![150, 250, 400], 0.4, 0.01), 6)?;
    let res = iscp(&unequal.graph, &IscpConfig::with_sizes(vec![150, 250, 400]))?;
    println!("unequal blocks: accuracy {}", partition_accuracy(&unequal.partition, &res.partition)?.accuracy);
    Ok(())
}
