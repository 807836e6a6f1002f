//! Sample a stochastic block model, inspect degrees, write it to disk.

use clusterpursuit::io;
use clusterpursuit::random_graphs::{degree_split, gen_sbm, SbmParams};

fn main() -> clusterpursuit::Result<()> {
    let params = SbmParams::log_scaled(1000, 5, 2.0, 2.0);
    println!("G(1000, 5, p = {:.4}, q = {:.5})", params.p, params.q);
    let sample = gen_sbm(&params, 42)?;
    let g = &sample.graph;
    println!("edges: {}, isolated: {}", g.edge_count(), sample.isolated.len());

    let split = degree_split(g, &sample.partition)?;
    let mean_in = split.iter().map(|d| d.inner).sum::<f64>() / split.len() as f64;
    let mean_out = split.iter().map(|d| d.outer).sum::<f64>() / split.len() as f64;
    let max_r = split.iter().map(|d| d.ratio).fold(0.0, f64::max);
    println!("mean in-block degree {mean_in:.1}, mean out-of-block degree {mean_out:.1}, max r_i {max_r:.3}");

    let shuffled = sample.permuted(7);
    let dir = std::env::temp_dir();
    io::write_edge_list_file(&shuffled.graph, dir.join("sbm_edges.txt"))?;
    io::write_partition_file(&shuffled.partition, dir.join("sbm_labels.csv"))?;
    let back = io::read_edge_list(dir.join("sbm_edges.txt"))?;
    assert_eq!(back, shuffled.graph);
    println!("wrote and re-read {}", dir.join("sbm_edges.txt").display());
    Ok(())
}
