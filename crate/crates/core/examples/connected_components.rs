//! With no edges between blocks, OMP on the Laplacian finds the seed's
//! connected component exactly.

use clusterpursuit::pursuit::{connected_component_omp, scp, ScpConfig};
use clusterpursuit::random_graphs::{gen_sbm, SbmParams};
use clusterpursuit::LaplacianView;

fn main() -> clusterpursuit::Result<()> {
    let sample = gen_sbm(&SbmParams::equal(300, 3, 0.5, 0.0), 9)?;
    let g = &sample.graph;
    let lap = LaplacianView::new(g)?;
    for seed in [0, 150, 299] {
        let omp = connected_component_omp(&lap, seed)?;
        let bfs = g.component_of(seed);
        let via_scp = scp(&lap, &ScpConfig::new(seed, 100))?.cluster;
        println!("seed {seed}: OMP {} vertices, SCP {} vertices, both match BFS: {}", omp.len(), via_scp.len(), omp == bfs && via_scp == bfs);
    }
    Ok(())
}
