//! Points to Gaussian affinities to a k-NN graph, then SCP.

use clusterpursuit::pipeline::{degree_threshold, gaussian_affinity, knn_sparsify, misclassification, PointCloud};
use clusterpursuit::pursuit::{scp, ScpConfig};
use clusterpursuit::{IndexSet, LaplacianView};
use rand::Rng;

fn main() -> clusterpursuit::Result<()> {
    let mut rng = clusterpursuit::rng::stream(3);
    let centres = [[0.0, 0.0], [6.0, 0.0], [0.0, 6.0]];
    let points: Vec<Vec<f64>> = centres
        .iter()
        .flat_map(|c| (0..40).map(move |_| *c).collect::<Vec<_>>())
        .map(|c| c.iter().map(|x| x + rng.random_range(-1.0..1.0)).collect())
        .collect();
    let cloud = PointCloud::new(points)?;

    let aff = gaussian_affinity(&cloud, 2.0)?;
    let g = knn_sparsify(&aff, 6)?;
    println!("k-NN graph: {} vertices, {} edges", g.n(), g.edge_count());

    let kept = degree_threshold(&g, 6, false)?;
    println!("degree >= 6 keeps {} vertices", kept.kept.len());

    let lap = LaplacianView::new(&g)?;
    let res = scp(&lap, &ScpConfig::new(0, 40))?;
    let truth: IndexSet = (0..40).collect();
    println!("SCP from point 0: {} points, misclassification {}", res.cluster.len(), misclassification(&res.cluster, &truth)?);
    Ok(())
}
