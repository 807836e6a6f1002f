mod common;

use clusterpursuit::baselines::{kmeans, spectral_clustering, KMeansConfig};
use clusterpursuit::pipeline::{degree_threshold, gaussian_affinity, knn_sparsify, misclassification, partition_accuracy, PointCloud};
use clusterpursuit::pursuit::{scp, ScpConfig};
use clusterpursuit::random_graphs::{gen_sbm, SbmParams};
use clusterpursuit::{IndexSet, LaplacianView, Partition};
use common::*;
use proptest::prelude::*;
use rand::Rng;

/// Box–Muller standard normal.
fn normal(rng: &mut impl Rng) -> f64 {
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

fn blob(rng: &mut impl Rng, centre: &[f64], sigma: f64, count: usize) -> Vec<Vec<f64>> {
    (0..count).map(|_| centre.iter().map(|c| c + sigma * normal(rng)).collect()).collect()
}

fn cloud() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..30, 1usize..4).prop_flat_map(|(n, d)| prop::collection::vec(prop::collection::vec(-5.0f64..5.0, d), n))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn affinity_is_symmetric_and_translation_invariant(pts in cloud(), shift in prop::collection::vec(-100.0f64..100.0, 3), sigma in 1.0f64..10.0) {
        let moved: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().zip(&shift).map(|(a, b)| a + b).collect()).collect();
        let a = gaussian_affinity(&PointCloud::new(pts.clone()).unwrap(), sigma).unwrap();
        let b = gaussian_affinity(&PointCloud::new(moved).unwrap(), sigma).unwrap();
        let n = pts.len();
        for i in 0..n {
            prop_assert_eq!(a.get(i, i), 0.0);
            for j in 0..n {
                prop_assert_eq!(a.get(i, j), a.get(j, i));
                prop_assert!((a.get(i, j) - b.get(i, j)).abs() <= 1e-12);
                if i != j {
                    prop_assert!(a.get(i, j) > 0.0 && a.get(i, j) <= 1.0);
                }
            }
        }
    }

    #[test]
    fn knn_graph_is_symmetric_with_min_degree_k(pts in cloud(), k in 1usize..10) {
        let n = pts.len();
        let k = k.min(n - 1);
        let a = gaussian_affinity(&PointCloud::new(pts).unwrap(), 20.0).unwrap();
        let g = knn_sparsify(&a, k).unwrap();
        for v in 0..n {
            prop_assert!(g.neighbor_count(v) >= k.min(n - 1));
            for (u, w) in g.neighbors(v) {
                prop_assert_eq!(g.weight(u, v), w);
                prop_assert_eq!(w, a.get(u.min(v), u.max(v)));
            }
        }
        let full = knn_sparsify(&a, n - 1).unwrap();
        prop_assert_eq!(full.edge_count(), n * (n - 1) / 2);
    }

    #[test]
    fn kmeans_wcss_never_increases(pts in cloud(), k in 1usize..5, seed: u64) {
        prop_assume!(pts.len() >= k);
        let res = kmeans(&pts, &KMeansConfig::new(k, seed)).unwrap();
        prop_assert!(res.wcss_history.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-12));
        prop_assert!((res.wcss - res.wcss_history.last().unwrap()).abs() <= 1e-9 * (1.0 + res.wcss));
        let direct: f64 = pts.iter().zip(&res.labels).map(|(p, &l)| p.iter().zip(&res.centroids[l]).map(|(a, b)| (a - b).powi(2)).sum::<f64>()).sum();
        prop_assert!((direct - res.wcss).abs() <= 1e-9 * (1.0 + direct));
    }

    #[test]
    fn accuracy_ignores_label_names(labels in prop::collection::vec(0usize..5, 2..60), seed: u64) {
        let a = Partition::from_labels(&labels);
        let perm = clusterpursuit::random_graphs::random_permutation(a.k(), seed);
        let b = Partition::new(a.assignment().iter().map(|&c| perm[c]).collect(), a.k()).unwrap();
        let acc = partition_accuracy(&a, &b).unwrap();
        prop_assert_eq!(acc.accuracy, 1.0);
        for (c, m) in acc.matching.iter().enumerate() {
            prop_assert_eq!(*m, Some(perm[c]));
        }
    }

    #[test]
    fn misclassification_is_a_fraction(found in prop::collection::vec(0usize..50, 1..30), truth in prop::collection::vec(0usize..50, 0..30)) {
        let f = IndexSet::from_unsorted(found);
        let t = IndexSet::from_unsorted(truth);
        let m = misclassification(&f, &t).unwrap();
        prop_assert!((0.0..=1.0).contains(&m));
        prop_assert_eq!(m == 0.0, f.is_subset(&t));
    }

    #[test]
    fn threshold_reports_whether_another_pass_helps(n in 3usize..40, p in 0.05f64..0.5, d in 0usize..6, seed: u64) {
        let g = random_graph(n, p, true, seed);
        if let Ok(r) = degree_threshold(&g, d, false) {
            for (i, &old) in r.kept.as_slice().iter().enumerate() {
                prop_assert!(g.neighbor_count(old) >= d);
                prop_assert!(r.graph.neighbor_count(i) <= g.neighbor_count(old));
            }
            if !r.second_pass_would_drop {
                let again = degree_threshold(&r.graph, d, false).unwrap();
                prop_assert_eq!(again.graph, r.graph.clone());
            }
            if let Ok(fix) = degree_threshold(&g, d, true) {
                prop_assert!(!fix.second_pass_would_drop);
                prop_assert!(fix.kept.is_subset(&r.kept));
            }
        }
    }
}

#[test]
fn kmeans_splits_two_blobs_every_time() {
    let mut rng = clusterpursuit::rng::stream(77);
    let mut pts = blob(&mut rng, &[0.0, 0.0], 1.0, 20);
    pts.extend(blob(&mut rng, &[10.0, 0.0], 1.0, 20));
    let truth = Partition::contiguous(&[20, 20]).unwrap();
    for seed in 0..100 {
        let res = kmeans(&pts, &KMeansConfig::new(2, seed)).unwrap();
        let acc = partition_accuracy(&truth, &Partition::from_labels(&res.labels)).unwrap();
        assert_eq!(acc.accuracy, 1.0, "seed {seed}");
    }
}

#[test]
fn knn_graph_of_two_blobs_gives_scp_one_blob() {
    let mut rng = clusterpursuit::rng::stream(5);
    let mut pts = blob(&mut rng, &[0.0, 0.0, 0.0], 1.0, 30);
    pts.extend(blob(&mut rng, &[12.0, 0.0, 0.0], 1.0, 30));
    let a = gaussian_affinity(&PointCloud::new(pts).unwrap(), 3.0).unwrap();
    let g = knn_sparsify(&a, 15).unwrap();
    for v in [0, 45] {
        let comp: IndexSet = if v < 30 { (0..30).collect() } else { (30..60).collect() };
        assert!(within_two_hops(&g, v, &comp));
    }
    let lap = LaplacianView::new(&g).unwrap();
    for seed in [0, 45] {
        let res = scp(&lap, &ScpConfig::new(seed, 30)).unwrap();
        let want: IndexSet = if seed < 30 { (0..30).collect() } else { (30..60).collect() };
        assert_eq!(res.cluster, want);
    }
}

#[test]
fn spectral_clustering_is_exact_and_deterministic() {
    let s = gen_sbm(&SbmParams::log_scaled(1000, 5, 2.0, 2.0), 21).unwrap();
    let a = spectral_clustering(&s.graph, 5, 3).unwrap();
    let b = spectral_clustering(&s.graph, 5, 3).unwrap();
    assert_eq!(a.partition, b.partition);
    assert_eq!(partition_accuracy(&s.partition, &a.partition).unwrap().accuracy, 1.0);
    assert!(a.zero_rows.is_empty());
}
