mod common;

use clusterpursuit::diagnostics::{dense_laplacian, laplacian_spectrum};
use clusterpursuit::graph::induced_subgraph;
use clusterpursuit::io::{parse_edge_list, write_edge_list};
use clusterpursuit::operator::{apply_submatrix, apply_submatrix_transpose, ColumnOperator};
use clusterpursuit::random_graphs::{gen_sbm, SbmParams};
use clusterpursuit::{IndexSet, LaplacianView};
use common::*;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn columns_sum_to_zero_and_components_span_kernel(n in 3usize..32, p in 0.1f64..0.9, seed: u64) {
        let g = random_graph(n, p, false, seed);
        prop_assume!(g.isolated_vertices().is_empty());
        let lap = LaplacianView::new(&g).unwrap();
        let all: Vec<usize> = (0..n).collect();
        let mut sum = vec![0.0; n];
        lap.apply_columns(&all, &vec![1.0; n], &mut sum);
        prop_assert!(norm(&sum) < 1e-12);

        let (labels, count) = g.component_labels();
        for c in 0..count {
            let ind: Vec<f64> = labels.iter().map(|&l| if l == c { 1.0 } else { 0.0 }).collect();
            prop_assert!(norm(&lap.apply(&ind)) < 1e-12);
        }
    }

    #[test]
    fn spectrum_lies_in_zero_two(n in 3usize..24, p in 0.1f64..0.9, seed: u64) {
        let g = random_graph(n, p, false, seed);
        prop_assume!(g.isolated_vertices().is_empty());
        let ev = laplacian_spectrum(&g).unwrap();
        let (_, comps) = g.component_labels();
        prop_assert!(ev[0].abs() < 1e-10);
        prop_assert!(ev.iter().all(|&l| (-1e-10..=2.0 + 1e-10).contains(&l)));
        prop_assert_eq!(ev.iter().filter(|l| l.abs() < 1e-9).count(), comps);
    }

    #[test]
    fn submatrix_products_match_dense(n in 2usize..32, p in 0.1f64..0.9, seed: u64, pick in prop::collection::vec(any::<bool>(), 32)) {
        let g = random_graph(n, p, false, seed);
        prop_assume!(g.isolated_vertices().is_empty());
        let lap = LaplacianView::new(&g).unwrap();
        let dense = dense_laplacian(&g).unwrap();
        let cols: Vec<usize> = (0..n).filter(|&j| pick[j]).collect();
        let x: Vec<f64> = cols.iter().map(|&j| (j as f64 * 0.37).sin()).collect();
        let r: Vec<f64> = (0..n).map(|i| (i as f64 * 1.3).cos()).collect();

        let got = apply_submatrix(&lap, &cols, &x).unwrap();
        for i in 0..n {
            let want: f64 = cols.iter().zip(&x).map(|(&j, xj)| dense.get(i, j) * xj).sum();
            prop_assert!((got[i] - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
        let got = apply_submatrix_transpose(&lap, &cols, &r).unwrap();
        for (k, &j) in cols.iter().enumerate() {
            let want: f64 = (0..n).map(|i| dense.get(i, j) * r[i]).sum();
            prop_assert!((got[k] - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn sparse_column_matches_dense(n in 2usize..20, seed: u64) {
        let g = connected_graph(n, 0.3, false, seed);
        let lap = LaplacianView::new(&g).unwrap();
        let dense = lap.dense();
        for j in 0..n {
            let col = lap.laplacian_column(j).to_dense();
            for i in 0..n {
                prop_assert_eq!(col[i], dense[i * n + j]);
            }
        }
    }

    #[test]
    fn edge_list_round_trips(n in 1usize..40, p in 0.0f64..0.6, seed: u64, unit: bool) {
        let g = random_graph(n, p, unit, seed);
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = parse_edge_list(&buf[..]).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn generator_is_deterministic(n in 4usize..120, k in 1usize..4, p in 0.0f64..1.0, qf in 0.0f64..1.0, seed: u64) {
        let n = n - n % k;
        prop_assume!(n > 0);
        let params = SbmParams::equal(n, k, p, p * qf);
        let a = gen_sbm(&params, seed).unwrap();
        let b = gen_sbm(&params, seed).unwrap();
        prop_assert_eq!(&a.graph, &b.graph);
        prop_assert_eq!(&a.partition, &b.partition);
        let pa = a.permuted(seed ^ 1);
        let pb = b.permuted(seed ^ 1);
        prop_assert_eq!(pa.graph, pb.graph);
        prop_assert_eq!(pa.permutation, pb.permutation);
    }

    #[test]
    fn intra_block_edges_only_when_q_is_zero(seed: u64) {
        let s = gen_sbm(&SbmParams::equal(60, 3, 0.5, 0.0), seed).unwrap();
        for (u, v, _) in s.graph.edges() {
            prop_assert_eq!(s.partition.cluster_of(u), s.partition.cluster_of(v));
        }
    }

    #[test]
    fn induced_subgraph_keeps_internal_edges(n in 2usize..30, p in 0.1f64..0.8, seed: u64, pick in prop::collection::vec(any::<bool>(), 30)) {
        let g = random_graph(n, p, false, seed);
        let keep: IndexSet = (0..n).filter(|&v| pick[v]).collect();
        prop_assume!(!keep.is_empty());
        let sub = induced_subgraph(&g, &keep).unwrap();
        let count = g.edges().filter(|&(u, v, _)| keep.contains(u) && keep.contains(v)).count();
        prop_assert_eq!(sub.graph.edge_count(), count);
        for (a, b, w) in sub.graph.edges() {
            prop_assert_eq!(g.weight(keep[a], keep[b]), w);
        }
    }
}

#[test]
fn edge_count_moments_agree_between_samplers() {
    // p above and below the geometric-skip threshold, scaled so the
    // expected edge counts are comparable
    for &(n, p) in &[(400usize, 0.02f64), (400, 0.008)] {
        let trials = 200;
        let pairs = (n * (n - 1) / 2) as f64;
        let counts: Vec<f64> = (0..trials)
            .map(|s| gen_sbm(&SbmParams::equal(n, 1, p, 0.0), s).unwrap().graph.edge_count() as f64)
            .collect();
        let mean = counts.iter().sum::<f64>() / trials as f64;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        let (m, v) = (pairs * p, pairs * p * (1.0 - p));
        assert!((mean - m).abs() < 4.0 * (v / trials as f64).sqrt(), "p = {p}: mean {mean} vs {m}");
        assert!((var / v - 1.0).abs() < 0.3, "p = {p}: variance {var} vs {v}");
    }
}

#[test]
fn degree_concentration_smoke() {
    use clusterpursuit::random_graphs::degree_split;
    let n = 2000;
    let alpha = 2.0 / (n as f64).ln().sqrt();
    let (n0, p) = (500.0, 0.3);
    let good = (0..50)
        .filter(|&s| {
            let smp = gen_sbm(&SbmParams::equal(n, 4, p, 0.0), s).unwrap();
            degree_split(&smp.graph, &smp.partition)
                .unwrap()
                .iter()
                .all(|d| ((1.0 - alpha) * n0 * p..=(1.0 + alpha) * n0 * p).contains(&d.inner))
        })
        .count();
    assert!(good as f64 / 50.0 > 0.9, "{good}/50");
}
