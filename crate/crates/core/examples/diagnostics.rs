//! Restricted isometry constants, coherence and related checks on small graphs.

use clusterpursuit::diagnostics::*;
use clusterpursuit::operator::ColumnSubset;
use clusterpursuit::random_graphs::{gen_er, gen_sbm, SbmParams};
use clusterpursuit::{IndexSet, LaplacianView};

fn main() -> clusterpursuit::Result<()> {
    let er = gen_er(12, 0.6, 1)?;
    let lap = LaplacianView::new(&er.graph)?;
    let spectrum = laplacian_spectrum(&er.graph)?;
    for s in 1..=4 {
        let r = ric_bruteforce(&lap, s)?;
        println!(
            "s = {s}: δ_s = {:.4} on {:?}, connected-graph formula {:.4}",
            r.delta_s,
            r.worst_set.as_slice(),
            connected_ric_bound(&spectrum, s)
        );
    }
    let sampled = ric_sampled(&lap, 4, 100, 2)?;
    println!("sampled δ_4 >= {:.4}", sampled.delta_s);

    let c = coherence(&lap)?;
    println!("coherence: normalized {:.4}, unnormalized {:.4}", c.normalized, c.unnormalized);
    println!("χ(0, 1) = {}", chi_statistic(&er.graph, 0, 1)?);

    for (k, p, q) in [(1, 4.0, 1.0), (2, 16.0, 0.0), (5, 1.0, 0.0)] {
        let r = recovery_regime(k, p, q)?;
        println!("k = {k}, P = {p}, Q = {q}: {:.2} ({:?})", r.value, r.hint);
    }

    let two = gen_sbm(&SbmParams::equal(16, 2, 0.9, 0.0), 3)?;
    let lap = LaplacianView::new(&two.graph)?;
    let cols = IndexSet::all_except(16, 0);
    let phi = ColumnSubset::new(&lap, cols.as_slice().to_vec());
    let support: IndexSet = (0..7).collect();
    let erc = erc_check(&phi, &support)?;
    println!("ERC on the seed's component: {:.2e}, holds {}", erc.value, erc.holds);

    let noisy = gen_sbm(&SbmParams::equal(200, 2, 0.5, 0.05), 4)?;
    let pert = perturbation_split(&noisy.graph, &noisy.partition)?;
    println!("‖E¹‖∞ = {:.4}, ‖E²‖∞ = {:.4}, max r = {:.4}", pert.e1_inf, pert.e2_inf, pert.max_r);
    let lap = LaplacianView::new(&noisy.graph)?;
    let stats = intra_inner_product_floor(&lap, &noisy.partition, 2000, 5)?;
    println!("intra products: min {:.5}, mean {:.5}, floor {:.5}", stats.min, stats.mean, stats.floor);
    Ok(())
}
