use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use clusterpursuit::baselines::spectral_clustering;
use clusterpursuit::bench::{self, ExperimentSpec};
use clusterpursuit::diagnostics as diag;
use clusterpursuit::io as cpio;
use clusterpursuit::operator::ColumnSubset;
use clusterpursuit::pipeline::{degree_threshold, gaussian_affinity, knn_sparsify, misclassification, partition_accuracy};
use clusterpursuit::pursuit::{cocluster, iscp, scp, scp_sweep, CoclusterConfig, IscpConfig, ScpConfig, DEFAULT_OMEGA_FACTOR};
use clusterpursuit::random_graphs::{gen_sbm, SbmParams};
use clusterpursuit::{IndexSet, LaplacianView, Result};

#[derive(Parser)]
#[command(name = "clusterpursuit", version, about = "Cluster pursuit on graphs and matrices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Inclusive `a:b` or `a:b:step`.
#[derive(Clone)]
struct SizeRange(Vec<usize>);

fn parse_range(s: &str) -> std::result::Result<SizeRange, String> {
    let parts = s
        .split(':')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t}: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let (lo, hi, step) = match parts[..] {
        [a, b] => (a, b, 1),
        [a, b, c] if c > 0 => (a, b, c),
        _ => return Err(format!("expected a:b or a:b:step, got {s}")),
    };
    Ok(SizeRange((lo..=hi).step_by(step).collect()))
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a stochastic block model graph.
    GenSbm {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        permute: bool,
    },
    /// Find the cluster of one vertex.
    Scp {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed_vertex: usize,
        #[arg(long, required_unless_present = "n0_range")]
        n0: Option<usize>,
        /// Sweep `n0_hat` over `a:b[:step]` and print one line per value.
        #[arg(long, value_parser = parse_range, conflicts_with = "n0")]
        n0_range: Option<SizeRange>,
        #[arg(long, default_value_t = DEFAULT_OMEGA_FACTOR)]
        omega_factor: f64,
        /// In sweep mode, one file per value with `_<n0>` before the extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition a graph by repeated SCP.
    Iscp {
        #[arg(long)]
        graph: PathBuf,
        /// Cluster sizes, one per round, or a single size with --k.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_OMEGA_FACTOR)]
        omega_factor: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Co-cluster the rows and columns of a nonnegative matrix.
    Cocluster {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        n0x: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out_rows: PathBuf,
        #[arg(long)]
        out_cols: PathBuf,
    },
    /// Print a key=value diagnostic report.
    Diag {
        #[arg(value_enum)]
        what: DiagKind,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        s: Option<usize>,
        /// Sample this many subsets instead of enumerating.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Vertex pair for `chi`.
        #[arg(long, value_delimiter = ',')]
        pair: Option<Vec<usize>>,
        /// Support for `erc`.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        /// For `erc`: drop this column, as in the operator OMP sees.
        #[arg(long)]
        seed_vertex: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long = "P")]
        p_scaled: Option<f64>,
        #[arg(long = "Q")]
        q_scaled: Option<f64>,
    },
    /// Spectral clustering baseline.
    Sc {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Gaussian-affinity k-nearest-neighbour graph from a point cloud.
    KnnGraph {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Drop low-degree vertices.
    Threshold {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        dmin: usize,
        #[arg(long)]
        out: PathBuf,
        /// CSV `new,original` for the kept vertices.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        iterate: bool,
    },
    /// Score a cluster or partition against ground truth.
    Score {
        #[arg(long)]
        found: PathBuf,
        #[arg(long)]
        truth: PathBuf,
    },
    /// Run a benchmark described by a TOML spec.
    Bench {
        #[arg(value_enum)]
        what: BenchKind,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write every per-trial record here.
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long)]
        single_threaded: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagKind {
    Ric,
    Coherence,
    Chi,
    Regime,
    Erc,
    Perturbation,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchKind {
    NoiseSweep,
    Scaling,
    Recovery,
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| clusterpursuit::Error::InvalidParameter(format!("--{flag} is required here")))
}

fn with_suffix(path: &std::path::Path, n0: usize) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{n0}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{n0}"),
    };
    path.with_file_name(name)
}

fn is_partition_file(path: &std::path::Path) -> Result<bool> {
    let text = std::fs::read_to_string(path)?;
    Ok(text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).is_some_and(|l| l.contains(',')))
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.cmd {
        Cmd::GenSbm { n, k, p, q, sizes, seed, out: path, labels, permute } => {
            let params = match sizes {
                Some(s) => SbmParams::with_sizes(s, p, q),
                None => SbmParams::equal(need(n, "n")?, need(k, "k")?, p, q),
            };
            let mut sample = gen_sbm(&params, seed)?;
            if permute {
                sample = sample.permuted(clusterpursuit::rng::derive_seed(seed, &[1]));
            }
            cpio::write_edge_list_file(&sample.graph, &path)?;
            if let Some(l) = labels {
                cpio::write_partition_file(&sample.partition, l)?;
            }
            writeln!(out, "n={}\nedges={}\nisolated={}", sample.graph.n(), sample.graph.edge_count(), sample.isolated.len())?;
            if let Some(perm) = &sample.permutation {
                writeln!(out, "seed_vertex_0_moved_to={}", perm[0])?;
            }
        }
        Cmd::Scp { graph, seed_vertex, n0, n0_range, omega_factor, out: path } => {
            let g = cpio::read_edge_list(&graph)?;
            let lap = LaplacianView::new(&g)?;
            if let Some(SizeRange(range)) = n0_range {
                writeln!(out, "n0_hat,cluster_size,omega_size,residual,seconds")?;
                for (n0, r) in scp_sweep(&lap, seed_vertex, &range, omega_factor)? {
                    writeln!(out, "{n0},{},{},{:e},{}", r.cluster.len(), r.omega.len(), r.sp_result.residual_norm, r.timings.total.as_secs_f64())?;
                    if let Some(p) = &path {
                        cpio::write_cluster_file(&r.cluster, with_suffix(p, n0))?;
                    }
                }
            } else {
                let cfg = ScpConfig::new(seed_vertex, need(n0, "n0")?).with_omega_factor(omega_factor);
                let r = scp(&lap, &cfg)?;
                writeln!(out, "cluster_size={}\nomega_size={}\nlambda_size={}\nresidual={:e}\nsp_stop={:?}\nempty_budget={}\nomega_clamped={}\nseconds={}",
                    r.cluster.len(), r.omega.len(), r.lambda_sharp.len(), r.sp_result.residual_norm, r.sp_result.stop, r.empty_budget, r.omega_clamped, r.timings.total.as_secs_f64())?;
                match path {
                    Some(p) => cpio::write_cluster_file(&r.cluster, p)?,
                    None => cpio::write_cluster(&r.cluster, &mut out)?,
                }
            }
        }
        Cmd::Iscp { graph, sizes, k, omega_factor, out: path } => {
            let g = cpio::read_edge_list(&graph)?;
            let mut cfg = match (k, sizes.len()) {
                (Some(k), 1) => IscpConfig::uniform(k, sizes[0]),
                (Some(k), _) => IscpConfig { k, ..IscpConfig::with_sizes(sizes) },
                (None, _) => IscpConfig::with_sizes(sizes),
            };
            cfg.omega_factor = omega_factor;
            let r = iscp(&g, &cfg)?;
            cpio::write_partition_file(&r.partition, path)?;
            writeln!(out, "k={}\nsizes={:?}\nrejected={}", r.partition.k(), r.partition.sizes(), r.rejected.len())?;
        }
        Cmd::Cocluster { matrix, n0x, k, out_rows, out_cols } => {
            let b = cpio::read_matrix(&matrix)?;
            let r = cocluster(&b, &CoclusterConfig::new(n0x, k))?;
            cpio::write_partition_file(&r.rows, out_rows)?;
            cpio::write_partition_file(&r.cols, out_cols)?;
            writeln!(out, "row_sizes={:?}\ncol_sizes={:?}\nrejected_rows={}\nrejected_cols={}", r.rows.sizes(), r.cols.sizes(), r.rejected_rows.len(), r.rejected_cols.len())?;
        }
        Cmd::Diag { what, graph, labels, s, trials, seed, pair, set, seed_vertex, k, p_scaled, q_scaled } => {
            if let DiagKind::Regime = what {
                let r = diag::recovery_regime(need(k, "k")?, need(p_scaled, "P")?, need(q_scaled, "Q")?)?;
                writeln!(out, "value={}\nhint={:?}", r.value, r.hint)?;
                return Ok(());
            }
            let g = cpio::read_edge_list(need(graph, "graph")?)?;
            let lap = LaplacianView::new(&g)?;
            match what {
                DiagKind::Ric => {
                    let s = need(s, "s")?;
                    let r = match trials {
                        Some(t) => diag::ric_sampled(&lap, s, t, seed)?,
                        None => diag::ric_bruteforce(&lap, s)?,
                    };
                    let method = match r.method {
                        diag::RicMethod::Exhaustive => "exhaustive".to_string(),
                        diag::RicMethod::Sampled { trials } => format!("sampled_lower_bound({trials})"),
                    };
                    writeln!(out, "s={}\ndelta_s={}\nmethod={method}\nworst_set={:?}\nmin_sigma_sq={}\nmax_sigma_sq={}", r.s, r.delta_s, r.worst_set.as_slice(), r.min_sigma_sq, r.max_sigma_sq)?;
                }
                DiagKind::Coherence => {
                    let c = diag::coherence(&lap)?;
                    writeln!(out, "normalized={}\nunnormalized={}", c.normalized, c.unnormalized)?;
                }
                DiagKind::Chi => {
                    let pr = need(pair, "pair")?;
                    if pr.len() != 2 {
                        return Err(clusterpursuit::Error::InvalidParameter("--pair takes i,j".into()));
                    }
                    writeln!(out, "i={}\nj={}\nchi={}", pr[0], pr[1], diag::chi_statistic(&g, pr[0], pr[1])?)?;
                }
                DiagKind::Erc => {
                    let set = IndexSet::from_unsorted(need(set, "set")?);
                    let r = match seed_vertex {
                        Some(v) => {
                            let cols = IndexSet::all_except(g.n(), v);
                            let local: Vec<usize> = set
                                .iter()
                                .map(|x| cols.as_slice().binary_search(&x).map_err(|_| clusterpursuit::Error::InvalidParameter(format!("{x} is the dropped column"))))
                                .collect::<Result<_>>()?;
                            diag::erc_check(&ColumnSubset::new(&lap, cols.into_vec()), &IndexSet::from_unsorted(local))?
                        }
                        None => diag::erc_check(&lap, &set)?,
                    };
                    writeln!(out, "value={}\nholds={}", r.value, r.holds)?;
                }
                DiagKind::Perturbation => {
                    let part = cpio::read_partition(need(labels, "labels")?)?;
                    let r = diag::perturbation_split(&g, &part)?;
                    writeln!(out, "e1_inf={}\ne2_inf={}\nmax_r={}\nmax_r_ratio={}", r.e1_inf, r.e2_inf, r.max_r, r.max_r_ratio)?;
                }
                DiagKind::Regime => unreachable!(),
            }
        }
        Cmd::Sc { graph, k, seed, out: path } => {
            let g = cpio::read_edge_list(&graph)?;
            let r = spectral_clustering(&g, k, seed)?;
            cpio::write_partition_file(&r.partition, path)?;
            writeln!(out, "sizes={:?}\neigenvalues={:?}\nzero_rows={}", r.partition.sizes(), r.eigenvalues, r.zero_rows.len())?;
        }
        Cmd::KnnGraph { points, sigma, k, out: path } => {
            let pts = cpio::read_points(&points)?;
            let g = knn_sparsify(&gaussian_affinity(&pts, sigma)?, k)?;
            cpio::write_edge_list_file(&g, path)?;
            writeln!(out, "n={}\nedges={}", g.n(), g.edge_count())?;
        }
        Cmd::Threshold { graph, dmin, out: path, map, iterate } => {
            let g = cpio::read_edge_list(&graph)?;
            let r = degree_threshold(&g, dmin, iterate)?;
            cpio::write_edge_list_file(&r.graph, path)?;
            if let Some(m) = map {
                let mut w = csv::Writer::from_path(m).map_err(clusterpursuit::Error::from)?;
                w.write_record(["new", "original"]).map_err(clusterpursuit::Error::from)?;
                for (new, old) in r.kept.iter().enumerate() {
                    w.serialize((new, old)).map_err(clusterpursuit::Error::from)?;
                }
                w.flush()?;
            }
            writeln!(out, "kept={}\ndropped={}\npasses={}\nsecond_pass_would_drop={}", r.kept.len(), g.n() - r.kept.len(), r.passes, r.second_pass_would_drop)?;
        }
        Cmd::Score { found, truth } => {
            if is_partition_file(&found)? {
                let acc = partition_accuracy(&cpio::read_partition(&truth)?, &cpio::read_partition(&found)?)?;
                writeln!(out, "accuracy={}\nconfusion={:?}", acc.accuracy, acc.confusion)?;
            } else {
                let f = cpio::read_cluster(&found)?;
                let t = if is_partition_file(&truth)? {
                    let part = cpio::read_partition(&truth)?;
                    part.clusters()
                        .into_iter()
                        .max_by_key(|c| (c.intersection(&f).len(), std::cmp::Reverse(c.as_slice().first().copied())))
                        .expect("nonempty partition")
                } else {
                    cpio::read_cluster(&truth)?
                };
                writeln!(out, "found={}\ntruth={}\nmisclassification={}", f.len(), t.len(), misclassification(&f, &t)?)?;
            }
        }
        Cmd::Bench { what, config, out: path, records, single_threaded } => {
            let mut spec = ExperimentSpec::from_path(&config)?;
            spec.single_threaded |= single_threaded;
            let file = std::fs::File::create(&path)?;
            let recs = match what {
                BenchKind::NoiseSweep => {
                    let r = bench::run_noise_sweep(&spec)?;
                    r.write_csv(file)?;
                    r.records
                }
                BenchKind::Scaling => {
                    let r = bench::run_scaling(&spec)?;
                    r.write_csv(file)?;
                    for s in &r.slopes {
                        writeln!(out, "slope_{:?}={}", s.algorithm, s.slope)?;
                    }
                    r.records
                }
                BenchKind::Recovery => {
                    let r = bench::run_recovery(&spec)?;
                    bench::write_csv(&r, file)?;
                    r
                }
            };
            let exact = recs.iter().filter(|r| r.exact()).count();
            let failed = recs.iter().filter(|r| !r.success).count();
            writeln!(out, "records={}\nexact={exact}\nfailed={failed}", recs.len())?;
            if let Some(p) = records {
                bench::write_csv(&recs, std::fs::File::create(p)?)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
