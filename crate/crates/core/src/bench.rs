//! Seeded, replayable experiment runner.
//!
//! An [`ExperimentSpec`] is a flat TOML document. Trial `t` of grid point `g`
//! draws its graph from `derive_seed(master_seed, [g, t])`, so any record can
//! be regenerated from the spec and its `(grid_index, trial)` pair. Trials run
//! on the rayon pool unless `single_threaded` is set; records always come
//! back in (grid, trial, algorithm) order. Only the algorithm call is timed.
//!
//! ```toml
//! kind = "noise-sweep"
//! n = 2400
//! k = 6
//! p = 0.5
//! q_grid = [0, 10, 20, 40, 80]
//! trials = 10
//! master_seed = 7
//! ```

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{spectral_clustering, SC_MAX_N};
use crate::error::{Error, Result};
use crate::graph::LaplacianView;
use crate::partition::Partition;
use crate::pipeline::{misclassification, partition_accuracy};
use crate::pursuit::{cocluster, iscp, scp, CoclusterConfig, IscpConfig, ScpConfig, DEFAULT_OMEGA_FACTOR};
use crate::random_graphs::{gen_block_matrix, gen_sbm, BlockMatrixParams, SbmParams, SbmSample};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    SingleCluster,
    FullPartition,
    NoiseSweep,
    Scaling,
    Cocluster,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Scp,
    Iscp,
    Sc,
    Cocluster,
}

/// How `k` and the block size follow `n` in a scaling experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingRegime {
    /// Blocks of `n0` vertices, `k = n / n0`.
    FixedN0,
    /// `k` blocks of `n / k`.
    FixedK,
    /// `k = round(√n)` near-equal blocks.
    Sqrt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub n: Option<usize>,
    /// Columns of the co-clustering matrix.
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub n0: Option<usize>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    /// `p = p_scale · ln n / √n`; overrides `p`.
    pub p_scale: Option<f64>,
    /// `q = q_scale · ln n / n`; overrides `q`.
    pub q_scale: Option<f64>,
    /// Noise-sweep values of `Q = q · (n − n0)`.
    #[serde(default)]
    pub q_grid: Vec<f64>,
    #[serde(default)]
    pub n_grid: Vec<usize>,
    pub regime: Option<ScalingRegime>,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub algorithms: Vec<Algorithm>,
    pub omega_factor: Option<f64>,
    #[serde(default)]
    pub permute: bool,
    #[serde(default)]
    pub single_threaded: bool,
    /// Largest `n` for the spectral baseline; defaults to [`SC_MAX_N`].
    pub sc_max_n: Option<usize>,
}

fn missing(field: &str, kind: ExperimentKind) -> Error {
    Error::InvalidParameter(format!("`{field}` is required for {kind:?} experiments"))
}

impl ExperimentSpec {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let spec: ExperimentSpec = toml::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("spec fields are all serializable")
    }

    pub fn validate(&self) -> Result<()> {
        let kind = self.kind;
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if let Some(f) = self.omega_factor {
            if !(f > 1.0) {
                return Err(Error::InvalidParameter(format!("omega_factor = {f} must exceed 1")));
            }
        }
        let need = |v: bool, field: &str| if v { Ok(()) } else { Err(missing(field, kind)) };
        match kind {
            ExperimentKind::NoiseSweep => {
                need(self.n.is_some(), "n")?;
                need(self.k.is_some(), "k")?;
                need(self.p.is_some() || self.p_scale.is_some(), "p")?;
                need(!self.q_grid.is_empty(), "q_grid")?;
                if self.q_grid.iter().any(|q| !(*q >= 0.0)) {
                    return Err(Error::InvalidParameter("q_grid values must be >= 0".into()));
                }
            }
            ExperimentKind::Scaling => {
                need(!self.n_grid.is_empty(), "n_grid")?;
                match self.regime {
                    Some(ScalingRegime::FixedN0) => need(self.n0.is_some(), "n0")?,
                    Some(ScalingRegime::FixedK) => need(self.k.is_some(), "k")?,
                    Some(ScalingRegime::Sqrt) => {}
                    None => return Err(missing("regime", kind)),
                }
                need(self.p.is_some() || self.p_scale.is_some(), "p")?;
            }
            ExperimentKind::SingleCluster | ExperimentKind::FullPartition => {
                need(self.n.is_some(), "n")?;
                need(self.k.is_some(), "k")?;
                need(self.p.is_some() || self.p_scale.is_some(), "p")?;
            }
            ExperimentKind::Cocluster => {
                need(self.n.is_some(), "n")?;
                need(self.m.is_some(), "m")?;
                need(self.k.is_some(), "k")?;
                need(self.p.is_some(), "p")?;
            }
        }
        Ok(())
    }

    fn algorithms(&self) -> Vec<Algorithm> {
        if !self.algorithms.is_empty() {
            return self.algorithms.clone();
        }
        match self.kind {
            ExperimentKind::SingleCluster | ExperimentKind::NoiseSweep => vec![Algorithm::Scp],
            ExperimentKind::FullPartition => vec![Algorithm::Iscp],
            ExperimentKind::Scaling => vec![Algorithm::Scp, Algorithm::Sc],
            ExperimentKind::Cocluster => vec![Algorithm::Cocluster],
        }
    }

    fn edge_probs(&self, n: usize) -> (f64, f64) {
        let ln = (n as f64).ln();
        let p = match self.p_scale {
            Some(s) => s * ln / (n as f64).sqrt(),
            None => self.p.unwrap_or(0.0),
        };
        let q = match self.q_scale {
            Some(s) => s * ln / n as f64,
            None => self.q.unwrap_or(0.0),
        };
        (p, q)
    }

    fn omega_factor(&self) -> f64 {
        self.omega_factor.unwrap_or(DEFAULT_OMEGA_FACTOR)
    }
}

/// One algorithm run on one trial graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub grid_index: usize,
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    /// Size of the seed vertex's block (rows per block when co-clustering).
    pub n0: usize,
    pub p: f64,
    pub q: f64,
    /// Noise-sweep `Q`, when the experiment has one.
    pub noise: Option<f64>,
    pub algorithm: Algorithm,
    pub misclassification: Option<f64>,
    pub accuracy: Option<f64>,
    /// Column-block accuracy for co-clustering.
    pub col_accuracy: Option<f64>,
    pub seconds: f64,
    /// The algorithm returned a result.
    pub success: bool,
    pub note: String,
}

impl ExperimentRecord {
    /// Zero misclassification or perfect accuracy.
    pub fn exact(&self) -> bool {
        self.success
            && self.misclassification.is_none_or(|m| m == 0.0)
            && self.accuracy.is_none_or(|a| a == 1.0)
            && self.col_accuracy.is_none_or(|a| a == 1.0)
    }
}

/// A single trial to run: the graph it draws and what to run on it.
#[derive(Debug, Clone)]
struct Job {
    grid_index: usize,
    trial: usize,
    seed: u64,
    sizes: Vec<usize>,
    p: f64,
    q: f64,
    noise: Option<f64>,
}

fn near_equal_sizes(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|c| n / k + usize::from(c < n % k)).collect()
}

fn run_jobs<F>(spec: &ExperimentSpec, jobs: Vec<Job>, f: F) -> Vec<ExperimentRecord>
where
    F: Fn(&Job) -> Vec<ExperimentRecord> + Sync,
{
    let nested: Vec<Vec<ExperimentRecord>> = if spec.single_threaded {
        jobs.iter().map(&f).collect()
    } else {
        jobs.par_iter().map(&f).collect()
    };
    nested.into_iter().flatten().collect()
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> (Result<T>, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn sbm_trial(spec: &ExperimentSpec, job: &Job, algorithms: &[Algorithm]) -> Vec<ExperimentRecord> {
    let n: usize = job.sizes.iter().sum();
    let k = job.sizes.len();
    let base = ExperimentRecord {
        grid_index: job.grid_index,
        trial: job.trial,
        seed: job.seed,
        n,
        k,
        n0: job.sizes[0],
        p: job.p,
        q: job.q,
        noise: job.noise,
        algorithm: Algorithm::Scp,
        misclassification: None,
        accuracy: None,
        col_accuracy: None,
        seconds: 0.0,
        success: false,
        note: String::new(),
    };
    let sample = gen_sbm(&SbmParams::with_sizes(job.sizes.clone(), job.p, job.q), job.seed).map(|s| {
        if spec.permute {
            s.permuted(derive_seed(job.seed, &[2]))
        } else {
            s
        }
    });
    let sample: SbmSample = match sample {
        Ok(s) => s,
        Err(e) => {
            return algorithms
                .iter()
                .map(|&a| ExperimentRecord {
                    algorithm: a,
                    note: format!("generator: {e}"),
                    ..base.clone()
                })
                .collect()
        }
    };
    let g = &sample.graph;
    let truth = &sample.partition;
    let seed_block = truth.cluster(truth.cluster_of(0));
    let sc_max = spec.sc_max_n.unwrap_or(SC_MAX_N);

    algorithms
        .iter()
        .map(|&alg| {
            let mut rec = ExperimentRecord {
                algorithm: alg,
                n0: seed_block.len(),
                ..base.clone()
            };
            let outcome: Result<()> = match alg {
                Algorithm::Scp => {
                    let cfg = ScpConfig::new(0, seed_block.len()).with_omega_factor(spec.omega_factor());
                    let (res, secs) = timed(|| {
                        let lap = LaplacianView::new(g)?;
                        scp(&lap, &cfg)
                    });
                    rec.seconds = secs;
                    res.and_then(|r| {
                        rec.misclassification = Some(misclassification(&r.cluster, &seed_block)?);
                        Ok(())
                    })
                }
                Algorithm::Iscp => {
                    let mut cfg = IscpConfig::with_sizes(truth.sizes());
                    cfg.omega_factor = spec.omega_factor();
                    let (res, secs) = timed(|| iscp(g, &cfg));
                    rec.seconds = secs;
                    res.and_then(|r| score(&mut rec, truth, &r.partition))
                }
                Algorithm::Sc if n > sc_max => {
                    rec.note = format!("skipped: n = {n} exceeds the dense budget {sc_max}");
                    Ok(())
                }
                Algorithm::Sc => {
                    let (res, secs) = timed(|| spectral_clustering(g, k, derive_seed(job.seed, &[1])));
                    rec.seconds = secs;
                    res.and_then(|r| score(&mut rec, truth, &r.partition))
                }
                Algorithm::Cocluster => Err(Error::InvalidParameter("cocluster needs a matrix experiment".into())),
            };
            match outcome {
                Ok(()) => rec.success = rec.note.is_empty(),
                Err(e) => rec.note = e.to_string(),
            }
            rec
        })
        .collect()
}

fn score(rec: &mut ExperimentRecord, truth: &Partition, found: &Partition) -> Result<()> {
    rec.accuracy = Some(partition_accuracy(truth, found)?.accuracy);
    Ok(())
}

fn cocluster_trial(spec: &ExperimentSpec, job: &Job, rows: usize, cols: usize, k: usize) -> Vec<ExperimentRecord> {
    let mut rec = ExperimentRecord {
        grid_index: job.grid_index,
        trial: job.trial,
        seed: job.seed,
        n: rows,
        k,
        n0: rows / k,
        p: job.p,
        q: job.q,
        noise: None,
        algorithm: Algorithm::Cocluster,
        misclassification: None,
        accuracy: None,
        col_accuracy: None,
        seconds: 0.0,
        success: false,
        note: String::new(),
    };
    let params = BlockMatrixParams { rows, cols, k, p: job.p, q: job.q };
    let outcome = gen_block_matrix(&params, job.seed, spec.permute).and_then(|sample| {
        let mut cfg = CoclusterConfig::new(rows / k, k);
        cfg.omega_factor = spec.omega_factor();
        let (res, secs) = timed(|| cocluster(&sample.matrix, &cfg));
        rec.seconds = secs;
        let res = res?;
        rec.accuracy = Some(partition_accuracy(&sample.row_partition, &res.rows)?.accuracy);
        rec.col_accuracy = Some(partition_accuracy(&sample.col_partition, &res.cols)?.accuracy);
        Ok(())
    });
    match outcome {
        Ok(()) => rec.success = true,
        Err(e) => rec.note = e.to_string(),
    }
    vec![rec]
}

/// Per-trial records for single-cluster, full-partition and co-clustering
/// experiments.
pub fn run_recovery(spec: &ExperimentSpec) -> Result<Vec<ExperimentRecord>> {
    spec.validate()?;
    let n = spec.n.expect("validated");
    let k = spec.k.expect("validated");
    let (p, q) = spec.edge_probs(n);
    let jobs: Vec<Job> = (0..spec.trials)
        .map(|t| Job {
            grid_index: 0,
            trial: t,
            seed: derive_seed(spec.master_seed, &[0, t as u64]),
            sizes: near_equal_sizes(n, k),
            p,
            q,
            noise: None,
        })
        .collect();
    match spec.kind {
        ExperimentKind::SingleCluster | ExperimentKind::FullPartition => {
            let algs = spec.algorithms();
            Ok(run_jobs(spec, jobs, |j| sbm_trial(spec, j, &algs)))
        }
        ExperimentKind::Cocluster => {
            let m = spec.m.expect("validated");
            Ok(run_jobs(spec, jobs, |j| cocluster_trial(spec, j, n, m, k)))
        }
        other => Err(Error::InvalidParameter(format!("{other:?} is not a recovery experiment"))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoisePoint {
    #[serde(rename = "Q")]
    pub noise: f64,
    pub mean_misclass: f64,
    pub std: f64,
    /// Trials that produced a result.
    pub trials: usize,
}

#[derive(Debug, Clone)]
pub struct NoiseSweep {
    pub points: Vec<NoisePoint>,
    pub records: Vec<ExperimentRecord>,
}

impl NoiseSweep {
    /// Columns `Q, mean_misclass, std, trials`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv(&self.points, out)
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// SCP misclassification on `G(n, k, p, Q / (n − n0))` for each `Q` in the
/// grid.
pub fn run_noise_sweep(spec: &ExperimentSpec) -> Result<NoiseSweep> {
    spec.validate()?;
    if spec.kind != ExperimentKind::NoiseSweep {
        return Err(Error::InvalidParameter(format!("{:?} is not a noise sweep", spec.kind)));
    }
    let n = spec.n.expect("validated");
    let k = spec.k.expect("validated");
    let sizes = near_equal_sizes(n, k);
    let n0 = sizes[0];
    let (p, _) = spec.edge_probs(n);
    let mut jobs = Vec::new();
    for (g, &big_q) in spec.q_grid.iter().enumerate() {
        for t in 0..spec.trials {
            jobs.push(Job {
                grid_index: g,
                trial: t,
                seed: derive_seed(spec.master_seed, &[g as u64, t as u64]),
                sizes: sizes.clone(),
                p,
                q: big_q / (n - n0) as f64,
                noise: Some(big_q),
            });
        }
    }
    let records = run_jobs(spec, jobs, |j| sbm_trial(spec, j, &[Algorithm::Scp]));
    let points = spec
        .q_grid
        .iter()
        .enumerate()
        .map(|(g, &big_q)| {
            let vals: Vec<f64> = records
                .iter()
                .filter(|r| r.grid_index == g)
                .filter_map(|r| r.misclassification)
                .collect();
            let (mean_misclass, std) = mean_std(&vals);
            NoisePoint { noise: big_q, mean_misclass, std, trials: vals.len() }
        })
        .collect();
    Ok(NoiseSweep { points, records })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub n: usize,
    pub k: usize,
    pub n0: usize,
    pub algorithm: Algorithm,
    pub median_seconds: Option<f64>,
    pub trials: usize,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub algorithm: Algorithm,
    /// Least-squares slope of `ln(median time)` against `ln n`.
    pub slope: f64,
    pub points: usize,
}

#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub points: Vec<ScalingPoint>,
    pub slopes: Vec<SlopeFit>,
    pub records: Vec<ExperimentRecord>,
}

impl ScalingReport {
    /// Columns `n, k, n0, algorithm, median_seconds, trials, note`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv(&self.points, out)
    }

    pub fn slope(&self, alg: Algorithm) -> Option<f64> {
        self.slopes.iter().find(|s| s.algorithm == alg).map(|s| s.slope)
    }
}

fn median(xs: &mut [f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    Some(if xs.len() % 2 == 1 { xs[m] } else { 0.5 * (xs[m - 1] + xs[m]) })
}

/// Least-squares slope of `y` on `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() {
        return None;
    }
    let (mx, _) = mean_std(x);
    let (my, _) = mean_std(y);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Median wall time per algorithm over a grid of `n`.
pub fn run_scaling(spec: &ExperimentSpec) -> Result<ScalingReport> {
    spec.validate()?;
    if spec.kind != ExperimentKind::Scaling {
        return Err(Error::InvalidParameter(format!("{:?} is not a scaling experiment", spec.kind)));
    }
    let mut grid = Vec::new();
    for &n in &spec.n_grid {
        let k = match spec.regime.expect("validated") {
            ScalingRegime::FixedN0 => {
                let n0 = spec.n0.expect("validated");
                if n0 == 0 || n % n0 != 0 {
                    return Err(Error::InvalidParameter(format!("n0 = {n0} must divide n = {n}")));
                }
                n / n0
            }
            ScalingRegime::FixedK => spec.k.expect("validated"),
            ScalingRegime::Sqrt => ((n as f64).sqrt().round() as usize).max(1),
        };
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!("k = {k} does not fit n = {n}")));
        }
        grid.push(near_equal_sizes(n, k));
    }
    let mut jobs = Vec::new();
    for (g, sizes) in grid.iter().enumerate() {
        let n: usize = sizes.iter().sum();
        let (p, q) = spec.edge_probs(n);
        for t in 0..spec.trials {
            jobs.push(Job {
                grid_index: g,
                trial: t,
                seed: derive_seed(spec.master_seed, &[g as u64, t as u64]),
                sizes: sizes.clone(),
                p,
                q,
                noise: None,
            });
        }
    }
    let algs = spec.algorithms();
    let records = run_jobs(spec, jobs, |j| sbm_trial(spec, j, &algs));

    let mut points = Vec::new();
    for (g, sizes) in grid.iter().enumerate() {
        for &alg in &algs {
            let recs: Vec<&ExperimentRecord> =
                records.iter().filter(|r| r.grid_index == g && r.algorithm == alg).collect();
            let mut times: Vec<f64> = recs.iter().filter(|r| r.success).map(|r| r.seconds).collect();
            let note = recs.iter().find(|r| !r.success).map(|r| r.note.clone()).unwrap_or_default();
            points.push(ScalingPoint {
                n: sizes.iter().sum(),
                k: sizes.len(),
                n0: sizes[0],
                algorithm: alg,
                trials: times.len(),
                median_seconds: median(&mut times),
                note,
            });
        }
    }
    let slopes = algs
        .iter()
        .filter_map(|&alg| {
            let (x, y): (Vec<f64>, Vec<f64>) = points
                .iter()
                .filter(|pt| pt.algorithm == alg)
                .filter_map(|pt| pt.median_seconds.filter(|&t| t > 0.0).map(|t| ((pt.n as f64).ln(), t.ln())))
                .unzip();
            fit_slope(&x, &y).map(|slope| SlopeFit { algorithm: alg, slope, points: x.len() })
        })
        .collect();
    Ok(ScalingReport { points, slopes, records })
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
