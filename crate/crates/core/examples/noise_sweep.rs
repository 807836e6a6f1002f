//! Misclassification of SCP as inter-cluster noise grows.

use clusterpursuit::bench::{run_noise_sweep, ExperimentSpec};

const SPEC: &str = r#"
kind = "noise-sweep"
n = 1200
k = 6
p = 0.5
q_grid = [0, 10, 20, 40, 60, 80]
trials = 5
master_seed = 2024
"#;

fn main() -> clusterpursuit::Result<()> {
    let spec = ExperimentSpec::from_toml_str(SPEC)?;
    let sweep = run_noise_sweep(&spec)?;
    sweep.write_csv(std::io::stdout())?;
    Ok(())
}
