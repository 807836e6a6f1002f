//! Runtime of SCP and SC as n grows with a fixed cluster size.

use clusterpursuit::bench::{run_scaling, ExperimentSpec};

const SPEC: &str = r#"
kind = "scaling"
regime = "fixed-n0"
n0 = 200
n_grid = [400, 800, 1200, 1600]
p_scale = 2.0
q_scale = 2.0
trials = 3
master_seed = 1
algorithms = ["scp", "iscp", "sc"]
single_threaded = true
"#;

fn main() -> clusterpursuit::Result<()> {
    let report = run_scaling(&ExperimentSpec::from_toml_str(SPEC)?)?;
    report.write_csv(std::io::stdout())?;
    for s in &report.slopes {
        println!("{:?}: log-log slope {:.2} over {} points", s.algorithm, s.slope, s.points);
    }
    Ok(())
}
