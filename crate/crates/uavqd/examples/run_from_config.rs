//! Drive the full pipeline from a TOML config, as the CLI `run` subcommand
//! does, then summarize the variational-vs-exact deviation from the CSVs.

use uavqd::output::{compare, TrajectoryTable};
use uavqd::runner::{run_experiment, RunConfig};

const CONFIG: &str = r#"
solver = "both"

[model]
kind = "amplitude_damping"
gamma = 1.52e-3

[engine]
adaptive_threshold = 1e-6
pool_max_weight = 2

[time]
t_final = 2000.0
dt = 40.0

[output]
directory = "target/example-out"
basename = "ad"
"#;

fn main() -> uavqd::Result<()> {
    let cfg = RunConfig::from_toml(CONFIG)?;
    let paths = run_experiment(&cfg)?;
    for p in &paths {
        println!("wrote {}", p.display());
    }

    let exact = TrajectoryTable::read(&paths[0])?;
    let uavqd = TrajectoryTable::read(&paths[1])?;
    let report = compare(&exact, &uavqd)?;
    for (name, dev) in &report.columns {
        println!("{name}: max_abs {:.3e}  rms {:.3e}", dev.max_abs, dev.rms);
    }
    Ok(())
}
