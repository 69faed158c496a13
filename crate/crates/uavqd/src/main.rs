use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use uavqd::output::{compare, TrajectoryTable};
use uavqd::pauli::{build_pool, PauliString};
use uavqd::runner::{run_experiment, RunConfig};
use uavqd::{decompose_rotation, gate_count};

#[derive(Parser)]
#[command(name = "uavqd", about = "Adaptive variational Lindblad dynamics", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CompareFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    Run { config: PathBuf },
    /// Compare two trajectory CSV files on the same time grid.
    Compare {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        output: CompareFormat,
    },
    /// Decompose exp(-i theta P / 2) into CNOT + RZ + basis gates.
    Decompose { pauli: String, theta: f64 },
    /// List the operator pool for a qubit count and maximum weight.
    Pool { n_qubits: usize, max_weight: usize },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run_command(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run_command(cmd: Command) -> uavqd::Result<()> {
    match cmd {
        Command::Run { config } => {
            let cfg = RunConfig::from_file(&config)?;
            for path in run_experiment(&cfg)? {
                println!("{}", path.display());
            }
        }
        Command::Compare {
            left,
            right,
            output,
        } => {
            let report = compare(&TrajectoryTable::read(&left)?, &TrajectoryTable::read(&right)?)?;
            match output {
                CompareFormat::Json => {
                    println!("{}", serde_json::to_string_pretty(&report).unwrap());
                }
                CompareFormat::Text => {
                    for (name, dev) in &report.columns {
                        println!("{name}: max_abs {:.6e}  rms {:.6e}", dev.max_abs, dev.rms);
                    }
                    println!(
                        "overall: max_abs {:.6e}  max_rms {:.6e}",
                        report.overall_max_abs, report.overall_max_rms
                    );
                }
            }
        }
        Command::Decompose { pauli, theta } => {
            let p = PauliString::parse(&pauli)?;
            let seq = decompose_rotation(&p, theta)?;
            print!("{seq}");
            let counts = gate_count(&seq);
            println!(
                "# CNOT {}  RZ {}  BASIS {}",
                counts["CNOT"], counts["RZ"], counts["BASIS"]
            );
        }
        Command::Pool {
            n_qubits,
            max_weight,
        } => {
            let pool = build_pool(n_qubits, max_weight)?;
            for p in &pool.members {
                println!("{p}");
            }
            println!("# {} operators", pool.len());
        }
    }
    Ok(())
}
