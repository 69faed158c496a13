//! Configuration-driven experiment runner behind the CLI.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lindblad::{exact_evolve, CMat, DensityMatrix, LindbladModel, TrajectoryRecord};
use crate::models;
use crate::output::{write_meta, write_trajectory_csv};
use crate::pauli::build_pool;
use crate::variational::{output_grid, EngineConfig, Integrator, MGauge};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Exact,
    Uavqd,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lattice {
    Chain,
    Grid,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    /// Two-level spontaneous emission; `gamma` in inverse time units.
    AmplitudeDamping {
        gamma: f64,
        /// Real amplitudes of a pure initial state; defaults to the
        /// (1/2, sqrt(3)/2) benchmark state.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        initial_amplitudes: Option<[f64; 2]>,
    },
    /// 3-chromophore FMO network; rates in 1/fs.
    Fmo {
        alpha: f64,
        beta: f64,
        gamma_sink: f64,
        #[serde(default = "default_initial_site")]
        initial_site: usize,
    },
    /// Dicke emitter array; spacing in units of lambda_0.
    Dicke {
        lattice: Lattice,
        n: usize,
        spacing_over_lambda: f64,
        #[serde(default = "default_polarization")]
        polarization: [f64; 3],
        #[serde(default)]
        include_omega0: bool,
    },
}

fn default_initial_site() -> usize {
    1
}

fn default_polarization() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineBlock {
    pub adaptive_threshold: f64,
    pub pool_max_weight: usize,
    #[serde(default = "default_cutoff")]
    pub regularization_cutoff: f64,
    #[serde(default = "default_max_adds")]
    pub max_adds_per_step: usize,
    #[serde(default)]
    pub gauge: MGauge,
    #[serde(default)]
    pub integrator: Integrator,
}

fn default_cutoff() -> f64 {
    1e-8
}

fn default_max_adds() -> usize {
    10
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeBlock {
    pub t_final: f64,
    pub dt: f64,
    #[serde(default = "default_stride")]
    pub output_stride: usize,
}

fn default_stride() -> usize {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub directory: PathBuf,
    pub basename: String,
}

/// One experiment: model, solver selection, time grid, output location.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub solver: SolverKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine: Option<EngineBlock>,
    pub time: TimeBlock,
    pub output: OutputBlock,
    /// Reserved; the current pipeline is deterministic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    /// Strict TOML parse: unknown keys are rejected.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<()> {
        if self.time.dt <= 0.0 || self.time.t_final < self.time.dt {
            return Err(Error::Config("time block needs 0 < dt <= t_final".into()));
        }
        if self.time.output_stride == 0 {
            return Err(Error::Config("output_stride must be positive".into()));
        }
        if matches!(self.solver, SolverKind::Uavqd | SolverKind::Both) && self.engine.is_none() {
            return Err(Error::Config(
                "solver 'uavqd'/'both' requires an [engine] block".into(),
            ));
        }
        if let ModelConfig::Fmo { initial_site, .. } = &self.model {
            if !(1..=3).contains(initial_site) {
                return Err(Error::Config(format!(
                    "initial_site {initial_site} outside 1..=3"
                )));
            }
        }
        Ok(())
    }
}

/// Instantiate the model and its initial density matrix.
pub fn build_model(cfg: &ModelConfig) -> Result<(LindbladModel, DensityMatrix)> {
    match cfg {
        ModelConfig::AmplitudeDamping {
            gamma,
            initial_amplitudes,
        } => {
            let model = models::amplitude_damping_model(*gamma)?;
            let rho = match initial_amplitudes {
                None => models::amplitude_damping_initial(),
                Some([a, b]) => {
                    let n2 = a * a + b * b;
                    if (n2 - 1.0).abs() > 1e-9 {
                        return Err(Error::Config(format!(
                            "initial amplitudes have norm^2 {n2}, expected 1"
                        )));
                    }
                    CMat::from_row_slice(
                        2,
                        2,
                        &[
                            num_complex::Complex64::new(a * a, 0.0),
                            num_complex::Complex64::new(a * b, 0.0),
                            num_complex::Complex64::new(a * b, 0.0),
                            num_complex::Complex64::new(b * b, 0.0),
                        ],
                    )
                }
            };
            Ok((model, DensityMatrix::new(rho)?))
        }
        ModelConfig::Fmo {
            alpha,
            beta,
            gamma_sink,
            initial_site,
        } => {
            let model = models::fmo_model(*alpha, *beta, *gamma_sink)?;
            let mut rho = CMat::zeros(5, 5);
            rho[(*initial_site, *initial_site)] = num_complex::Complex64::new(1.0, 0.0);
            Ok((model, DensityMatrix::new(rho)?))
        }
        ModelConfig::Dicke {
            lattice,
            n,
            spacing_over_lambda,
            polarization,
            include_omega0,
        } => {
            let mut geom = match lattice {
                Lattice::Chain => models::EmitterGeometry::chain(*n, *spacing_over_lambda)?,
                Lattice::Grid => models::EmitterGeometry::grid(*n, *spacing_over_lambda)?,
            };
            let p = nalgebra::Vector3::new(polarization[0], polarization[1], polarization[2]);
            let norm = p.norm();
            if norm == 0.0 {
                return Err(Error::Config("zero polarization vector".into()));
            }
            geom.polarization = p / norm;
            let model = models::dicke_model_with_options(&geom, *include_omega0)?;
            Ok((model, DensityMatrix::new(models::dicke_initial(*n))?))
        }
    }
}

fn engine_config(cfg: &RunConfig, model: &LindbladModel) -> Result<EngineConfig> {
    let block = cfg.engine.as_ref().expect("validated");
    let pool = build_pool(2 * model.n_qubits, block.pool_max_weight)?;
    let mut ec = EngineConfig::new(
        cfg.time.dt,
        cfg.time.t_final,
        block.adaptive_threshold,
        pool,
    )?;
    ec.regularization_cutoff = block.regularization_cutoff;
    ec.max_adds_per_step = block.max_adds_per_step;
    ec.gauge = block.gauge;
    ec.integrator = block.integrator;
    ec.output_stride = cfg.time.output_stride;
    Ok(ec)
}

/// Run the configured experiment and write
/// `<basename>.exact.csv` / `<basename>.uavqd.csv` plus
/// `<basename>.meta.json`; returns the written paths.
pub fn run_experiment(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let (model, rho0) = build_model(&cfg.model)?;
    let n_steps = (cfg.time.t_final / cfg.time.dt).round() as usize;
    let grid = output_grid(cfg.time.dt, n_steps, cfg.time.output_stride);
    std::fs::create_dir_all(&cfg.output.directory)?;
    let base = cfg.output.directory.join(&cfg.output.basename);
    let mut written = Vec::new();

    let exact: Option<TrajectoryRecord> =
        if matches!(cfg.solver, SolverKind::Exact | SolverKind::Both) {
            let rec = exact_evolve(&model, &rho0, &grid)?;
            let path = base.with_extension("exact.csv");
            write_trajectory_csv(&path, &rec)?;
            written.push(path);
            Some(rec)
        } else {
            None
        };

    if matches!(cfg.solver, SolverKind::Uavqd | SolverKind::Both) {
        let ec = engine_config(cfg, &model)?;
        let rec = crate::variational::run(&model, &rho0, &ec)?;
        if let Some(exact) = &exact {
            let mut max_dev: f64 = 0.0;
            for (name, col) in &rec.observables {
                if let Some(e) = exact.observable(name) {
                    for (x, y) in col.iter().zip(e) {
                        max_dev = max_dev.max((x - y).abs());
                    }
                }
            }
            log::info!("uavqd vs exact: max observable deviation {max_dev:.3e}");
        }
        let path = base.with_extension("uavqd.csv");
        write_trajectory_csv(&path, &rec)?;
        written.push(path);
    }

    let meta_path = base.with_extension("meta.json");
    write_meta(&meta_path, cfg)?;
    written.push(meta_path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
solver = "exact"

[model]
kind = "amplitude_damping"
gamma = 1.52e-3

[time]
t_final = 200.0
dt = 40.0

[output]
directory = "out"
basename = "ad"
"#;

    #[test]
    fn minimal_config_parses() {
        let cfg = RunConfig::from_toml(MINIMAL).unwrap();
        assert!(matches!(cfg.solver, SolverKind::Exact));
        assert_eq!(cfg.time.output_stride, 1);
    }

    #[test]
    fn unknown_key_rejected_with_name() {
        let text = MINIMAL.replace("basename = \"ad\"", "basename = \"ad\"\nbogus_key = 1");
        let err = RunConfig::from_toml(&text).unwrap_err();
        assert!(err.to_string().contains("bogus_key"), "{err}");
    }

    #[test]
    fn uavqd_without_engine_rejected() {
        let text = MINIMAL.replace("solver = \"exact\"", "solver = \"uavqd\"");
        assert!(RunConfig::from_toml(&text).is_err());
    }

    #[test]
    fn fmo_initial_site_range_checked() {
        let text = r#"
solver = "exact"

[model]
kind = "fmo"
alpha = 3.0e-3
beta = 5.0e-7
gamma_sink = 6.28e-3
initial_site = 4

[time]
t_final = 10.0
dt = 1.0

[output]
directory = "out"
basename = "fmo"
"#;
        assert!(RunConfig::from_toml(text).is_err());
    }
}
