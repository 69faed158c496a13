//! Adaptive variational simulation of Lindblad dynamics.
//!
//! The master equation is vectorized by column stacking, which turns the
//! density matrix into a pure state of twice the qubit count evolving under a
//! non-Hermitian effective Hamiltonian. That state is represented by a
//! parameterized product of Pauli rotations acting on a fixed reference; the
//! parameters follow McLachlan's variational principle and the circuit grows
//! itself greedily from an operator pool whenever the projection error
//! exceeds a threshold.
//!
//! Modules:
//! - [`pauli`]: Pauli strings, states, rotations, operator pools.
//! - [`lindblad`]: models, vectorization, the effective Hamiltonian, and a
//!   dense reference integrator.
//! - [`variational`]: the McLachlan engine with adaptive ansatz growth.
//! - [`models`]: amplitude damping, a 3-site chromophore network, and Dicke
//!   emitter arrays with dyadic-Green's-function couplings.
//! - [`gates`]: exact CNOT-ladder decomposition of Pauli rotations.
//! - [`output`] / [`runner`]: CSV/JSON serialization and the config-driven
//!   experiment pipeline behind the CLI.

pub mod error;
pub mod gates;
pub mod lindblad;
pub mod models;
pub mod output;
pub mod pauli;
pub mod runner;
pub mod variational;

pub use error::{Error, Result};
pub use gates::{decompose_rotation, gate_count, sequence_unitary, Gate, GateSequence};
pub use lindblad::{
    build_effective_hamiltonian, devectorize, exact_evolve, vectorize, DensityMatrix,
    EffectiveHamiltonian, LindbladModel, TrajectoryRecord,
};
pub use output::{compare, CompareReport, TrajectoryTable};
pub use pauli::{apply_pauli, apply_rotation, build_pool, Letter, OperatorPool, PauliString, State};
pub use runner::{build_model, run_experiment, ModelConfig, RunConfig, SolverKind};
pub use variational::{
    mclachlan_distance, run, Ansatz, EngineConfig, Integrator, Layer, MGauge,
};
