//! State-vector simulation of physical circuits under stochastic Pauli noise.

pub mod exec;
pub mod faults;
pub mod noise;
pub mod state;

pub use exec::{
    run_shot, run_shot_with, shot_rng, Executor, FaultEvent, FaultKind, ShotRecord,
    DEFAULT_CAPACITY,
};
pub use faults::{
    check_single_faults, check_single_faults_from, enumerate_branches, enumerate_branches_from,
    fault_locations, fidelity, inject_fault, projected_fidelity, FaultLocation, FaultReport,
};
pub use noise::NoiseModel;
pub use state::{Gate1, Known, SimState};
