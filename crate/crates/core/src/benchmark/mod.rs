//! Mirror-circuit benchmarking: twirled runs, yield and confidence estimates.

mod estimate;
mod mirror;
mod stats;

pub use estimate::{
    estimate, BenchmarkResult, CircuitResult, EstimateOptions, Interval, OracleCounts,
    RESULT_SCHEMA_VERSION,
};
pub use mirror::{
    invert_gate, make_mirror, random_mirror, readout_circuit, twirled_circuit, MirrorSpec,
};
pub use stats::{
    a_kw, basis_pauli, confidence_from_histogram, twirl_flip_histogram, twirl_layer, Twirl,
};
