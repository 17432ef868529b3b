//! Compiler, noisy simulator and mirror benchmarks for the [[8,3,2]] / [[4,2,2]]
//! code-switching architecture.

pub mod benchmark;
pub mod circuit;
pub mod codes;
pub mod compiler;
pub mod dense;
pub mod error;
pub mod gadgets;
pub mod pauli;
pub mod sim;

pub use error::{Error, Result};
