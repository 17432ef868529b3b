//! Fault-tolerant gadgets on [[8,3,2]] and [[4,2,2]] blocks.
//!
//! Every gadget appends physical ops to a [`Builder`], which tracks the
//! measurement-record index so detectors and feedback can refer to outcomes.

use serde::{Deserialize, Serialize};

use crate::circuit::{BitExpr, PhysicalCircuit, PhysicalOp, TELEPORT_LABEL_PREFIX};
use crate::codes::{CodeKind, CodeSpec};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

pub mod catalog;
mod measure;
mod teleport;
mod transversal;
pub mod verify;

pub use measure::{
    ft_measure, measure_flagged, prepare_logical, stabilizer_round, LogicalState, PrepMode,
    RoundStrategy,
};
pub use teleport::{teleport_hadamard, teleport_x, teleport_x_pair, teleport_z, teleport_z_pair};
pub use transversal::{
    cnot2_832_to_422, cnot2_bijection, cnot3, in_block_cnot, in_block_swap, logical_ccz,
    logical_cz, logical_pauli, targeted_cnot, transversal_h_422,
};

/// A code block and the physical qubits holding it, in code order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockHandle {
    pub code: CodeKind,
    pub qubits: Vec<usize>,
}

impl BlockHandle {
    pub fn new(code: CodeKind, qubits: Vec<usize>) -> Result<Self> {
        if qubits.len() != code.n() {
            return Err(Error::DimensionMismatch {
                left: code.n(),
                right: qubits.len(),
            });
        }
        Ok(BlockHandle { code, qubits })
    }

    /// Block on consecutive qubits starting at `first`.
    pub fn contiguous(code: CodeKind, first: usize) -> Self {
        BlockHandle {
            code,
            qubits: (first..first + code.n()).collect(),
        }
    }

    pub fn spec(&self) -> &'static CodeSpec {
        self.code.spec()
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    /// Physical qubits carrying letter `letter` in the chosen representative.
    pub fn support(&self, p: &PauliString) -> Vec<(usize, Pauli)> {
        p.support()
            .into_iter()
            .map(|q| (self.qubits[q], p.get(q)))
            .collect()
    }

    pub fn logical_support(&self, basis: Pauli, i: usize) -> Vec<usize> {
        self.spec()
            .logical(basis, i)
            .support()
            .into_iter()
            .map(|q| self.qubits[q])
            .collect()
    }

    pub(crate) fn check_logical(&self, i: usize) -> Result<()> {
        if i >= self.k() {
            return Err(Error::InvalidOperand(format!(
                "logical index {i} out of range for {} block",
                self.code
            )));
        }
        Ok(())
    }

    pub(crate) fn expect(&self, code: CodeKind) -> Result<()> {
        if self.code != code {
            return Err(Error::WrongCode {
                expected: code.to_string(),
                found: self.code.to_string(),
            });
        }
        Ok(())
    }
}

/// Appends ops to a physical circuit while counting measurements.
#[derive(Clone, Debug)]
pub struct Builder {
    circuit: PhysicalCircuit,
    measurements: usize,
}

impl Builder {
    pub fn new(n_physical: usize) -> Self {
        Builder {
            circuit: PhysicalCircuit::new(n_physical),
            measurements: 0,
        }
    }

    pub fn n_physical(&self) -> usize {
        self.circuit.n_physical
    }

    pub fn measurements(&self) -> usize {
        self.measurements
    }

    pub fn ops(&self) -> &[PhysicalOp] {
        &self.circuit.ops
    }

    pub fn push(&mut self, op: PhysicalOp) {
        if op.is_measurement() {
            self.measurements += 1;
        }
        self.circuit.ops.push(op);
    }

    pub fn extend(&mut self, ops: impl IntoIterator<Item = PhysicalOp>) {
        for op in ops {
            self.push(op);
        }
    }

    /// Measures in Z and returns the record index.
    pub fn measure_z(&mut self, q: usize) -> usize {
        self.push(PhysicalOp::MeasZ { q });
        self.measurements - 1
    }

    pub fn measure_x(&mut self, q: usize) -> usize {
        self.push(PhysicalOp::MeasX { q });
        self.measurements - 1
    }

    pub fn detect(&mut self, cond: BitExpr) {
        self.push(PhysicalOp::Detect { cond });
    }

    pub fn cond_pauli(&mut self, cond: BitExpr, pauli: Pauli, targets: Vec<usize>) {
        if !targets.is_empty() && pauli != Pauli::I {
            self.push(PhysicalOp::CondPauli {
                cond,
                pauli,
                targets,
            });
        }
    }

    pub fn label(&mut self, text: impl Into<String>) {
        self.push(PhysicalOp::Label { text: text.into() });
    }

    pub fn teleport_label(&mut self, kind: &str) {
        self.label(format!("{TELEPORT_LABEL_PREFIX}{kind}"));
    }

    pub fn circuit_mut(&mut self) -> &mut PhysicalCircuit {
        &mut self.circuit
    }

    pub fn finish(mut self) -> PhysicalCircuit {
        self.circuit.refresh_counts();
        self.circuit
    }
}
