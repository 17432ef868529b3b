//! Logical and physical circuit representations, validation and JSON I/O.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codes::QubitPermutation;
use crate::error::{Error, Result};
use crate::pauli::Pauli;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    PrepZ,
    PrepX,
    /// Direct Y-basis preparation, used only by the direct twirl mode.
    PrepY,
    MeasZ,
    MeasX,
    MeasY,
    X,
    Z,
    H,
    CX,
    CZ,
    CCZ,
    S,
    /// Controlled S.
    CS,
    /// T realized catalytically with an |H> resource.
    T,
    SWAP,
    /// Idealized preparation of `cos(a/2)|0> + sin(a/2)|1>`.
    PrepRy,
    /// Idealized measurement in the basis of `PrepRy` with the same angle.
    MeasRy,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::CCZ => 3,
            GateKind::CX | GateKind::CZ | GateKind::CS | GateKind::SWAP => 2,
            _ => 1,
        }
    }

    pub fn is_measurement(self) -> bool {
        matches!(
            self,
            GateKind::MeasZ | GateKind::MeasX | GateKind::MeasY | GateKind::MeasRy
        )
    }

    pub fn is_preparation(self) -> bool {
        matches!(
            self,
            GateKind::PrepZ | GateKind::PrepX | GateKind::PrepY | GateKind::PrepRy
        )
    }

    pub fn needs_angle(self) -> bool {
        matches!(self, GateKind::PrepRy | GateKind::MeasRy)
    }

    /// True for gates with complex matrix entries that need the phase reference.
    pub fn is_phase_gate(self) -> bool {
        matches!(self, GateKind::S | GateKind::CS | GateKind::T)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogicalGate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

impl LogicalGate {
    pub fn new(kind: GateKind, qubits: &[usize]) -> Self {
        LogicalGate {
            kind,
            qubits: qubits.to_vec(),
            angle: None,
        }
    }

    pub fn with_angle(kind: GateKind, qubit: usize, angle: f64) -> Self {
        LogicalGate {
            kind,
            qubits: vec![qubit],
            angle: Some(angle),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LogicalCircuit {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub n_qubits: usize,
    /// Index of the phase-reference qubit, if the circuit has been encoded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_qubit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalyst_qubit: Option<usize>,
    pub gates: Vec<LogicalGate>,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

impl LogicalCircuit {
    pub fn new(n_qubits: usize) -> Self {
        LogicalCircuit {
            schema_version: SCHEMA_VERSION,
            n_qubits,
            phase_qubit: None,
            catalyst_qubit: None,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, kind: GateKind, qubits: &[usize]) -> &mut Self {
        self.gates.push(LogicalGate::new(kind, qubits));
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gates.iter().enumerate() {
            if g.qubits.len() != g.kind.arity() {
                return Err(Error::InvalidCircuit(format!(
                    "gate {i} ({:?}) has {} operands, expected {}",
                    g.kind,
                    g.qubits.len(),
                    g.kind.arity()
                )));
            }
            let distinct: BTreeSet<_> = g.qubits.iter().collect();
            if distinct.len() != g.qubits.len() {
                return Err(Error::InvalidCircuit(format!(
                    "gate {i} repeats an operand"
                )));
            }
            if let Some(&q) = g.qubits.iter().find(|&&q| q >= self.n_qubits) {
                return Err(Error::InvalidCircuit(format!(
                    "gate {i} uses qubit {q} of {}",
                    self.n_qubits
                )));
            }
            if g.kind.needs_angle() != g.angle.is_some() {
                return Err(Error::InvalidCircuit(format!("gate {i} angle mismatch")));
            }
        }
        Ok(())
    }

    /// ASAP layer count, ignoring preparations and measurements.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for g in &self.gates {
            if g.kind.is_measurement() || g.kind.is_preparation() {
                continue;
            }
            let l = g.qubits.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for &q in &g.qubits {
                level[q] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: LogicalCircuit = serde_json::from_str(text).map_err(malformed)?;
        c.validate()?;
        Ok(c)
    }
}

/// XOR of measurement record bits, optionally inverted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitExpr {
    pub bits: Vec<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub invert: bool,
}

impl BitExpr {
    pub fn bit(b: usize) -> Self {
        BitExpr {
            bits: vec![b],
            invert: false,
        }
    }

    pub fn xor(bits: &[usize]) -> Self {
        BitExpr {
            bits: bits.to_vec(),
            invert: false,
        }
    }

    pub fn inverted(mut self) -> Self {
        self.invert = !self.invert;
        self
    }

    pub fn eval(&self, record: &[bool]) -> bool {
        self.bits
            .iter()
            .fold(self.invert, |acc, &b| acc ^ record[b])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum PhysicalOp {
    PrepZero {
        q: usize,
    },
    PrepPlus {
        q: usize,
    },
    H {
        q: usize,
    },
    S {
        q: usize,
    },
    Sdg {
        q: usize,
    },
    T {
        q: usize,
    },
    Tdg {
        q: usize,
    },
    X {
        q: usize,
    },
    Z {
        q: usize,
    },
    #[serde(rename = "cx")]
    CX {
        c: usize,
        t: usize,
    },
    #[serde(rename = "cz")]
    CZ {
        a: usize,
        b: usize,
    },
    MeasZ {
        q: usize,
    },
    MeasX {
        q: usize,
    },
    Reset {
        q: usize,
    },
    /// The state of `qubits[i]` moves to `qubits[perm[i]]`.
    Relabel {
        qubits: Vec<usize>,
        perm: QubitPermutation,
    },
    CondPauli {
        cond: BitExpr,
        pauli: Pauli,
        targets: Vec<usize>,
    },
    /// Discard the shot when `cond` evaluates to 1.
    Detect {
        cond: BitExpr,
    },
    Label {
        text: String,
    },
    /// Deterministic injected Pauli; never sampled by the noise model.
    Fault {
        q: usize,
        pauli: Pauli,
    },
    /// Idealized noiseless `exp(-i theta/2 P)` for a Pauli string `P` on `qubits`.
    IdealRotation {
        qubits: Vec<usize>,
        pauli: Vec<Pauli>,
        theta: f64,
    },
}

impl PhysicalOp {
    pub fn qubits(&self) -> Vec<usize> {
        use PhysicalOp::*;
        match self {
            PrepZero { q }
            | PrepPlus { q }
            | H { q }
            | S { q }
            | Sdg { q }
            | T { q }
            | Tdg { q }
            | X { q }
            | Z { q }
            | MeasZ { q }
            | MeasX { q }
            | Reset { q }
            | Fault { q, .. } => vec![*q],
            CX { c, t } => vec![*c, *t],
            CZ { a, b } => vec![*a, *b],
            Relabel { qubits, .. } | IdealRotation { qubits, .. } => qubits.clone(),
            CondPauli { targets, .. } => targets.clone(),
            Detect { .. } | Label { .. } => vec![],
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, PhysicalOp::MeasZ { .. } | PhysicalOp::MeasX { .. })
    }

    pub fn is_two_qubit_gate(&self) -> bool {
        matches!(self, PhysicalOp::CX { .. } | PhysicalOp::CZ { .. })
    }

    /// Ops that the noise model never touches.
    pub fn is_noiseless(&self) -> bool {
        matches!(
            self,
            PhysicalOp::Relabel { .. }
                | PhysicalOp::CondPauli { .. }
                | PhysicalOp::Detect { .. }
                | PhysicalOp::Label { .. }
                | PhysicalOp::Fault { .. }
                | PhysicalOp::IdealRotation { .. }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

/// One logical measurement outcome exposed by a compiled circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Output {
    pub qubit: usize,
    pub basis: Basis,
    pub expr: BitExpr,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub logical_width: usize,
    pub logical_depth: usize,
    pub hardness: usize,
    pub two_qubit_gate_count: usize,
    pub teleport_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalCircuit {
    pub schema_version: u32,
    pub n_physical: usize,
    pub ops: Vec<PhysicalOp>,
    #[serde(default)]
    pub outputs: Vec<Output>,
    pub metadata: Metadata,
}

pub const TELEPORT_LABEL_PREFIX: &str = "teleport:";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub op_index: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op_index {
            Some(i) => write!(f, "op {i}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl PhysicalCircuit {
    pub fn new(n_physical: usize) -> Self {
        PhysicalCircuit {
            schema_version: SCHEMA_VERSION,
            n_physical,
            ops: Vec::new(),
            outputs: Vec::new(),
            metadata: Metadata::default(),
        }
    }

    pub fn measurement_count(&self) -> usize {
        self.ops.iter().filter(|o| o.is_measurement()).count()
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.ops.iter().filter(|o| o.is_two_qubit_gate()).count()
    }

    pub fn teleport_label_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|o| matches!(o, PhysicalOp::Label { text } if text.starts_with(TELEPORT_LABEL_PREFIX)))
            .count()
    }

    /// Recomputes the counters derivable from the op list.
    pub fn refresh_counts(&mut self) {
        self.metadata.two_qubit_gate_count = self.two_qubit_gate_count();
        self.metadata.teleport_count = self.teleport_label_count();
        self.metadata.hardness = self.metadata.teleport_count;
    }

    /// Operand ranges, aliasing and classical causality only.
    pub fn validate_ops(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut measured = 0usize;
        let mut v = |i: Option<usize>, m: String| {
            out.push(Violation {
                op_index: i,
                message: m,
            })
        };
        for (i, op) in self.ops.iter().enumerate() {
            let qs = op.qubits();
            if let Some(q) = qs.iter().find(|&&q| q >= self.n_physical) {
                v(
                    Some(i),
                    format!("qubit {q} out of range (n_physical = {})", self.n_physical),
                );
            }
            let distinct: BTreeSet<_> = qs.iter().collect();
            if distinct.len() != qs.len() {
                v(Some(i), "repeated operand".into());
            }
            match op {
                PhysicalOp::CondPauli { cond, .. } | PhysicalOp::Detect { cond } => {
                    if let Some(b) = cond.bits.iter().find(|&&b| b >= measured) {
                        v(
                            Some(i),
                            format!("condition references record bit {b} before it is measured"),
                        );
                    }
                }
                PhysicalOp::Relabel { qubits, perm } if perm.n() != qubits.len() => {
                    v(
                        Some(i),
                        "relabel permutation size does not match its qubits".into(),
                    );
                }
                PhysicalOp::IdealRotation { qubits, pauli, .. } if pauli.len() != qubits.len() => {
                    v(
                        Some(i),
                        "rotation Pauli length does not match its qubits".into(),
                    );
                }
                _ => {}
            }
            if op.is_measurement() {
                measured += 1;
            }
        }
        for o in &self.outputs {
            if let Some(b) = o.expr.bits.iter().find(|&&b| b >= measured) {
                v(
                    None,
                    format!(
                        "output for qubit {} references missing record bit {b}",
                        o.qubit
                    ),
                );
            }
        }
        out
    }

    /// Structural checks plus consistency of the stored counters.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.validate_ops();
        let mut v = |m: &str| {
            out.push(Violation {
                op_index: None,
                message: m.to_string(),
            })
        };
        if self.metadata.two_qubit_gate_count != self.two_qubit_gate_count() {
            v("two_qubit_gate_count does not match the op list");
        }
        if self.metadata.teleport_count != self.teleport_label_count() {
            v("teleport_count does not match the op list");
        }
        if self.metadata.hardness != self.metadata.teleport_count {
            v("hardness differs from teleport_count");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: PhysicalCircuit = serde_json::from_str(text).map_err(malformed)?;
        if c.schema_version != SCHEMA_VERSION {
            return Err(Error::Malformed {
                line: 1,
                column: 1,
                message: format!("unsupported schema_version {}", c.schema_version),
            });
        }
        Ok(c)
    }
}

fn malformed(e: serde_json::Error) -> Error {
    Error::Malformed {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}
