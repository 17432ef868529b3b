//! Logical-to-physical compilation: catalytic T expansion, phase-reference
//! encoding, block layout and scheduling onto gadgets.

use serde::{Deserialize, Serialize};

use crate::circuit::{GateKind, LogicalCircuit, PhysicalCircuit};
use crate::error::Result;
use crate::gadgets::RoundStrategy;

mod catalyst;
mod cost;
mod frame;
mod layout;
mod phase_ref;
mod schedule;

pub use catalyst::{catalyst_angle, catalytic_t, expand_catalytic_t, H_STATE_ANGLE};
pub use cost::{cost_report, t_count_estimate, CostReport};
pub use frame::track_pauli_frame;
pub use layout::{allocate, data_blocks, greedy_placement, physical_qubits, Layout};
pub use phase_ref::{
    contract_phase_ref, encode_cs, encode_phase_ref, encode_phase_ref_with, encode_s, encode_sdg,
};
pub use schedule::{
    schedule, schedule_with, RelocationMode, ScheduleOptions, Scheduled, READOUT_LABEL,
};

/// Correction handling in the emitted circuit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corrections {
    /// Conditional Paulis are applied as physical operations.
    #[default]
    Apply,
    /// Conditional Paulis are folded into a classical frame.
    Frame,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompileOptions {
    pub strategy: RoundStrategy,
    /// Squared overlap of the T catalyst with |H>.
    pub catalyst_gamma: f64,
    /// Keep Y-basis preparation and measurement as direct primitives.
    pub direct_y: bool,
    pub corrections: Corrections,
    pub schedule: ScheduleOptions,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            strategy: RoundStrategy::Sequential,
            catalyst_gamma: 1.0,
            direct_y: false,
            corrections: Corrections::Apply,
            schedule: ScheduleOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub encoded: LogicalCircuit,
    pub layout: Layout,
    pub scheduled: Scheduled,
}

impl Compiled {
    pub fn circuit(&self) -> &PhysicalCircuit {
        &self.scheduled.circuit
    }
}

/// Full pipeline: expand T, encode phases, allocate and schedule.
pub fn compile(circuit: &LogicalCircuit, opts: &CompileOptions) -> Result<Compiled> {
    circuit.validate()?;
    let expanded = if circuit.gates.iter().any(|g| g.kind == GateKind::T) {
        expand_catalytic_t(circuit, opts.catalyst_gamma)?
    } else {
        circuit.clone()
    };
    let encoded = encode_phase_ref_with(&expanded, opts.direct_y)?;
    let layout = allocate(circuit.n_qubits.max(1), opts.strategy)?;
    let mut scheduled = schedule_with(&encoded, &layout, &opts.schedule)?;
    scheduled.circuit.metadata.logical_depth = circuit.depth();
    if opts.corrections == Corrections::Frame {
        let meta = scheduled.circuit.metadata.clone();
        scheduled.circuit = track_pauli_frame(&scheduled.circuit)?;
        scheduled.circuit.metadata = meta;
    }
    Ok(Compiled {
        encoded,
        layout,
        scheduled,
    })
}
