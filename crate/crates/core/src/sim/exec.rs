use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{PhysicalCircuit, PhysicalOp};
use crate::error::{Error, Result};
use crate::pauli::Pauli;
use crate::sim::noise::{two_qubit_pauli, NoiseModel, PAULIS};
use crate::sim::state::{Gate1, Known, SimState, ZERO_BRANCH_TOL};

/// Default bound on simultaneously entangled qubits.
pub const DEFAULT_CAPACITY: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaultKind {
    Gate,
    Preparation,
    Readout,
    Injected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultEvent {
    pub op_index: usize,
    pub kind: FaultKind,
    pub qubits: Vec<usize>,
    pub paulis: Vec<Pauli>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub record: Vec<bool>,
    pub discarded: bool,
    pub discard_op: Option<usize>,
    pub faults: Vec<FaultEvent>,
    /// Values of the circuit's declared outputs; empty when stopped early.
    pub outputs: Vec<bool>,
}

/// Per-shot generator keyed by (master seed, shot index).
pub fn shot_rng(master_seed: u64, shot_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(shot_index);
    rng
}

/// Step-wise execution of a physical circuit; cloneable so measurement
/// branches can be explored.
#[derive(Clone, Debug)]
pub struct Executor<'c> {
    circuit: &'c PhysicalCircuit,
    pub state: SimState,
    pub record: Vec<bool>,
    pub pc: usize,
    pub discarded: bool,
    pub discard_op: Option<usize>,
    pub faults: Vec<FaultEvent>,
}

impl<'c> Executor<'c> {
    pub fn new(circuit: &'c PhysicalCircuit, cap: usize) -> Result<Self> {
        let violations = circuit.validate_ops();
        if !violations.is_empty() {
            let msg = violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            return Err(Error::InvalidCircuit(msg));
        }
        Ok(Executor {
            circuit,
            state: SimState::new(circuit.n_physical, cap),
            record: Vec::new(),
            pc: 0,
            discarded: false,
            discard_op: None,
            faults: Vec::new(),
        })
    }

    /// Starts from a prepared state instead of all-zero.
    pub fn with_state(circuit: &'c PhysicalCircuit, state: SimState) -> Result<Self> {
        if state.n() != circuit.n_physical {
            return Err(Error::DimensionMismatch {
                left: circuit.n_physical,
                right: state.n(),
            });
        }
        let mut ex = Executor::new(circuit, 0)?;
        ex.state = state;
        Ok(ex)
    }

    pub fn circuit(&self) -> &'c PhysicalCircuit {
        self.circuit
    }

    pub fn finished(&self) -> bool {
        self.pc >= self.circuit.ops.len()
    }

    /// True when the next op projects a qubit whose outcome is random.
    pub fn next_is_branching(&self) -> bool {
        let random = |p1: f64| p1 >= ZERO_BRANCH_TOL && 1.0 - p1 >= ZERO_BRANCH_TOL;
        match self.circuit.ops.get(self.pc) {
            Some(PhysicalOp::MeasZ { q }) => random(self.state.prob_one(*q)),
            Some(PhysicalOp::MeasX { q }) => random(self.state.prob_one_x(*q)),
            Some(
                PhysicalOp::Reset { q } | PhysicalOp::PrepZero { q } | PhysicalOp::PrepPlus { q },
            ) => self.state.is_active(*q) && random(self.state.prob_one(*q)),
            _ => false,
        }
    }

    fn sample_pauli<R: Rng>(rng: &mut R) -> Pauli {
        PAULIS[rng.gen_range(0..3)]
    }

    fn log(&mut self, kind: FaultKind, qubits: Vec<usize>, paulis: Vec<Pauli>) {
        self.faults.push(FaultEvent {
            op_index: self.pc,
            kind,
            qubits,
            paulis,
        });
    }

    /// Projects `q` in the Z basis, sampling unless `forced`; returns (outcome, probability).
    fn collapse<R: Rng>(&mut self, q: usize, rng: &mut R, forced: Option<bool>) -> (bool, f64) {
        let p1 = self.state.prob_one(q);
        let b = match forced {
            Some(b) => b,
            None if p1 < ZERO_BRANCH_TOL => false,
            None if 1.0 - p1 < ZERO_BRANCH_TOL => true,
            None => rng.gen::<f64>() < p1,
        };
        let p = self.state.collapse_z_given(q, b, p1);
        (b, p)
    }

    /// Executes the op at `pc`. Returns the probability of the measurement
    /// branch taken (1 for deterministic ops).
    pub fn step<R: Rng>(
        &mut self,
        noise: &NoiseModel,
        rng: &mut R,
        forced: Option<bool>,
    ) -> Result<f64> {
        let op = &self.circuit.ops[self.pc];
        let qubits = op.qubits();
        let noisy = !op.is_noiseless() && !noise.is_exempt(&qubits);
        let mut prob = 1.0;
        match op {
            PhysicalOp::PrepZero { q } | PhysicalOp::Reset { q } | PhysicalOp::PrepPlus { q } => {
                let q = *q;
                if self.state.is_active(q) {
                    prob = self.collapse(q, rng, forced).1;
                }
                let plus = matches!(op, PhysicalOp::PrepPlus { .. });
                self.state
                    .set_known(q, if plus { Known::Plus } else { Known::Zero })?;
                if noisy && noise.p_prep > 0.0 && rng.gen::<f64>() < noise.p_prep {
                    let p = if plus { Pauli::Z } else { Pauli::X };
                    self.state.apply_pauli(q, p);
                    self.log(FaultKind::Preparation, vec![q], vec![p]);
                }
            }
            PhysicalOp::H { q } => self.state.apply_gate1(*q, Gate1::H)?,
            PhysicalOp::S { q } => self.state.apply_gate1(*q, Gate1::S)?,
            PhysicalOp::Sdg { q } => self.state.apply_gate1(*q, Gate1::Sdg)?,
            PhysicalOp::T { q } => self.state.apply_gate1(*q, Gate1::T)?,
            PhysicalOp::Tdg { q } => self.state.apply_gate1(*q, Gate1::Tdg)?,
            PhysicalOp::X { q } => self.state.apply_pauli(*q, Pauli::X),
            PhysicalOp::Z { q } => self.state.apply_pauli(*q, Pauli::Z),
            PhysicalOp::CX { c, t } => self.state.apply_cx(*c, *t)?,
            PhysicalOp::CZ { a, b } => self.state.apply_cz(*a, *b)?,
            PhysicalOp::MeasZ { q } | PhysicalOp::MeasX { q } => {
                let q = *q;
                let x_basis = matches!(op, PhysicalOp::MeasX { .. });
                if x_basis {
                    self.state.hadamard(q)?;
                }
                let (b, p) = self.collapse(q, rng, forced);
                prob = p;
                if x_basis {
                    self.state.hadamard(q)?;
                }
                let mut bit = b;
                if noisy && noise.p_meas > 0.0 && rng.gen::<f64>() < noise.p_meas {
                    bit = !bit;
                    let p = if x_basis { Pauli::Z } else { Pauli::X };
                    self.log(FaultKind::Readout, vec![q], vec![p]);
                }
                self.record.push(bit);
            }
            PhysicalOp::Relabel { qubits, perm } => self.state.relabel(qubits, perm.mapping()),
            PhysicalOp::CondPauli {
                cond,
                pauli,
                targets,
            } => {
                if cond.eval(&self.record) {
                    for &t in targets {
                        self.state.apply_pauli(t, *pauli);
                    }
                }
            }
            PhysicalOp::Detect { cond } => {
                if !self.discarded && cond.eval(&self.record) {
                    self.discarded = true;
                    self.discard_op = Some(self.pc);
                }
            }
            PhysicalOp::Label { .. } => {}
            PhysicalOp::Fault { q, pauli } => {
                self.state.apply_pauli(*q, *pauli);
                let (q, p) = (*q, *pauli);
                self.log(FaultKind::Injected, vec![q], vec![p]);
            }
            PhysicalOp::IdealRotation {
                qubits,
                pauli,
                theta,
            } => {
                self.state.apply_pauli_rotation(qubits, pauli, *theta)?;
            }
        }
        if noisy {
            self.gate_noise(noise, rng)?;
        }
        self.pc += 1;
        Ok(prob)
    }

    fn gate_noise<R: Rng>(&mut self, noise: &NoiseModel, rng: &mut R) -> Result<()> {
        let op = &self.circuit.ops[self.pc];
        match op {
            PhysicalOp::H { q }
            | PhysicalOp::S { q }
            | PhysicalOp::Sdg { q }
            | PhysicalOp::T { q }
            | PhysicalOp::Tdg { q }
            | PhysicalOp::X { q }
            | PhysicalOp::Z { q } => {
                if noise.p1 > 0.0 && rng.gen::<f64>() < noise.p1 {
                    let q = *q;
                    let p = Self::sample_pauli(rng);
                    self.state.apply_pauli(q, p);
                    self.log(FaultKind::Gate, vec![q], vec![p]);
                }
            }
            PhysicalOp::CX { c: a, t: b } | PhysicalOp::CZ { a, b }
                if noise.p2 > 0.0 && rng.gen::<f64>() < noise.p2 => {
                    let (a, b) = (*a, *b);
                    let (pa, pb) = two_qubit_pauli(rng.gen_range(1..16));
                    self.state.apply_pauli(a, pa);
                    self.state.apply_pauli(b, pb);
                    self.log(FaultKind::Gate, vec![a, b], vec![pa, pb]);
                }
            _ => {}
        }
        Ok(())
    }

    /// Runs to the end (or the first discard when `early_stop`).
    pub fn run<R: Rng>(&mut self, noise: &NoiseModel, rng: &mut R, early_stop: bool) -> Result<()> {
        while !self.finished() {
            if early_stop && self.discarded {
                break;
            }
            self.step(noise, rng, None)?;
        }
        Ok(())
    }

    pub fn shot_record(&self) -> ShotRecord {
        let outputs = if self.finished() {
            self.circuit
                .outputs
                .iter()
                .map(|o| o.expr.eval(&self.record))
                .collect()
        } else {
            Vec::new()
        };
        ShotRecord {
            record: self.record.clone(),
            discarded: self.discarded,
            discard_op: self.discard_op,
            faults: self.faults.clone(),
            outputs,
        }
    }
}

/// Executes one shot with early stop on the first detection event.
pub fn run_shot(
    circuit: &PhysicalCircuit,
    noise: &NoiseModel,
    master_seed: u64,
    shot_index: u64,
) -> Result<ShotRecord> {
    run_shot_with(
        circuit,
        noise,
        master_seed,
        shot_index,
        DEFAULT_CAPACITY,
        true,
    )
}

pub fn run_shot_with(
    circuit: &PhysicalCircuit,
    noise: &NoiseModel,
    master_seed: u64,
    shot_index: u64,
    cap: usize,
    early_stop: bool,
) -> Result<ShotRecord> {
    noise.check()?;
    let mut rng = shot_rng(master_seed, shot_index);
    let mut ex = Executor::new(circuit, cap)?;
    ex.run(noise, &mut rng, early_stop)?;
    Ok(ex.shot_record())
}
