//! Compiled circuits executed noiselessly from injected encoded inputs and
//! compared with the exact matrix of the input circuit.
#![allow(dead_code)]

use codeswitch::circuit::{GateKind, LogicalCircuit, LogicalGate};
use codeswitch::compiler::*;
use codeswitch::dense::{unitary, Matrix, C};
use codeswitch::gadgets::verify::BlockSet;
use codeswitch::gadgets::RoundStrategy;
use codeswitch::sim::{shot_rng, Executor, NoiseModel, DEFAULT_CAPACITY};
use rand::Rng;

pub struct Harness {
    pub layout: Layout,
    pub scheduled: Scheduled,
    pub n: usize,
}

impl Harness {
    pub fn new(circuit: &LogicalCircuit, opts: &ScheduleOptions) -> Self {
        let encoded = encode_phase_ref(circuit).unwrap();
        let layout = allocate(circuit.n_qubits, RoundStrategy::Sequential).unwrap();
        let scheduled = schedule_with(&encoded, &layout, opts).unwrap();
        Harness {
            layout,
            scheduled,
            n: circuit.n_qubits,
        }
    }

    fn blocks(&self) -> BlockSet {
        let mut blocks = self.layout.data.clone();
        if self.scheduled.rotation_used {
            blocks.push(self.layout.rotation.clone());
        }
        BlockSet::new(self.layout.n_physical, blocks).unwrap()
    }

    /// Logical index inside the data-plus-rotation block set.
    fn index((blk, slot): (usize, usize)) -> usize {
        3 * blk + slot
    }

    /// Runs on input `psi` (over the computational qubits) and returns the
    /// decoded, contracted output state.
    pub fn run(&self, psi: &[C], seed: u64) -> Vec<C> {
        let set = self.blocks();
        let k = set.k();
        let slots_of = |loc: &[(usize, usize)]| -> Vec<usize> {
            loc[..self.n].iter().map(|&l| Self::index(l)).collect()
        };
        // Data slots start in |+> unless they hold a qubit; the rotation block starts in |0>.
        let init_slots = slots_of(&self.scheduled.initial);
        let rot = 3 * self.layout.data.len();
        let mut logical = vec![C::new(0.0, 0.0); 1 << k];
        for (idx, amp) in logical.iter_mut().enumerate() {
            if (rot..rot + 3).any(|b| (idx >> b) & 1 == 1) {
                continue;
            }
            let mut a = C::new(1.0, 0.0);
            let mut j = 0;
            for b in 0..rot {
                let bit = (idx >> b) & 1;
                match init_slots.iter().position(|&s| s == b) {
                    Some(q) => j |= bit << q,
                    None => a *= std::f64::consts::FRAC_1_SQRT_2,
                }
            }
            *amp = a * psi[j];
        }
        let state = set
            .initial_state(self.layout.n_physical, DEFAULT_CAPACITY, &logical)
            .unwrap();
        let c = &self.scheduled.circuit;
        let mut ex = Executor::with_state(c, state).unwrap();
        // Post-selected preparations may discard; retry on another branch.
        ex.run(&NoiseModel::noiseless(), &mut shot_rng(seed, 0), false)
            .unwrap();
        if ex.discarded {
            return self.run(psi, seed + 1000);
        }
        let phys = ex.state.full_state(&set.order());
        let decoded: Vec<C> = (0..1 << k)
            .map(|idx| {
                set.encode_basis(idx)
                    .iter()
                    .zip(&phys)
                    .map(|(e, v)| e.conj() * v)
                    .sum()
            })
            .collect();
        let leak = 1.0 - decoded.iter().map(|a| a.norm_sqr()).sum::<f64>();
        assert!(leak.abs() < 1e-9, "leaves the codespace: {leak}");
        // Project free slots onto |+> and gather (computational qubits, p).
        let fin = slots_of(&self.scheduled.final_loc);
        let p_slot = self
            .scheduled
            .rotation_used
            .then(|| Self::index(self.scheduled.final_loc[self.n]));
        let mut out = vec![C::new(0.0, 0.0); 2 << self.n];
        for (idx, a) in decoded.iter().enumerate() {
            let mut j = 0;
            let mut w = *a;
            for b in 0..k {
                let bit = (idx >> b) & 1;
                if let Some(q) = fin.iter().position(|&s| s == b) {
                    j |= bit << q;
                } else if Some(b) == p_slot {
                    j |= bit << self.n;
                } else {
                    w *= std::f64::consts::FRAC_1_SQRT_2;
                }
            }
            out[j] += w;
        }
        let norm: f64 = out.iter().map(|a| a.norm_sqr()).sum();
        assert!(
            (norm - 1.0).abs() < 1e-9,
            "free slots left |+>: norm {norm}"
        );
        contract_phase_ref(&out, self.n)
    }

    /// Matrix of the compiled circuit from columns recovered with
    /// superposition inputs, so that relative phases are fixed.
    pub fn matrix(&self, seed: u64) -> Matrix {
        let dim = 1usize << self.n;
        let basis = |j: usize| {
            let mut v = vec![C::new(0.0, 0.0); dim];
            v[j] = C::new(1.0, 0.0);
            v
        };
        let u0 = self.run(&basis(0), seed);
        let mut cols = vec![u0.clone()];
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for j in 1..dim {
            let mut v = basis(0);
            v[0] = C::new(r, 0.0);
            v[j] = C::new(r, 0.0);
            let phi = self.run(&v, seed + j as u64);
            // Fix the run's global phase by <u0|phi> = 1/sqrt(2).
            let ov: C = u0.iter().zip(&phi).map(|(a, b)| a.conj() * b).sum();
            let phase = ov.conj() / ov.norm();
            cols.push(
                phi.iter()
                    .zip(&u0)
                    .map(|(p, a)| p * phase * 2f64.sqrt() - a)
                    .collect(),
            );
        }
        Matrix::from_columns(&cols)
    }
}

pub fn fast_opts() -> ScheduleOptions {
    ScheduleOptions {
        rounds: false,
        initialize: false,
        ..ScheduleOptions::default()
    }
}

pub fn check(circuit: &LogicalCircuit, opts: &ScheduleOptions, seed: u64) -> f64 {
    let h = Harness::new(circuit, opts);
    let got = h.matrix(seed);
    let want = unitary(&circuit.gates, circuit.n_qubits).unwrap();
    got.diff_up_to_phase(&want)
}

pub fn random_circuit(seed: u64) -> LogicalCircuit {
    let mut rng = shot_rng(seed, 7);
    let n = rng.gen_range(1..=2);
    let mut c = LogicalCircuit::new(n);
    let len = rng.gen_range(1..=6);
    for _ in 0..len {
        let two = n == 2 && rng.gen_bool(0.5);
        if two {
            let kind = [GateKind::CX, GateKind::CZ, GateKind::CS][rng.gen_range(0..3)];
            let a = rng.gen_range(0..2);
            c.gates.push(LogicalGate::new(kind, &[a, 1 - a]));
        } else {
            let kind = [GateKind::H, GateKind::S, GateKind::X, GateKind::Z][rng.gen_range(0..4)];
            c.gates.push(LogicalGate::new(kind, &[rng.gen_range(0..n)]));
        }
    }
    c
}
