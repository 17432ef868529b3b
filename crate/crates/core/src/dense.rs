//! Small dense vectors and matrices used as exact reference semantics.
//!
//! Bit `i` of a basis index is qubit `i`.

use num_complex::Complex64;

use crate::circuit::{GateKind, LogicalGate};
use crate::error::{Error, Result};

pub type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// Square matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub dim: usize,
    pub data: Vec<C>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        Matrix { dim, data }
    }

    pub fn from_rows(rows: &[Vec<C>]) -> Self {
        let dim = rows.len();
        Matrix {
            dim,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_columns(cols: &[Vec<C>]) -> Self {
        let dim = cols.len();
        let mut data = vec![ZERO; dim * dim];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                data[i * dim + j] = *v;
            }
        }
        Matrix { dim, data }
    }

    pub fn get(&self, i: usize, j: usize) -> C {
        self.data[i * self.dim + j]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let d = self.dim;
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        Matrix { dim: d, data }
    }

    pub fn adjoint(&self) -> Matrix {
        let d = self.dim;
        let mut data = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        Matrix { dim: d, data }
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Distance after removing the best global phase.
    pub fn diff_up_to_phase(&self, other: &Matrix) -> f64 {
        let (idx, _) = other
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .expect("nonempty");
        if self.data[idx].norm() < 1e-12 {
            return f64::INFINITY;
        }
        let phase = other.data[idx] / self.data[idx];
        let phase = phase / phase.norm();
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.data[i * self.dim + j] * v[j])
                    .sum()
            })
            .collect()
    }
}

/// Applies a logical gate in place to a state vector.
pub fn apply_gate(state: &mut [C], gate: &LogicalGate) -> Result<()> {
    let q = &gate.qubits;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let bit = |i: usize, k: usize| (i >> q[k]) & 1 == 1;
    match gate.kind {
        GateKind::X => permute(state, |i| i ^ (1 << q[0])),
        GateKind::CX => permute(state, |i| if bit(i, 0) { i ^ (1 << q[1]) } else { i }),
        GateKind::SWAP => permute(state, |i| {
            if bit(i, 0) != bit(i, 1) {
                i ^ (1 << q[0]) ^ (1 << q[1])
            } else {
                i
            }
        }),
        GateKind::Z => phase(state, |i| if bit(i, 0) { -ONE } else { ONE }),
        GateKind::S => phase(state, |i| if bit(i, 0) { C::new(0.0, 1.0) } else { ONE }),
        GateKind::T => phase(state, |i| if bit(i, 0) { C::new(r, r) } else { ONE }),
        GateKind::CZ => phase(state, |i| if bit(i, 0) && bit(i, 1) { -ONE } else { ONE }),
        GateKind::CS => phase(state, |i| {
            if bit(i, 0) && bit(i, 1) {
                C::new(0.0, 1.0)
            } else {
                ONE
            }
        }),
        GateKind::CCZ => phase(state, |i| {
            if bit(i, 0) && bit(i, 1) && bit(i, 2) {
                -ONE
            } else {
                ONE
            }
        }),
        GateKind::H => {
            let m = 1usize << q[0];
            for i in 0..state.len() {
                if i & m == 0 {
                    let (a, b) = (state[i], state[i | m]);
                    state[i] = (a + b) * r;
                    state[i | m] = (a - b) * r;
                }
            }
        }
        k => return Err(Error::Unsupported(format!("{k:?} has no unitary matrix"))),
    }
    Ok(())
}

fn permute(state: &mut [C], f: impl Fn(usize) -> usize) {
    let old = state.to_vec();
    for (i, a) in old.into_iter().enumerate() {
        state[f(i)] = a;
    }
}

fn phase(state: &mut [C], f: impl Fn(usize) -> C) {
    for (i, a) in state.iter_mut().enumerate() {
        *a *= f(i);
    }
}

/// Unitary of a gate list on `n` qubits.
pub fn unitary(gates: &[LogicalGate], n: usize) -> Result<Matrix> {
    let dim = 1usize << n;
    let mut cols = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = vec![ZERO; dim];
        v[j] = ONE;
        for g in gates {
            apply_gate(&mut v, g)?;
        }
        cols.push(v);
    }
    Ok(Matrix::from_columns(&cols))
}

/// Tensor product with `low` on the low-order qubits.
pub fn kron_vec(low: &[C], high: &[C]) -> Vec<C> {
    let mut out = Vec::with_capacity(low.len() * high.len());
    for h in high {
        for l in low {
            out.push(l * h);
        }
    }
    out
}

/// Applies `Ry(theta) = exp(-i theta Y / 2)` to qubit `q`.
pub fn apply_ry(state: &mut [C], q: usize, theta: f64) {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let m = 1usize << q;
    for i in 0..state.len() {
        if i & m == 0 {
            let (a, b) = (state[i], state[i | m]);
            state[i] = a * c - b * s;
            state[i | m] = a * s + b * c;
        }
    }
}

/// Sampling simulator for logical circuits, including the idealized
/// `PrepRy`/`MeasRy` primitives. Preparations reset the qubit.
#[derive(Clone, Debug)]
pub struct LogicalSim {
    pub n: usize,
    pub state: Vec<C>,
}

impl LogicalSim {
    pub fn new(n: usize) -> Self {
        let mut state = vec![ZERO; 1 << n];
        state[0] = ONE;
        LogicalSim { n, state }
    }

    pub fn prob_one(&self, q: usize) -> f64 {
        self.state
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> q) & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects qubit `q` onto `outcome` and renormalizes.
    pub fn collapse(&mut self, q: usize, outcome: bool) {
        let p = if outcome {
            self.prob_one(q)
        } else {
            1.0 - self.prob_one(q)
        };
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.state.iter_mut().enumerate() {
            if ((i >> q) & 1 == 1) == outcome {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
    }

    fn measure_z<R: rand::Rng>(&mut self, q: usize, rng: &mut R) -> bool {
        let out = rng.gen::<f64>() < self.prob_one(q);
        self.collapse(q, out);
        out
    }

    fn reset(&mut self, q: usize, rng: &mut impl rand::Rng) {
        if self.measure_z(q, rng) {
            apply_gate(&mut self.state, &LogicalGate::new(GateKind::X, &[q])).expect("x");
        }
    }

    /// Executes one gate; measurements return their outcome (true for -1).
    pub fn step<R: rand::Rng>(&mut self, g: &LogicalGate, rng: &mut R) -> Result<Option<bool>> {
        let q = g.qubits[0];
        let h = LogicalGate::new(GateKind::H, &[q]);
        let s = LogicalGate::new(GateKind::S, &[q]);
        let z = LogicalGate::new(GateKind::Z, &[q]);
        match g.kind {
            GateKind::PrepZ => self.reset(q, rng),
            GateKind::PrepX => {
                self.reset(q, rng);
                apply_gate(&mut self.state, &h)?;
            }
            GateKind::PrepY => {
                self.reset(q, rng);
                apply_gate(&mut self.state, &h)?;
                apply_gate(&mut self.state, &s)?;
            }
            GateKind::PrepRy => {
                self.reset(q, rng);
                apply_ry(&mut self.state, q, g.angle.unwrap_or_default());
            }
            GateKind::MeasZ => return Ok(Some(self.measure_z(q, rng))),
            GateKind::MeasX => {
                apply_gate(&mut self.state, &h)?;
                let out = self.measure_z(q, rng);
                apply_gate(&mut self.state, &h)?;
                return Ok(Some(out));
            }
            GateKind::MeasY => {
                // S^3 = S^dagger
                apply_gate(&mut self.state, &s)?;
                apply_gate(&mut self.state, &z)?;
                apply_gate(&mut self.state, &h)?;
                let out = self.measure_z(q, rng);
                apply_gate(&mut self.state, &h)?;
                apply_gate(&mut self.state, &s)?;
                return Ok(Some(out));
            }
            GateKind::MeasRy => {
                let a = g.angle.unwrap_or_default();
                apply_ry(&mut self.state, q, -a);
                let out = self.measure_z(q, rng);
                apply_ry(&mut self.state, q, a);
                return Ok(Some(out));
            }
            _ => apply_gate(&mut self.state, g)?,
        }
        Ok(None)
    }

    /// Runs a whole circuit and returns the measurement outcomes in order.
    pub fn run<R: rand::Rng>(
        circuit: &crate::circuit::LogicalCircuit,
        rng: &mut R,
    ) -> Result<(Self, Vec<bool>)> {
        let mut sim = LogicalSim::new(circuit.n_qubits);
        let mut outs = Vec::new();
        for g in &circuit.gates {
            if let Some(o) = sim.step(g, rng)? {
                outs.push(o);
            }
        }
        Ok((sim, outs))
    }
}
