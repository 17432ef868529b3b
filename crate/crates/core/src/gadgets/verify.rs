//! Logical-level checks of physical fragments: Heisenberg propagation of
//! logical Paulis for Clifford fragments and encoded-unitary extraction by
//! state-vector simulation for anything else.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{PhysicalCircuit, PhysicalOp};
use crate::codes::LogicalAction;
use crate::dense::{kron_vec, Matrix};
use crate::error::{Error, Result};
use crate::gadgets::BlockHandle;
use crate::pauli::{Membership, Pauli, PauliString, StabilizerGroup};
use crate::sim::{
    check_single_faults_from, projected_fidelity, Executor, FaultReport, NoiseModel, SimState,
};

/// Several blocks viewed as one code on `n` physical qubits. Logical qubits
/// are numbered block by block.
#[derive(Clone, Debug)]
pub struct BlockSet {
    pub n: usize,
    pub blocks: Vec<BlockHandle>,
    group: StabilizerGroup,
    logical_x: Vec<PauliString>,
    logical_z: Vec<PauliString>,
}

impl BlockSet {
    pub fn new(n: usize, blocks: Vec<BlockHandle>) -> Result<Self> {
        let mut gens = Vec::new();
        let mut lx = Vec::new();
        let mut lz = Vec::new();
        for b in &blocks {
            let spec = b.spec();
            for g in spec.stabilizers.generators() {
                gens.push(g.embed(n, &b.qubits));
            }
            for i in 0..spec.k {
                lx.push(spec.logical_x[i].embed(n, &b.qubits));
                lz.push(spec.logical_z[i].embed(n, &b.qubits));
            }
        }
        Ok(BlockSet {
            n,
            blocks,
            group: StabilizerGroup::new(gens)?,
            logical_x: lx,
            logical_z: lz,
        })
    }

    pub fn k(&self) -> usize {
        self.logical_x.len()
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        self.group.generators()
    }

    pub fn logical(&self, basis: Pauli, i: usize) -> PauliString {
        match basis {
            Pauli::X => self.logical_x[i].clone(),
            Pauli::Z => self.logical_z[i].clone(),
            Pauli::Y => {
                let p = self.logical_x[i]
                    .multiply(&self.logical_z[i])
                    .expect("same width");
                let ph = p.phase();
                p.with_phase(ph + 1)
            }
            Pauli::I => PauliString::identity(self.n),
        }
    }

    fn lift(&self, logical: &PauliString) -> PauliString {
        let mut acc = PauliString::identity(self.n).with_phase(logical.phase());
        for i in 0..self.k() {
            let (x, z) = logical.get(i).bits();
            if x {
                acc = acc.multiply(&self.logical_x[i]).expect("same width");
            }
            if z {
                acc = acc.multiply(&self.logical_z[i]).expect("same width");
            }
            if x && z {
                let ph = acc.phase();
                acc = acc.with_phase(ph + 1);
            }
        }
        acc
    }

    /// Logical image of a physical Pauli, or `None` if it leaves the codespace
    /// or is not a logical operator times a stabilizer.
    pub fn decode(&self, p: &PauliString) -> Result<Option<PauliString>> {
        for g in self.group.generators() {
            if !g.commutes(p)? {
                return Ok(None);
            }
        }
        let letters: Vec<Pauli> = (0..self.k())
            .map(|i| {
                let x = !p.commutes(&self.logical_z[i]).expect("same width");
                let z = !p.commutes(&self.logical_x[i]).expect("same width");
                Pauli::from_bits(x, z)
            })
            .collect();
        let base = PauliString::from_letters(&letters);
        let lifted = self.lift(&base);
        let rest = p.multiply(&lifted.adjoint())?;
        Ok(match self.group.membership(&rest)? {
            Membership::Plus => Some(base),
            Membership::Minus => Some(base.negate()),
            Membership::NotMember => None,
        })
    }

    pub fn is_stabilizer(&self, p: &PauliString) -> Result<bool> {
        Ok(self.group.membership(p)? == Membership::Plus)
    }

    /// Qubit order for dense states: block qubits in block order.
    pub fn order(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .flat_map(|b| b.qubits.iter().copied())
            .collect()
    }

    /// Encoded logical basis state; bit `i` of `index` is logical qubit `i`.
    pub fn encode_basis(&self, index: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(1.0, 0.0)];
        let mut offset = 0;
        for b in &self.blocks {
            let spec = b.spec();
            let bits: Vec<bool> = (0..spec.k)
                .map(|i| (index >> (offset + i)) & 1 == 1)
                .collect();
            out = kron_vec(&out, &spec.encode_basis_state(&bits));
            offset += spec.k;
        }
        out
    }

    /// Simulator state on `n` qubits holding the encoded `logical` state.
    pub fn initial_state(&self, n: usize, cap: usize, logical: &[Complex64]) -> Result<SimState> {
        SimState::from_dense(n, cap, &self.order(), self.encode(logical))
    }

    /// Encodes a logical state vector over all `k` logical qubits.
    pub fn encode(&self, logical: &[Complex64]) -> Vec<Complex64> {
        let dim = 1usize << self.order().len();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (idx, c) in logical.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.encode_basis(idx)) {
                *o += c * a;
            }
        }
        out
    }
}

/// Heisenberg image `U P U^dagger` through Clifford ops; `None` if a
/// non-Clifford or non-unitary op is met.
pub fn propagate(ops: &[PhysicalOp], p: &PauliString) -> Result<Option<PauliString>> {
    let mut p = p.clone();
    for op in ops {
        match op {
            PhysicalOp::H { q } => p.conj_h(*q),
            PhysicalOp::S { q } => p.conj_s(*q),
            PhysicalOp::Sdg { q } => p.conj_sdg(*q),
            PhysicalOp::X { q } => p.conj_x(*q),
            PhysicalOp::Z { q } => p.conj_z(*q),
            PhysicalOp::CX { c, t } => p.conj_cx(*c, *t),
            PhysicalOp::CZ { a, b } => p.conj_cz(*a, *b),
            PhysicalOp::Relabel { qubits, perm } => {
                let mut next = p.clone();
                for (i, &m) in perm.mapping().iter().enumerate() {
                    next.set(qubits[m], p.get(qubits[i]));
                }
                p = next;
            }
            PhysicalOp::Label { .. } => {}
            _ => return Ok(None),
        }
    }
    Ok(Some(p))
}

/// Logical action of a Clifford fragment on a block set, or `None` if it
/// does not map the codespace to itself.
pub fn logical_action(ops: &[PhysicalOp], set: &BlockSet) -> Result<Option<LogicalAction>> {
    for g in set.stabilizers() {
        match propagate(ops, g)? {
            Some(img) if set.is_stabilizer(&img)? => {}
            _ => return Ok(None),
        }
    }
    let mut xs = Vec::new();
    let mut zs = Vec::new();
    for i in 0..set.k() {
        for (basis, out) in [(Pauli::X, &mut xs), (Pauli::Z, &mut zs)] {
            let Some(img) = propagate(ops, &set.logical(basis, i))? else {
                return Ok(None);
            };
            let Some(l) = set.decode(&img)? else {
                return Ok(None);
            };
            out.push(l);
        }
    }
    Ok(Some(LogicalAction {
        x_images: xs,
        z_images: zs,
    }))
}

/// Matrix `M[b'][b] = <enc(b')| C |enc(b)>` of a measurement-free fragment,
/// plus the worst-case probability leaking out of the codespace.
pub fn encoded_unitary(
    circuit: &PhysicalCircuit,
    set: &BlockSet,
    cap: usize,
) -> Result<(Matrix, f64)> {
    let order = set.order();
    let dim = 1usize << set.k();
    let basis: Vec<Vec<Complex64>> = (0..dim).map(|b| set.encode_basis(b)).collect();
    let noise = NoiseModel::noiseless();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut cols = Vec::with_capacity(dim);
    let mut leak: f64 = 0.0;
    for input in &basis {
        let state = SimState::from_dense(circuit.n_physical, cap, &order, input.clone())?;
        let mut ex = Executor::with_state(circuit, state)?;
        while !ex.finished() {
            if ex.next_is_branching() {
                return Err(Error::Unsupported(
                    "fragment has a random measurement".into(),
                ));
            }
            ex.step(&noise, &mut rng, None)?;
        }
        let out = ex.state.full_state(&order);
        let col: Vec<Complex64> = basis
            .iter()
            .map(|e| e.iter().zip(&out).map(|(a, b)| a.conj() * b).sum())
            .collect();
        let kept: f64 = col.iter().map(|c| c.norm_sqr()).sum();
        leak = leak.max(1.0 - kept);
        cols.push(col);
    }
    Ok((Matrix::from_columns(&cols), leak))
}

/// Exhaustive single-fault check of a fragment acting on `set`, starting
/// from `init`. `expected` maps the measurement record to the ideal logical
/// output. An accepted branch counts as wrong only if it has nonzero codespace
/// weight and its codespace part differs from the ideal.
pub fn fault_check<F>(
    circuit: &PhysicalCircuit,
    set: &BlockSet,
    init: &SimState,
    expected: F,
) -> Result<FaultReport>
where
    F: Fn(&[bool]) -> Vec<Complex64> + Sync,
{
    let order = set.order();
    let stabs: Vec<PauliString> = set
        .stabilizers()
        .iter()
        .map(|s| s.restrict(&order))
        .collect();
    check_single_faults_from(circuit, init, |ex| {
        let actual = ex.state.full_state(&order);
        let ideal = set.encode(&expected(&ex.record));
        let (w, f) = projected_fidelity(&actual, &ideal, &stabs);
        w < CODESPACE_TOL || f > 1.0 - FIDELITY_TOL
    })
}

/// Codespace weight below which a state counts as detectably corrupted.
pub const CODESPACE_TOL: f64 = 1e-9;
/// Allowed infidelity of an accepted state.
pub const FIDELITY_TOL: f64 = 1e-9;
