use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::stats::Twirl;
use crate::circuit::{Basis, GateKind, LogicalCircuit, LogicalGate};
use crate::error::{Error, Result};
use crate::sim::shot_rng;

/// A mirror circuit `L1^-1 ... Ld/2^-1 Ld/2 ... L1` given by its forward layers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MirrorSpec {
    pub w: usize,
    pub d: usize,
    /// Target number of teleportations.
    pub eta: usize,
    pub layers: Vec<Vec<LogicalGate>>,
    pub seed: u64,
}

/// Gates whose product is the inverse of `g`.
pub fn invert_gate(g: &LogicalGate) -> Result<Vec<LogicalGate>> {
    use GateKind::*;
    let copies = match g.kind {
        X | Z | H | CX | CZ | CCZ | SWAP => 1,
        S | CS => 3,
        T => 7,
        k => {
            return Err(Error::Unsupported(format!(
                "{k:?} has no inverse within the gate set"
            )))
        }
    };
    Ok(vec![g.clone(); copies])
}

/// Gate sequence of the mirror, without preparations or measurements.
pub fn make_mirror(spec: &MirrorSpec) -> Result<LogicalCircuit> {
    if !spec.d.is_multiple_of(2) || spec.layers.len() != spec.d / 2 {
        return Err(Error::InvalidArgument(format!(
            "depth {} needs {} forward layers, got {}",
            spec.d,
            spec.d / 2,
            spec.layers.len()
        )));
    }
    let mut c = LogicalCircuit::new(spec.w);
    for layer in &spec.layers {
        c.gates.extend(layer.iter().cloned());
    }
    for layer in spec.layers.iter().rev() {
        for g in layer.iter().rev() {
            c.gates.extend(invert_gate(g)?);
        }
    }
    c.validate()?;
    Ok(c)
}

/// Random in-block layers of CX/CZ/CCZ, relabels and Paulis. `eta / 4`
/// forward layers also carry one Hadamard, placed last so that it is never
/// batched with a neighbour; each such H costs two teleports on the way out
/// and two on the way back.
pub fn random_mirror(w: usize, d: usize, eta: usize, seed: u64) -> Result<MirrorSpec> {
    if w == 0 || !d.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "need w >= 1 and even d, got w = {w}, d = {d}"
        )));
    }
    if !eta.is_multiple_of(4) || eta / 4 > d / 2 {
        return Err(Error::InvalidArgument(format!(
            "hardness {eta} is not a multiple of 4 reachable with depth {d}"
        )));
    }
    let mut rng = shot_rng(seed, u64::MAX);
    let mut h_layers: Vec<usize> = (0..d / 2).collect();
    h_layers.shuffle(&mut rng);
    h_layers.truncate(eta / 4);
    let blocks: Vec<Vec<usize>> = (0..w)
        .collect::<Vec<_>>()
        .chunks(3)
        .map(|c| c.to_vec())
        .collect();
    let mut layers = Vec::with_capacity(d / 2);
    for i in 0..d / 2 {
        let h = h_layers.contains(&i).then(|| rng.gen_range(0..w));
        let mut layer = Vec::new();
        for block in &blocks {
            let rest: Vec<usize> = block.iter().copied().filter(|&q| Some(q) != h).collect();
            layer.extend(block_gates(&rest, &mut rng));
        }
        if let Some(q) = h {
            layer.push(LogicalGate::new(GateKind::H, &[q]));
        }
        layers.push(layer);
    }
    Ok(MirrorSpec {
        w,
        d,
        eta,
        layers,
        seed,
    })
}

/// Gates covering every qubit of `qs` once.
fn block_gates<R: Rng>(qs: &[usize], rng: &mut R) -> Vec<LogicalGate> {
    let pauli = |q: usize, rng: &mut R| {
        let k = if rng.gen() { GateKind::X } else { GateKind::Z };
        LogicalGate::new(k, &[q])
    };
    let mut qs = qs.to_vec();
    qs.shuffle(rng);
    match qs.len() {
        0 => vec![],
        1 => vec![pauli(qs[0], rng)],
        n => {
            if n == 3 && rng.gen_bool(0.5) {
                return vec![LogicalGate::new(GateKind::CCZ, &qs)];
            }
            let kind = [GateKind::CX, GateKind::CZ, GateKind::SWAP][rng.gen_range(0..3)];
            let mut out = vec![LogicalGate::new(kind, &qs[..2])];
            out.extend(qs[2..].iter().map(|&q| pauli(q, rng)));
            out
        }
    }
}

fn prep_kind(b: Basis) -> GateKind {
    match b {
        Basis::X => GateKind::PrepX,
        Basis::Y => GateKind::PrepY,
        Basis::Z => GateKind::PrepZ,
    }
}

fn meas_kind(b: Basis) -> GateKind {
    match b {
        Basis::X => GateKind::MeasX,
        Basis::Y => GateKind::MeasY,
        Basis::Z => GateKind::MeasZ,
    }
}

/// Twirled preparation, the mirror body, and readout in the same bases.
/// A set sign bit flips the prepared eigenstate with X (Z basis) or Z.
pub fn twirled_circuit(body: &LogicalCircuit, twirl: &[Twirl]) -> Result<LogicalCircuit> {
    if twirl.len() != body.n_qubits {
        return Err(Error::DimensionMismatch {
            left: body.n_qubits,
            right: twirl.len(),
        });
    }
    let mut c = LogicalCircuit::new(body.n_qubits);
    for (q, t) in twirl.iter().enumerate() {
        c.push(prep_kind(t.basis), &[q]);
        if t.bit {
            let flip = if t.basis == Basis::Z {
                GateKind::X
            } else {
                GateKind::Z
            };
            c.push(flip, &[q]);
        }
    }
    c.gates.extend(body.gates.iter().cloned());
    for (q, t) in twirl.iter().enumerate() {
        c.push(meas_kind(t.basis), &[q]);
    }
    Ok(c)
}

/// Mirror body followed by measurements in `bases`, for runs that start
/// from an injected input state.
pub fn readout_circuit(body: &LogicalCircuit, bases: &[Basis]) -> LogicalCircuit {
    let mut c = body.clone();
    for (q, &b) in bases.iter().enumerate() {
        c.push(meas_kind(b), &[q]);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_is_palindromic_and_has_depth_d() {
        let spec = random_mirror(3, 6, 4, 11).unwrap();
        let c = make_mirror(&spec).unwrap();
        assert_eq!(c.depth(), 6);
        let n = c.gates.len();
        for i in 0..n / 2 {
            assert_eq!(c.gates[i], c.gates[n - 1 - i]);
        }
        assert_eq!(c.gates.iter().filter(|g| g.kind == GateKind::H).count(), 2);
        assert!(random_mirror(3, 6, 6, 1).is_err());
        assert!(random_mirror(3, 5, 0, 1).is_err());
    }

    #[test]
    fn empty_mirror() {
        let spec = random_mirror(2, 0, 0, 3).unwrap();
        assert!(make_mirror(&spec).unwrap().gates.is_empty());
    }

    #[test]
    fn plain_z_twirl_is_a_bare_preparation() {
        let body = LogicalCircuit::new(1);
        let t = [Twirl {
            basis: Basis::Z,
            bit: false,
        }];
        let c = twirled_circuit(&body, &t).unwrap();
        assert_eq!(c.gates[0], LogicalGate::new(GateKind::PrepZ, &[0]));
        assert_eq!(c.gates.len(), 2);
    }

    #[test]
    fn inverses() {
        let s = LogicalGate::new(GateKind::S, &[0]);
        assert_eq!(invert_gate(&s).unwrap().len(), 3);
        assert!(invert_gate(&LogicalGate::new(GateKind::MeasZ, &[0])).is_err());
    }
}
