use crate::circuit::{GateKind, LogicalCircuit, LogicalGate};
use crate::dense::C;
use crate::error::{Error, Result};

/// Real-gate fragment for `S` on `q` with phase qubit `p`: on |1>_q the
/// phase qubit picks up `-iY = XZ`.
pub fn encode_s(q: usize, p: usize) -> Vec<LogicalGate> {
    vec![
        LogicalGate::new(GateKind::CZ, &[q, p]),
        LogicalGate::new(GateKind::CX, &[q, p]),
    ]
}

/// Fragment for `S^dagger`: `+iY = ZX` on the phase qubit.
pub fn encode_sdg(q: usize, p: usize) -> Vec<LogicalGate> {
    vec![
        LogicalGate::new(GateKind::CX, &[q, p]),
        LogicalGate::new(GateKind::CZ, &[q, p]),
    ]
}

/// Fragment for controlled-S on `(c, t)`: a doubly controlled `-iY` on `p`
/// from two CCZ gates around H on `p`.
pub fn encode_cs(c: usize, t: usize, p: usize) -> Vec<LogicalGate> {
    let ccz = LogicalGate::new(GateKind::CCZ, &[p, c, t]);
    let h = LogicalGate::new(GateKind::H, &[p]);
    vec![ccz.clone(), h.clone(), ccz, h]
}

/// Rewrites a circuit over {Clifford, CS} into real gates plus one extra
/// phase qubit appended at index `n_qubits`.
///
/// With `direct_y`, Y-basis preparations and measurements pass through
/// untouched; this is only sound while the phase qubit stays disentangled,
/// so circuits that also contain phase gates are rejected.
pub fn encode_phase_ref_with(circuit: &LogicalCircuit, direct_y: bool) -> Result<LogicalCircuit> {
    circuit.validate()?;
    if circuit.phase_qubit.is_some() {
        return Err(Error::InvalidArgument(
            "circuit is already phase-reference encoded".into(),
        ));
    }
    let has_phase = circuit.gates.iter().any(|g| g.kind.is_phase_gate());
    if direct_y && has_phase {
        return Err(Error::Unsupported(
            "direct Y-basis primitives next to phase gates".into(),
        ));
    }
    let p = circuit.n_qubits;
    let mut out = LogicalCircuit::new(circuit.n_qubits + 1);
    out.phase_qubit = Some(p);
    out.catalyst_qubit = circuit.catalyst_qubit;
    for g in &circuit.gates {
        let q = &g.qubits;
        match g.kind {
            GateKind::S => out.gates.extend(encode_s(q[0], p)),
            GateKind::CS => out.gates.extend(encode_cs(q[0], q[1], p)),
            GateKind::T => {
                return Err(Error::Unsupported(
                    "T must be expanded with a catalyst first".into(),
                ));
            }
            GateKind::PrepY if !direct_y => {
                out.gates.push(LogicalGate::new(GateKind::PrepX, q));
                out.gates.extend(encode_s(q[0], p));
            }
            GateKind::MeasY if !direct_y => {
                out.gates.extend(encode_sdg(q[0], p));
                out.gates.push(LogicalGate::new(GateKind::MeasX, q));
            }
            _ => out.gates.push(g.clone()),
        }
    }
    Ok(out)
}

pub fn encode_phase_ref(circuit: &LogicalCircuit) -> Result<LogicalCircuit> {
    encode_phase_ref_with(circuit, false)
}

/// Inverse of the encoding on state vectors: `|0>_p a + |1>_p b  ->  a + i b`,
/// removing qubit `p` from the index.
pub fn contract_phase_ref(state: &[C], p: usize) -> Vec<C> {
    let low = (1usize << p) - 1;
    (0..state.len() / 2)
        .map(|j| {
            let i0 = (j & low) | ((j & !low) << 1);
            state[i0] + C::new(0.0, 1.0) * state[i0 | (1 << p)]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{unitary, Matrix};

    #[test]
    fn cs_fragment_matrix() {
        // Index p*4 + c*2 + t, i.e. t = qubit 0, c = qubit 1, p = qubit 2.
        let u = unitary(&encode_cs(1, 0, 2), 3).unwrap();
        let mut want = Matrix::identity(8);
        want.data[3 * 8 + 3] = C::new(0.0, 0.0);
        want.data[7 * 8 + 7] = C::new(0.0, 0.0);
        want.data[3 * 8 + 7] = C::new(-1.0, 0.0);
        want.data[7 * 8 + 3] = C::new(1.0, 0.0);
        assert!(u.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn s_fragment_has_order_four() {
        let s = unitary(&encode_s(0, 1), 2).unwrap();
        let s4 = s.mul(&s).mul(&s).mul(&s);
        assert!(s4.max_abs_diff(&Matrix::identity(4)) < 1e-12);
        assert!(s.mul(&s).max_abs_diff(&Matrix::identity(4)) > 1.0);
        let sdg = unitary(&encode_sdg(0, 1), 2).unwrap();
        assert!(s.mul(&sdg).max_abs_diff(&Matrix::identity(4)) < 1e-12);
    }

    #[test]
    fn contraction_of_encoded_state() {
        let psi = [C::new(0.6, 0.0), C::new(0.0, 0.8)];
        let enc = [psi[0].re, psi[1].re, psi[0].im, psi[1].im].map(|x| C::new(x, 0.0));
        let back = contract_phase_ref(&enc, 1);
        assert!((back[0] - psi[0]).norm() < 1e-12 && (back[1] - psi[1]).norm() < 1e-12);
        // Phase qubit in the middle of the register.
        let mut st = vec![C::new(0.0, 0.0); 8];
        st[0b010] = C::new(1.0, 0.0);
        assert_eq!(contract_phase_ref(&st, 1)[0], C::new(0.0, 1.0));
    }

    #[test]
    fn real_circuits_only_gain_an_idle_qubit() {
        let mut c = LogicalCircuit::new(2);
        c.push(GateKind::H, &[0])
            .push(GateKind::CX, &[0, 1])
            .push(GateKind::MeasZ, &[1]);
        let e = encode_phase_ref(&c).unwrap();
        assert_eq!(e.n_qubits, 3);
        assert_eq!(e.phase_qubit, Some(2));
        assert_eq!(e.gates, c.gates);
        let mut t = LogicalCircuit::new(1);
        t.push(GateKind::T, &[0]);
        assert!(encode_phase_ref(&t).is_err());
    }
}
