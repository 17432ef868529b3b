use std::f64::consts::FRAC_PI_8;

use crate::circuit::{GateKind, LogicalCircuit, LogicalGate};
use crate::error::{Error, Result};

/// Angle `a` with `Ry(a)|0> = |H> = cos(pi/8)|0> + sin(pi/8)|1>`.
pub const H_STATE_ANGLE: f64 = 2.0 * FRAC_PI_8;

/// Preparation angle of an imperfect catalyst whose squared overlap with
/// |H> is `gamma`.
pub fn catalyst_angle(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "catalyst overlap {gamma} outside (0, 1]"
        )));
    }
    Ok(2.0 * (FRAC_PI_8 + gamma.sqrt().acos()))
}

/// T on `q` using |H> on `c`: a controlled middle S of the catalyst's
/// S·H·S·H·S·H cycle, then an X-conjugated CZ removing the |0>-controlled Z.
pub fn catalytic_t(q: usize, c: usize) -> Vec<LogicalGate> {
    let g = LogicalGate::new;
    vec![
        g(GateKind::S, &[c]),
        g(GateKind::H, &[c]),
        g(GateKind::CS, &[q, c]),
        g(GateKind::H, &[c]),
        g(GateKind::S, &[c]),
        g(GateKind::X, &[q]),
        g(GateKind::CZ, &[q, c]),
        g(GateKind::X, &[q]),
    ]
}

/// Replaces every T by the catalytic fragment on a new catalyst qubit
/// appended at index `n_qubits`. The catalyst is prepared with overlap
/// `gamma` at the start and finally measured against |H> (outcome 0 means
/// it came back intact).
pub fn expand_catalytic_t(circuit: &LogicalCircuit, gamma: f64) -> Result<LogicalCircuit> {
    circuit.validate()?;
    if circuit.catalyst_qubit.is_some() {
        return Err(Error::InvalidArgument(
            "circuit already has a catalyst".into(),
        ));
    }
    if circuit.phase_qubit.is_some() {
        return Err(Error::InvalidArgument(
            "expand T before phase-reference encoding".into(),
        ));
    }
    let c = circuit.n_qubits;
    let mut out = LogicalCircuit::new(c + 1);
    out.catalyst_qubit = Some(c);
    out.gates.push(LogicalGate::with_angle(
        GateKind::PrepRy,
        c,
        catalyst_angle(gamma)?,
    ));
    for g in &circuit.gates {
        if g.kind == GateKind::T {
            out.gates.extend(catalytic_t(g.qubits[0], c));
        } else {
            out.gates.push(g.clone());
        }
    }
    out.gates
        .push(LogicalGate::with_angle(GateKind::MeasRy, c, H_STATE_ANGLE));
    Ok(out)
}
