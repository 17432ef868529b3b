use std::collections::BTreeSet;

use crate::circuit::{BitExpr, PhysicalCircuit, PhysicalOp};
use crate::error::{Error, Result};
use crate::pauli::Pauli;

fn xor(a: &BitExpr, b: &BitExpr) -> BitExpr {
    let sa: BTreeSet<usize> = a.bits.iter().copied().collect();
    let sb: BTreeSet<usize> = b.bits.iter().copied().collect();
    BitExpr {
        bits: sa.symmetric_difference(&sb).copied().collect(),
        invert: a.invert ^ b.invert,
    }
}

/// Re-expresses a condition on tracked outcomes in raw record bits.
fn fix(e: &BitExpr, corr: &[BitExpr]) -> BitExpr {
    e.bits.iter().fold(e.clone(), |acc, &b| xor(&acc, &corr[b]))
}

fn is_zero(e: &BitExpr) -> bool {
    e.bits.is_empty() && !e.invert
}

/// Rewrites a circuit so that conditional Paulis are tracked classically:
/// they are propagated through Clifford ops and folded into later
/// measurement outcomes, detectors and outputs. Pending Paulis are applied
/// physically only before non-Clifford ops.
pub fn track_pauli_frame(circuit: &PhysicalCircuit) -> Result<PhysicalCircuit> {
    let n = circuit.n_physical;
    let mut fx = vec![BitExpr::default(); n];
    let mut fz = vec![BitExpr::default(); n];
    // Correction to add to each raw record bit to get the tracked outcome.
    let mut corr: Vec<BitExpr> = Vec::new();
    let mut out = PhysicalCircuit::new(n);
    let flush = |q: usize, fx: &mut [BitExpr], fz: &mut [BitExpr], out: &mut PhysicalCircuit| {
        for (f, pauli) in [(&mut fx[q], Pauli::X), (&mut fz[q], Pauli::Z)] {
            if !is_zero(f) {
                out.ops.push(PhysicalOp::CondPauli {
                    cond: std::mem::take(f),
                    pauli,
                    targets: vec![q],
                });
            }
        }
    };
    for op in &circuit.ops {
        match op {
            PhysicalOp::CondPauli {
                cond,
                pauli,
                targets,
            } => {
                let c = fix(cond, &corr);
                for &q in targets {
                    if matches!(pauli, Pauli::X | Pauli::Y) {
                        fx[q] = xor(&fx[q], &c);
                    }
                    if matches!(pauli, Pauli::Z | Pauli::Y) {
                        fz[q] = xor(&fz[q], &c);
                    }
                }
                continue;
            }
            PhysicalOp::Detect { cond } => {
                out.ops.push(PhysicalOp::Detect {
                    cond: fix(cond, &corr),
                });
                continue;
            }
            PhysicalOp::H { q } => std::mem::swap(&mut fx[*q], &mut fz[*q]),
            PhysicalOp::S { q } | PhysicalOp::Sdg { q } => fz[*q] = xor(&fz[*q], &fx[*q]),
            PhysicalOp::CX { c, t } => {
                fx[*t] = xor(&fx[*t], &fx[*c]);
                fz[*c] = xor(&fz[*c], &fz[*t]);
            }
            PhysicalOp::CZ { a, b } => {
                fz[*b] = xor(&fz[*b], &fx[*a]);
                fz[*a] = xor(&fz[*a], &fx[*b]);
            }
            PhysicalOp::PrepZero { q } | PhysicalOp::PrepPlus { q } | PhysicalOp::Reset { q } => {
                fx[*q] = BitExpr::default();
                fz[*q] = BitExpr::default();
            }
            PhysicalOp::MeasZ { q } => corr.push(fx[*q].clone()),
            PhysicalOp::MeasX { q } => corr.push(fz[*q].clone()),
            PhysicalOp::Relabel { qubits, perm } => {
                let (ox, oz): (Vec<BitExpr>, Vec<BitExpr>) = qubits
                    .iter()
                    .map(|&q| (fx[q].clone(), fz[q].clone()))
                    .unzip();
                for (i, &dst) in perm.mapping().iter().enumerate() {
                    let q = *qubits
                        .get(dst)
                        .ok_or_else(|| Error::InvalidOperand("relabel target".into()))?;
                    fx[q] = ox[i].clone();
                    fz[q] = oz[i].clone();
                }
            }
            PhysicalOp::T { q } | PhysicalOp::Tdg { q } => flush(*q, &mut fx, &mut fz, &mut out),
            PhysicalOp::IdealRotation { qubits, .. } => {
                for &q in qubits {
                    flush(q, &mut fx, &mut fz, &mut out);
                }
            }
            PhysicalOp::X { .. }
            | PhysicalOp::Z { .. }
            | PhysicalOp::Fault { .. }
            | PhysicalOp::Label { .. } => {}
        }
        out.ops.push(op.clone());
    }
    out.outputs = circuit
        .outputs
        .iter()
        .map(|o| {
            let mut o = o.clone();
            o.expr = fix(&o.expr, &corr);
            o
        })
        .collect();
    out.metadata = circuit.metadata.clone();
    out.refresh_counts();
    Ok(out)
}
