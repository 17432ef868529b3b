use serde::{Deserialize, Serialize};

use crate::circuit::{BitExpr, PhysicalOp};
use crate::error::{Error, Result};
use crate::gadgets::{BlockHandle, Builder};
use crate::pauli::{Pauli, PauliString};

/// Measures the product of `terms` with an ancilla and a flag qubit.
/// Returns (outcome record index, flag record index).
///
/// Z-type products use the ancilla as CNOT target and a |+> flag; anything
/// else uses the ancilla as control of controlled-Pauli couplings and a |0> flag.
pub fn measure_flagged(
    b: &mut Builder,
    terms: &[(usize, Pauli)],
    anc: (usize, usize),
) -> Result<(usize, usize)> {
    let (a, f) = anc;
    if terms.iter().any(|&(q, _)| q == a || q == f) || a == f {
        return Err(Error::InvalidOperand(
            "ancilla overlaps measured qubits".into(),
        ));
    }
    let z_type = terms.iter().all(|&(_, l)| l == Pauli::Z);
    if z_type {
        b.push(PhysicalOp::PrepZero { q: a });
        b.push(PhysicalOp::PrepPlus { q: f });
        b.push(PhysicalOp::CX { c: f, t: a });
        for &(q, _) in terms {
            b.push(PhysicalOp::CX { c: q, t: a });
        }
        b.push(PhysicalOp::CX { c: f, t: a });
        let m = b.measure_z(a);
        let fl = b.measure_x(f);
        return Ok((m, fl));
    }
    b.push(PhysicalOp::PrepPlus { q: a });
    b.push(PhysicalOp::PrepZero { q: f });
    b.push(PhysicalOp::CX { c: a, t: f });
    for &(q, l) in terms {
        match l {
            Pauli::X => b.push(PhysicalOp::CX { c: a, t: q }),
            Pauli::Z => b.push(PhysicalOp::CZ { a, b: q }),
            Pauli::Y => {
                b.push(PhysicalOp::Sdg { q });
                b.push(PhysicalOp::CX { c: a, t: q });
                b.push(PhysicalOp::S { q });
            }
            Pauli::I => {}
        }
    }
    b.push(PhysicalOp::CX { c: a, t: f });
    let m = b.measure_x(a);
    let fl = b.measure_z(f);
    Ok((m, fl))
}

fn sign_flipped(p: &PauliString) -> bool {
    p.phase() == 2
}

/// Second representative: `rep` times the nontrivial stabilizer element of the
/// matching type giving the lowest weight (first one on ties).
fn second_representative(
    block: &BlockHandle,
    rep: &PauliString,
    basis: Pauli,
) -> Result<PauliString> {
    let mut best: Option<PauliString> = None;
    for s in block.spec().stabilizers.elements() {
        if s.is_identity_up_to_phase() {
            continue;
        }
        let ok = match basis {
            Pauli::X => s.is_x_type(),
            Pauli::Z => s.is_z_type(),
            _ => true,
        };
        if !ok {
            continue;
        }
        let cand = rep.multiply(&s)?;
        if best.as_ref().is_none_or(|b| cand.weight() < b.weight()) {
            best = Some(cand);
        }
    }
    best.ok_or_else(|| Error::Unsupported("no second representative".into()))
}

/// Fault-tolerant measurement of logical `basis` on logical `i`: two
/// measurements of different representatives, each flagged. Flags and
/// disagreement are detection events. Returns the outcome (true for -1).
pub fn ft_measure(
    b: &mut Builder,
    block: &BlockHandle,
    basis: Pauli,
    i: usize,
    anc: (usize, usize),
) -> Result<BitExpr> {
    block.check_logical(i)?;
    if basis == Pauli::I {
        return Err(Error::InvalidOperand("cannot measure the identity".into()));
    }
    let rep1 = block.spec().logical(basis, i);
    let rep2 = second_representative(block, &rep1, basis)?;
    let (m1, f1) = measure_flagged(b, &block.support(&rep1), anc)?;
    b.detect(BitExpr::bit(f1));
    let (m2, f2) = measure_flagged(b, &block.support(&rep2), anc)?;
    b.detect(BitExpr::bit(f2));
    let mut agree = BitExpr::xor(&[m1, m2]);
    if sign_flipped(&rep1) != sign_flipped(&rep2) {
        agree = agree.inverted();
    }
    b.detect(agree);
    let out = BitExpr::bit(m1);
    Ok(if sign_flipped(&rep1) {
        out.inverted()
    } else {
        out
    })
}

/// Target state of one logical qubit during preparation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogicalState {
    Zero,
    Plus,
    /// +1 eigenstate of Y.
    PlusI,
}

/// How a random stabilizer outcome during preparation is handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrepMode {
    /// Discard the shot unless the outcome is +1.
    PostSelect,
    /// Apply a weight-one destabilizer on -1.
    Correct,
}

/// Prepares a block in a product of logical Z, X or Y eigenstates.
pub fn prepare_logical(
    b: &mut Builder,
    block: &BlockHandle,
    states: &[LogicalState],
    mode: PrepMode,
    anc: (usize, usize),
) -> Result<()> {
    if states.len() != block.k() {
        return Err(Error::DimensionMismatch {
            left: block.k(),
            right: states.len(),
        });
    }
    for &q in &block.qubits {
        b.push(PhysicalOp::PrepZero { q });
    }
    let spec = block.spec();
    let x_gens: Vec<&PauliString> = spec
        .stabilizers
        .generators()
        .iter()
        .filter(|g| !g.is_z_type())
        .collect();
    for (gi, g) in x_gens.iter().enumerate() {
        let (m, f) = measure_flagged(b, &block.support(g), anc)?;
        b.detect(BitExpr::bit(f));
        match mode {
            PrepMode::PostSelect => b.detect(BitExpr::bit(m)),
            PrepMode::Correct => {
                let q = destabilizer_qubit(&x_gens, gi)
                    .ok_or_else(|| Error::Unsupported("no weight-one destabilizer".into()))?;
                b.cond_pauli(BitExpr::bit(m), Pauli::Z, vec![block.qubits[q]]);
            }
        }
    }
    for (i, s) in states.iter().enumerate() {
        let basis = match s {
            LogicalState::Zero => continue,
            LogicalState::Plus => Pauli::X,
            LogicalState::PlusI => Pauli::Y,
        };
        let e = ft_measure(b, block, basis, i, anc)?;
        b.cond_pauli(e, Pauli::Z, block.logical_support(Pauli::Z, i));
    }
    Ok(())
}

/// A qubit whose Z anticommutes with generator `gi` only.
fn destabilizer_qubit(x_gens: &[&PauliString], gi: usize) -> Option<usize> {
    let n = x_gens[gi].n();
    (0..n).find(|&q| {
        x_gens
            .iter()
            .enumerate()
            .all(|(j, g)| g.x_bit(q) == (j == gi))
    })
}

/// Ancilla usage during a stabilizer round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundStrategy {
    /// One ancilla pair reused for every generator.
    Sequential,
    /// One pair per block plus one shared pair.
    Mid,
    /// One pair per generator.
    Fast,
}

impl std::str::FromStr for RoundStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sequential" => Ok(Self::Sequential),
            "mid" => Ok(Self::Mid),
            "fast" => Ok(Self::Fast),
            _ => Err(Error::Parse {
                input: s.into(),
                reason: "expected sequential, mid or fast".into(),
            }),
        }
    }
}

impl std::fmt::Display for RoundStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Sequential => "sequential",
            Self::Mid => "mid",
            Self::Fast => "fast",
        })
    }
}

/// Measures every stabilizer generator of the block with flags, cycling
/// through the supplied ancilla pairs. Any -1 outcome or raised flag is a
/// detection event.
pub fn stabilizer_round(
    b: &mut Builder,
    block: &BlockHandle,
    pairs: &[(usize, usize)],
) -> Result<()> {
    if pairs.is_empty() {
        return Err(Error::AncillaBudget(
            "stabilizer round needs an ancilla pair".into(),
        ));
    }
    for (gi, g) in block.spec().stabilizers.generators().iter().enumerate() {
        let (m, f) = measure_flagged(b, &block.support(g), pairs[gi % pairs.len()])?;
        b.detect(BitExpr::bit(f));
        b.detect(BitExpr::bit(m));
    }
    Ok(())
}
