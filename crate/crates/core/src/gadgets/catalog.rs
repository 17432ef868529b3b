//! Named gadget instances on fixed qubits, for emission and fault checks.

use num_complex::Complex64;
use rand::Rng;

use super::verify::{fault_check, BlockSet};
use super::*;
use crate::circuit::{GateKind, LogicalGate};
use crate::dense::{apply_gate, kron_vec};
use crate::sim::{shot_rng, FaultReport, SimState, DEFAULT_CAPACITY};

type C = Complex64;

/// (name, description, has an exhaustive fault check)
pub const GADGETS: &[(&str, &str, bool)] = &[
    (
        "ft_measure_x_832",
        "flagged logical X measurement on [[8,3,2]]",
        true,
    ),
    (
        "ft_measure_y_832",
        "flagged logical Y measurement on [[8,3,2]]",
        true,
    ),
    (
        "ft_measure_z_832",
        "flagged logical Z measurement on [[8,3,2]]",
        true,
    ),
    (
        "ft_measure_x_422",
        "flagged logical X measurement on [[4,2,2]]",
        true,
    ),
    (
        "ft_measure_y_422",
        "flagged logical Y measurement on [[4,2,2]]",
        true,
    ),
    (
        "ft_measure_z_422",
        "flagged logical Z measurement on [[4,2,2]]",
        true,
    ),
    (
        "stabilizer_round_832",
        "one round of flagged stabilizer checks",
        true,
    ),
    (
        "stabilizer_round_422",
        "one round of flagged stabilizer checks",
        true,
    ),
    ("prepare_832", "prepare |+>|0>|+i> on [[8,3,2]]", true),
    ("prepare_422", "prepare |0>|+> on [[4,2,2]]", true),
    (
        "teleport_x",
        "move logical 0 from [[8,3,2]] to [[4,2,2]]",
        true,
    ),
    (
        "teleport_z",
        "move logical 0 from [[4,2,2]] back to [[8,3,2]]",
        true,
    ),
    (
        "teleport_hadamard",
        "logical H by a round trip through [[4,2,2]]",
        true,
    ),
    (
        "logical_ccz",
        "transversal T/T-dagger CCZ on [[8,3,2]]",
        false,
    ),
    ("logical_cz", "CZ on logicals 0,1 of [[8,3,2]]", false),
    ("in_block_cnot", "CNOT 0->1 inside [[8,3,2]]", false),
    (
        "cnot3",
        "transversal CNOT between two [[8,3,2]] blocks",
        false,
    ),
    (
        "targeted_cnot",
        "CNOT between logical 0 of two [[8,3,2]] blocks",
        false,
    ),
    ("transversal_h_422", "transversal H on [[4,2,2]]", false),
];

struct Case {
    circuit: PhysicalCircuit,
    set: BlockSet,
    init: SimState,
    /// Maps the measurement record to the ideal logical state.
    expected: Box<dyn Fn(&[bool]) -> Vec<C> + Sync>,
}

fn random_state(nq: usize, seed: u64) -> Vec<C> {
    let mut rng = shot_rng(seed, 99);
    normalize(
        (0..1 << nq)
            .map(|_| C::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect(),
    )
}

fn normalize(mut v: Vec<C>) -> Vec<C> {
    let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= n);
    v
}

fn zero() -> Vec<C> {
    vec![C::new(1.0, 0.0), C::new(0.0, 0.0)]
}

fn plus() -> Vec<C> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    vec![C::new(r, 0.0), C::new(r, 0.0)]
}

fn gates(v: &[C], gs: &[(GateKind, &[usize])]) -> Vec<C> {
    let mut v = v.to_vec();
    for (k, q) in gs {
        apply_gate(&mut v, &LogicalGate::new(*k, q)).expect("valid gate");
    }
    v
}

/// Projection onto the `(-1)^outcome` eigenspace of a one-qubit logical Pauli.
fn project(v: &[C], basis: Pauli, q: usize, k: usize, outcome: bool) -> Vec<C> {
    let pv = PauliString::from_support(k, basis, &[q]).apply_to_state(v);
    let s = if outcome { -1.0 } else { 1.0 };
    normalize(v.iter().zip(pv).map(|(a, b)| (a + b * s) * 0.5).collect())
}

fn code_of(name: &str) -> CodeKind {
    if name.ends_with("422") {
        CodeKind::C422
    } else {
        CodeKind::C832
    }
}

fn case(name: &str) -> Result<Case> {
    let code = code_of(name);
    let n = code.n();
    let blk = BlockHandle::contiguous(code, 0);
    let anc = (n, n + 1);
    if let Some(rest) = name.strip_prefix("ft_measure_") {
        let basis = match rest.as_bytes()[0] {
            b'x' => Pauli::X,
            b'y' => Pauli::Y,
            _ => Pauli::Z,
        };
        let mut b = Builder::new(n + 2);
        let e = ft_measure(&mut b, &blk, basis, 0, anc)?;
        let set = BlockSet::new(n + 2, vec![blk])?;
        let input = random_state(code.k(), 3);
        let init = set.initial_state(n + 2, DEFAULT_CAPACITY, &input)?;
        let k = code.k();
        return Ok(Case {
            circuit: b.finish(),
            set,
            init,
            expected: Box::new(move |rec| project(&input, basis, 0, k, e.eval(rec))),
        });
    }
    if name.starts_with("stabilizer_round_") {
        let mut b = Builder::new(n + 2);
        stabilizer_round(&mut b, &blk, &[anc])?;
        let set = BlockSet::new(n + 2, vec![blk])?;
        let input = random_state(code.k(), 5);
        let init = set.initial_state(n + 2, DEFAULT_CAPACITY, &input)?;
        return Ok(Case {
            circuit: b.finish(),
            set,
            init,
            expected: Box::new(move |_| input.clone()),
        });
    }
    if name.starts_with("prepare_") {
        use LogicalState::*;
        let states: &[LogicalState] = if code == CodeKind::C832 {
            &[Plus, Zero, PlusI]
        } else {
            &[Zero, Plus]
        };
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let want = states.iter().fold(vec![C::new(1.0, 0.0)], |acc, s| {
            let v = match s {
                Zero => zero(),
                Plus => plus(),
                PlusI => vec![C::new(r, 0.0), C::new(0.0, r)],
            };
            kron_vec(&acc, &v)
        });
        let mut b = Builder::new(n + 2);
        prepare_logical(&mut b, &blk, states, PrepMode::Correct, anc)?;
        return Ok(Case {
            circuit: b.finish(),
            set: BlockSet::new(n + 2, vec![blk])?,
            init: SimState::new(n + 2, DEFAULT_CAPACITY),
            expected: Box::new(move |_| want.clone()),
        });
    }
    let a = BlockHandle::contiguous(CodeKind::C832, 0);
    let t = BlockHandle::contiguous(CodeKind::C422, 8);
    let set = BlockSet::new(14, vec![a.clone(), t.clone()])?;
    let mut b = Builder::new(14);
    match name {
        "teleport_x" => {
            let input = kron_vec(&random_state(3, 7), &kron_vec(&zero(), &plus()));
            let want = gates(&input, &[(GateKind::SWAP, &[0, 3]), (GateKind::H, &[0])]);
            teleport_x(&mut b, &a, 0, &t, 0, (12, 13))?;
            let init = set.initial_state(14, DEFAULT_CAPACITY, &input)?;
            Ok(Case {
                circuit: b.finish(),
                set,
                init,
                expected: Box::new(move |_| want.clone()),
            })
        }
        "teleport_z" => {
            // Logical 0 of the 832 block starts in |+>, the moved state sits on 422 logical 0.
            let chi = random_state(3, 11);
            let input: Vec<C> = (0..32usize)
                .map(|idx| chi[(idx >> 1) & 7] * plus()[idx & 1] * plus()[idx >> 4])
                .collect();
            let want = gates(&input, &[(GateKind::SWAP, &[0, 3]), (GateKind::H, &[3])]);
            teleport_z(&mut b, &t, 0, &a, 0, (12, 13))?;
            let init = set.initial_state(14, DEFAULT_CAPACITY, &input)?;
            Ok(Case {
                circuit: b.finish(),
                set,
                init,
                expected: Box::new(move |_| want.clone()),
            })
        }
        "teleport_hadamard" => {
            let psi = random_state(3, 17);
            let want = kron_vec(
                &gates(&psi, &[(GateKind::H, &[0])]),
                &kron_vec(&zero(), &plus()),
            );
            teleport_hadamard(&mut b, &a, &[0], &t, PrepMode::Correct, (12, 13))?;
            let init = SimState::from_dense(
                14,
                DEFAULT_CAPACITY,
                &a.qubits,
                CodeKind::C832.spec().encode_state(&psi),
            )?;
            Ok(Case {
                circuit: b.finish(),
                set,
                init,
                expected: Box::new(move |_| want.clone()),
            })
        }
        _ => Err(Error::InvalidArgument(format!(
            "no fault check for gadget '{name}'"
        ))),
    }
}

/// Physical circuit of a named gadget.
pub fn build_gadget(name: &str) -> Result<PhysicalCircuit> {
    let a = BlockHandle::contiguous(CodeKind::C832, 0);
    let a2 = BlockHandle::contiguous(CodeKind::C832, 8);
    let mut b = Builder::new(8);
    match name {
        "logical_ccz" => logical_ccz(&mut b, &a)?,
        "logical_cz" => logical_cz(&mut b, &a, 0, 1, 0)?,
        "in_block_cnot" => in_block_cnot(&mut b, &a, 0, 1)?,
        "transversal_h_422" => {
            b = Builder::new(4);
            transversal_h_422(&mut b, &BlockHandle::contiguous(CodeKind::C422, 0))?
        }
        "cnot3" | "targeted_cnot" => {
            b = Builder::new(16);
            if name == "cnot3" {
                cnot3(&mut b, &a, &a2)?
            } else {
                targeted_cnot(&mut b, &a, 0, &a2, 0)?
            }
        }
        _ => {
            if !GADGETS.iter().any(|g| g.0 == name) {
                return Err(Error::InvalidArgument(format!("unknown gadget '{name}'")));
            }
            return Ok(case(name)?.circuit);
        }
    }
    Ok(b.finish())
}

/// Exhaustive single-fault check of a named gadget.
pub fn check_gadget_faults(name: &str) -> Result<FaultReport> {
    if !GADGETS.iter().any(|g| g.0 == name) {
        return Err(Error::InvalidArgument(format!("unknown gadget '{name}'")));
    }
    let c = case(name)?;
    fault_check(&c.circuit, &c.set, &c.init, |rec| (c.expected)(rec))
}
