//! Deterministic fault injection, measurement-branch enumeration and the
//! exhaustive single-fault checker.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{PhysicalCircuit, PhysicalOp};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::sim::exec::Executor;
use crate::sim::noise::{two_qubit_pauli, NoiseModel, PAULIS};
use crate::sim::state::SimState;

/// Branches below this probability are pruned.
pub const BRANCH_TOL: f64 = 1e-12;

/// A place where a Pauli fault can be inserted: before op `index`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultLocation {
    pub index: usize,
    pub qubits: Vec<usize>,
}

/// Inserts a deterministic Pauli (one letter per location qubit) before op `loc.index`.
pub fn inject_fault(
    circuit: &PhysicalCircuit,
    loc: &FaultLocation,
    paulis: &[Pauli],
) -> Result<PhysicalCircuit> {
    if loc.index > circuit.ops.len() {
        return Err(Error::InvalidArgument(format!(
            "fault location {} beyond {} ops",
            loc.index,
            circuit.ops.len()
        )));
    }
    if paulis.len() != loc.qubits.len() {
        return Err(Error::InvalidArgument(
            "one Pauli per location qubit required".into(),
        ));
    }
    let mut out = circuit.clone();
    let faults: Vec<PhysicalOp> = loc
        .qubits
        .iter()
        .zip(paulis)
        .filter(|(_, &p)| p != Pauli::I)
        .map(|(&q, &pauli)| PhysicalOp::Fault { q, pauli })
        .collect();
    out.ops.splice(loc.index..loc.index, faults);
    Ok(out)
}

/// Every single-fault location: after each preparation and gate on its
/// operands, and before each measurement on the measured qubit.
pub fn fault_locations(circuit: &PhysicalCircuit) -> Vec<FaultLocation> {
    let mut out = Vec::new();
    for (i, op) in circuit.ops.iter().enumerate() {
        use PhysicalOp::*;
        match op {
            MeasZ { q } | MeasX { q } => out.push(FaultLocation {
                index: i,
                qubits: vec![*q],
            }),
            PrepZero { .. }
            | PrepPlus { .. }
            | Reset { .. }
            | H { .. }
            | S { .. }
            | Sdg { .. }
            | T { .. }
            | Tdg { .. }
            | X { .. }
            | Z { .. }
            | CX { .. }
            | CZ { .. } => out.push(FaultLocation {
                index: i + 1,
                qubits: op.qubits(),
            }),
            _ => {}
        }
    }
    out
}

/// Non-identity Paulis on `n` qubits (3 for one, 15 for two).
pub fn nontrivial_paulis(n: usize) -> Vec<Vec<Pauli>> {
    match n {
        1 => PAULIS.iter().map(|&p| vec![p]).collect(),
        2 => (1..16)
            .map(|i| {
                let (a, b) = two_qubit_pauli(i);
                vec![a, b]
            })
            .collect(),
        _ => panic!("locations have one or two qubits"),
    }
}

/// Runs the circuit noiselessly (injected faults still apply), visiting every
/// measurement branch with nonzero probability. Branches stop at the first
/// detection event. The visitor receives the final executor and branch probability.
pub fn enumerate_branches<'c, F>(circuit: &'c PhysicalCircuit, cap: usize, visit: F) -> Result<()>
where
    F: FnMut(&Executor<'c>, f64),
{
    enumerate_branches_from(circuit, &SimState::new(circuit.n_physical, cap), visit)
}

/// As [`enumerate_branches`], starting from `init`.
pub fn enumerate_branches_from<'c, F>(
    circuit: &'c PhysicalCircuit,
    init: &SimState,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&Executor<'c>, f64),
{
    let noise = NoiseModel::noiseless();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut stack = vec![(Executor::with_state(circuit, init.clone())?, 1.0f64)];
    while let Some((mut ex, weight)) = stack.pop() {
        let mut weight = weight;
        loop {
            if ex.discarded || ex.finished() {
                visit(&ex, weight);
                break;
            }
            if ex.next_is_branching() {
                let mut other = ex.clone();
                let p1 = other.step(&noise, &mut rng, Some(true))?;
                if p1 > BRANCH_TOL {
                    stack.push((other, weight * p1));
                }
                let p0 = ex.step(&noise, &mut rng, Some(false))?;
                if p0 <= BRANCH_TOL {
                    break;
                }
                weight *= p0;
            } else {
                ex.step(&noise, &mut rng, None)?;
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FaultReport {
    pub locations: usize,
    pub faults: usize,
    pub branches: usize,
    pub discarded: usize,
    pub accepted_ok: usize,
    pub accepted_wrong: usize,
    /// Descriptions of the first few accepted-and-wrong events.
    pub examples: Vec<String>,
}

impl FaultReport {
    fn merge(mut self, other: FaultReport) -> FaultReport {
        self.faults += other.faults;
        self.branches += other.branches;
        self.discarded += other.discarded;
        self.accepted_ok += other.accepted_ok;
        self.accepted_wrong += other.accepted_wrong;
        self.examples.extend(other.examples);
        self.examples.truncate(5);
        self
    }
}

/// Injects every single Pauli fault at every location and classifies every
/// measurement branch. `judge` returns true when an accepted final state is
/// logically correct.
pub fn check_single_faults<J>(
    circuit: &PhysicalCircuit,
    cap: usize,
    judge: J,
) -> Result<FaultReport>
where
    J: Fn(&Executor) -> bool + Sync,
{
    check_single_faults_from(circuit, &SimState::new(circuit.n_physical, cap), judge)
}

/// As [`check_single_faults`], starting from `init`.
pub fn check_single_faults_from<J>(
    circuit: &PhysicalCircuit,
    init: &SimState,
    judge: J,
) -> Result<FaultReport>
where
    J: Fn(&Executor) -> bool + Sync,
{
    // Without faults every accepted branch must be correct, and some branch accepted.
    let mut baseline = FaultReport::default();
    enumerate_branches_from(circuit, init, |ex, _| {
        classify(ex, &judge, &mut baseline, "no fault")
    })?;
    if baseline.accepted_wrong > 0 || baseline.accepted_ok == 0 {
        return Err(Error::Precondition(format!(
            "fault-free run is not clean: {} accepted, {} wrong; first: {:?}",
            baseline.accepted_ok,
            baseline.accepted_wrong,
            baseline.examples.first()
        )));
    }
    let locations = fault_locations(circuit);
    let jobs: Vec<(FaultLocation, Vec<Pauli>)> = locations
        .iter()
        .flat_map(|l| {
            nontrivial_paulis(l.qubits.len())
                .into_iter()
                .map(move |p| (l.clone(), p))
        })
        .collect();
    let report = jobs
        .par_iter()
        .map(|(loc, paulis)| -> Result<FaultReport> {
            let faulty = inject_fault(circuit, loc, paulis)?;
            let mut r = FaultReport {
                faults: 1,
                ..Default::default()
            };
            let what = format!("{:?} on {:?} before op {}", paulis, loc.qubits, loc.index);
            enumerate_branches_from(&faulty, init, |ex, _| classify(ex, &judge, &mut r, &what))?;
            Ok(r)
        })
        .try_reduce(FaultReport::default, |a, b| Ok(a.merge(b)))?;
    Ok(FaultReport {
        locations: locations.len(),
        ..report
    })
}

fn classify<J: Fn(&Executor) -> bool>(ex: &Executor, judge: &J, r: &mut FaultReport, what: &str) {
    r.branches += 1;
    if ex.discarded {
        r.discarded += 1;
    } else if judge(ex) {
        r.accepted_ok += 1;
    } else {
        r.accepted_wrong += 1;
        if r.examples.len() < 5 {
            r.examples.push(format!("{what}, record {:?}", ex.record));
        }
    }
}

/// Projects `actual` onto the joint +1 eigenspace of `stabilizers` and returns
/// (weight, fidelity of the normalized projection with `expected`).
pub fn projected_fidelity(
    actual: &[Complex64],
    expected: &[Complex64],
    stabilizers: &[PauliString],
) -> (f64, f64) {
    let mut psi = actual.to_vec();
    for s in stabilizers {
        let spsi = s.apply_to_state(&psi);
        for (a, b) in psi.iter_mut().zip(spsi) {
            *a = (*a + b) * 0.5;
        }
    }
    let weight: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
    if weight < 1e-15 {
        return (weight, 0.0);
    }
    let overlap: Complex64 = expected.iter().zip(&psi).map(|(e, a)| e.conj() * a).sum();
    (weight, overlap.norm_sqr() / weight)
}

/// Overlap `|<a|b>|^2` of two normalized states.
pub fn fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    let o: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    o.norm_sqr()
}
