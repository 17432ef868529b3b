use codeswitch::circuit::{BitExpr, PhysicalCircuit, PhysicalOp};
use codeswitch::codes::QubitPermutation;
use codeswitch::pauli::Pauli;
use codeswitch::sim::{
    enumerate_branches, fidelity, inject_fault, run_shot, shot_rng, Executor, FaultLocation,
    NoiseModel, DEFAULT_CAPACITY,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn circuit(n: usize, ops: Vec<PhysicalOp>) -> PhysicalCircuit {
    let mut c = PhysicalCircuit::new(n);
    c.ops = ops;
    c
}

fn frequency(
    c: &PhysicalCircuit,
    noise: &NoiseModel,
    shots: u64,
    pred: impl Fn(&[bool]) -> bool,
) -> f64 {
    let hits = (0..shots)
        .filter(|&s| pred(&run_shot(c, noise, 7, s).unwrap().record))
        .count();
    hits as f64 / shots as f64
}

fn within_3_sigma(freq: f64, p: f64, n: u64) {
    let sigma = (p * (1.0 - p) / n as f64).sqrt();
    assert!(
        (freq - p).abs() <= 3.0 * sigma,
        "frequency {freq} vs {p} (sigma {sigma})"
    );
}

#[test]
fn deterministic_measurements() {
    let c = circuit(
        2,
        vec![
            PhysicalOp::MeasZ { q: 0 },
            PhysicalOp::PrepPlus { q: 1 },
            PhysicalOp::MeasX { q: 1 },
        ],
    );
    for s in 0..50 {
        assert_eq!(
            run_shot(&c, &NoiseModel::noiseless(), 1, s).unwrap().record,
            vec![false, false]
        );
    }
}

#[test]
fn measuring_plus_in_z_is_fair() {
    let c = circuit(
        1,
        vec![PhysicalOp::PrepPlus { q: 0 }, PhysicalOp::MeasZ { q: 0 }],
    );
    let f = frequency(&c, &NoiseModel::noiseless(), 10_000, |r| !r[0]);
    within_3_sigma(f, 0.5, 10_000);
}

#[test]
fn certain_single_qubit_depolarizing() {
    let noise = NoiseModel::new(1.0, 0.0, 0.0, 0.0).unwrap();
    // One noisy Z gate on |0>: X and Y flip the outcome, Z does not.
    let c = circuit(1, vec![PhysicalOp::Z { q: 0 }, PhysicalOp::MeasZ { q: 0 }]);
    let f = frequency(&c, &noise, 10_000, |r| r[0]);
    within_3_sigma(f, 2.0 / 3.0, 10_000);
}

#[test]
fn certain_two_qubit_depolarizing() {
    let noise = NoiseModel::new(0.0, 1.0, 0.0, 0.0).unwrap();
    let c = circuit(
        2,
        vec![
            PhysicalOp::CZ { a: 0, b: 1 },
            PhysicalOp::MeasZ { q: 0 },
            PhysicalOp::MeasZ { q: 1 },
        ],
    );
    let f = frequency(&c, &noise, 10_000, |r| !r[0] && !r[1]);
    within_3_sigma(f, 3.0 / 15.0, 10_000);
}

#[test]
fn zero_rates_leave_state_unchanged() {
    let c = circuit(
        1,
        vec![
            PhysicalOp::H { q: 0 },
            PhysicalOp::H { q: 0 },
            PhysicalOp::MeasZ { q: 0 },
        ],
    );
    for s in 0..100 {
        assert_eq!(
            run_shot(&c, &NoiseModel::noiseless(), 3, s).unwrap().record,
            vec![false]
        );
    }
}

#[test]
fn readout_and_preparation_flips() {
    let c = circuit(
        1,
        vec![PhysicalOp::PrepZero { q: 0 }, PhysicalOp::MeasZ { q: 0 }],
    );
    let f = frequency(
        &c,
        &NoiseModel::new(0.0, 0.0, 0.25, 0.0).unwrap(),
        10_000,
        |r| r[0],
    );
    within_3_sigma(f, 0.25, 10_000);
    let f = frequency(
        &c,
        &NoiseModel::new(0.0, 0.0, 0.0, 0.1).unwrap(),
        10_000,
        |r| r[0],
    );
    within_3_sigma(f, 0.1, 10_000);
}

#[test]
fn fixed_seed_is_reproducible() {
    let c = circuit(
        3,
        vec![
            PhysicalOp::H { q: 0 },
            PhysicalOp::CX { c: 0, t: 1 },
            PhysicalOp::CX { c: 1, t: 2 },
            PhysicalOp::MeasZ { q: 0 },
            PhysicalOp::MeasX { q: 1 },
            PhysicalOp::MeasZ { q: 2 },
        ],
    );
    let noise = NoiseModel::uniform(0.1).unwrap();
    for s in 0..20 {
        assert_eq!(
            run_shot(&c, &noise, 11, s).unwrap(),
            run_shot(&c, &noise, 11, s).unwrap()
        );
    }
}

#[test]
fn detect_discards_and_stops() {
    let c = circuit(
        1,
        vec![
            PhysicalOp::X { q: 0 },
            PhysicalOp::MeasZ { q: 0 },
            PhysicalOp::Detect {
                cond: BitExpr::bit(0),
            },
            PhysicalOp::MeasZ { q: 0 },
        ],
    );
    let r = run_shot(&c, &NoiseModel::noiseless(), 0, 0).unwrap();
    assert!(r.discarded);
    assert_eq!(r.discard_op, Some(2));
    assert_eq!(r.record.len(), 1);
}

#[test]
fn cond_pauli_feedback() {
    // Teleport-style correction: measure a |+> qubit, copy the outcome with a conditional X.
    let c = circuit(
        2,
        vec![
            PhysicalOp::PrepPlus { q: 0 },
            PhysicalOp::MeasZ { q: 0 },
            PhysicalOp::CondPauli {
                cond: BitExpr::bit(0),
                pauli: Pauli::X,
                targets: vec![1],
            },
            PhysicalOp::MeasZ { q: 1 },
        ],
    );
    for s in 0..100 {
        let r = run_shot(&c, &NoiseModel::noiseless(), 5, s).unwrap();
        assert_eq!(r.record[0], r.record[1]);
    }
}

#[test]
fn injected_faults() {
    let c = circuit(
        1,
        vec![PhysicalOp::PrepZero { q: 0 }, PhysicalOp::MeasZ { q: 0 }],
    );
    let loc = FaultLocation {
        index: 1,
        qubits: vec![0],
    };
    assert_eq!(inject_fault(&c, &loc, &[Pauli::I]).unwrap(), c);
    let z = inject_fault(&c, &loc, &[Pauli::Z]).unwrap();
    assert_eq!(
        run_shot(&z, &NoiseModel::noiseless(), 0, 0).unwrap().record,
        vec![false]
    );
    let x = inject_fault(&c, &loc, &[Pauli::X]).unwrap();
    assert_eq!(
        run_shot(&x, &NoiseModel::noiseless(), 0, 0).unwrap().record,
        vec![true]
    );
    assert!(inject_fault(
        &c,
        &FaultLocation {
            index: 9,
            qubits: vec![0]
        },
        &[Pauli::X]
    )
    .is_err());
}

#[test]
fn branch_enumeration_weights_sum_to_one() {
    let c = circuit(
        3,
        vec![
            PhysicalOp::H { q: 0 },
            PhysicalOp::H { q: 1 },
            PhysicalOp::T { q: 1 },
            PhysicalOp::CX { c: 1, t: 2 },
            PhysicalOp::MeasZ { q: 0 },
            PhysicalOp::MeasX { q: 1 },
            PhysicalOp::MeasZ { q: 2 },
        ],
    );
    let mut total = 0.0;
    let mut n = 0;
    enumerate_branches(&c, DEFAULT_CAPACITY, |_, w| {
        total += w;
        n += 1;
    })
    .unwrap();
    assert!((total - 1.0).abs() < 1e-12);
    assert_eq!(n, 8);
}

#[test]
fn norm_is_preserved_over_many_ops() {
    let mut rng = shot_rng(1, 1);
    let n = 6;
    let mut ops = Vec::new();
    for _ in 0..10_000 {
        let q = rng.gen_range(0..n);
        let r = (q + rng.gen_range(1..n)) % n;
        ops.push(match rng.gen_range(0..6) {
            0 => PhysicalOp::H { q },
            1 => PhysicalOp::T { q },
            2 => PhysicalOp::S { q },
            3 => PhysicalOp::CX { c: q, t: r },
            4 => PhysicalOp::CZ { a: q, b: r },
            _ => PhysicalOp::Tdg { q },
        });
    }
    let c = circuit(n, ops);
    let mut ex = Executor::new(&c, DEFAULT_CAPACITY).unwrap();
    ex.run(&NoiseModel::noiseless(), &mut rng, false).unwrap();
    assert!((ex.state.norm_sqr() - 1.0).abs() < 1e-10);
}

fn random_unitary_ops(seed: u64, n: usize, len: usize) -> Vec<PhysicalOp> {
    let mut rng = shot_rng(seed, 0);
    (0..len)
        .map(|_| {
            let q = rng.gen_range(0..n);
            let r = (q + rng.gen_range(1..n)) % n;
            match rng.gen_range(0..5) {
                0 => PhysicalOp::H { q },
                1 => PhysicalOp::T { q },
                2 => PhysicalOp::S { q },
                3 => PhysicalOp::CX { c: q, t: r },
                _ => PhysicalOp::CZ { a: q, b: r },
            }
        })
        .collect()
}

fn inverse(op: &PhysicalOp) -> PhysicalOp {
    match op {
        PhysicalOp::T { q } => PhysicalOp::Tdg { q: *q },
        PhysicalOp::S { q } => PhysicalOp::Sdg { q: *q },
        o => o.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn unitary_then_inverse_is_identity(seed in any::<u64>()) {
        let n = 4;
        let mut ops = vec![PhysicalOp::H { q: 0 }, PhysicalOp::T { q: 0 }, PhysicalOp::CX { c: 0, t: 2 }];
        let body = random_unitary_ops(seed, n, 40);
        ops.extend(body.iter().cloned());
        let start = circuit(n, ops.clone());
        ops.extend(body.iter().rev().map(inverse));
        let full = circuit(n, ops);
        let mut rng = shot_rng(0, 0);
        let mut a = Executor::new(&start, DEFAULT_CAPACITY).unwrap();
        // Run only the prefix before the random body.
        for _ in 0..3 { a.step(&NoiseModel::noiseless(), &mut rng, None).unwrap(); }
        let mut b = Executor::new(&full, DEFAULT_CAPACITY).unwrap();
        b.run(&NoiseModel::noiseless(), &mut rng, false).unwrap();
        let order: Vec<usize> = (0..n).collect();
        let f = fidelity(&a.state.full_state(&order), &b.state.full_state(&order));
        prop_assert!((f - 1.0).abs() < 1e-10);
    }

    #[test]
    fn relabel_then_inverse_is_bit_exact(seed in any::<u64>()) {
        let n = 5;
        let body = random_unitary_ops(seed, n, 30);
        let mut rng = shot_rng(seed, 1);
        let mut mapping: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() { mapping.swap(i, rng.gen_range(0..=i)); }
        let perm = QubitPermutation::new(mapping).unwrap();
        let qubits: Vec<usize> = (0..n).collect();
        let mut ops = body.clone();
        let before = circuit(n, ops.clone());
        ops.push(PhysicalOp::Relabel { qubits: qubits.clone(), perm: perm.clone() });
        ops.push(PhysicalOp::Relabel { qubits: qubits.clone(), perm: perm.inverse() });
        let after = circuit(n, ops);
        let run = |c: &PhysicalCircuit| {
            let mut ex = Executor::new(c, DEFAULT_CAPACITY).unwrap();
            ex.run(&NoiseModel::noiseless(), &mut shot_rng(0, 0), false).unwrap();
            ex.state.full_state(&qubits)
        };
        let (x, y): (Vec<Complex64>, Vec<Complex64>) = (run(&before), run(&after));
        prop_assert_eq!(x, y);
    }
}
