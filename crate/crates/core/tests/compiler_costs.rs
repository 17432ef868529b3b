use codeswitch::circuit::{GateKind, LogicalCircuit};
use codeswitch::compiler::*;
use codeswitch::gadgets::RoundStrategy;
use codeswitch::sim::{run_shot_with, NoiseModel, DEFAULT_CAPACITY};

fn options(placement: Option<Vec<(usize, usize)>>, relocation: RelocationMode) -> CompileOptions {
    CompileOptions {
        schedule: ScheduleOptions {
            placement,
            relocation,
            ..ScheduleOptions::default()
        },
        ..CompileOptions::default()
    }
}

fn hardness(
    c: &LogicalCircuit,
    placement: Option<Vec<(usize, usize)>>,
    relocation: RelocationMode,
) -> usize {
    let compiled = compile(c, &options(placement, relocation)).unwrap();
    let r = cost_report(compiled.circuit(), None);
    assert_eq!(r.hardness, r.teleport_count);
    r.hardness
}

#[test]
fn layout_formulas() {
    for n_c in 1..=9usize {
        let m = n_c.div_ceil(3);
        for (s, want) in [
            (RoundStrategy::Sequential, 8 * m + 14),
            (RoundStrategy::Mid, 10 * m + 18),
            (RoundStrategy::Fast, 18 * m + 26),
        ] {
            assert_eq!(
                allocate(n_c, s).unwrap().n_physical,
                want,
                "n_c={n_c} {s:?}"
            );
        }
    }
}

#[test]
fn in_block_clifford_and_ccz_need_no_teleports() {
    let mut c = LogicalCircuit::new(3);
    c.push(GateKind::CX, &[0, 1])
        .push(GateKind::CZ, &[1, 2])
        .push(GateKind::CCZ, &[0, 1, 2])
        .push(GateKind::SWAP, &[0, 2])
        .push(GateKind::X, &[1])
        .push(GateKind::Z, &[0]);
    assert_eq!(hardness(&c, None, RelocationMode::Swap), 0);
    let mut h = c.clone();
    h.push(GateKind::H, &[1]);
    assert_eq!(hardness(&h, None, RelocationMode::Swap), 2);
}

#[test]
fn phase_gates_pay_for_the_rotation_block() {
    let mut s = LogicalCircuit::new(1);
    s.push(GateKind::S, &[0]);
    assert_eq!(hardness(&s, None, RelocationMode::Swap), 2);
    // A second S on the same qubit reuses its place in the rotation block.
    s.push(GateKind::S, &[0]);
    assert_eq!(hardness(&s, None, RelocationMode::Swap), 2);
}

#[test]
fn split_operands_cost_extra_moves() {
    let mut cs = LogicalCircuit::new(4);
    cs.push(GateKind::CS, &[0, 3]);
    let together = Some(vec![(0, 0), (1, 0), (1, 1), (0, 1)]);
    let apart = Some(vec![(0, 0), (0, 1), (0, 2), (1, 0)]);
    assert_eq!(hardness(&cs, together, RelocationMode::Swap), 6);
    assert_eq!(hardness(&cs, apart.clone(), RelocationMode::Swap), 8);

    let mut cz = LogicalCircuit::new(4);
    cz.push(GateKind::CZ, &[0, 3]);
    assert_eq!(hardness(&cz, apart.clone(), RelocationMode::Swap), 0);
    assert_eq!(hardness(&cz, apart.clone(), RelocationMode::Teleport), 4);
    let swapped = compile(&cz, &options(apart, RelocationMode::Swap)).unwrap();
    assert!(swapped.circuit().two_qubit_gate_count() > 3 * 16);
}

#[test]
fn sequential_layout_for_three_qubits() {
    let mut c = LogicalCircuit::new(3);
    c.push(GateKind::CCZ, &[0, 1, 2]);
    let compiled = compile(&c, &CompileOptions::default()).unwrap();
    assert_eq!(compiled.layout.n_physical, 22);
    assert!(compiled.circuit().validate().is_empty());
}

/// Runs `shots` noiseless shots and returns the logical outputs of each.
fn outputs(c: &LogicalCircuit, corrections: Corrections, shots: u64) -> Vec<Vec<bool>> {
    let opts = CompileOptions {
        corrections,
        ..CompileOptions::default()
    };
    let compiled = compile(c, &opts).unwrap();
    (0..shots)
        .map(|s| {
            let rec = run_shot_with(
                compiled.circuit(),
                &NoiseModel::noiseless(),
                7,
                s,
                DEFAULT_CAPACITY,
                false,
            )
            .unwrap();
            assert!(!rec.discarded);
            rec.outputs
        })
        .collect()
}

#[test]
fn frame_tracking_matches_applied_corrections() {
    let mut det = LogicalCircuit::new(2);
    det.push(GateKind::PrepX, &[0])
        .push(GateKind::PrepZ, &[1])
        .push(GateKind::H, &[0])
        .push(GateKind::CX, &[0, 1])
        .push(GateKind::X, &[1])
        .push(GateKind::MeasZ, &[0])
        .push(GateKind::MeasZ, &[1]);
    for mode in [Corrections::Apply, Corrections::Frame] {
        for o in outputs(&det, mode, 12) {
            assert_eq!(o, vec![false, true], "{mode:?}");
        }
    }
    let mut bell = LogicalCircuit::new(2);
    bell.push(GateKind::PrepX, &[0])
        .push(GateKind::PrepZ, &[1])
        .push(GateKind::CX, &[0, 1])
        .push(GateKind::H, &[1])
        .push(GateKind::H, &[0])
        .push(GateKind::MeasX, &[0])
        .push(GateKind::MeasX, &[1]);
    for mode in [Corrections::Apply, Corrections::Frame] {
        let outs = outputs(&bell, mode, 24);
        assert!(outs.iter().all(|o| o[0] == o[1]), "{mode:?}");
        assert!(outs.iter().any(|o| o[0]) && outs.iter().any(|o| !o[0]));
    }
}
