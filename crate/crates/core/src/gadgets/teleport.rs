use crate::circuit::PhysicalOp;
use crate::codes::{find_permutation_gate, CodeKind, LogicalAction};
use crate::error::{Error, Result};
use crate::gadgets::measure::{ft_measure, prepare_logical, LogicalState, PrepMode};
use crate::gadgets::transversal::{cnot2_832_to_422, transversal_h_422};
use crate::gadgets::{BlockHandle, Builder};
use crate::pauli::Pauli;

fn spectator(i: usize) -> usize {
    (0..3).find(|&k| k != i).expect("three logicals")
}

/// Ordered cnot2 pair that sends logical `i` onto 422 logical `d`.
fn pair_for(i: usize, d: usize) -> (usize, usize) {
    let k = spectator(i);
    if d == 0 {
        (i, k)
    } else {
        (k, i)
    }
}

fn check(src832: &BlockHandle, i: usize, blk422: &BlockHandle, d: usize) -> Result<()> {
    src832.expect(CodeKind::C832)?;
    blk422.expect(CodeKind::C422)?;
    src832.check_logical(i)?;
    blk422.check_logical(d)
}

/// Moves logical `i` of an [[8,3,2]] block into logical `d` of a [[4,2,2]]
/// block. Requires 422 logical `d` in |0> and the other 422 logical in |+>.
/// Afterwards the 832 logical `i` is |+>.
pub fn teleport_x(
    b: &mut Builder,
    src: &BlockHandle,
    i: usize,
    dst: &BlockHandle,
    d: usize,
    anc: (usize, usize),
) -> Result<()> {
    check(src, i, dst, d)?;
    b.teleport_label("x");
    cnot2_832_to_422(b, src, pair_for(i, d), dst)?;
    let e = ft_measure(b, src, Pauli::X, i, anc)?;
    b.cond_pauli(e.clone(), Pauli::Z, dst.logical_support(Pauli::Z, d));
    b.cond_pauli(e, Pauli::Z, src.logical_support(Pauli::Z, i));
    Ok(())
}

/// Moves logical `d` of a [[4,2,2]] block into logical `i` of an [[8,3,2]]
/// block. Requires 832 logical `i` in |+> and the other 422 logical in |+>.
/// Afterwards 422 logical `d` is |0>.
pub fn teleport_z(
    b: &mut Builder,
    src: &BlockHandle,
    d: usize,
    dst: &BlockHandle,
    i: usize,
    anc: (usize, usize),
) -> Result<()> {
    check(dst, i, src, d)?;
    b.teleport_label("z");
    cnot2_832_to_422(b, dst, pair_for(i, d), src)?;
    let e = ft_measure(b, src, Pauli::Z, d, anc)?;
    b.cond_pauli(e.clone(), Pauli::X, dst.logical_support(Pauli::X, i));
    b.cond_pauli(e, Pauli::X, src.logical_support(Pauli::X, d));
    Ok(())
}

fn check_pair(pair: (usize, usize)) -> Result<()> {
    if pair.0 == pair.1 || pair.0 >= 3 || pair.1 >= 3 {
        return Err(Error::InvalidOperand(format!("teleport pair {pair:?}")));
    }
    Ok(())
}

/// Moves logicals `(i, j)` of an [[8,3,2]] block into 422 logicals (0, 1),
/// both of which must be |0>.
pub fn teleport_x_pair(
    b: &mut Builder,
    src: &BlockHandle,
    pair: (usize, usize),
    dst: &BlockHandle,
    anc: (usize, usize),
) -> Result<()> {
    check_pair(pair)?;
    check(src, pair.0, dst, 0)?;
    b.teleport_label("x");
    cnot2_832_to_422(b, src, pair, dst)?;
    for (d, i) in [(0, pair.0), (1, pair.1)] {
        let e = ft_measure(b, src, Pauli::X, i, anc)?;
        b.cond_pauli(e.clone(), Pauli::Z, dst.logical_support(Pauli::Z, d));
        b.cond_pauli(e, Pauli::Z, src.logical_support(Pauli::Z, i));
    }
    Ok(())
}

/// Moves 422 logicals (0, 1) into logicals `(i, j)` of an [[8,3,2]] block,
/// both of which must be |+>.
pub fn teleport_z_pair(
    b: &mut Builder,
    src: &BlockHandle,
    dst: &BlockHandle,
    pair: (usize, usize),
    anc: (usize, usize),
) -> Result<()> {
    check_pair(pair)?;
    check(dst, pair.0, src, 0)?;
    b.teleport_label("z");
    cnot2_832_to_422(b, dst, pair, src)?;
    for (d, i) in [(0, pair.0), (1, pair.1)] {
        let e = ft_measure(b, src, Pauli::Z, d, anc)?;
        b.cond_pauli(e.clone(), Pauli::X, dst.logical_support(Pauli::X, i));
        b.cond_pauli(e, Pauli::X, src.logical_support(Pauli::X, d));
    }
    Ok(())
}

/// Logical H on one or two logicals of an [[8,3,2]] block by a round trip
/// through a freshly prepared [[4,2,2]] transfer block.
pub fn teleport_hadamard(
    b: &mut Builder,
    data: &BlockHandle,
    logicals: &[usize],
    transfer: &BlockHandle,
    mode: PrepMode,
    anc: (usize, usize),
) -> Result<()> {
    data.expect(CodeKind::C832)?;
    transfer.expect(CodeKind::C422)?;
    let swap = find_permutation_gate(transfer.spec(), &LogicalAction::swap(2, 0, 1))?;
    match *logicals {
        [i] => {
            data.check_logical(i)?;
            prepare_logical(
                b,
                transfer,
                &[LogicalState::Zero, LogicalState::Plus],
                mode,
                anc,
            )?;
            teleport_x(b, data, i, transfer, 0, anc)?;
            transversal_h_422(b, transfer)?;
            b.push(PhysicalOp::Relabel {
                qubits: transfer.qubits.clone(),
                perm: swap,
            });
            // The spectator went from |+> to |0>; put it back.
            let e = ft_measure(b, transfer, Pauli::X, 1, anc)?;
            b.cond_pauli(e, Pauli::Z, transfer.logical_support(Pauli::Z, 1));
            teleport_z(b, transfer, 0, data, i, anc)
        }
        [i, j] => {
            prepare_logical(
                b,
                transfer,
                &[LogicalState::Zero, LogicalState::Zero],
                mode,
                anc,
            )?;
            teleport_x_pair(b, data, (i, j), transfer, anc)?;
            transversal_h_422(b, transfer)?;
            b.push(PhysicalOp::Relabel {
                qubits: transfer.qubits.clone(),
                perm: swap,
            });
            teleport_z_pair(b, transfer, data, (i, j), anc)
        }
        _ => Err(Error::InvalidOperand(
            "teleported H acts on one or two logicals".into(),
        )),
    }
}
