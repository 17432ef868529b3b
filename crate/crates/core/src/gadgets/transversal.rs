use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use itertools::Itertools;

use crate::circuit::PhysicalOp;
use crate::codes::{
    cube_face, cube_parity, find_permutation_gate, logical_x_face, Axis, CodeKind, LogicalAction,
};
use crate::error::{Error, Result};
use crate::gadgets::verify::{logical_action, BlockSet};
use crate::gadgets::{BlockHandle, Builder};
use crate::pauli::Pauli;

/// Logical CCZ on an [[8,3,2]] block: T on even-parity vertices, T† on odd.
pub fn logical_ccz(b: &mut Builder, block: &BlockHandle) -> Result<()> {
    block.expect(CodeKind::C832)?;
    for (v, &q) in block.qubits.iter().enumerate() {
        b.push(if cube_parity(v) == 0 {
            PhysicalOp::T { q }
        } else {
            PhysicalOp::Tdg { q }
        });
    }
    Ok(())
}

/// Logical CZ between logicals `i` and `j` of an [[8,3,2]] block, by S and S†
/// on a face orthogonal to the remaining logical. `placement` picks one of the
/// four equivalent circuits: bit 0 selects the face, bit 1 swaps S and S†.
pub fn logical_cz(
    b: &mut Builder,
    block: &BlockHandle,
    i: usize,
    j: usize,
    placement: u8,
) -> Result<()> {
    block.expect(CodeKind::C832)?;
    block.check_logical(i)?;
    block.check_logical(j)?;
    if i == j || placement > 3 {
        return Err(Error::InvalidOperand(format!(
            "cz({i}, {j}) placement {placement}"
        )));
    }
    let k = 3 - i - j;
    let face = cube_face(logical_x_face(k), placement & 1);
    let flip = placement >> 1;
    for v in face {
        let q = block.qubits[v];
        b.push(if cube_parity(v) ^ flip == 0 {
            PhysicalOp::S { q }
        } else {
            PhysicalOp::Sdg { q }
        });
    }
    Ok(())
}

fn relabel(b: &mut Builder, block: &BlockHandle, target: &LogicalAction) -> Result<()> {
    let perm = find_permutation_gate(block.spec(), target)?;
    b.push(PhysicalOp::Relabel {
        qubits: block.qubits.clone(),
        perm,
    });
    Ok(())
}

/// In-block CNOT as a qubit relabelling.
pub fn in_block_cnot(
    b: &mut Builder,
    block: &BlockHandle,
    control: usize,
    target: usize,
) -> Result<()> {
    block.check_logical(control)?;
    block.check_logical(target)?;
    if control == target {
        return Err(Error::InvalidOperand("cnot needs distinct logicals".into()));
    }
    relabel(b, block, &LogicalAction::cnot(block.k(), control, target))
}

/// In-block SWAP as a qubit relabelling.
pub fn in_block_swap(b: &mut Builder, block: &BlockHandle, x: usize, y: usize) -> Result<()> {
    block.check_logical(x)?;
    block.check_logical(y)?;
    if x == y {
        return Err(Error::InvalidOperand("swap needs distinct logicals".into()));
    }
    relabel(b, block, &LogicalAction::swap(block.k(), x, y))
}

/// Transversal H on a [[4,2,2]] block. Logically this is (H ⊗ H) followed by SWAP.
pub fn transversal_h_422(b: &mut Builder, block: &BlockHandle) -> Result<()> {
    block.expect(CodeKind::C422)?;
    b.extend(block.qubits.iter().map(|&q| PhysicalOp::H { q }));
    Ok(())
}

/// Applies a logical Pauli by its physical representative.
pub fn logical_pauli(b: &mut Builder, block: &BlockHandle, basis: Pauli, i: usize) -> Result<()> {
    block.check_logical(i)?;
    let rep = block.spec().logical(basis, i);
    for (q, l) in block.support(&rep) {
        match l {
            Pauli::X => b.push(PhysicalOp::X { q }),
            Pauli::Z => b.push(PhysicalOp::Z { q }),
            Pauli::Y => {
                b.push(PhysicalOp::X { q });
                b.push(PhysicalOp::Z { q });
            }
            Pauli::I => {}
        }
    }
    Ok(())
}

/// Transversal CNOT between two [[8,3,2]] blocks: every logical of `control`
/// onto the same logical of `target`.
pub fn cnot3(b: &mut Builder, control: &BlockHandle, target: &BlockHandle) -> Result<()> {
    control.expect(CodeKind::C832)?;
    target.expect(CodeKind::C832)?;
    for (&c, &t) in control.qubits.iter().zip(&target.qubits) {
        b.push(PhysicalOp::CX { c, t });
    }
    Ok(())
}

/// CNOT from logical `i` of `control` to logical `j` of `target`, both
/// [[8,3,2]]: two transversal CNOTs around an in-block CNOT on the target.
pub fn targeted_cnot(
    b: &mut Builder,
    control: &BlockHandle,
    i: usize,
    target: &BlockHandle,
    j: usize,
) -> Result<()> {
    control.expect(CodeKind::C832)?;
    target.expect(CodeKind::C832)?;
    control.check_logical(i)?;
    target.check_logical(j)?;
    if control.qubits.iter().any(|q| target.qubits.contains(q)) {
        return Err(Error::InvalidOperand(
            "control and target blocks overlap".into(),
        ));
    }
    if i == j {
        // Route through another target logical with in-block swaps.
        let other = (j + 1) % 3;
        in_block_swap(b, target, j, other)?;
        targeted_cnot(b, control, i, target, other)?;
        return in_block_swap(b, target, j, other);
    }
    in_block_cnot(b, target, i, j)?;
    cnot3(b, control, target)?;
    in_block_cnot(b, target, i, j)?;
    cnot3(b, control, target)
}

/// Pairs (cube vertex, square vertex) coupling logicals `(i, j)` of an
/// [[8,3,2]] block to logicals (0, 1) of a [[4,2,2]] block. Found by search
/// over faces and bijections and cached.
pub fn cnot2_bijection(i: usize, j: usize) -> Result<Vec<(usize, usize)>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Option<Vec<(usize, usize)>>>>> =
        OnceLock::new();
    if i >= 3 || j >= 3 || i == j {
        return Err(Error::InvalidOperand(format!("cnot2 pair ({i}, {j})")));
    }
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&(i, j)) {
        return hit
            .clone()
            .ok_or_else(|| Error::NoPermutation("cnot2".into()));
    }
    let set = BlockSet::new(
        12,
        vec![
            BlockHandle::contiguous(CodeKind::C832, 0),
            BlockHandle::contiguous(CodeKind::C422, 8),
        ],
    )?;
    let target = LogicalAction::from_conjugation(5, |p| {
        p.conj_cx(i, 3);
        p.conj_cx(j, 4);
    });
    let mut found = None;
    'search: for axis in [Axis::X, Axis::Y, Axis::Z] {
        for value in 0..2 {
            let face = cube_face(axis, value);
            for sq in (0..4).permutations(4) {
                let ops: Vec<PhysicalOp> = face
                    .iter()
                    .zip(&sq)
                    .map(|(&v, &s)| PhysicalOp::CX { c: v, t: 8 + s })
                    .collect();
                if logical_action(&ops, &set)?.as_ref() == Some(&target) {
                    found = Some(face.iter().copied().zip(sq).collect::<Vec<_>>());
                    break 'search;
                }
            }
        }
    }
    cache
        .lock()
        .expect("cache lock")
        .insert((i, j), found.clone());
    found.ok_or_else(|| Error::NoPermutation("cnot2".into()))
}

/// Logical CNOTs from logicals `(i, j)` of an [[8,3,2]] block onto logicals
/// (0, 1) of a [[4,2,2]] block, with four physical CNOTs.
pub fn cnot2_832_to_422(
    b: &mut Builder,
    src: &BlockHandle,
    pair: (usize, usize),
    dst: &BlockHandle,
) -> Result<()> {
    src.expect(CodeKind::C832)?;
    dst.expect(CodeKind::C422)?;
    for (v, s) in cnot2_bijection(pair.0, pair.1)? {
        b.push(PhysicalOp::CX {
            c: src.qubits[v],
            t: dst.qubits[s],
        });
    }
    Ok(())
}
