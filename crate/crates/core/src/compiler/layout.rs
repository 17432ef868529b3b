use serde::{Deserialize, Serialize};

use crate::circuit::LogicalCircuit;
use crate::codes::CodeKind;
use crate::error::{Error, Result};
use crate::gadgets::{BlockHandle, RoundStrategy};
use crate::sim::DEFAULT_CAPACITY;

/// Physical qubit assignment: data blocks, then the rotation block, then the
/// transfer block, then ancilla pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub n_c: usize,
    pub strategy: RoundStrategy,
    pub data: Vec<BlockHandle>,
    pub rotation: BlockHandle,
    pub transfer: BlockHandle,
    /// Stabilizer-round ancilla pairs per block, indexed like [`Layout::block`].
    pub round_pairs: Vec<Vec<(usize, usize)>>,
    /// Pair used inside teleports, preparations and logical measurements.
    pub gadget_pair: (usize, usize),
    pub n_physical: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

pub fn data_blocks(n_c: usize) -> usize {
    n_c.div_ceil(3)
}

/// Qubit count of a strategy for `n_c` computational qubits.
pub fn physical_qubits(n_c: usize, strategy: RoundStrategy) -> usize {
    let m = data_blocks(n_c);
    match strategy {
        RoundStrategy::Sequential => 8 * m + 14,
        RoundStrategy::Mid => 10 * m + 18,
        RoundStrategy::Fast => 18 * m + 26,
    }
}

pub fn allocate(n_c: usize, strategy: RoundStrategy) -> Result<Layout> {
    if n_c == 0 {
        return Err(Error::InvalidArgument(
            "need at least one computational qubit".into(),
        ));
    }
    let m = data_blocks(n_c);
    let data: Vec<BlockHandle> = (0..m)
        .map(|b| BlockHandle::contiguous(CodeKind::C832, 8 * b))
        .collect();
    let rotation = BlockHandle::contiguous(CodeKind::C832, 8 * m);
    let transfer = BlockHandle::contiguous(CodeKind::C422, 8 * m + 8);
    let mut next = 8 * m + 12;
    let mut take = || {
        let pair = (next, next + 1);
        next += 2;
        pair
    };
    let gens_832 = CodeKind::C832.n() - CodeKind::C832.k();
    let gens_422 = CodeKind::C422.n() - CodeKind::C422.k();
    let (round_pairs, gadget_pair) = match strategy {
        RoundStrategy::Sequential => {
            let p = take();
            (vec![vec![p]; m + 2], p)
        }
        RoundStrategy::Mid => {
            let pairs: Vec<Vec<_>> = (0..m + 2).map(|_| vec![take()]).collect();
            (pairs, take())
        }
        RoundStrategy::Fast => {
            let mut pairs: Vec<Vec<_>> = (0..m + 1)
                .map(|_| (0..gens_832).map(|_| take()).collect())
                .collect();
            pairs.push((0..gens_422).map(|_| take()).collect());
            let g = pairs[m + 1][0];
            (pairs, g)
        }
    };
    let n_physical = next;
    debug_assert_eq!(n_physical, physical_qubits(n_c, strategy));
    let warning = (n_physical > DEFAULT_CAPACITY).then(|| {
        format!("{n_physical} physical qubits exceed the simulator capacity of {DEFAULT_CAPACITY}")
    });
    Ok(Layout {
        n_c,
        strategy,
        data,
        rotation,
        transfer,
        round_pairs,
        gadget_pair,
        n_physical,
        warning,
    })
}

impl Layout {
    pub fn rotation_id(&self) -> usize {
        self.data.len()
    }

    pub fn transfer_id(&self) -> usize {
        self.data.len() + 1
    }

    pub fn block(&self, id: usize) -> &BlockHandle {
        match id.cmp(&self.data.len()) {
            std::cmp::Ordering::Less => &self.data[id],
            std::cmp::Ordering::Equal => &self.rotation,
            std::cmp::Ordering::Greater => &self.transfer,
        }
    }
}

/// Initial (block, slot) of each computational qubit. Blocks are filled one
/// at a time: a block starts with the lowest unplaced qubit and then takes
/// whichever unplaced qubit shares the most multi-qubit gates with it.
pub fn greedy_placement(circuit: &LogicalCircuit, n_c: usize) -> Vec<(usize, usize)> {
    let mut weight = vec![vec![0usize; n_c]; n_c];
    for g in &circuit.gates {
        let qs: Vec<usize> = g.qubits.iter().copied().filter(|&q| q < n_c).collect();
        for (i, &a) in qs.iter().enumerate() {
            for &b in &qs[i + 1..] {
                weight[a][b] += 1;
                weight[b][a] += 1;
            }
        }
    }
    let mut loc = vec![(0, 0); n_c];
    let mut placed = vec![false; n_c];
    for block in 0..data_blocks(n_c) {
        let mut members: Vec<usize> = Vec::new();
        while members.len() < 3 {
            let pick = (0..n_c).filter(|&q| !placed[q]).max_by_key(|&q| {
                let w: usize = members.iter().map(|&m| weight[q][m]).sum();
                (w, std::cmp::Reverse(q))
            });
            let Some(q) = pick else { break };
            placed[q] = true;
            loc[q] = (block, members.len());
            members.push(q);
        }
    }
    loc
}
