use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::circuit::{
    Basis, BitExpr, GateKind, LogicalCircuit, LogicalGate, Output, PhysicalCircuit, PhysicalOp,
};
use crate::compiler::layout::{greedy_placement, Layout};
use crate::error::{Error, Result};
use crate::gadgets::{
    ft_measure, in_block_cnot, logical_ccz, logical_cz, logical_pauli, prepare_logical,
    stabilizer_round, targeted_cnot, teleport_hadamard, teleport_x, teleport_x_pair, teleport_z,
    teleport_z_pair, Builder, LogicalState, PrepMode,
};
use crate::pauli::{Pauli, PauliString};

/// How cross-block CZ operands are brought together.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelocationMode {
    /// SWAPs built from three targeted CNOTs.
    #[default]
    Swap,
    /// Teleport both operands into the rotation block. CCZ always uses swaps.
    Teleport,
}

impl std::str::FromStr for RelocationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "swap" => Ok(Self::Swap),
            "teleport" => Ok(Self::Teleport),
            _ => Err(Error::Parse {
                input: s.into(),
                reason: "expected swap or teleport".into(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleOptions {
    pub prep_mode: PrepMode,
    /// Stabilizer round on every touched block after each gadget.
    pub rounds: bool,
    pub relocation: RelocationMode,
    /// Emit the data-block preparation. Off when a test injects encoded inputs.
    pub initialize: bool,
    /// Initial (block, slot) per computational qubit; greedy when absent.
    pub placement: Option<Vec<(usize, usize)>>,
}

impl Default for ScheduleOptions {
    fn default() -> Self {
        ScheduleOptions {
            prep_mode: PrepMode::Correct,
            rounds: true,
            relocation: RelocationMode::Swap,
            initialize: true,
            placement: None,
        }
    }
}

/// A scheduled circuit together with where each logical qubit started and
/// ended. Locations are (block id, slot) with block ids as in [`Layout::block`].
#[derive(Clone, Debug)]
pub struct Scheduled {
    pub circuit: PhysicalCircuit,
    pub initial: Vec<(usize, usize)>,
    pub final_loc: Vec<(usize, usize)>,
    /// Whether the rotation block was prepared.
    pub rotation_used: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Qubit(usize),
    /// Logical |+>.
    Free,
}

pub fn schedule(circuit: &LogicalCircuit, layout: &Layout) -> Result<PhysicalCircuit> {
    Ok(schedule_with(circuit, layout, &ScheduleOptions::default())?.circuit)
}

pub fn schedule_with(
    circuit: &LogicalCircuit,
    layout: &Layout,
    opts: &ScheduleOptions,
) -> Result<Scheduled> {
    circuit.validate()?;
    let p = circuit.phase_qubit.ok_or_else(|| {
        Error::InvalidArgument("schedule expects a phase-reference encoded circuit".into())
    })?;
    let residents: Vec<usize> = std::iter::once(p).chain(circuit.catalyst_qubit).collect();
    let n_c = circuit.n_qubits - residents.len();
    if residents.iter().any(|&r| r < n_c) {
        return Err(Error::InvalidArgument(
            "phase and catalyst qubits must follow the computational qubits".into(),
        ));
    }
    if n_c > 3 * layout.data.len() {
        return Err(Error::InvalidArgument(format!(
            "{n_c} qubits do not fit {} data blocks",
            layout.data.len()
        )));
    }
    let (inits, body, meas, cat_prep) = split(circuit, &residents)?;
    let placement = match &opts.placement {
        Some(p) => p.clone(),
        None => greedy_placement(circuit, n_c),
    };
    let mut s = Sched::new(layout, opts, &residents, n_c, &placement)?;
    let initial = s.loc.clone();
    if opts.initialize {
        for id in 0..layout.data.len() {
            let states: Vec<LogicalState> = s.slots[id]
                .iter()
                .map(|sl| match sl {
                    Slot::Qubit(q) => inits[*q],
                    Slot::Free => LogicalState::Plus,
                })
                .collect();
            prepare_logical(
                &mut s.b,
                layout.block(id),
                &states,
                opts.prep_mode,
                layout.gadget_pair,
            )?;
        }
    }
    let uses_rotation = circuit.catalyst_qubit.is_some()
        || body
            .iter()
            .any(|g| g.qubits.iter().any(|q| residents.contains(q)));
    if uses_rotation {
        s.prepare_rotation(cat_prep)?;
    }
    s.run_body(&body)?;
    s.b.label(READOUT_LABEL);
    s.measure(&meas)?;
    let final_loc = s.loc.clone();
    let mut out = s.b.finish();
    out.metadata.logical_width = n_c;
    out.metadata.logical_depth = circuit.depth();
    out.metadata.strategy = Some(layout.strategy.to_string());
    Ok(Scheduled {
        circuit: out,
        initial,
        final_loc,
        rotation_used: uses_rotation,
    })
}

/// Marks the start of the final measurement section.
pub const READOUT_LABEL: &str = "readout";

type Split = (
    Vec<LogicalState>,
    Vec<LogicalGate>,
    Vec<LogicalGate>,
    Option<f64>,
);

/// Separates leading preparations and trailing measurements from the body.
fn split(circuit: &LogicalCircuit, residents: &[usize]) -> Result<Split> {
    let n = circuit.n_qubits;
    let mut inits = vec![LogicalState::Zero; n];
    let mut touched = vec![false; n];
    let mut measured = vec![false; n];
    let mut body = Vec::new();
    let mut meas = Vec::new();
    let mut cat_prep = None;
    for (i, g) in circuit.gates.iter().enumerate() {
        if let Some(&q) = g.qubits.iter().find(|&&q| measured[q]) {
            return Err(Error::Unsupported(format!(
                "gate {i} acts on qubit {q} after its measurement"
            )));
        }
        let q = g.qubits[0];
        if g.kind.is_preparation() {
            if touched[q] {
                return Err(Error::Unsupported(format!(
                    "gate {i}: mid-circuit preparation"
                )));
            }
            touched[q] = true;
            let is_cat = Some(q) == circuit.catalyst_qubit;
            match (g.kind, is_cat) {
                (GateKind::PrepRy, true) => cat_prep = g.angle,
                (GateKind::PrepZ, false) if !residents.contains(&q) => {
                    inits[q] = LogicalState::Zero
                }
                (GateKind::PrepX, false) if !residents.contains(&q) => {
                    inits[q] = LogicalState::Plus
                }
                (GateKind::PrepY, false) if !residents.contains(&q) => {
                    inits[q] = LogicalState::PlusI
                }
                _ => {
                    return Err(Error::Unsupported(format!(
                        "gate {i}: {:?} on qubit {q}",
                        g.kind
                    )))
                }
            }
            continue;
        }
        if g.kind.is_measurement() {
            let is_cat = Some(q) == circuit.catalyst_qubit;
            let ok = if is_cat {
                g.kind == GateKind::MeasRy
            } else {
                g.kind != GateKind::MeasRy
            };
            if !ok || Some(q) == circuit.phase_qubit {
                return Err(Error::Unsupported(format!(
                    "gate {i}: {:?} on qubit {q}",
                    g.kind
                )));
            }
            measured[q] = true;
            meas.push(g.clone());
            continue;
        }
        for &q in &g.qubits {
            touched[q] = true;
        }
        body.push(g.clone());
    }
    if circuit.catalyst_qubit.is_some() && cat_prep.is_none() {
        return Err(Error::Precondition("catalyst is never prepared".into()));
    }
    Ok((inits, body, meas, cat_prep))
}

struct Sched<'a> {
    b: Builder,
    layout: &'a Layout,
    opts: &'a ScheduleOptions,
    residents: Vec<usize>,
    /// Slot contents of data blocks and the rotation block.
    slots: Vec<Vec<Slot>>,
    loc: Vec<(usize, usize)>,
    has_catalyst: bool,
}

impl<'a> Sched<'a> {
    fn new(
        layout: &'a Layout,
        opts: &'a ScheduleOptions,
        residents: &[usize],
        n_c: usize,
        placement: &[(usize, usize)],
    ) -> Result<Self> {
        let m = layout.data.len();
        let mut slots = vec![vec![Slot::Free; 3]; m + 1];
        let mut loc = vec![(0, 0); n_c + residents.len()];
        if placement.len() != n_c {
            return Err(Error::DimensionMismatch {
                left: n_c,
                right: placement.len(),
            });
        }
        for (q, &(blk, s)) in placement.iter().enumerate() {
            if blk >= m || s >= 3 || slots[blk][s] != Slot::Free {
                return Err(Error::InvalidArgument(format!(
                    "bad placement ({blk}, {s}) for qubit {q}"
                )));
            }
            slots[blk][s] = Slot::Qubit(q);
            loc[q] = (blk, s);
        }
        for (i, &r) in residents.iter().enumerate() {
            slots[m][i] = Slot::Qubit(r);
            loc[r] = (m, i);
        }
        Ok(Sched {
            b: Builder::new(layout.n_physical),
            layout,
            opts,
            residents: residents.to_vec(),
            slots,
            loc,
            has_catalyst: residents.len() > 1,
        })
    }

    fn rot(&self) -> usize {
        self.layout.rotation_id()
    }

    fn is_resident(&self, q: usize) -> bool {
        self.residents.contains(&q)
    }

    fn round(&mut self, blocks: &[usize]) -> Result<()> {
        if !self.opts.rounds {
            return Ok(());
        }
        let set: BTreeSet<usize> = blocks.iter().copied().collect();
        for id in set {
            stabilizer_round(
                &mut self.b,
                self.layout.block(id),
                &self.layout.round_pairs[id],
            )?;
        }
        Ok(())
    }

    fn prepare_rotation(&mut self, cat_angle: Option<f64>) -> Result<()> {
        let rot = self.layout.block(self.rot());
        let states = if self.has_catalyst {
            [LogicalState::Zero, LogicalState::Zero, LogicalState::Plus]
        } else {
            [LogicalState::Zero, LogicalState::Plus, LogicalState::Plus]
        };
        prepare_logical(
            &mut self.b,
            rot,
            &states,
            self.opts.prep_mode,
            self.layout.gadget_pair,
        )?;
        if let Some(theta) = cat_angle {
            // Idealized injection: Ry on the catalyst's logical Y.
            let rep = rot.spec().logical(Pauli::Y, 1);
            let sign = if rep.phase() == 2 { -1.0 } else { 1.0 };
            let (qubits, pauli): (Vec<usize>, Vec<Pauli>) = rot.support(&rep).into_iter().unzip();
            self.b.label("catalyst:inject");
            self.b.push(PhysicalOp::IdealRotation {
                qubits,
                pauli,
                theta: sign * theta,
            });
        }
        Ok(())
    }

    fn release_transfer(&mut self) {
        for &q in &self.layout.transfer.qubits {
            self.b.push(PhysicalOp::Reset { q });
        }
    }

    fn set(&mut self, (blk, s): (usize, usize), v: Slot) {
        self.slots[blk][s] = v;
        if let Slot::Qubit(q) = v {
            self.loc[q] = (blk, s);
        }
    }

    /// Teleports one logical between two 832 blocks through the transfer block.
    fn move_one(&mut self, from: (usize, usize), to: (usize, usize)) -> Result<()> {
        if self.slots[to.0][to.1] != Slot::Free {
            return Err(Error::Precondition(format!(
                "teleport target {to:?} is not |+>"
            )));
        }
        let t = &self.layout.transfer;
        let mode = self.opts.prep_mode;
        prepare_logical(
            &mut self.b,
            t,
            &[LogicalState::Zero, LogicalState::Plus],
            mode,
            self.layout.gadget_pair,
        )?;
        teleport_x(
            &mut self.b,
            self.layout.block(from.0),
            from.1,
            t,
            0,
            self.layout.gadget_pair,
        )?;
        teleport_z(
            &mut self.b,
            t,
            0,
            self.layout.block(to.0),
            to.1,
            self.layout.gadget_pair,
        )?;
        self.release_transfer();
        let v = self.slots[from.0][from.1];
        self.set(from, Slot::Free);
        self.set(to, v);
        self.round(&[from.0, to.0])
    }

    /// Teleports two logicals of one block into two slots of another.
    fn move_pair(
        &mut self,
        from: usize,
        fs: (usize, usize),
        to: usize,
        ts: (usize, usize),
    ) -> Result<()> {
        if self.slots[to][ts.0] != Slot::Free || self.slots[to][ts.1] != Slot::Free {
            return Err(Error::Precondition(
                "pair teleport targets are not |+>".into(),
            ));
        }
        let t = &self.layout.transfer;
        let mode = self.opts.prep_mode;
        prepare_logical(
            &mut self.b,
            t,
            &[LogicalState::Zero, LogicalState::Zero],
            mode,
            self.layout.gadget_pair,
        )?;
        teleport_x_pair(
            &mut self.b,
            self.layout.block(from),
            fs,
            t,
            self.layout.gadget_pair,
        )?;
        teleport_z_pair(
            &mut self.b,
            t,
            self.layout.block(to),
            ts,
            self.layout.gadget_pair,
        )?;
        self.release_transfer();
        let (a, c) = (self.slots[from][fs.0], self.slots[from][fs.1]);
        self.set((from, fs.0), Slot::Free);
        self.set((from, fs.1), Slot::Free);
        self.set((to, ts.0), a);
        self.set((to, ts.1), c);
        self.round(&[from, to])
    }

    fn free_data_slot(&self) -> Result<(usize, usize)> {
        (0..self.layout.data.len())
            .flat_map(|b| (0..3).map(move |s| (b, s)))
            .find(|&(b, s)| self.slots[b][s] == Slot::Free)
            .ok_or_else(|| Error::Precondition("no free data slot".into()))
    }

    /// Brings `operands` into the rotation block, evicting other residents of
    /// its computational slots as needed.
    fn move_in(&mut self, operands: &BTreeSet<usize>) -> Result<()> {
        let rot = self.rot();
        let first = self.residents.len();
        for s in first..3 {
            if let Slot::Qubit(q) = self.slots[rot][s] {
                if !operands.contains(&q) {
                    let dst = self.free_data_slot()?;
                    self.move_one((rot, s), dst)?;
                }
            }
        }
        let outside: Vec<usize> = operands
            .iter()
            .copied()
            .filter(|&q| self.loc[q].0 != rot)
            .collect();
        let free: Vec<usize> = (first..3)
            .filter(|&s| self.slots[rot][s] == Slot::Free)
            .collect();
        if let [a, c] = outside[..] {
            let (la, lc) = (self.loc[a], self.loc[c]);
            if la.0 == lc.0 && free.len() == 2 {
                return self.move_pair(la.0, (la.1, lc.1), rot, (free[0], free[1]));
            }
        }
        for (q, s) in outside.into_iter().zip(free) {
            self.move_one(self.loc[q], (rot, s))?;
        }
        Ok(())
    }

    fn run_body(&mut self, body: &[LogicalGate]) -> Result<()> {
        let cap = 3 - self.residents.len();
        let mut i = 0;
        while i < body.len() {
            let g = &body[i];
            if !g.qubits.iter().any(|&q| self.is_resident(q)) {
                i += self.apply(body, i)?;
                continue;
            }
            let mut operands = BTreeSet::new();
            let mut j = i;
            while j < body.len() {
                let h = &body[j];
                let touches = h.qubits.iter().any(|&q| self.is_resident(q));
                let others: Vec<usize> = h
                    .qubits
                    .iter()
                    .copied()
                    .filter(|&q| !self.is_resident(q))
                    .collect();
                if !touches && !others.iter().all(|q| operands.contains(q)) {
                    break;
                }
                let mut next = operands.clone();
                next.extend(others);
                if next.len() > cap {
                    if j == i {
                        return Err(Error::Unsupported(format!(
                            "phase gate {:?} needs {} computational qubits in the rotation block, which holds {cap}",
                            h.kind,
                            next.len()
                        )));
                    }
                    break;
                }
                operands = next;
                j += 1;
            }
            self.move_in(&operands)?;
            let mut k = i;
            while k < j {
                k += self.apply(&body[..j], k)?;
            }
            i = j;
        }
        Ok(())
    }

    /// Executes `body[i]` at the operands' current locations; returns how
    /// many gates were consumed (two for batched Hadamards).
    fn apply(&mut self, body: &[LogicalGate], i: usize) -> Result<usize> {
        let g = &body[i];
        let q = &g.qubits;
        let l: Vec<(usize, usize)> = q.iter().map(|&x| self.loc[x]).collect();
        let anc = self.layout.gadget_pair;
        match g.kind {
            GateKind::X | GateKind::Z => {
                let basis = if g.kind == GateKind::X {
                    Pauli::X
                } else {
                    Pauli::Z
                };
                logical_pauli(&mut self.b, self.layout.block(l[0].0), basis, l[0].1)?;
            }
            GateKind::H => {
                let mut slots = vec![l[0].1];
                if let Some(n) = body.get(i + 1) {
                    if n.kind == GateKind::H
                        && n.qubits[0] != q[0]
                        && self.loc[n.qubits[0]].0 == l[0].0
                    {
                        slots.push(self.loc[n.qubits[0]].1);
                    }
                }
                let t = &self.layout.transfer;
                teleport_hadamard(
                    &mut self.b,
                    self.layout.block(l[0].0),
                    &slots,
                    t,
                    self.opts.prep_mode,
                    anc,
                )?;
                self.release_transfer();
                self.round(&[l[0].0])?;
                return Ok(slots.len());
            }
            GateKind::SWAP => {
                let (a, c) = (self.slots[l[0].0][l[0].1], self.slots[l[1].0][l[1].1]);
                self.set(l[0], c);
                self.set(l[1], a);
            }
            GateKind::CX => {
                if l[0].0 == l[1].0 {
                    in_block_cnot(&mut self.b, self.layout.block(l[0].0), l[0].1, l[1].1)?;
                } else {
                    targeted_cnot(
                        &mut self.b,
                        self.layout.block(l[0].0),
                        l[0].1,
                        self.layout.block(l[1].0),
                        l[1].1,
                    )?;
                    self.round(&[l[0].0, l[1].0])?;
                }
            }
            GateKind::CZ | GateKind::CCZ => {
                let spread = l.iter().any(|x| x.0 != l[0].0);
                let teleport = g.kind == GateKind::CZ
                    && self.opts.relocation == RelocationMode::Teleport
                    && !self.has_catalyst
                    && !q.iter().any(|&x| self.is_resident(x));
                if spread && teleport {
                    self.move_in(&q.iter().copied().collect())?;
                } else if spread {
                    self.relocate(q)?;
                }
                let l: Vec<(usize, usize)> = q.iter().map(|&x| self.loc[x]).collect();
                let blk = l[0].0;
                if g.kind == GateKind::CZ {
                    logical_cz(&mut self.b, self.layout.block(blk), l[0].1, l[1].1, 0)?;
                } else {
                    logical_ccz(&mut self.b, self.layout.block(blk))?;
                }
                self.round(&[blk])?;
            }
            k => {
                return Err(Error::Unsupported(format!(
                    "{k:?} cannot be scheduled; encode the circuit first"
                )))
            }
        }
        Ok(1)
    }

    /// Gathers the operands of a CZ or CCZ into one block with SWAPs made of
    /// three targeted CNOTs each. Residents of the rotation block never move.
    fn relocate(&mut self, q: &[usize]) -> Result<()> {
        if q.iter().any(|&x| self.is_resident(x)) {
            return Err(Error::Precondition(
                "rotation-block residents cannot be relocated".into(),
            ));
        }
        let rot = self.rot();
        let nres = self.residents.len();
        let first = move |b: usize| if b == rot { nres } else { 0 };
        let target = (0..=rot)
            .filter(|&b| 3 - first(b) >= q.len())
            .max_by_key(|&b| {
                (
                    q.iter().filter(|&&x| self.loc[x].0 == b).count(),
                    std::cmp::Reverse(b),
                )
            })
            .ok_or_else(|| Error::Unsupported("no block can hold the gate operands".into()))?;
        for &x in q {
            let lx = self.loc[x];
            if lx.0 == target {
                continue;
            }
            let s = (first(target)..3)
                .find(|&s| match self.slots[target][s] {
                    Slot::Free => true,
                    Slot::Qubit(y) => !q.contains(&y),
                })
                .ok_or_else(|| Error::Precondition("no swap partner in target block".into()))?;
            self.swap_across(lx, (target, s))?;
        }
        Ok(())
    }

    fn swap_across(&mut self, a: (usize, usize), c: (usize, usize)) -> Result<()> {
        let (ba, bc) = (self.layout.block(a.0), self.layout.block(c.0));
        self.b.label("swap");
        targeted_cnot(&mut self.b, ba, a.1, bc, c.1)?;
        targeted_cnot(&mut self.b, bc, c.1, ba, a.1)?;
        targeted_cnot(&mut self.b, ba, a.1, bc, c.1)?;
        let (va, vc) = (self.slots[a.0][a.1], self.slots[c.0][c.1]);
        self.set(a, vc);
        self.set(c, va);
        self.round(&[a.0, c.0])
    }

    fn measure(&mut self, meas: &[LogicalGate]) -> Result<()> {
        let rot = self.rot();
        let basis_of = |k: GateKind| match k {
            GateKind::MeasX => Basis::X,
            GateKind::MeasY => Basis::Y,
            _ => Basis::Z,
        };
        let mut exprs: Vec<Option<BitExpr>> = vec![None; meas.len()];
        for blk in 0..self.layout.data.len() {
            let here: Vec<usize> = (0..meas.len())
                .filter(|&i| self.loc[meas[i].qubits[0]].0 == blk)
                .collect();
            if here.is_empty() {
                continue;
            }
            let occupants = self.slots[blk]
                .iter()
                .filter(|s| matches!(s, Slot::Qubit(_)))
                .count();
            let first = basis_of(meas[here[0]].kind);
            let destructive = here.len() == occupants
                && first != Basis::Y
                && here.iter().all(|&i| basis_of(meas[i].kind) == first);
            if destructive {
                let slots: Vec<usize> = here
                    .iter()
                    .map(|&i| self.loc[meas[i].qubits[0]].1)
                    .collect();
                let found = self.destructive(blk, first, &slots);
                for (&i, e) in here.iter().zip(found) {
                    exprs[i] = Some(e);
                }
            } else {
                for &i in &here {
                    exprs[i] = Some(self.ft_readout(&meas[i], basis_of(meas[i].kind))?);
                }
            }
        }
        for (i, g) in meas.iter().enumerate() {
            if self.loc[g.qubits[0]].0 != rot {
                continue;
            }
            if g.kind == GateKind::MeasRy {
                let rotb = self.layout.block(rot);
                let rep = rotb.spec().logical(Pauli::Y, self.loc[g.qubits[0]].1);
                let sign = if rep.phase() == 2 { -1.0 } else { 1.0 };
                let (qubits, pauli): (Vec<usize>, Vec<Pauli>) =
                    rotb.support(&rep).into_iter().unzip();
                self.b.push(PhysicalOp::IdealRotation {
                    qubits,
                    pauli,
                    theta: -sign * g.angle.unwrap_or_default(),
                });
                exprs[i] = Some(self.ft_readout(g, Basis::Z)?);
            } else {
                exprs[i] = Some(self.ft_readout(g, basis_of(g.kind))?);
            }
        }
        for (g, e) in meas.iter().zip(exprs) {
            let expr =
                e.ok_or_else(|| Error::Precondition("measurement was not scheduled".into()))?;
            self.b.circuit_mut().outputs.push(Output {
                qubit: g.qubits[0],
                basis: if g.kind == GateKind::MeasRy {
                    Basis::Z
                } else {
                    basis_of(g.kind)
                },
                expr,
            });
        }
        Ok(())
    }

    fn ft_readout(&mut self, g: &LogicalGate, basis: Basis) -> Result<BitExpr> {
        let (blk, s) = self.loc[g.qubits[0]];
        let letter = match basis {
            Basis::X => Pauli::X,
            Basis::Y => Pauli::Y,
            Basis::Z => Pauli::Z,
        };
        ft_measure(
            &mut self.b,
            self.layout.block(blk),
            letter,
            s,
            self.layout.gadget_pair,
        )
    }

    /// Transversal single-basis readout of a whole block; stabilizer parities
    /// of the measured type become detection events.
    fn destructive(&mut self, blk: usize, basis: Basis, slots: &[usize]) -> Vec<BitExpr> {
        let block = self.layout.block(blk);
        let letter = if basis == Basis::X {
            Pauli::X
        } else {
            Pauli::Z
        };
        let rec: Vec<usize> = block
            .qubits
            .iter()
            .map(|&q| {
                if letter == Pauli::X {
                    self.b.measure_x(q)
                } else {
                    self.b.measure_z(q)
                }
            })
            .collect();
        let parity = |p: &PauliString| {
            let e = BitExpr::xor(&p.support().into_iter().map(|v| rec[v]).collect::<Vec<_>>());
            if p.phase() == 2 {
                e.inverted()
            } else {
                e
            }
        };
        for g in block.spec().stabilizers.generators() {
            let same = if letter == Pauli::X {
                g.is_x_type()
            } else {
                g.is_z_type()
            };
            if same {
                let e = parity(g);
                self.b.detect(e);
            }
        }
        slots
            .iter()
            .map(|&s| parity(&block.spec().logical(letter, s)))
            .collect()
    }
}
