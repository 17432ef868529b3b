//! The [[4,2,2]] and [[8,3,2]] codes and permutation-implemented logical gates.
//!
//! Logical indices are 0-based throughout the API.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use itertools::Itertools;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{ps, Membership, Pauli, PauliString, StabilizerGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodeKind {
    #[serde(rename = "422")]
    C422,
    #[serde(rename = "832")]
    C832,
}

impl CodeKind {
    pub fn spec(self) -> &'static CodeSpec {
        match self {
            CodeKind::C422 => code_422(),
            CodeKind::C832 => code_832(),
        }
    }

    pub fn n(self) -> usize {
        match self {
            CodeKind::C422 => 4,
            CodeKind::C832 => 8,
        }
    }

    pub fn k(self) -> usize {
        match self {
            CodeKind::C422 => 2,
            CodeKind::C832 => 3,
        }
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeKind::C422 => "[[4,2,2]]",
            CodeKind::C832 => "[[8,3,2]]",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CodeSpec {
    pub kind: CodeKind,
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub stabilizers: StabilizerGroup,
    pub logical_x: Vec<PauliString>,
    pub logical_z: Vec<PauliString>,
    /// Vertex coordinate of each physical qubit (cube for 832, square for 422).
    pub geometry: Vec<Vec<u8>>,
}

fn build_422() -> CodeSpec {
    CodeSpec {
        kind: CodeKind::C422,
        name: "[[4,2,2]]".into(),
        n: 4,
        k: 2,
        d: 2,
        stabilizers: StabilizerGroup::new(vec![ps("XXXX"), ps("ZZZZ")]).expect("valid group"),
        logical_x: vec![ps("XXII"), ps("XIIX")],
        logical_z: vec![ps("IZZI"), ps("IIZZ")],
        geometry: vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]],
    }
}

fn build_832() -> CodeSpec {
    CodeSpec {
        kind: CodeKind::C832,
        name: "[[8,3,2]]".into(),
        n: 8,
        k: 3,
        d: 2,
        stabilizers: StabilizerGroup::new(vec![
            ps("ZZZZIIII"),
            ps("ZZIIZZII"),
            ps("ZIZIZIZI"),
            ps("ZZZZZZZZ"),
            ps("XXXXXXXX"),
        ])
        .expect("valid group"),
        logical_x: vec![ps("XXXXIIII"), ps("XXIIXXII"), ps("XIXIXIXI")],
        logical_z: vec![ps("ZIIIZIII"), ps("ZIZIIIII"), ps("ZZIIIIII")],
        geometry: (0..8u8)
            .map(|i| vec![i & 1, (i >> 1) & 1, (i >> 2) & 1])
            .collect(),
    }
}

pub fn code_422() -> &'static CodeSpec {
    static C: OnceLock<CodeSpec> = OnceLock::new();
    C.get_or_init(build_422)
}

pub fn code_832() -> &'static CodeSpec {
    static C: OnceLock<CodeSpec> = OnceLock::new();
    C.get_or_init(build_832)
}

/// Cube axis for [[8,3,2]] faces: `x` is bit 0 of the qubit index, `y` bit 1, `z` bit 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn bit(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// The four cube vertices with the given coordinate along `axis`, ascending.
pub fn cube_face(axis: Axis, value: u8) -> [usize; 4] {
    let v: Vec<usize> = (0..8)
        .filter(|q| ((q >> axis.bit()) & 1) as u8 == value)
        .collect();
    [v[0], v[1], v[2], v[3]]
}

/// Parity of x+y+z for cube vertex `q`.
pub fn cube_parity(q: usize) -> u8 {
    (q.count_ones() % 2) as u8
}

/// Face that carries the X̄ support of 832 logical `i`: z=0, y=0, x=0 for i = 0, 1, 2.
pub fn logical_x_face(i: usize) -> Axis {
    [Axis::Z, Axis::Y, Axis::X][i]
}

impl CodeSpec {
    pub fn logical(&self, basis: Pauli, i: usize) -> PauliString {
        match basis {
            Pauli::X => self.logical_x[i].clone(),
            Pauli::Z => self.logical_z[i].clone(),
            Pauli::Y => self
                .lift(&PauliString::from_support(self.k, Pauli::Y, &[i]))
                .expect("width k"),
            Pauli::I => PauliString::identity(self.n),
        }
    }

    /// Physical representative of a k-qubit logical Pauli, using `Y = iXZ`.
    pub fn lift(&self, logical: &PauliString) -> Result<PauliString> {
        if logical.n() != self.k {
            return Err(Error::DimensionMismatch {
                left: self.k,
                right: logical.n(),
            });
        }
        let mut acc = PauliString::identity(self.n).with_phase(logical.phase());
        for i in 0..self.k {
            let (x, z) = logical.get(i).bits();
            if x {
                acc = acc.multiply(&self.logical_x[i])?;
            }
            if z {
                acc = acc.multiply(&self.logical_z[i])?;
            }
            if x && z {
                let ph = acc.phase();
                acc = acc.with_phase(ph + 1);
            }
        }
        Ok(acc)
    }

    /// Sign-aware equivalence modulo the stabilizer group.
    pub fn equivalent(&self, a: &PauliString, b: &PauliString) -> Result<bool> {
        let q = a.multiply(&b.adjoint())?;
        Ok(self.stabilizers.membership(&q)? == Membership::Plus)
    }

    /// True iff `p` commutes with every stabilizer generator.
    pub fn preserves_codespace(&self, p: &PauliString) -> Result<bool> {
        for g in self.stabilizers.generators() {
            if !g.commutes(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Decodes a physical Pauli that commutes with the stabilizers into its logical
    /// k-qubit image, or `None` if it is not a logical operator.
    pub fn decode_logical(&self, p: &PauliString) -> Result<Option<PauliString>> {
        if !self.preserves_codespace(p)? {
            return Ok(None);
        }
        let mut letters = vec![Pauli::I; self.k];
        for (i, letter) in letters.iter_mut().enumerate() {
            let x = !p.commutes(&self.logical_z[i])?;
            let z = !p.commutes(&self.logical_x[i])?;
            *letter = Pauli::from_bits(x, z);
        }
        let base = PauliString::from_letters(&letters);
        let lifted = self.lift(&base)?;
        for phase in 0..4 {
            let cand = lifted.clone().with_phase(lifted.phase() + phase);
            if self.equivalent(p, &cand)? {
                return Ok(Some(base.with_phase(phase)));
            }
        }
        Ok(None)
    }

    /// Minimum weight over every nontrivial logical operator times every stabilizer element.
    pub fn brute_force_distance(&self) -> usize {
        let elements = self.stabilizers.elements();
        let mut best = usize::MAX;
        for code in 1..(1usize << (2 * self.k)) {
            let letters: Vec<Pauli> = (0..self.k)
                .map(|i| Pauli::from_bits(code >> (2 * i) & 1 == 1, code >> (2 * i + 1) & 1 == 1))
                .collect();
            let l = self
                .lift(&PauliString::from_letters(&letters))
                .expect("width k");
            for s in &elements {
                best = best.min(l.multiply(s).expect("same width").weight());
            }
        }
        best
    }

    /// Encoded computational basis state `|b_0 ... b_{k-1}>` as a dense vector.
    pub fn encode_basis_state(&self, bits: &[bool]) -> Vec<Complex64> {
        let dim = 1usize << self.n;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[0] = Complex64::new(1.0, 0.0);
        for g in self
            .stabilizers
            .generators()
            .iter()
            .filter(|g| !g.is_z_type())
        {
            let ga = g.apply_to_state(&amps);
            for (a, b) in amps.iter_mut().zip(ga) {
                *a = (*a + b) * 0.5;
            }
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in amps.iter_mut() {
            *a /= norm;
        }
        for (i, &b) in bits.iter().enumerate() {
            if b {
                amps = self.logical_x[i].apply_to_state(&amps);
            }
        }
        amps
    }

    /// Encoded state `sum_b c_b |b>` for a k-qubit logical state vector.
    pub fn encode_state(&self, logical: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(logical.len(), 1 << self.k);
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << self.n];
        for (b, c) in logical.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let bits: Vec<bool> = (0..self.k).map(|i| b >> i & 1 == 1).collect();
            for (o, a) in out.iter_mut().zip(self.encode_basis_state(&bits)) {
                *o += c * a;
            }
        }
        out
    }
}

/// Bijection on `0..n`. Qubit `q`'s state moves to position `mapping[q]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitPermutation {
    mapping: Vec<usize>,
}

impl QubitPermutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &m in &mapping {
            if m >= mapping.len() || seen[m] {
                return Err(Error::InvalidArgument(format!(
                    "{mapping:?} is not a bijection"
                )));
            }
            seen[m] = true;
        }
        Ok(QubitPermutation { mapping })
    }

    pub fn identity(n: usize) -> Self {
        QubitPermutation {
            mapping: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.mapping.swap(a, b);
        p
    }

    pub fn n(&self) -> usize {
        self.mapping.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &m)| i == m)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &m) in self.mapping.iter().enumerate() {
            inv[m] = i;
        }
        QubitPermutation { mapping: inv }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &QubitPermutation) -> Self {
        QubitPermutation {
            mapping: self.mapping.iter().map(|&m| next.mapping[m]).collect(),
        }
    }
}

pub fn conjugate_by_permutation(p: &PauliString, perm: &QubitPermutation) -> Result<PauliString> {
    if p.n() != perm.n() {
        return Err(Error::DimensionMismatch {
            left: p.n(),
            right: perm.n(),
        });
    }
    Ok(p.permuted(perm.mapping()))
}

/// Target logical Clifford given by Heisenberg images of each X̄_i and Z̄_i,
/// as k-qubit logical Paulis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogicalAction {
    pub x_images: Vec<PauliString>,
    pub z_images: Vec<PauliString>,
}

impl LogicalAction {
    /// Images under a Clifford given as an in-place Heisenberg update on k-qubit Paulis.
    pub fn from_conjugation(k: usize, f: impl Fn(&mut PauliString)) -> Self {
        let image = |l: Pauli, i: usize| {
            let mut p = PauliString::from_support(k, l, &[i]);
            f(&mut p);
            p
        };
        LogicalAction {
            x_images: (0..k).map(|i| image(Pauli::X, i)).collect(),
            z_images: (0..k).map(|i| image(Pauli::Z, i)).collect(),
        }
    }

    pub fn identity(k: usize) -> Self {
        Self::from_conjugation(k, |_| {})
    }

    pub fn cnot(k: usize, control: usize, target: usize) -> Self {
        Self::from_conjugation(k, |p| p.conj_cx(control, target))
    }

    pub fn swap(k: usize, a: usize, b: usize) -> Self {
        let mut m: Vec<usize> = (0..k).collect();
        m.swap(a, b);
        Self::from_conjugation(k, |p| *p = p.permuted(&m))
    }

    pub fn k(&self) -> usize {
        self.x_images.len()
    }

    fn key(&self) -> String {
        self.x_images
            .iter()
            .chain(&self.z_images)
            .map(|p| p.to_string())
            .join(",")
    }
}

/// Checks that `perm` preserves the stabilizer group and realizes `target`.
pub fn permutation_realizes(
    code: &CodeSpec,
    perm: &QubitPermutation,
    target: &LogicalAction,
) -> Result<bool> {
    for g in code.stabilizers.generators() {
        let img = conjugate_by_permutation(g, perm)?;
        if code.stabilizers.membership(&img)? != Membership::Plus {
            return Ok(false);
        }
    }
    for i in 0..code.k {
        for (src, tgt) in [
            (&code.logical_x[i], &target.x_images[i]),
            (&code.logical_z[i], &target.z_images[i]),
        ] {
            let img = conjugate_by_permutation(src, perm)?;
            if !code.equivalent(&img, &code.lift(tgt)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Lexicographically smallest qubit permutation realizing `target`, found by
/// exhaustive search over all n! permutations. Results are cached.
pub fn find_permutation_gate(code: &CodeSpec, target: &LogicalAction) -> Result<QubitPermutation> {
    static CACHE: OnceLock<Mutex<HashMap<(CodeKind, String), Option<QubitPermutation>>>> =
        OnceLock::new();
    if target.k() != code.k {
        return Err(Error::DimensionMismatch {
            left: code.k,
            right: target.k(),
        });
    }
    let key = (code.kind, target.key());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&key) {
        return hit
            .clone()
            .ok_or_else(|| Error::NoPermutation(code.name.clone()));
    }
    let mut found = None;
    // itertools yields permutations of a sorted input in lexicographic order.
    for mapping in (0..code.n).permutations(code.n) {
        let perm = QubitPermutation { mapping };
        if permutation_realizes(code, &perm, target)? {
            found = Some(perm);
            break;
        }
    }
    cache.lock().expect("cache lock").insert(key, found.clone());
    found.ok_or_else(|| Error::NoPermutation(code.name.clone()))
}

/// Logical action realized by a stabilizer-preserving permutation.
pub fn logical_action_of(
    code: &CodeSpec,
    perm: &QubitPermutation,
) -> Result<Option<LogicalAction>> {
    let mut xs = Vec::new();
    let mut zs = Vec::new();
    for i in 0..code.k {
        for (src, out) in [(&code.logical_x[i], &mut xs), (&code.logical_z[i], &mut zs)] {
            let img = conjugate_by_permutation(src, perm)?;
            match code.decode_logical(&img)? {
                Some(l) => out.push(l),
                None => return Ok(None),
            }
        }
    }
    Ok(Some(LogicalAction {
        x_images: xs,
        z_images: zs,
    }))
}
