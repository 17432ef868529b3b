//! Phased Pauli strings and stabilizer groups.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Pauli> {
        match c {
            'I' | '_' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// An n-qubit Pauli operator `i^phase * P_0 ⊗ ... ⊗ P_{n-1}`.
///
/// Letter `q` is qubit `q`; the leftmost character of the text form is qubit 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PauliString {
    n: usize,
    phase: u8,
    x: Vec<u64>,
    z: Vec<u64>,
}

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            n,
            phase: 0,
            x: vec![0; words(n)],
            z: vec![0; words(n)],
        }
    }

    /// Places `letter` on each qubit of `support`, identity elsewhere.
    pub fn from_support(n: usize, letter: Pauli, support: &[usize]) -> Self {
        let mut p = Self::identity(n);
        for &q in support {
            p.set(q, letter);
        }
        p
    }

    pub fn from_letters(letters: &[Pauli]) -> Self {
        let mut p = Self::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set(q, l);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Exponent of `i` in the overall phase, in `0..4`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    pub fn negate(&self) -> Self {
        self.clone().with_phase(self.phase + 2)
    }

    pub fn get(&self, q: usize) -> Pauli {
        let (w, b) = (q / 64, q % 64);
        Pauli::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set(&mut self, q: usize, letter: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / 64, q % 64);
        let (x, z) = letter.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((z as u64) << b);
    }

    pub fn x_bit(&self, q: usize) -> bool {
        (self.x[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        (self.z[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.n).map(|q| self.get(q)).collect()
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// Qubits carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.get(q) != Pauli::I).collect()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    /// True when the operator is Hermitian (overall phase ±1).
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// True iff the operator only has X letters (and I).
    pub fn is_x_type(&self) -> bool {
        self.z.iter().all(|&w| w == 0)
    }

    pub fn is_z_type(&self) -> bool {
        self.x.iter().all(|&w| w == 0)
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Group product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let mut plus = 0u32;
        let mut minus = 0u32;
        let mut x = Vec::with_capacity(self.x.len());
        let mut z = Vec::with_capacity(self.z.len());
        for w in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[w], self.z[w], other.x[w], other.z[w]);
            let (px1, py1, pz1) = (x1 & !z1, x1 & z1, !x1 & z1);
            let (px2, py2, pz2) = (x2 & !z2, x2 & z2, !x2 & z2);
            plus += ((px1 & py2) | (py1 & pz2) | (pz1 & px2)).count_ones();
            minus += ((px1 & pz2) | (pz1 & py2) | (py1 & px2)).count_ones();
            x.push(x1 ^ x2);
            z.push(z1 ^ z2);
        }
        let phase = (self.phase as u32 + other.phase as u32 + plus + 3 * minus) % 4;
        Ok(PauliString {
            n: self.n,
            phase: phase as u8,
            x,
            z,
        })
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_dims(other)?;
        let parity: u32 = (0..self.x.len())
            .map(|w| ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones())
            .sum();
        Ok(parity.is_multiple_of(2))
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::identity(self.n + other.n);
        for q in 0..self.n {
            out.set(q, self.get(q));
        }
        for q in 0..other.n {
            out.set(self.n + q, other.get(q));
        }
        out.with_phase(self.phase + other.phase)
    }

    /// Heisenberg image under a Hadamard on qubit `q`.
    pub fn conj_h(&mut self, q: usize) {
        let l = self.get(q);
        let (img, sign) = match l {
            Pauli::X => (Pauli::Z, 0),
            Pauli::Z => (Pauli::X, 0),
            Pauli::Y => (Pauli::Y, 2),
            Pauli::I => (Pauli::I, 0),
        };
        self.set(q, img);
        self.phase = (self.phase + sign) & 3;
    }

    /// Image under `S P S†` on qubit `q`.
    pub fn conj_s(&mut self, q: usize) {
        match self.get(q) {
            Pauli::X => self.set(q, Pauli::Y),
            Pauli::Y => {
                self.set(q, Pauli::X);
                self.phase = (self.phase + 2) & 3;
            }
            _ => {}
        }
    }

    pub fn conj_sdg(&mut self, q: usize) {
        match self.get(q) {
            Pauli::X => {
                self.set(q, Pauli::Y);
                self.phase = (self.phase + 2) & 3;
            }
            Pauli::Y => self.set(q, Pauli::X),
            _ => {}
        }
    }

    pub fn conj_x(&mut self, q: usize) {
        if self.z_bit(q) {
            self.phase = (self.phase + 2) & 3;
        }
    }

    pub fn conj_z(&mut self, q: usize) {
        if self.x_bit(q) {
            self.phase = (self.phase + 2) & 3;
        }
    }

    /// Image under `CX(c→t) P CX(c→t)`.
    pub fn conj_cx(&mut self, c: usize, t: usize) {
        // Write P as a product of its single-site factors and push each through.
        let xc = self.x_bit(c);
        let zt = self.z_bit(t);
        let before = self.clone();
        let mut out = PauliString::identity(self.n).with_phase(before.phase);
        for q in 0..self.n {
            if q == c || q == t {
                continue;
            }
            out.set(q, before.get(q));
        }
        // Local part on (c, t) in canonical order X^a Z^b with phase correction.
        let mut local = PauliString::identity(self.n);
        let mut factor = |p: PauliString| {
            local = local.multiply(&p).expect("same width");
        };
        let (xt, zc) = (before.x_bit(t), before.z_bit(c));
        // Y = i X Z, so undo the i for every Y in the original pair.
        let ys = (xc && zc) as u8 + (xt && zt) as u8;
        if xc {
            factor(PauliString::from_support(self.n, Pauli::X, &[c, t]));
        }
        if xt {
            factor(PauliString::from_support(self.n, Pauli::X, &[t]));
        }
        if zc {
            factor(PauliString::from_support(self.n, Pauli::Z, &[c]));
        }
        if zt {
            factor(PauliString::from_support(self.n, Pauli::Z, &[c, t]));
        }
        local.phase = (local.phase + ys) & 3;
        *self = out.multiply(&local).expect("same width");
    }

    /// Image under `CZ(a,b)`.
    pub fn conj_cz(&mut self, a: usize, b: usize) {
        self.conj_h(b);
        self.conj_cx(a, b);
        self.conj_h(b);
    }

    pub fn adjoint(&self) -> Self {
        let flip = if self.phase % 2 == 1 { 2 } else { 0 };
        self.clone().with_phase(self.phase + flip)
    }

    /// Applies the operator to a dense state whose index bit `q` is qubit `q`.
    pub fn apply_to_state(&self, amps: &[Complex64]) -> Vec<Complex64> {
        assert!(self.n <= 63 && amps.len() == 1usize << self.n);
        let (xm, zm) = (
            self.x.first().copied().unwrap_or(0),
            self.z.first().copied().unwrap_or(0),
        );
        let ys = (xm & zm).count_ones() as u8;
        let global = I_POWERS[((self.phase + ys) & 3) as usize];
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (j, a) in amps.iter().enumerate() {
            let sign = if (zm & j as u64).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[j ^ xm as usize] = a * global * sign;
        }
        out
    }

    /// Relocates letter on qubit `q` to `mapping[q]`; phase unchanged.
    pub fn permuted(&self, mapping: &[usize]) -> Self {
        let mut out = Self::identity(self.n).with_phase(self.phase);
        for q in 0..self.n {
            out.set(mapping[q], self.get(q));
        }
        out
    }

    /// Restriction to a subset of qubits, as a string on `qubits.len()` qubits.
    pub fn restrict(&self, qubits: &[usize]) -> Self {
        let mut out = Self::identity(qubits.len()).with_phase(self.phase);
        for (i, &q) in qubits.iter().enumerate() {
            out.set(i, self.get(q));
        }
        out
    }

    /// Embeds a string into a larger register at the given positions.
    pub fn embed(&self, n: usize, positions: &[usize]) -> Self {
        let mut out = Self::identity(n).with_phase(self.phase);
        for (i, &q) in positions.iter().enumerate() {
            out.set(q, self.get(i));
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}")?;
        for q in 0..self.n {
            write!(f, "{}", self.get(q).letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().replace('−', "-");
        let err = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let mut rest = t.as_str();
        let mut phase = 0u8;
        if let Some(r) = rest.strip_prefix('-') {
            phase = 2;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            phase += 1;
            rest = r;
        }
        if rest.is_empty() {
            return Err(err("no Pauli letters"));
        }
        let letters = rest
            .chars()
            .map(|c| {
                Pauli::from_letter(c).ok_or_else(|| err(&format!("unexpected character '{c}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_letters(&letters).with_phase(phase))
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a Pauli string literal, panicking on malformed input. For constants.
pub fn ps(s: &str) -> PauliString {
    s.parse().unwrap_or_else(|e| panic!("{e}"))
}

/// Outcome of a sign-aware stabilizer membership test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    NotMember,
    Plus,
    Minus,
}

impl Membership {
    pub fn is_member(self) -> bool {
        self != Membership::NotMember
    }
}

/// Abelian Pauli group not containing `-I`, given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliString>,
    // Row-reduced copy for membership tests: (pivot column, row).
    reduced: Vec<(usize, PauliString)>,
}

impl StabilizerGroup {
    pub fn new(generators: Vec<PauliString>) -> Result<Self> {
        let n = generators
            .first()
            .map(|g| g.n())
            .ok_or_else(|| Error::InvalidStabilizerGroup("no generators".into()))?;
        for (i, g) in generators.iter().enumerate() {
            if g.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: g.n(),
                });
            }
            if !g.is_hermitian() {
                return Err(Error::InvalidStabilizerGroup(format!(
                    "generator {g} is not Hermitian"
                )));
            }
            for h in &generators[..i] {
                if !g.commutes(h)? {
                    return Err(Error::InvalidStabilizerGroup(format!(
                        "{g} and {h} anticommute"
                    )));
                }
            }
        }
        let reduced = reduce(&generators);
        if reduced.len() != generators.len() {
            // A dependent generator set either repeats elements or produces -I.
            for g in &generators {
                let rest: Vec<_> = generators.iter().filter(|h| *h != g).cloned().collect();
                if !rest.is_empty() && membership_in(&reduce(&rest), g) == Membership::Minus {
                    return Err(Error::InvalidStabilizerGroup("group contains -I".into()));
                }
            }
            return Err(Error::InvalidStabilizerGroup(
                "generators are not independent".into(),
            ));
        }
        Ok(StabilizerGroup {
            n,
            generators,
            reduced,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// Sign-aware membership. Operators with an odd residual phase are non-members.
    pub fn membership(&self, p: &PauliString) -> Result<Membership> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: p.n(),
            });
        }
        for g in &self.generators {
            if !g.commutes(p)? {
                return Ok(Membership::NotMember);
            }
        }
        Ok(membership_in(&self.reduced, p))
    }

    /// True iff `p` is a product of generators, sign included.
    pub fn in_group(&self, p: &PauliString) -> Result<bool> {
        Ok(self.membership(p)? == Membership::Plus)
    }

    /// Every element of the group (2^r of them).
    pub fn elements(&self) -> Vec<PauliString> {
        let r = self.generators.len();
        (0..1usize << r)
            .map(|mask| {
                let mut acc = PauliString::identity(self.n);
                for (i, g) in self.generators.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        acc = acc.multiply(g).expect("same width");
                    }
                }
                acc
            })
            .collect()
    }
}

fn column_bit(p: &PauliString, col: usize) -> bool {
    let n = p.n();
    if col < n {
        p.x_bit(col)
    } else {
        p.z_bit(col - n)
    }
}

fn reduce(gens: &[PauliString]) -> Vec<(usize, PauliString)> {
    let mut rows: Vec<PauliString> = gens.to_vec();
    let mut out = Vec::new();
    let n = gens.first().map(|g| g.n()).unwrap_or(0);
    for col in 0..2 * n {
        let Some(pos) = rows.iter().position(|r| column_bit(r, col)) else {
            continue;
        };
        let pivot = rows.swap_remove(pos);
        for r in rows.iter_mut() {
            if column_bit(r, col) {
                *r = r.multiply(&pivot).expect("same width");
            }
        }
        for (_, r) in out.iter_mut() {
            if column_bit(r, col) {
                *r = r.multiply(&pivot).expect("same width");
            }
        }
        out.push((col, pivot));
    }
    out
}

fn membership_in(reduced: &[(usize, PauliString)], p: &PauliString) -> Membership {
    let mut acc = p.clone();
    for (col, row) in reduced {
        if column_bit(&acc, *col) {
            // Multiply on the left by the (Hermitian, commuting) row to clear the pivot.
            acc = row.multiply(&acc).expect("same width");
        }
    }
    if !acc.is_identity_up_to_phase() {
        return Membership::NotMember;
    }
    match acc.phase() {
        0 => Membership::Plus,
        2 => Membership::Minus,
        _ => Membership::NotMember,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_products() {
        assert_eq!(ps("X").multiply(&ps("Z")).unwrap(), ps("-iY"));
        assert_eq!(ps("Z").multiply(&ps("X")).unwrap(), ps("iY"));
        assert_eq!(ps("X").multiply(&ps("Y")).unwrap(), ps("iZ"));
        assert_eq!(ps("Y").multiply(&ps("Z")).unwrap(), ps("iX"));
        for s in ["X", "Y", "Z", "-XYZ"] {
            let p = ps(s);
            assert_eq!(p.multiply(&p).unwrap(), PauliString::identity(p.n()));
        }
    }

    #[test]
    fn tensor_factorised_product() {
        assert_eq!(ps("XX").multiply(&ps("ZZ")).unwrap(), ps("-YY"));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        assert!(matches!(
            ps("XX").multiply(&ps("X")),
            Err(Error::DimensionMismatch { left: 2, right: 1 })
        ));
        assert!(ps("XX").commutes(&ps("XXX")).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(ps("XX").commutes(&ps("ZZ")).unwrap());
        assert!(!ps("XI").commutes(&ps("ZI")).unwrap());
    }

    #[test]
    fn text_round_trip() {
        for s in ["+ZZZZIIII", "-iXYZ", "+iI", "-XXXX"] {
            assert_eq!(ps(s).to_string(), s);
        }
        assert_eq!(ps("−iXYZ"), ps("-iXYZ"));
        assert_eq!(ps("ZZ"), ps("+ZZ"));
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("-".parse::<PauliString>().is_err());
    }

    #[test]
    fn membership_is_sign_aware() {
        let g = StabilizerGroup::new(vec![ps("XXXX"), ps("ZZZZ")]).unwrap();
        assert_eq!(g.membership(&ps("XXXX")).unwrap(), Membership::Plus);
        assert_eq!(g.membership(&ps("-XXXX")).unwrap(), Membership::Minus);
        assert_eq!(g.membership(&ps("-YYYY")).unwrap(), Membership::Minus);
        assert_eq!(g.membership(&ps("YYYY")).unwrap(), Membership::Plus);
        assert_eq!(g.membership(&ps("XXII")).unwrap(), Membership::NotMember);
        assert_eq!(g.membership(&ps("XIII")).unwrap(), Membership::NotMember);
        assert_eq!(g.membership(&ps("iIIII")).unwrap(), Membership::NotMember);
        assert_eq!(g.elements().len(), 4);
    }

    #[test]
    fn invalid_groups_rejected() {
        assert!(StabilizerGroup::new(vec![ps("XI"), ps("ZI")]).is_err());
        assert!(StabilizerGroup::new(vec![ps("XX"), ps("ZZ"), ps("YY")]).is_err());
        assert!(StabilizerGroup::new(vec![ps("-II")]).is_err());
        assert!(StabilizerGroup::new(vec![ps("iXX")]).is_err());
        assert!(StabilizerGroup::new(vec![ps("XX"), ps("XX")]).is_err());
    }

    #[test]
    fn clifford_conjugation_rules() {
        let mut p = ps("XI");
        p.conj_cx(0, 1);
        assert_eq!(p, ps("XX"));
        let mut p = ps("IZ");
        p.conj_cx(0, 1);
        assert_eq!(p, ps("ZZ"));
        let mut p = ps("YI");
        p.conj_cx(0, 1);
        assert_eq!(p, ps("YX"));
        let mut p = ps("IY");
        p.conj_cx(0, 1);
        assert_eq!(p, ps("ZY"));
        let mut p = ps("YY");
        p.conj_cx(0, 1);
        assert_eq!(p, ps("-XZ"));
        let mut p = ps("XI");
        p.conj_cz(0, 1);
        assert_eq!(p, ps("XZ"));
        let mut p = ps("Y");
        p.conj_h(0);
        assert_eq!(p, ps("-Y"));
        let mut p = ps("X");
        p.conj_s(0);
        assert_eq!(p, ps("Y"));
        p.conj_s(0);
        assert_eq!(p, ps("-X"));
        p.conj_sdg(0);
        assert_eq!(p, ps("Y"));
    }

    #[test]
    fn permute_restrict_embed() {
        let p = ps("-XYZI");
        assert_eq!(p.permuted(&[1, 0, 2, 3]), ps("-YXZI"));
        assert_eq!(p.restrict(&[1, 2]), ps("-YZ"));
        assert_eq!(ps("XZ").embed(4, &[3, 1]), ps("IZIX"));
        assert_eq!(ps("X").tensor(&ps("-Z")), ps("-XZ"));
    }

    #[test]
    fn state_action() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        // Y|0> = i|1>
        let out = ps("Y").apply_to_state(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(out, vec![c(0.0, 0.0), c(0.0, 1.0)]);
        // -iZX on |00> (qubit 1 flipped)
        let out = ps("-iZX").apply_to_state(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(out[2], c(0.0, -1.0));
        assert_eq!(ps("iXZ").adjoint(), ps("-iXZ"));
    }

    #[test]
    fn wide_strings_cross_word_boundary() {
        let mut a = PauliString::identity(130);
        a.set(0, Pauli::X);
        a.set(129, Pauli::Z);
        let mut b = PauliString::identity(130);
        b.set(129, Pauli::X);
        assert!(!a.commutes(&b).unwrap());
        assert_eq!(a.multiply(&b).unwrap().get(129), Pauli::Y);
        assert_eq!(a.weight(), 2);
    }
}
