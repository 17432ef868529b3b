//! Dense state vector over the currently entangled ("active") qubits.
//!
//! Qubits that are in a known single-qubit Pauli eigenstate are kept outside
//! the vector and only tensored in when a gate needs them. The global phase of
//! the full state is not tracked.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::Pauli;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Probability below which a measurement branch is treated as impossible.
pub const ZERO_BRANCH_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Known {
    Zero,
    One,
    Plus,
    Minus,
}

impl Known {
    fn amplitudes(self) -> [Complex64; 2] {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Known::Zero => [C1, C0],
            Known::One => [C0, C1],
            Known::Plus => [Complex64::new(r, 0.0), Complex64::new(r, 0.0)],
            Known::Minus => [Complex64::new(r, 0.0), Complex64::new(-r, 0.0)],
        }
    }

    fn apply_pauli(self, p: Pauli) -> Known {
        use Known::*;
        match (self, p) {
            (s, Pauli::I) => s,
            (Zero, Pauli::X | Pauli::Y) => One,
            (One, Pauli::X | Pauli::Y) => Zero,
            (Plus, Pauli::Z | Pauli::Y) => Minus,
            (Minus, Pauli::Z | Pauli::Y) => Plus,
            (s, _) => s,
        }
    }

    fn hadamard(self) -> Known {
        match self {
            Known::Zero => Known::Plus,
            Known::Plus => Known::Zero,
            Known::One => Known::Minus,
            Known::Minus => Known::One,
        }
    }
}

/// Single-qubit gates with a closed-form kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate1 {
    H,
    S,
    Sdg,
    T,
    Tdg,
}

#[derive(Clone, Debug)]
pub struct SimState {
    n: usize,
    cap: usize,
    amps: Vec<Complex64>,
    pos: Vec<Option<usize>>,
    at: Vec<usize>,
    known: Vec<Known>,
}

/// Inserts a zero bit at position `k` of `x`.
#[inline]
fn insert_zero(x: usize, k: usize) -> usize {
    let low = (1usize << k) - 1;
    (x & low) | ((x & !low) << 1)
}

impl SimState {
    /// All `n` qubits in |0>, at most `cap` of them simultaneously entangled.
    pub fn new(n: usize, cap: usize) -> Self {
        SimState {
            n,
            cap,
            amps: vec![C1],
            pos: vec![None; n],
            at: Vec::new(),
            known: vec![Known::Zero; n],
        }
    }

    /// State whose qubits `order` hold `amps` (bit `i` is `order[i]`); the rest are |0>.
    pub fn from_dense(n: usize, cap: usize, order: &[usize], amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << order.len() {
            return Err(Error::DimensionMismatch {
                left: 1usize << order.len(),
                right: amps.len(),
            });
        }
        if order.len() > cap {
            return Err(Error::Capacity {
                required: order.len(),
                cap,
            });
        }
        let mut s = SimState::new(n, cap);
        for (i, &q) in order.iter().enumerate() {
            if q >= n || s.pos[q].is_some() {
                return Err(Error::InvalidArgument(format!("bad qubit {q} in order")));
            }
            s.pos[q] = Some(i);
        }
        s.at = order.to_vec();
        s.amps = amps;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of qubits currently held in the dense vector.
    pub fn width(&self) -> usize {
        self.at.len()
    }

    pub fn is_active(&self, q: usize) -> bool {
        self.pos[q].is_some()
    }

    pub fn known(&self, q: usize) -> Option<Known> {
        if self.pos[q].is_some() {
            None
        } else {
            Some(self.known[q])
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn activate(&mut self, q: usize) -> Result<usize> {
        if let Some(p) = self.pos[q] {
            return Ok(p);
        }
        if self.at.len() + 1 > self.cap {
            return Err(Error::Capacity {
                required: self.at.len() + 1,
                cap: self.cap,
            });
        }
        let [a0, a1] = self.known[q].amplitudes();
        // In place, so the buffer's capacity is reused across activations.
        let len = self.amps.len();
        match self.known[q] {
            Known::Zero => self.amps.resize(2 * len, C0),
            Known::One => {
                self.amps.resize(2 * len, C0);
                let (lo, hi) = self.amps.split_at_mut(len);
                lo.swap_with_slice(hi);
            }
            _ => {
                self.amps.extend_from_within(..);
                let (lo, hi) = self.amps.split_at_mut(len);
                lo.iter_mut().for_each(|a| *a *= a0);
                hi.iter_mut().for_each(|a| *a *= a1);
            }
        }
        let p = self.at.len();
        self.at.push(q);
        self.pos[q] = Some(p);
        Ok(p)
    }

    /// Removes the active qubit at position `k`, which must be in basis state `b`.
    fn remove(&mut self, k: usize, b: bool, scale: f64) {
        let s = 1usize << k;
        let len = self.amps.len();
        let mut w = 0;
        for start in (0..len).step_by(2 * s) {
            let from = start + if b { s } else { 0 };
            for i in from..from + s {
                self.amps[w] = self.amps[i] * scale;
                w += 1;
            }
        }
        self.amps.truncate(len / 2);
        let q = self.at.remove(k);
        self.pos[q] = None;
        for (p, &r) in self.at.iter().enumerate().skip(k) {
            self.pos[r] = Some(p);
        }
    }

    /// Moves the state of `qubits[i]` to `qubits[mapping[i]]` without touching amplitudes.
    pub fn relabel(&mut self, qubits: &[usize], mapping: &[usize]) {
        let old_pos: Vec<_> = qubits.iter().map(|&q| self.pos[q]).collect();
        let old_known: Vec<_> = qubits.iter().map(|&q| self.known[q]).collect();
        for (i, &m) in mapping.iter().enumerate() {
            let dst = qubits[m];
            self.pos[dst] = old_pos[i];
            self.known[dst] = old_known[i];
            if let Some(p) = old_pos[i] {
                self.at[p] = dst;
            }
        }
    }

    pub fn set_known(&mut self, q: usize, k: Known) -> Result<()> {
        if self.pos[q].is_some() {
            return Err(Error::InvalidOperand(format!(
                "qubit {q} is entangled; measure it first"
            )));
        }
        self.known[q] = k;
        Ok(())
    }

    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        let Some(k) = self.pos[q] else {
            self.known[q] = self.known[q].apply_pauli(p);
            return;
        };
        let s = 1usize << k;
        for chunk in self.amps.chunks_exact_mut(2 * s) {
            let (lo, hi) = chunk.split_at_mut(s);
            match p {
                Pauli::I => {}
                Pauli::X => lo.swap_with_slice(hi),
                Pauli::Z => hi.iter_mut().for_each(|a| *a = -*a),
                Pauli::Y => {
                    // Y|0> = i|1>, Y|1> = -i|0>
                    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                        let (x, y) = (*a, *b);
                        *a = Complex64::new(y.im, -y.re);
                        *b = Complex64::new(-x.im, x.re);
                    }
                }
            }
        }
    }

    pub fn apply_gate1(&mut self, q: usize, g: Gate1) -> Result<()> {
        if g == Gate1::H && self.pos[q].is_none() {
            self.known[q] = self.known[q].hadamard();
            return Ok(());
        }
        if self.pos[q].is_none() && matches!(self.known[q], Known::Zero | Known::One) {
            // Diagonal gates only add a global phase to a Z eigenstate.
            return Ok(());
        }
        let k = self.activate(q)?;
        let s = 1usize << k;
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let phase = match g {
            Gate1::S => Complex64::new(0.0, 1.0),
            Gate1::Sdg => Complex64::new(0.0, -1.0),
            Gate1::T => Complex64::new(r, r),
            Gate1::Tdg => Complex64::new(r, -r),
            Gate1::H => C0,
        };
        for chunk in self.amps.chunks_exact_mut(2 * s) {
            let (lo, hi) = chunk.split_at_mut(s);
            if g == Gate1::H {
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = (x + y) * r;
                    *b = (x - y) * r;
                }
            } else {
                hi.iter_mut().for_each(|a| *a *= phase);
            }
        }
        Ok(())
    }

    pub fn apply_cx(&mut self, c: usize, t: usize) -> Result<()> {
        match self.known(c) {
            Some(Known::Zero) => return Ok(()),
            Some(Known::One) => {
                self.apply_pauli(t, Pauli::X);
                return Ok(());
            }
            _ => {}
        }
        match self.known(t) {
            Some(Known::Plus) => return Ok(()),
            Some(Known::Minus) => {
                self.apply_pauli(c, Pauli::Z);
                return Ok(());
            }
            _ => {}
        }
        let kc = self.activate(c)?;
        let kt = self.activate(t)?;
        let (cm, tm) = (1usize << kc, 1usize << kt);
        let (lo, hi) = (kc.min(kt), kc.max(kt));
        for j in 0..self.amps.len() >> 2 {
            let i = insert_zero(insert_zero(j, lo), hi) | cm;
            self.amps.swap(i, i | tm);
        }
        Ok(())
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        for (x, y) in [(a, b), (b, a)] {
            match self.known(x) {
                Some(Known::Zero) => return Ok(()),
                Some(Known::One) => {
                    self.apply_pauli(y, Pauli::Z);
                    return Ok(());
                }
                _ => {}
            }
        }
        let ka = self.activate(a)?;
        let kb = self.activate(b)?;
        let m = (1usize << ka) | (1usize << kb);
        let (lo, hi) = (ka.min(kb), ka.max(kb));
        for j in 0..self.amps.len() >> 2 {
            let i = insert_zero(insert_zero(j, lo), hi) | m;
            self.amps[i] = -self.amps[i];
        }
        Ok(())
    }

    /// `exp(-i theta/2 P)` for a Pauli string on the listed qubits.
    pub fn apply_pauli_rotation(
        &mut self,
        qubits: &[usize],
        paulis: &[Pauli],
        theta: f64,
    ) -> Result<()> {
        for &q in qubits {
            self.activate(q)?;
        }
        let mut xm = 0usize;
        let mut zm = 0usize;
        let mut ys = 0u32;
        for (&q, &p) in qubits.iter().zip(paulis) {
            let k = self.pos[q].expect("activated");
            let (x, z) = p.bits();
            xm |= (x as usize) << k;
            zm |= (z as usize) << k;
            ys += (x && z) as u32;
        }
        // P = i^ys X^x Z^z
        let global =
            [C1, Complex64::new(0.0, 1.0), -C1, Complex64::new(0.0, -1.0)][(ys % 4) as usize];
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let f = Complex64::new(0.0, -s) * global;
        let sign = |j: usize| {
            if (zm & j).count_ones() % 2 == 1 {
                -f
            } else {
                f
            }
        };
        if xm == 0 {
            for (j, a) in self.amps.iter_mut().enumerate() {
                *a *= c + sign(j);
            }
        } else {
            // Pair j with j ^ xm, visiting each pair once from its lower member.
            let top = 1usize << (usize::BITS - 1 - xm.leading_zeros());
            for j in 0..self.amps.len() {
                if j & top != 0 {
                    continue;
                }
                let k = j ^ xm;
                let (a, b) = (self.amps[j], self.amps[k]);
                self.amps[j] = a * c + sign(k) * b;
                self.amps[k] = b * c + sign(j) * a;
            }
        }
        Ok(())
    }

    /// Probability that measuring `q` in the Z basis gives 1.
    pub fn prob_one(&self, q: usize) -> f64 {
        match self.pos[q] {
            None => match self.known[q] {
                Known::Zero => 0.0,
                Known::One => 1.0,
                _ => 0.5,
            },
            Some(k) => {
                let s = 1usize << k;
                self.amps
                    .chunks_exact(2 * s)
                    .map(|c| c[s..].iter().map(|a| a.norm_sqr()).sum::<f64>())
                    .sum::<f64>()
                    / self.norm_sqr()
            }
        }
    }

    /// Probability that measuring `q` in the X basis gives 1.
    pub fn prob_one_x(&self, q: usize) -> f64 {
        match self.pos[q] {
            None => match self.known[q] {
                Known::Plus => 0.0,
                Known::Minus => 1.0,
                _ => 0.5,
            },
            Some(k) => {
                let s = 1usize << k;
                self.amps
                    .chunks_exact(2 * s)
                    .map(|c| {
                        c[..s]
                            .iter()
                            .zip(&c[s..])
                            .map(|(a, b)| (a - b).norm_sqr())
                            .sum::<f64>()
                    })
                    .sum::<f64>()
                    / (2.0 * self.norm_sqr())
            }
        }
    }

    /// Projects `q` onto Z outcome `b` and detaches it; returns the outcome probability.
    pub fn collapse_z(&mut self, q: usize, b: bool) -> f64 {
        let p1 = self.prob_one(q);
        self.collapse_z_given(q, b, p1)
    }

    /// [`SimState::collapse_z`] with `p1 = prob_one(q)` already known.
    pub fn collapse_z_given(&mut self, q: usize, b: bool, p1: f64) -> f64 {
        let p = if b { p1 } else { 1.0 - p1 };
        match self.pos[q] {
            None => {}
            Some(k) => {
                let scale = if p > 0.0 { 1.0 / p.sqrt() } else { 0.0 };
                self.remove(k, b, scale);
            }
        }
        self.known[q] = if b { Known::One } else { Known::Zero };
        p
    }

    /// Rotates X-basis eigenstates into Z-basis ones and back, for X measurements.
    pub fn hadamard(&mut self, q: usize) -> Result<()> {
        self.apply_gate1(q, Gate1::H)
    }

    /// Dense amplitudes over `order` (bit `i` of the index is qubit `order[i]`).
    /// Every active qubit must appear in `order`.
    pub fn full_state(&self, order: &[usize]) -> Vec<Complex64> {
        for &q in &self.at {
            assert!(
                order.contains(&q),
                "active qubit {q} missing from requested order"
            );
        }
        let dim = 1usize << order.len();
        let mut out = vec![C0; dim];
        for (idx, slot) in out.iter_mut().enumerate() {
            let mut active_index = 0usize;
            let mut factor = C1;
            for (i, &q) in order.iter().enumerate() {
                let bit = (idx >> i) & 1;
                match self.pos[q] {
                    Some(k) => active_index |= bit << k,
                    None => factor *= self.known[q].amplitudes()[bit],
                }
            }
            if factor != C0 {
                *slot = self.amps[active_index] * factor;
            }
        }
        out
    }

    pub fn active_qubits(&self) -> &[usize] {
        &self.at
    }
}
