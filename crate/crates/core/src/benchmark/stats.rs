use num_rational::Rational64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Basis;
use crate::error::{Error, Result};
use crate::pauli::Pauli;

/// Probability that a uniformly twirled weight-`w` Pauli error flips exactly
/// `k` measured bits: `C(w,k) 2^k / 3^w`.
pub fn a_kw(k: u32, w: u32) -> Result<Rational64> {
    if k > w {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds W = {w}")));
    }
    let binom = (0..k).fold(1i64, |acc, i| acc * (w - i) as i64 / (i + 1) as i64);
    Ok(Rational64::new(binom << k, 3i64.pow(w)))
}

/// `sum_k (-1/2)^k h_k` for a normalized Hamming-distance histogram.
pub fn confidence_from_histogram(h: &[f64]) -> Result<f64> {
    let total: f64 = h.iter().sum();
    if h.iter().any(|&x| x < 0.0) || (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "histogram is not normalized (sum {total})"
        )));
    }
    Ok(h.iter()
        .enumerate()
        .map(|(k, &x)| (-0.5f64).powi(k as i32) * x)
        .sum())
}

/// Basis and sign bit of one twirled qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Twirl {
    pub basis: Basis,
    pub bit: bool,
}

pub fn twirl_layer<R: Rng>(w: usize, rng: &mut R) -> Vec<Twirl> {
    (0..w)
        .map(|_| Twirl {
            basis: [Basis::X, Basis::Y, Basis::Z][rng.gen_range(0..3)],
            bit: rng.gen(),
        })
        .collect()
}

pub fn basis_pauli(b: Basis) -> Pauli {
    match b {
        Basis::X => Pauli::X,
        Basis::Y => Pauli::Y,
        Basis::Z => Pauli::Z,
    }
}

/// Monte-Carlo flip counts for a weight-`w` error: each of `w` qubits carries
/// a uniform non-identity Pauli and is read in a uniform twirl basis; a bit
/// flips when the two anticommute. Returns the normalized histogram over
/// `0..=w` flips.
pub fn twirl_flip_histogram<R: Rng>(w: usize, shots: usize, rng: &mut R) -> Vec<f64> {
    let mut counts = vec![0usize; w + 1];
    for _ in 0..shots {
        let flips = twirl_layer(w, rng)
            .iter()
            .filter(|t| {
                let e = [Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..3)];
                let (ex, ez) = e.bits();
                let (bx, bz) = basis_pauli(t.basis).bits();
                (ex & bz) ^ (ez & bx)
            })
            .count();
        counts[flips] += 1;
    }
    counts
        .into_iter()
        .map(|c| c as f64 / shots.max(1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(a_kw(0, 0).unwrap(), Rational64::from_integer(1));
        assert_eq!(a_kw(1, 1).unwrap(), Rational64::new(2, 3));
        assert_eq!(a_kw(2, 3).unwrap(), Rational64::new(4, 9));
        assert!(a_kw(3, 2).is_err());
    }

    #[test]
    fn alternating_sum_inverts_the_twirl() {
        for w in 0..=8 {
            let s: Rational64 = (0..=w)
                .map(|k| {
                    let sign = Rational64::new(if k % 2 == 0 { 1 } else { -1 }, 1 << k);
                    sign * a_kw(k, w).unwrap()
                })
                .sum();
            let want = Rational64::from_integer((w == 0) as i64);
            assert_eq!(s, want, "W = {w}");
        }
    }

    #[test]
    fn histogram_confidence() {
        assert_eq!(confidence_from_histogram(&[1.0, 0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(confidence_from_histogram(&[0.5, 0.5]).unwrap(), 0.25);
        let q = 0.3;
        let c = confidence_from_histogram(&[1.0 - 2.0 * q / 3.0, 2.0 * q / 3.0]).unwrap();
        assert!((c - (1.0 - q)).abs() < 1e-12);
        assert!(confidence_from_histogram(&[0.5, 0.4]).is_err());
    }
}
