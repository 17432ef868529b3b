use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::Pauli;

/// Depolarizing gate noise, classical readout flips and preparation flips.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub p_meas: f64,
    pub p_prep: f64,
    /// Ops touching any of these qubits are noiseless.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exempt: Vec<usize>,
}

pub const PAULIS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn new(p1: f64, p2: f64, p_meas: f64, p_prep: f64) -> Result<Self> {
        let m = NoiseModel {
            p1,
            p2,
            p_meas,
            p_prep,
            exempt: Vec::new(),
        };
        m.check()?;
        Ok(m)
    }

    /// Uniform rate on every location type.
    pub fn uniform(p: f64) -> Result<Self> {
        Self::new(p, p, p, p)
    }

    pub fn check(&self) -> Result<()> {
        for (name, p) in [
            ("p1", self.p1),
            ("p2", self.p2),
            ("p_meas", self.p_meas),
            ("p_prep", self.p_prep),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {p} is not a probability"
                )));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_meas == 0.0 && self.p_prep == 0.0
    }

    pub fn is_exempt(&self, qubits: &[usize]) -> bool {
        qubits.iter().any(|q| self.exempt.contains(q))
    }
}

/// The 15 non-identity two-qubit Paulis, index `i` in `1..16` as (i % 4, i / 4).
pub fn two_qubit_pauli(i: usize) -> (Pauli, Pauli) {
    let ls = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    (ls[i % 4], ls[i / 4])
}
