use serde::{Deserialize, Serialize};

use crate::circuit::{PhysicalCircuit, PhysicalOp, TELEPORT_LABEL_PREFIX};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub width: usize,
    pub depth: usize,
    pub hardness: usize,
    pub two_qubit_count: usize,
    pub teleport_count: usize,
    /// Two-qubit gates between a teleport label and the next label.
    pub teleport_two_qubit_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    /// Documentation-only single-qubit synthesis estimate `5 log2(1/eps)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_estimate: Option<f64>,
}

pub fn t_count_estimate(epsilon: f64) -> f64 {
    5.0 * (1.0 / epsilon).log2()
}

pub fn cost_report(circuit: &PhysicalCircuit, epsilon: Option<f64>) -> CostReport {
    let mut in_teleport = false;
    let mut teleport_two_qubit_count = 0;
    for op in &circuit.ops {
        match op {
            PhysicalOp::Label { text } => in_teleport = text.starts_with(TELEPORT_LABEL_PREFIX),
            o if o.is_two_qubit_gate() && in_teleport => teleport_two_qubit_count += 1,
            _ => {}
        }
    }
    let teleport_count = circuit.teleport_label_count();
    CostReport {
        width: circuit.metadata.logical_width,
        depth: circuit.metadata.logical_depth,
        hardness: teleport_count,
        two_qubit_count: circuit.two_qubit_gate_count(),
        teleport_count,
        teleport_two_qubit_count,
        strategy: circuit.metadata.strategy.clone(),
        t_estimate: epsilon.map(t_count_estimate),
    }
}

impl std::fmt::Display for CostReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "strategy: {}", self.strategy.as_deref().unwrap_or("-"))?;
        writeln!(f, "width: {}", self.width)?;
        writeln!(f, "depth: {}", self.depth)?;
        writeln!(f, "hardness: {}", self.hardness)?;
        writeln!(f, "teleports: {}", self.teleport_count)?;
        writeln!(f, "two-qubit gates: {}", self.two_qubit_count)?;
        write!(
            f,
            "two-qubit gates in teleports: {}",
            self.teleport_two_qubit_count
        )?;
        if let Some(t) = self.t_estimate {
            write!(f, "\nT(eps) estimate: {t}")?;
        }
        Ok(())
    }
}
