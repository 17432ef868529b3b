use codeswitch::circuit::{GateKind, LogicalCircuit, LogicalGate};
use codeswitch::compiler::{catalytic_t, expand_catalytic_t, H_STATE_ANGLE};
use codeswitch::dense::{apply_gate, apply_ry, kron_vec, LogicalSim, C};
use codeswitch::sim::shot_rng;

fn h_state() -> Vec<C> {
    let mut v = vec![C::new(1.0, 0.0), C::new(0.0, 0.0)];
    apply_ry(&mut v, 0, H_STATE_ANGLE);
    v
}

fn overlap(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C>().norm()
}

#[test]
fn perfect_catalyst_is_returned() {
    for (a, b) in [(1.0, 0.0), (0.0, 1.0), (0.6, 0.8), (0.28, -0.96)] {
        let psi = vec![C::new(a, 0.0), C::new(0.0, b)];
        let mut st = kron_vec(&psi, &h_state());
        for g in catalytic_t(0, 1) {
            apply_gate(&mut st, &g).unwrap();
        }
        let mut t_psi = psi.clone();
        apply_gate(&mut t_psi, &LogicalGate::new(GateKind::T, &[0])).unwrap();
        let want = kron_vec(&t_psi, &h_state());
        assert!((overlap(&want, &st) - 1.0).abs() < 1e-10);
    }
}

fn chain(k: usize) -> LogicalCircuit {
    let mut c = LogicalCircuit::new(1);
    c.push(GateKind::PrepX, &[0]);
    for _ in 0..k {
        c.push(GateKind::T, &[0]);
    }
    c
}

#[test]
fn success_probability_is_the_catalyst_overlap() {
    let shots = 10_000;
    for gamma in [0.99, 0.9] {
        for k in [1, 2, 4, 8] {
            let c = expand_catalytic_t(&chain(k), gamma).unwrap();
            let mut want = vec![C::new(1.0, 0.0); 2];
            want.iter_mut().for_each(|a| *a /= 2f64.sqrt());
            for _ in 0..k {
                apply_gate(&mut want, &LogicalGate::new(GateKind::T, &[0])).unwrap();
            }
            let want = kron_vec(&want, &h_state());
            let mut ok = 0;
            for s in 0..shots {
                let (sim, outs) = LogicalSim::run(&c, &mut shot_rng(k as u64, s)).unwrap();
                if !outs[0] {
                    ok += 1;
                    assert!((overlap(&want, &sim.state) - 1.0).abs() < 1e-10);
                }
            }
            let p = ok as f64 / shots as f64;
            let sigma = (gamma * (1.0 - gamma) / shots as f64).sqrt();
            assert!((p - gamma).abs() <= 3.0 * sigma, "gamma={gamma} k={k}: {p}");
        }
    }
}
