use std::collections::HashMap;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mirror::{make_mirror, readout_circuit, twirled_circuit, MirrorSpec};
use super::stats::{confidence_from_histogram, twirl_layer, Twirl};
use crate::circuit::{Basis, PhysicalCircuit, PhysicalOp};
use crate::compiler::{compile, CompileOptions, ScheduleOptions, READOUT_LABEL};
use crate::error::{Error, Result};
use crate::gadgets::verify::BlockSet;
use crate::gadgets::RoundStrategy;
use crate::sim::{shot_rng, Executor, Gate1, NoiseModel, SimState, DEFAULT_CAPACITY};

pub const RESULT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    pub shots: usize,
    pub noise: NoiseModel,
    pub seed: u64,
    /// Start from an encoded Bell state with unencoded reference qubits and
    /// count error-free shots directly.
    pub oracle: bool,
    pub bootstrap: usize,
    pub resample_seed: u64,
    pub strategy: RoundStrategy,
    pub cap: usize,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            shots: 1000,
            noise: NoiseModel::noiseless(),
            seed: 0,
            oracle: false,
            bootstrap: 1000,
            resample_seed: 1,
            strategy: RoundStrategy::Sequential,
            cap: DEFAULT_CAPACITY,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
struct Shot {
    accepted: bool,
    distance: usize,
    /// Probability that the shot is error free, in oracle mode.
    fidelity: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitResult {
    pub seed: u64,
    pub hardness: usize,
    pub shots: usize,
    pub accepted: usize,
    /// Hamming-distance histogram over accepted shots.
    pub histogram: Vec<f64>,
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direct_confidence: Option<f64>,
    #[serde(skip)]
    shot_data: Vec<Shot>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleCounts {
    /// Accepted shots weighted by their error-free probability.
    pub n0: f64,
    pub n_det: usize,
    pub n_und: f64,
    pub p0: f64,
    pub p_det: f64,
    pub p_und: f64,
    pub confidence: Option<f64>,
    pub confidence_ci: Option<Interval>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkResult {
    pub schema_version: u32,
    pub w: usize,
    pub d: usize,
    pub eta: usize,
    pub shots: usize,
    pub accepted: usize,
    pub histogram: Vec<f64>,
    pub confidence: Option<f64>,
    pub confidence_ci: Option<Interval>,
    pub yield_: f64,
    pub yield_ci: Interval,
    pub undefined_confidence: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCounts>,
    pub circuits: Vec<CircuitResult>,
}

fn compile_options(w: usize, strategy: RoundStrategy, initialize: bool) -> CompileOptions {
    CompileOptions {
        strategy,
        direct_y: true,
        schedule: ScheduleOptions {
            initialize,
            placement: Some((0..w).map(|q| (q / 3, q % 3)).collect()),
            ..ScheduleOptions::default()
        },
        ..CompileOptions::default()
    }
}

/// Runs every mirror for `opts.shots` shots with a fresh twirl per shot.
pub fn estimate(specs: &[MirrorSpec], opts: &EstimateOptions) -> Result<BenchmarkResult> {
    opts.noise.check()?;
    let Some(first) = specs.first() else {
        return Err(Error::InvalidArgument("no mirror circuits".into()));
    };
    let circuits = specs
        .iter()
        .enumerate()
        .map(|(i, spec)| run_circuit(spec, opts, opts.seed.wrapping_add((i as u64) << 32)))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(first, circuits, opts))
}

fn run_circuit(spec: &MirrorSpec, opts: &EstimateOptions, seed: u64) -> Result<CircuitResult> {
    let body = make_mirror(spec)?;
    let w = spec.w;
    let plan: Vec<(Vec<Twirl>, ChaCha8Rng)> = (0..opts.shots as u64)
        .map(|s| {
            let mut rng = shot_rng(seed, s);
            (twirl_layer(w, &mut rng), rng)
        })
        .collect();
    let mut compiled: HashMap<Vec<Twirl>, PhysicalCircuit> = HashMap::new();
    let mut hardness = 0;
    for (t, _) in &plan {
        let key = circuit_key(t, opts.oracle);
        if compiled.contains_key(&key) {
            continue;
        }
        let c = if opts.oracle {
            let bases: Vec<Basis> = t.iter().map(|x| x.basis).collect();
            let c = compile(
                &readout_circuit(&body, &bases),
                &compile_options(w, opts.strategy, false),
            )?;
            let mut pc = c.scheduled.circuit.clone();
            pc.n_physical += w;
            pc
        } else {
            compile(
                &twirled_circuit(&body, t)?,
                &compile_options(w, opts.strategy, true),
            )?
            .scheduled
            .circuit
        };
        hardness = c.metadata.hardness;
        compiled.insert(key, c);
    }
    let oracle_ctx = if opts.oracle {
        Some(OracleContext::new(w, opts)?)
    } else {
        None
    };
    let shot_data = plan
        .into_par_iter()
        .map(|(t, mut rng)| {
            let c = &compiled[&circuit_key(&t, opts.oracle)];
            match &oracle_ctx {
                Some(ctx) => ctx.shot(c, &t, &opts.noise, &mut rng),
                None => plain_shot(c, &t, &opts.noise, opts.cap, &mut rng),
            }
        })
        .collect::<Result<Vec<Shot>>>()?;
    Ok(summarize(seed, hardness, w, shot_data))
}

fn circuit_key(t: &[Twirl], oracle: bool) -> Vec<Twirl> {
    if oracle {
        t.iter()
            .map(|x| Twirl {
                basis: x.basis,
                bit: false,
            })
            .collect()
    } else {
        t.to_vec()
    }
}

fn distance(c: &PhysicalCircuit, outputs: &[bool], expected: &[bool]) -> usize {
    c.outputs
        .iter()
        .zip(outputs)
        .filter(|(o, &b)| b != expected[o.qubit])
        .count()
}

fn plain_shot(
    c: &PhysicalCircuit,
    t: &[Twirl],
    noise: &NoiseModel,
    cap: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Shot> {
    let mut ex = Executor::new(c, cap)?;
    ex.run(noise, rng, true)?;
    let rec = ex.shot_record();
    let expected: Vec<bool> = t.iter().map(|x| x.bit).collect();
    Ok(Shot {
        accepted: !rec.discarded,
        distance: if rec.discarded {
            0
        } else {
            distance(c, &rec.outputs, &expected)
        },
        fidelity: None,
    })
}

/// Encoded Bell input with `w` reference qubits placed after the circuit's
/// own qubits.
struct OracleContext {
    set: BlockSet,
    /// Logical slot of each computational qubit in `set`.
    slots: Vec<usize>,
    input: Vec<Complex64>,
    cap: usize,
    w: usize,
}

impl OracleContext {
    fn new(w: usize, opts: &EstimateOptions) -> Result<Self> {
        let layout = crate::compiler::allocate(w, opts.strategy)?;
        let set = BlockSet::new(layout.n_physical, layout.data.clone())?;
        let k = set.k();
        let slots: Vec<usize> = (0..w).collect();
        let free: Vec<usize> = (w..k).collect();
        let nd = set.order().len();
        let mut input = vec![Complex64::new(0.0, 0.0); 1 << (nd + w)];
        let amp = (0.5f64).powf((w + free.len()) as f64 / 2.0);
        for x in 0..1usize << w {
            for f in 0..1usize << free.len() {
                let enc = set.encode_basis(x | (f << w));
                for (d, a) in enc.iter().enumerate() {
                    input[d | (x << nd)] += a * amp;
                }
            }
        }
        Ok(OracleContext {
            set,
            slots,
            input,
            cap: opts.cap,
            w,
        })
    }

    fn refs(&self, c: &PhysicalCircuit) -> Vec<usize> {
        (c.n_physical - self.w..c.n_physical).collect()
    }

    fn shot(
        &self,
        c: &PhysicalCircuit,
        t: &[Twirl],
        noise: &NoiseModel,
        rng: &mut ChaCha8Rng,
    ) -> Result<Shot> {
        let refs = self.refs(c);
        let mut order = self.set.order();
        order.extend(&refs);
        let state = SimState::from_dense(c.n_physical, self.cap, &order, self.input.clone())?;
        let mut ex = Executor::with_state(c, state)?;
        while !ex.finished() && !ex.discarded {
            if matches!(&c.ops[ex.pc], PhysicalOp::Label { text } if text == READOUT_LABEL) {
                break;
            }
            ex.step(noise, rng, None)?;
        }
        let fidelity = if ex.discarded {
            0.0
        } else if ex.faults.is_empty() {
            1.0
        } else {
            self.fidelity(&ex.state, &refs)
        };
        let mut expected = Vec::with_capacity(t.len());
        for (&r, x) in refs.iter().zip(t) {
            let b = measure_reference(&mut ex.state, r, x.basis, rng)?;
            expected.push(b ^ (x.basis == Basis::Y));
        }
        ex.run(noise, rng, true)?;
        let rec = ex.shot_record();
        Ok(Shot {
            accepted: !rec.discarded,
            distance: if rec.discarded {
                0
            } else {
                distance(c, &rec.outputs, &expected)
            },
            fidelity: Some(fidelity),
        })
    }

    /// Weight of the ideal Bell state in the codespace component of the data
    /// blocks, ignoring the state of unused slots.
    fn fidelity(&self, st: &SimState, refs: &[usize]) -> f64 {
        let mut order = self.set.order();
        let nd = order.len();
        order.extend(refs);
        let extra: Vec<usize> = st
            .active_qubits()
            .iter()
            .copied()
            .filter(|q| !order.contains(q))
            .collect();
        order.extend(extra);
        let psi = st.full_state(&order);
        let (k, w) = (self.set.k(), self.w);
        let inner = 1usize << (nd + w);
        let basis: Vec<Vec<Complex64>> = (0..1 << k).map(|j| self.set.encode_basis(j)).collect();
        let free: Vec<usize> = (0..k).filter(|s| !self.slots.contains(s)).collect();
        let (mut weight, mut good) = (0.0, 0.0);
        for rest in 0..psi.len() / inner {
            let mut dm = vec![Complex64::new(0.0, 0.0); 1 << (k + w)];
            for r in 0..1usize << w {
                let base = rest * inner + (r << nd);
                for (j, e) in basis.iter().enumerate() {
                    let v: Complex64 = e
                        .iter()
                        .zip(&psi[base..base + (1 << nd)])
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                    weight += v.norm_sqr();
                    dm[j | (r << k)] = v;
                }
            }
            for f in 0..1usize << free.len() {
                let fbits: usize = free
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| ((f >> i) & 1) << s)
                    .sum();
                let mut amp = Complex64::new(0.0, 0.0);
                for x in 0..1usize << w {
                    let j: usize = self
                        .slots
                        .iter()
                        .enumerate()
                        .map(|(i, &s)| ((x >> i) & 1) << s)
                        .sum::<usize>()
                        | fbits;
                    amp += dm[j | (x << k)];
                }
                good += amp.norm_sqr() / (1usize << w) as f64;
            }
        }
        if weight < 1e-15 {
            0.0
        } else {
            good / weight
        }
    }
}

/// Measures an unencoded qubit in `basis`; returns the outcome bit.
fn measure_reference(
    st: &mut SimState,
    q: usize,
    basis: Basis,
    rng: &mut ChaCha8Rng,
) -> Result<bool> {
    if basis == Basis::Y {
        st.apply_gate1(q, Gate1::Sdg)?;
    }
    if basis != Basis::Z {
        st.apply_gate1(q, Gate1::H)?;
    }
    let p1 = st.prob_one(q);
    let b = rng.gen::<f64>() < p1;
    st.collapse_z_given(q, b, p1);
    Ok(b)
}

fn summarize(seed: u64, hardness: usize, w: usize, shot_data: Vec<Shot>) -> CircuitResult {
    let (histogram, accepted) = histogram_of(w, shot_data.iter());
    let s = (accepted > 0).then(|| confidence_from_histogram(&histogram).unwrap_or(f64::NAN));
    let direct_confidence = direct_of(shot_data.iter());
    CircuitResult {
        seed,
        hardness,
        shots: shot_data.len(),
        accepted,
        histogram,
        s,
        direct_confidence,
        shot_data,
    }
}

fn histogram_of<'a>(w: usize, shots: impl Iterator<Item = &'a Shot>) -> (Vec<f64>, usize) {
    let mut h = vec![0.0; w + 1];
    let mut acc = 0;
    for s in shots.filter(|s| s.accepted) {
        h[s.distance] += 1.0;
        acc += 1;
    }
    if acc > 0 {
        h.iter_mut().for_each(|x| *x /= acc as f64);
    }
    (h, acc)
}

/// Error-free fraction of accepted shots, when fidelities were recorded.
fn direct_of<'a>(shots: impl Iterator<Item = &'a Shot>) -> Option<f64> {
    let (mut n0, mut acc) = (0.0, 0usize);
    for s in shots.filter(|s| s.accepted) {
        n0 += s.fidelity?;
        acc += 1;
    }
    (acc > 0).then(|| n0 / acc as f64)
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (mut sum, mut n) = (0.0, 0usize);
    for x in xs {
        sum += x;
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

fn percentile_interval(mut xs: Vec<f64>) -> Option<Interval> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(|a, b| a.total_cmp(b));
    let at = |q: f64| xs[((q * (xs.len() - 1) as f64).round() as usize).min(xs.len() - 1)];
    Some(Interval {
        lo: at(0.025),
        hi: at(0.975),
    })
}

fn aggregate(
    first: &MirrorSpec,
    circuits: Vec<CircuitResult>,
    opts: &EstimateOptions,
) -> BenchmarkResult {
    let w = first.w;
    let shots: usize = circuits.iter().map(|c| c.shots).sum();
    let accepted: usize = circuits.iter().map(|c| c.accepted).sum();
    let (histogram, _) = histogram_of(w, circuits.iter().flat_map(|c| &c.shot_data));
    let confidence = mean(circuits.iter().filter_map(|c| c.s));
    let yield_ = if shots > 0 {
        accepted as f64 / shots as f64
    } else {
        0.0
    };

    // Bootstrap over circuits, then over shots within each drawn circuit.
    let (mut cs, mut gs, mut ds) = (Vec::new(), Vec::new(), Vec::new());
    for b in 0..opts.bootstrap {
        let mut rng = shot_rng(opts.resample_seed, b as u64);
        let mut s_values = Vec::new();
        let (mut tot, mut acc, mut n0) = (0usize, 0usize, 0.0);
        for _ in 0..circuits.len() {
            let c = &circuits[rng.gen_range(0..circuits.len())];
            if c.shot_data.is_empty() {
                continue;
            }
            let draw: Vec<&Shot> = (0..c.shot_data.len())
                .map(|_| &c.shot_data[rng.gen_range(0..c.shot_data.len())])
                .collect();
            let (h, a) = histogram_of(w, draw.iter().copied());
            if a > 0 {
                s_values.push(confidence_from_histogram(&h).unwrap_or(f64::NAN));
            }
            tot += draw.len();
            acc += a;
            n0 += draw
                .iter()
                .filter(|s| s.accepted)
                .filter_map(|s| s.fidelity)
                .sum::<f64>();
        }
        if let Some(m) = mean(s_values.into_iter()) {
            cs.push(m);
        }
        if tot > 0 {
            gs.push(acc as f64 / tot as f64);
        }
        if acc > 0 {
            ds.push(n0 / acc as f64);
        }
    }

    let oracle = opts.oracle.then(|| {
        let all = circuits.iter().flat_map(|c| &c.shot_data);
        let n0: f64 = all
            .clone()
            .filter(|s| s.accepted)
            .filter_map(|s| s.fidelity)
            .sum();
        let n_det = shots - accepted;
        let n_und = accepted as f64 - n0;
        let n = shots.max(1) as f64;
        OracleCounts {
            n0,
            n_det,
            n_und,
            p0: n0 / n,
            p_det: n_det as f64 / n,
            p_und: n_und / n,
            confidence: direct_of(all),
            confidence_ci: percentile_interval(ds),
        }
    });
    BenchmarkResult {
        schema_version: RESULT_SCHEMA_VERSION,
        w,
        d: first.d,
        eta: first.eta,
        shots,
        accepted,
        histogram,
        confidence,
        confidence_ci: percentile_interval(cs),
        yield_,
        yield_ci: percentile_interval(gs).unwrap_or(Interval {
            lo: yield_,
            hi: yield_,
        }),
        undefined_confidence: confidence.is_none(),
        oracle,
        circuits,
    }
}

impl BenchmarkResult {
    /// Flat `circuit,k,h_k` table, one row per histogram bin, with the
    /// aggregate histogram under circuit `all`.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("circuit,k,h\n");
        for (i, c) in self.circuits.iter().enumerate() {
            for (k, h) in c.histogram.iter().enumerate() {
                out.push_str(&format!("{i},{k},{h}\n"));
            }
        }
        for (k, h) in self.histogram.iter().enumerate() {
            out.push_str(&format!("all,{k},{h}\n"));
        }
        out
    }
}
