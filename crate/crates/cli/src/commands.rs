use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use codeswitch::benchmark::{
    estimate, random_mirror, BenchmarkResult, EstimateOptions, RESULT_SCHEMA_VERSION,
};
use codeswitch::circuit::{LogicalCircuit, PhysicalCircuit};
use codeswitch::codes::{code_422, code_832, find_permutation_gate, CodeSpec, LogicalAction};
use codeswitch::compiler::{self, cost_report, CompileOptions, ScheduleOptions};
use codeswitch::gadgets::catalog::{build_gadget, check_gadget_faults, GADGETS};
use codeswitch::pauli::Pauli;
use codeswitch::sim::{run_shot_with, ShotRecord};
use rayon::prelude::*;
use serde_json::Value;

use crate::config::Config;
use crate::{read, write, BenchArgs, CompileArgs, Failure, RunArgs};

fn parse<T: std::str::FromStr<Err = codeswitch::Error>>(flag: &str, v: &str) -> Result<T, Failure> {
    v.parse()
        .map_err(|e| Failure::usage(format!("--{flag}: {e}")))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn emit(cfg: &Config, output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => write(&cfg.output(p), text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn code_info(code: &CodeSpec) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} n={} k={} d={}", code.name, code.n, code.k, code.d);
    let _ = writeln!(s, "stabilizers:");
    for g in code.stabilizers.generators() {
        let _ = writeln!(s, "  {g}");
    }
    let _ = writeln!(s, "logical operators:");
    for i in 0..code.k {
        let _ = writeln!(
            s,
            "  X{i} = {}  Z{i} = {}",
            code.logical(Pauli::X, i),
            code.logical(Pauli::Z, i)
        );
    }
    let _ = writeln!(s, "brute-force distance: {}", code.brute_force_distance());
    let _ = writeln!(s, "permutation gates (qubit q moves to mapping[q]):");
    let mut targets = Vec::new();
    for a in 0..code.k {
        for b in a + 1..code.k {
            targets.push((format!("SWAP {a},{b}"), LogicalAction::swap(code.k, a, b)));
        }
    }
    for c in 0..code.k {
        for t in 0..code.k {
            if c != t {
                targets.push((format!("CNOT {c}->{t}"), LogicalAction::cnot(code.k, c, t)));
            }
        }
    }
    for (name, target) in targets {
        let found = match find_permutation_gate(code, &target) {
            Ok(p) => format!("{:?}", p.mapping()),
            Err(_) => "none".into(),
        };
        let _ = writeln!(s, "  {name}: {found}");
    }
    s
}

pub fn codes_info(which: &str) -> Result<(), Failure> {
    let codes: Vec<&CodeSpec> = match which {
        "832" => vec![code_832()],
        "422" => vec![code_422()],
        "all" => vec![code_832(), code_422()],
        _ => {
            return Err(Failure::usage(format!(
                "--code '{which}': expected 832, 422 or all"
            )))
        }
    };
    let text: Vec<String> = codes.into_iter().map(code_info).collect();
    print!("{}", text.join("\n"));
    Ok(())
}

pub fn gadgets_list() -> Result<(), Failure> {
    for (name, desc, checked) in GADGETS {
        let tag = if *checked { "fault-checked" } else { "-" };
        println!("{name:<22} {tag:<14} {desc}");
    }
    Ok(())
}

fn known_gadget(name: &str) -> Result<bool, Failure> {
    GADGETS
        .iter()
        .find(|g| g.0 == name)
        .map(|g| g.2)
        .ok_or_else(|| Failure::not_found(format!("unknown gadget '{name}'; see `gadgets list`")))
}

pub fn gadgets_emit(cfg: &Config, name: &str, output: Option<&Path>) -> Result<(), Failure> {
    known_gadget(name)?;
    emit(cfg, output, &to_json(&build_gadget(name)?))
}

fn compile_options(cfg: &Config, a: &CompileArgs) -> Result<CompileOptions, Failure> {
    Ok(CompileOptions {
        strategy: match &a.strategy {
            Some(s) => parse("strategy", s)?,
            None => cfg.strategy,
        },
        catalyst_gamma: a.catalyst_gamma,
        corrections: match a.corrections.as_deref() {
            Some("apply") => compiler::Corrections::Apply,
            Some("frame") => compiler::Corrections::Frame,
            Some(x) => {
                return Err(Failure::usage(format!(
                    "--corrections '{x}': expected apply or frame"
                )))
            }
            None => cfg.corrections,
        },
        schedule: ScheduleOptions {
            relocation: match &a.relocation_mode {
                Some(s) => parse("relocation-mode", s)?,
                None => cfg.relocation,
            },
            ..ScheduleOptions::default()
        },
        ..CompileOptions::default()
    })
}

fn cost_text(c: &PhysicalCircuit, epsilon: Option<f64>) -> String {
    format!(
        "n_physical: {}\n{}\n",
        c.n_physical,
        cost_report(c, epsilon)
    )
}

pub fn compile(cfg: &Config, a: CompileArgs) -> Result<(), Failure> {
    let input = LogicalCircuit::from_json(&read(&a.input)?)?;
    let opts = compile_options(cfg, &a)?;
    let compiled = compiler::compile(&input, &opts)?;
    let circuit = compiled.circuit();
    let report = cost_report(circuit, a.epsilon);
    if let Some(p) = &a.report {
        let mut v = serde_json::to_value(&report).expect("serializable");
        v["n_physical"] = circuit.n_physical.into();
        write(&cfg.output(p), &to_json(&v))?;
    }
    let text = cost_text(circuit, a.epsilon);
    match &a.output {
        Some(p) => {
            write(&cfg.output(p), &to_json(circuit))?;
            print!("{text}");
        }
        None => {
            print!("{}", to_json(circuit));
            eprint!("{text}");
        }
    }
    Ok(())
}

enum Document {
    Logical(LogicalCircuit),
    Physical(PhysicalCircuit),
    Bench(BenchmarkResult),
}

fn load(path: &Path) -> Result<Document, Failure> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::schema(format!("{}: {e}", path.display())))?;
    if v.get("ops").is_some() {
        Ok(Document::Physical(PhysicalCircuit::from_json(&text)?))
    } else if v.get("gates").is_some() {
        Ok(Document::Logical(LogicalCircuit::from_json(&text)?))
    } else if v.get("circuits").is_some() {
        let r: BenchmarkResult = serde_json::from_value(v)
            .map_err(|e| Failure::schema(format!("{}: {e}", path.display())))?;
        if r.schema_version != RESULT_SCHEMA_VERSION {
            return Err(Failure::schema(format!(
                "unsupported schema_version {}",
                r.schema_version
            )));
        }
        Ok(Document::Bench(r))
    } else {
        Err(Failure::schema(format!(
            "{}: not a circuit or benchmark result",
            path.display()
        )))
    }
}

pub fn validate(path: &Path) -> Result<(), Failure> {
    match load(path)? {
        Document::Logical(c) => {
            println!(
                "ok: logical circuit, {} qubits, {} gates",
                c.n_qubits,
                c.gates.len()
            );
            Ok(())
        }
        Document::Physical(c) => {
            let v = c.validate();
            if v.is_empty() {
                println!(
                    "ok: physical circuit, {} qubits, {} ops",
                    c.n_physical,
                    c.ops.len()
                );
                return Ok(());
            }
            for x in &v {
                println!("{x}");
            }
            Err(Failure::validation(format!("{} violations", v.len())))
        }
        Document::Bench(_) => Err(Failure::schema("benchmark results are not circuits")),
    }
}

pub fn run(cfg: &Config, a: RunArgs) -> Result<(), Failure> {
    let circuit = match load(&a.input)? {
        Document::Physical(c) => c,
        Document::Logical(c) => {
            let opts = CompileOptions {
                strategy: cfg.strategy,
                corrections: cfg.corrections,
                schedule: ScheduleOptions {
                    relocation: cfg.relocation,
                    ..ScheduleOptions::default()
                },
                ..CompileOptions::default()
            };
            compiler::compile(&c, &opts)?.scheduled.circuit
        }
        Document::Bench(_) => return Err(Failure::schema("cannot run a benchmark result")),
    };
    let bad = circuit.validate();
    if let Some(v) = bad.first() {
        return Err(Failure::validation(format!("invalid circuit: {v}")));
    }
    let noise = cfg.noise(a.noise.as_deref())?;
    let shots = a.shots.unwrap_or(cfg.shots);
    let seed = a.seed.unwrap_or(cfg.seed);
    let cap = a.cap.unwrap_or(cfg.cap);
    let records = (0..shots as u64)
        .into_par_iter()
        .map(|s| run_shot_with(&circuit, &noise, seed, s, cap, !a.no_early_stop))
        .collect::<codeswitch::Result<Vec<ShotRecord>>>()?;
    if let Some(p) = &a.records {
        let lines: String = records
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
            .collect();
        write(&cfg.output(p), &lines)?;
    }
    let accepted: Vec<&ShotRecord> = records.iter().filter(|r| !r.discarded).collect();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for r in &accepted {
        let key: String = r
            .outputs
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        *counts.entry(key).or_default() += 1;
    }
    println!("shots: {shots}");
    println!("accepted: {}", accepted.len());
    println!("outputs,count");
    for (k, n) in counts {
        println!("{},{n}", if k.is_empty() { "-" } else { &k });
    }
    Ok(())
}

pub fn faults(name: &str) -> Result<(), Failure> {
    if !known_gadget(name)? {
        return Err(Failure::usage(format!(
            "gadget '{name}' has no fault check"
        )));
    }
    let r = check_gadget_faults(name)?;
    println!("gadget: {name}");
    println!("fault locations: {}", r.locations);
    println!("single faults: {}", r.faults);
    println!("branches: {}", r.branches);
    println!("discarded: {}", r.discarded);
    println!("accepted and correct: {}", r.accepted_ok);
    println!("accepted and wrong: {}", r.accepted_wrong);
    for e in &r.examples {
        println!("  {e}");
    }
    if r.accepted_wrong > 0 {
        return Err(Failure::validation("undetected logical faults"));
    }
    Ok(())
}

fn interval(i: Option<codeswitch::benchmark::Interval>) -> String {
    i.map(|i| format!(" [{:.4}, {:.4}]", i.lo, i.hi))
        .unwrap_or_default()
}

pub fn bench_summary(r: &BenchmarkResult) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "circuits: {}  width: {}  depth: {}  hardness: {}",
        r.circuits.len(),
        r.w,
        r.d,
        r.eta
    );
    let _ = writeln!(s, "shots: {}  accepted: {}", r.shots, r.accepted);
    let _ = writeln!(s, "yield: {:.4}{}", r.yield_, interval(Some(r.yield_ci)));
    match r.confidence {
        Some(c) => {
            let _ = writeln!(s, "confidence: {c:.4}{}", interval(r.confidence_ci));
        }
        None => {
            let _ = writeln!(s, "confidence: undefined (no accepted shots)");
        }
    }
    let h: Vec<String> = r.histogram.iter().map(|h| format!("{h:.4}")).collect();
    let _ = writeln!(s, "histogram: {}", h.join(" "));
    if let Some(o) = &r.oracle {
        match o.confidence {
            Some(c) => {
                let _ = writeln!(s, "direct confidence: {c:.4}{}", interval(o.confidence_ci));
            }
            None => {
                let _ = writeln!(s, "direct confidence: undefined");
            }
        }
        let _ = writeln!(
            s,
            "p0: {:.4}  p_det: {:.4}  p_und: {:.4}",
            o.p0, o.p_det, o.p_und
        );
    }
    s
}

pub fn bench(cfg: &Config, a: BenchArgs) -> Result<(), Failure> {
    if a.circuits == 0 {
        return Err(Failure::usage("--circuits must be positive"));
    }
    let seed = a.seed.unwrap_or(cfg.seed);
    let specs = (0..a.circuits as u64)
        .map(|i| random_mirror(a.width, a.depth, a.hardness, seed.wrapping_add(i)))
        .collect::<codeswitch::Result<Vec<_>>>()
        .map_err(Failure::usage_from)?;
    let opts = EstimateOptions {
        shots: a.shots.unwrap_or(cfg.shots),
        noise: cfg.noise(a.noise.as_deref())?,
        seed,
        oracle: a.oracle_mode,
        bootstrap: a.bootstrap.unwrap_or(cfg.bootstrap),
        strategy: cfg.strategy,
        cap: cfg.cap,
        ..EstimateOptions::default()
    };
    let r = estimate(&specs, &opts)?;
    let out = cfg.output(&a.output);
    let hist = match &a.histogram {
        Some(p) => cfg.output(p),
        None => out.with_extension("csv"),
    };
    write(&out, &to_json(&r))?;
    write(&hist, &r.histogram_csv())?;
    print!("{}", bench_summary(&r));
    println!("result: {}", out.display());
    println!("histogram table: {}", hist.display());
    Ok(())
}

pub fn report(path: &Path, epsilon: Option<f64>) -> Result<(), Failure> {
    match load(path)? {
        Document::Physical(c) => print!("{}", cost_text(&c, epsilon)),
        Document::Logical(c) => {
            println!(
                "logical circuit: {} qubits, {} gates, depth {}",
                c.n_qubits,
                c.gates.len(),
                c.depth()
            );
        }
        Document::Bench(r) => print!("{}", bench_summary(&r)),
    }
    Ok(())
}
