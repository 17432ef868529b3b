//! Command-line front end for the code-switching toolkit.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 file not
//! found, 4 schema or parse error, 5 simulator capacity exceeded.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;

use config::Config;

#[derive(Parser, Debug)]
#[command(
    name = "codeswitch",
    version,
    about = "Compile, simulate and benchmark [[8,3,2]]/[[4,2,2]] code-switching circuits"
)]
struct Cli {
    /// TOML config file with defaults for every subcommand.
    #[arg(long, global = true, env = "CODESWITCH_CONFIG")]
    config: Option<PathBuf>,
    /// Worker threads (0 = available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Code tables and permutation gates.
    Codes {
        #[command(subcommand)]
        cmd: CodesCmd,
    },
    /// Gadget library.
    Gadgets {
        #[command(subcommand)]
        cmd: GadgetsCmd,
    },
    /// Compile a logical circuit to a physical circuit.
    Compile(CompileArgs),
    /// Check a logical or physical circuit file.
    Validate { file: PathBuf },
    /// Simulate shots of a circuit.
    Run(RunArgs),
    /// Exhaustive single-fault check of a gadget.
    Faults {
        #[arg(long)]
        gadget: String,
    },
    /// Mirror-circuit benchmark.
    Bench(BenchArgs),
    /// Summarize a circuit or benchmark result file.
    Report {
        file: PathBuf,
        /// Synthesis accuracy for the T-count estimate line.
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum CodesCmd {
    /// Stabilizers, logical operators and permutation gates.
    Info {
        /// 832, 422 or all.
        #[arg(long, default_value = "all")]
        code: String,
    },
}

#[derive(Subcommand, Debug)]
enum GadgetsCmd {
    List,
    /// Write a gadget's physical circuit.
    Emit {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct CompileArgs {
    input: PathBuf,
    /// Physical circuit output; printed to stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write the cost report as JSON here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// sequential, mid or fast.
    #[arg(long)]
    strategy: Option<String>,
    /// Accuracy for the documentation-only T-count estimate.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    catalyst_gamma: f64,
    /// swap or teleport.
    #[arg(long)]
    relocation_mode: Option<String>,
    /// apply or frame.
    #[arg(long)]
    corrections: Option<String>,
}

#[derive(Args, Debug)]
struct RunArgs {
    input: PathBuf,
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// p1,p2,pm,pp
    #[arg(long)]
    noise: Option<String>,
    #[arg(long)]
    cap: Option<usize>,
    /// Stream one JSON shot record per line to this file.
    #[arg(long)]
    records: Option<PathBuf>,
    /// Keep simulating after a detection event.
    #[arg(long)]
    no_early_stop: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    width: usize,
    #[arg(long)]
    depth: usize,
    /// Number of teleports, a multiple of 4.
    #[arg(long, default_value_t = 0)]
    hardness: usize,
    #[arg(long, default_value_t = 10)]
    circuits: usize,
    #[arg(long)]
    shots: Option<usize>,
    /// p1,p2,pm,pp
    #[arg(long)]
    noise: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also count error-free shots directly against an unencoded reference.
    #[arg(long)]
    oracle_mode: bool,
    #[arg(long)]
    bootstrap: Option<usize>,
    #[arg(short, long, default_value = "bench.json")]
    output: PathBuf,
    /// Histogram table; defaults to the result path with a .csv extension.
    #[arg(long)]
    histogram: Option<PathBuf>,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn usage_from(e: codeswitch::Error) -> Self {
        Failure::usage(e.to_string())
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }

    pub fn schema(message: impl Into<String>) -> Self {
        Failure {
            code: 4,
            message: message.into(),
        }
    }
}

impl From<codeswitch::Error> for Failure {
    fn from(e: codeswitch::Error) -> Self {
        use codeswitch::Error::*;
        let code = match e {
            Malformed { .. } | Parse { .. } => 4,
            Capacity { .. } => 5,
            InvalidArgument(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => {
            Failure::not_found(format!("{}: not found", path.display()))
        }
        _ => Failure::validation(format!("{}: {e}", path.display())),
    })
}

pub fn write(path: &Path, text: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::validation(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, text).map_err(io)
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let mut cfg = Config::load(cli.config.as_deref())?;
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if cfg.threads > 0 {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global();
    }
    match cli.cmd {
        Cmd::Codes {
            cmd: CodesCmd::Info { code },
        } => commands::codes_info(&code),
        Cmd::Gadgets {
            cmd: GadgetsCmd::List,
        } => commands::gadgets_list(),
        Cmd::Gadgets {
            cmd: GadgetsCmd::Emit { name, output },
        } => commands::gadgets_emit(&cfg, &name, output.as_deref()),
        Cmd::Compile(a) => commands::compile(&cfg, a),
        Cmd::Validate { file } => commands::validate(&file),
        Cmd::Run(a) => commands::run(&cfg, a),
        Cmd::Faults { gadget } => commands::faults(&gadget),
        Cmd::Bench(a) => commands::bench(&cfg, a),
        Cmd::Report { file, epsilon } => commands::report(&file, epsilon),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
