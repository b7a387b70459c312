use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use upb_core::unextend::{SearchOptions, DEFAULT_BUDGET};
use upb_lab::commands;
use upb_lab::reproduce::{parse_seeds, reproduce};
use upb_lab::{Catalog, CliError, Context, Exit, Outcome};

/// Exact verification of the 4-qubit UPB families and their properties.
///
/// Exit status: 0 ok, 1 a checked claim failed, 2 usage error, 3 search
/// budget exceeded (rerun with --force or a larger --budget).
#[derive(Parser)]
#[command(name = "upb-lab", version)]
struct Cli {
    /// Seed for instantiating UOM variables.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Print the JSON certificate instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON certificate to FILE (`reproduce` defaults to report.json).
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Run searches even when they exceed the budget.
    #[arg(long, global = true)]
    force: bool,
    /// Search budget in kill assignments.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_BUDGET)]
    budget: f64,
    /// Read UOMs from FILE instead of the embedded catalog.
    #[arg(long = "catalog", global = true, value_name = "FILE")]
    catalog_file: Option<String>,
    /// Record wall-clock seconds in the certificate (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print catalog entries in the catalog file format.
    Catalog {
        #[arg(long)]
        name: Option<String>,
    },
    /// Decide whether an instance is a UPB under a split.
    Verify {
        #[arg(long)]
        uom: String,
        /// Drop this row (1-based) first.
        #[arg(long)]
        drop: Option<usize>,
        /// Party split such as AB:CD, A|BCD, A:B:CD or ABCD; default one party per qubit.
        #[arg(long)]
        split: Option<String>,
    },
    /// List every product vector orthogonal to an instance.
    Enumerate {
        #[arg(long)]
        uom: String,
        #[arg(long)]
        drop: Option<usize>,
        #[arg(long)]
        split: Option<String>,
    },
    /// Complement state: rank, trace, PPT verdicts and the range criterion.
    State {
        #[arg(long, required_unless_present = "sweep")]
        uom: Option<String>,
        #[arg(long)]
        drop: Option<usize>,
        /// Splits for the range criterion (repeatable); default AB:CD, A:B:CD, ABCD.
        #[arg(long)]
        split: Vec<String>,
        /// Run the range criterion and fail unless the state is PPT entangled.
        #[arg(long)]
        certify: bool,
        /// Count orthogonal product vectors of every drop-one subset of every 4-qubit entry.
        #[arg(long, conflicts_with_all = ["uom", "drop", "certify"])]
        sweep: bool,
    },
    /// Unextendibility across every bipartition.
    Ge {
        #[arg(long)]
        uom: String,
    },
    /// Tensor product of two multipartite UPBs.
    Tensor {
        #[arg(long)]
        left: String,
        /// Defaults to the left operand.
        #[arg(long, conflicts_with = "triple")]
        right: Option<String>,
        #[arg(long, default_value_t = 3)]
        parties: usize,
        /// Build S (x) S_rot (x) S_rot^2 from the left operand instead.
        #[arg(long)]
        triple: bool,
        /// Check unextendibility under the matching split.
        #[arg(long)]
        verify: bool,
    },
    /// Exclusion predicates, o-numbers, and predicate-soundness fuzzing.
    Predicates {
        #[arg(long)]
        uom: Option<String>,
        /// Size of the fuzz corpus (seeded by --seed).
        #[arg(long)]
        fuzz: Option<usize>,
    },
    /// Maximum of a1 a2 + ... + a(2n-1) a(2n) over compositions of p.
    Maxsum {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        /// Compare with exhaustive search.
        #[arg(long)]
        oracle: bool,
    },
    /// Independent-variable counts, coincidence tables and inequivalence features.
    Invariants {
        #[arg(long)]
        uom: Option<String>,
        #[arg(long, requires = "uom")]
        against: Option<String>,
    },
    /// Re-check every claim and write one report.
    Reproduce {
        /// Seed list such as 1-20, 1..20 or 1,4,9.
        #[arg(long, default_value = "1-20")]
        seeds: String,
        /// Run only this claim (repeatable).
        #[arg(long)]
        only: Vec<String>,
    },
}

/// The arguments as typed, minus `--out`, which names where the
/// certificate goes rather than what it says.
fn command_echo() -> String {
    let mut out = Vec::new();
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        if a == "--out" {
            args.next();
        } else if !a.starts_with("--out=") {
            out.push(a);
        }
    }
    out.join(" ")
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let catalog = match &cli.catalog_file {
        Some(path) => Catalog::from_file(path)?,
        None => Catalog::embedded(),
    };
    let ctx = Context {
        catalog,
        seed: cli.seed,
        opts: SearchOptions { budget: cli.budget, force: cli.force },
        command: command_echo(),
    };
    match &cli.command {
        Command::Catalog { name } => commands::catalog(&ctx, name.as_deref()),
        Command::Verify { uom, drop, split } => commands::verify(&ctx, uom, *drop, split.as_deref()),
        Command::Enumerate { uom, drop, split } => commands::enumerate(&ctx, uom, *drop, split.as_deref()),
        Command::State { sweep: true, split, .. } => {
            commands::state_sweep(&ctx, split.first().map(String::as_str))
        }
        Command::State { uom, drop, split, certify, .. } => {
            commands::state(&ctx, uom.as_deref().expect("required without --sweep"), *drop, split, *certify)
        }
        Command::Ge { uom } => commands::ge(&ctx, uom),
        Command::Tensor { left, right, parties, triple, verify } => {
            commands::tensor(&ctx, left, right.as_deref(), *parties, *triple, *verify)
        }
        Command::Predicates { uom, fuzz } => commands::predicates(&ctx, uom.as_deref(), *fuzz),
        Command::Maxsum { p, n, oracle } => commands::maxsum(&ctx, *p, *n, *oracle),
        Command::Invariants { uom, against } => commands::invariants(&ctx, uom.as_deref(), against.as_deref()),
        Command::Reproduce { seeds, only } => {
            let seeds = parse_seeds(seeds).map_err(CliError::Usage)?;
            reproduce(&ctx, &seeds, only)
        }
    }
}

/// Adds `"timing": secs` to the top-level JSON object.
fn with_timing(json: &str, secs: f64) -> String {
    let mut v: serde_json::Value = serde_json::from_str(json).expect("commands emit JSON");
    if let Some(obj) = v.as_object_mut() {
        obj.insert("timing".into(), serde_json::json!(secs));
    }
    upb_lab::cert::pretty(&v)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("upb-lab: {e}");
            return ExitCode::from(e.exit() as u8);
        }
    };
    let json = if cli.timing { with_timing(&outcome.json, start.elapsed().as_secs_f64()) } else { outcome.json };
    let out = match (&cli.out, &cli.command) {
        (Some(p), _) => Some(p.clone()),
        (None, Command::Reproduce { .. }) => Some(PathBuf::from("report.json")),
        _ => None,
    };
    if let Some(path) = out {
        if let Err(e) = std::fs::write(&path, &json) {
            eprintln!("upb-lab: {}: {e}", path.display());
            return ExitCode::from(Exit::Usage as u8);
        }
    }
    if cli.json {
        print!("{json}");
    } else {
        print!("{}", outcome.text);
    }
    if let Some(f) = &outcome.failure {
        eprintln!("upb-lab: {f}");
    }
    ExitCode::from(outcome.exit as u8)
}
