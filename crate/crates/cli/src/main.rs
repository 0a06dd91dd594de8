//! `classtrace`: JSON on stdout, a one-line summary on stderr.
//!
//! Exit codes: 0 success, 2 trace excluded, 3 construction or verification
//! failure, 4 usage error (including scalar classes), 5 budget exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use classtrace::classes::{enumerate_classes, Class, Group};
use classtrace::field::Field;
use classtrace::oracle::{
    class_product_decomposition, trace_set, trace_set_double, verify_gl2_irreducible_claim, verify_theorem, Mode,
    OracleError, VerifyOptions, DEFAULT_BUDGET,
};
use classtrace::witness::{witness, WitnessError, DEFAULT_SEED};

const EXIT_EXCLUDED: u8 = 2;
const EXIT_FAILED: u8 = 3;
const EXIT_USAGE: u8 = 4;
const EXIT_BUDGET: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "classtrace", version, about = "Trace sets of products of matrix classes over finite fields")]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Maximum orbit size the oracle will enumerate.
    #[arg(long, global = true, env = "CLASSTRACE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Write the JSON here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    /// Field order, a prime power.
    #[arg(long)]
    q: u64,
    /// Defining polynomial coefficients, constant term first (e.g. "1,1,1").
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct PairArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    n: usize,
    /// M, GL or SL.
    #[arg(long, default_value = "M")]
    group: String,
    /// Invariant factors, comma separated, with an optional "@label=θ".
    #[arg(long)]
    omega: String,
    #[arg(long)]
    psi: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List all classes.
    Classes {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "M")]
        group: String,
    },
    /// Build and check a pair with a prescribed trace.
    Witness {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        tau: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Brute-force trace set.
    TraceSet {
        #[command(flatten)]
        pair: PairArgs,
        /// Enumerate both orbits instead of fixing the second factor.
        #[arg(long)]
        double: bool,
        /// Stop as soon as every trace has appeared.
        #[arg(long)]
        early_exit: bool,
    },
    /// Classes met by the product of two classes.
    ProductClasses {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Check the trace theorem for all (or sampled) class pairs.
    Verify {
        /// 1 for similarity classes, 2 for SL classes.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        theorem: u8,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        /// Number of random pairs instead of all pairs.
        #[arg(long)]
        sampled: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run the oracle on the first this many pairs only.
        #[arg(long)]
        oracle_pairs: Option<usize>,
    },
    /// Brute-force check for irreducible classes of GL(2, q).
    VerifyGl2Claim {
        #[command(flatten)]
        field: FieldArgs,
    },
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Failure {
        Failure { code: EXIT_USAGE, kind: "usage", message: message.to_string() }
    }
}

impl From<WitnessError> for Failure {
    fn from(e: WitnessError) -> Failure {
        let (code, kind) = match &e {
            WitnessError::TraceExcluded { .. } => (EXIT_EXCLUDED, "trace-excluded"),
            WitnessError::ScalarClass(_) => (EXIT_USAGE, "scalar-class"),
            WitnessError::Mismatch(_) => (EXIT_USAGE, "usage"),
            _ => (EXIT_FAILED, "construction-failed"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Failure {
        match e {
            OracleError::BudgetExceeded { .. } => Failure { code: EXIT_BUDGET, kind: "budget-exceeded", message: e.to_string() },
            _ => Failure::usage(e),
        }
    }
}

fn make_field(a: &FieldArgs) -> Result<Field, Failure> {
    match &a.modulus {
        None => Field::of_order(a.q).map_err(Failure::usage),
        Some(m) => {
            let coeffs: Vec<u32> = m
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::usage(format!("bad modulus: {e}")))?;
            let (p, k) = classtrace::field::prime_power(a.q).ok_or_else(|| Failure::usage(format!("{} is not a prime power", a.q)))?;
            Field::new(p as u64, k, Some(&coeffs)).map_err(Failure::usage)
        }
    }
}

fn parse_group(s: &str) -> Result<Group, Failure> {
    s.parse().map_err(Failure::usage)
}

fn parse_class(f: &Field, g: Group, n: usize, s: &str) -> Result<Class, Failure> {
    let c = Class::parse(f, g, s).map_err(Failure::usage)?;
    if c.n() != n {
        return Err(Failure::usage(format!("class {s} has size {}, expected {n}", c.n())));
    }
    Ok(c)
}

fn pair(p: &PairArgs) -> Result<(Field, Class, Class), Failure> {
    let f = make_field(&p.field)?;
    let g = parse_group(&p.group)?;
    let o = parse_class(&f, g, p.n, &p.omega)?;
    let s = parse_class(&f, g, p.n, &p.psi)?;
    Ok((f, o, s))
}

/// Runs one subcommand; returns the JSON, the stderr summary and the exit code.
fn run(cli: &Cli) -> Result<(Value, String, u8), Failure> {
    match &cli.command {
        Command::Classes { field, n, group } => {
            let f = make_field(field)?;
            let g = parse_group(group)?;
            let cs = enumerate_classes(*n, &f, g).map_err(Failure::usage)?;
            let texts: Vec<String> = cs.iter().map(Class::to_text).collect();
            let summary = format!("{} classes of {g}({n},{})", texts.len(), f.order());
            Ok((json!({"group": g, "n": n, "q": f.order(), "count": texts.len(), "classes": texts}), summary, 0))
        }
        Command::Witness { pair: p, tau, seed } => {
            let (f, o, s) = pair(p)?;
            let tau = f.parse(tau).map_err(Failure::usage)?;
            let w = witness(&o, &s, tau, *seed)?;
            let summary = format!("verified witness with trace {} via {}", f.format(tau), w.provenance().join(" > "));
            Ok((w.to_json(), summary, 0))
        }
        Command::TraceSet { pair: p, double, early_exit } => {
            let (f, o, s) = pair(p)?;
            let ts = if *double { trace_set_double(&o, &s, cli.budget)? } else { trace_set(&o, &s, *early_exit, cli.budget)? };
            let summary = format!("{} of {} traces attained", ts.len(), f.order());
            let v = json!({"omega": o.to_text(), "psi": s.to_text(), "group": o.group(), "trace_set": ts.to_json()});
            Ok((v, summary, 0))
        }
        Command::ProductClasses { pair: p } => {
            let (_, o, s) = pair(p)?;
            let cs = class_product_decomposition(&o, &s, cli.budget)?;
            let texts: Vec<String> = cs.iter().map(Class::to_text).collect();
            let summary = format!("product meets {} classes", texts.len());
            Ok((json!({"omega": o.to_text(), "psi": s.to_text(), "classes": texts}), summary, 0))
        }
        Command::Verify { theorem, field, n, sampled, seed, oracle_pairs } => {
            let f = make_field(field)?;
            let group = if *theorem == 1 { Group::M } else { Group::SL };
            let mode = match sampled {
                Some(count) => Mode::Sampled { count: *count, seed: *seed },
                None => Mode::Exhaustive,
            };
            let opts = VerifyOptions { mode, budget: cli.budget, oracle_pairs: *oracle_pairs, witness_seed: *seed, ..VerifyOptions::default() };
            let r = verify_theorem(*n, &f, group, &opts);
            let summary = format!(
                "{} pairs, {} failures, {} over budget, {:.2}s",
                r.pairs_checked,
                r.failures.len(),
                r.oracle_over_budget,
                r.elapsed.as_secs_f64()
            );
            let code = if r.passed() { 0 } else { EXIT_FAILED };
            Ok((r.to_json(), summary, code))
        }
        Command::VerifyGl2Claim { field } => {
            let f = make_field(field)?;
            let r = verify_gl2_irreducible_claim(&f, cli.budget);
            let summary = format!("{} pairs, {} failures (oracle only)", r.pairs_checked, r.failures.len());
            let code = if r.passed() { 0 } else { EXIT_FAILED };
            Ok((r.to_json(), summary, code))
        }
    }
}

fn emit(cli_output: Option<&PathBuf>, v: &Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(v).expect("json serializes");
    match cli_output {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
                _ => Ok(()),
            }
        }
    }
}

fn error_json(kind: &str, message: &str) -> Value {
    json!({"error": {"kind": kind, "message": message}})
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            println!("{}", error_json("usage", e.to_string().trim()));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("warning: {e}");
        }
    }
    let (value, code) = match run(&cli) {
        Ok((v, summary, code)) => {
            eprintln!("{summary}");
            (v, code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            (error_json(f.kind, &f.message), f.code)
        }
    };
    if let Err(e) = emit(cli.output.as_ref(), &value) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(code)
}
