//! Command-line front end: single-instance tester runs, spectrum dumps,
//! benchmark sweeps, and truth-table generation, with seeded reproducibility.
//!
//! # Function sources
//!
//! Wherever a subcommand takes `--f`/`--g`, the value is resolved as
//!
//! 1. a **generator spec** if it contains `:` — `rand:n=<n>`,
//!    `dist:g=<src>,d=<int>` (a function at Hamming distance `d` from the
//!    recursively resolved `<src>`), or `bias:n=<n>,c=<frac>,sign=±`;
//! 2. a **builtin name** otherwise, when one matches — `const0`, `const1`,
//!    `parity`, `and`, `majority`, with an optional arity suffix as in
//!    `parity10`;
//! 3. a **file path** to a two-line truth-table file (decimal arity, then
//!    the hexadecimal table).
//!
//! All generator randomness derives from `--seed`, so the same invocation
//! always produces byte-identical output.
//!
//! # Exit codes
//!
//! * `0` — a completed run, whatever the verdict;
//! * `2` — usage or input errors (flags, malformed ε, unreadable or
//!   malformed tables, arity mismatches);
//! * `3` — promise or representability errors.
//!
//! Every error path prints a single line to stderr with a machine-parsable
//! prefix: `error[<class>]: <message>`.

use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::amplify::{Mode, StateVector};
use crate::bench::{run_experiment, ExperimentConfig, Problem};
use crate::boolfn::{gen_at_distance, gen_with_bias, BooleanFunction, Sign};
use crate::error::{Error, Result};
use crate::qtesters::{
    balance_circuit, correlation_circuit, correlation_phase, identity_circuit, OracleHandle,
    Verdict,
};

/// Parses ε given as a decimal (`0.0625`) or an exact fraction (`1/16`).
/// Fractions with dyadic denominators are exact in `f64`, which keeps the
/// representability checks downstream exact too.
///
/// # Errors
///
/// [`Error::EpsilonParse`] when the string is neither form.
pub fn parse_epsilon(s: &str) -> Result<f64> {
    let bad = || Error::EpsilonParse(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Ok(p as f64 / q as f64)
    } else {
        let v: f64 = s.trim().parse().map_err(|_| bad())?;
        if v.is_nan() {
            return Err(bad());
        }
        Ok(v)
    }
}

/// Parses a comma-separated ε list (empty string ⇒ empty list).
///
/// # Errors
///
/// As for [`parse_epsilon`] on any element.
pub fn parse_epsilon_list(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_epsilon).collect()
}

fn generate_from_spec(spec: &str, rng: &mut ChaCha8Rng) -> Result<BooleanFunction> {
    let bad = |reason: String| Error::GeneratorSpec {
        spec: spec.to_string(),
        reason,
    };
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| bad("missing ':'".into()))?;
    match kind {
        "rand" => {
            let n = rest
                .strip_prefix("n=")
                .ok_or_else(|| bad("expected rand:n=<n>".into()))?;
            let n: u32 = n
                .parse()
                .map_err(|_| bad("n must be a decimal arity".into()))?;
            BooleanFunction::random(n, rng)
        }
        "dist" => {
            // The <src> may itself contain ':' and ',', so split at the
            // final ",d=" instead of parsing left to right.
            let body = rest
                .strip_prefix("g=")
                .ok_or_else(|| bad("expected dist:g=<src>,d=<int>".into()))?;
            let at = body
                .rfind(",d=")
                .ok_or_else(|| bad("expected dist:g=<src>,d=<int>".into()))?;
            let (src, d_part) = body.split_at(at);
            let d: u64 = d_part[3..]
                .parse()
                .map_err(|_| bad("d must be a decimal distance".into()))?;
            let g = load_function(src, rng)?;
            gen_at_distance(&g, d, rng)
        }
        "bias" => {
            let (mut n, mut c, mut sign) = (None, None, None);
            for part in rest.split(',') {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| bad("expected bias:n=<n>,c=<frac>,sign=±".into()))?;
                match k {
                    "n" => {
                        n = Some(
                            v.parse()
                                .map_err(|_| bad("n must be a decimal arity".into()))?,
                        )
                    }
                    "c" => c = Some(parse_epsilon(v)?),
                    "sign" => {
                        sign = Some(match v {
                            "+" => Sign::Positive,
                            "-" => Sign::Negative,
                            other => {
                                return Err(bad(format!("sign must be + or -, got '{other}'")))
                            }
                        });
                    }
                    other => {
                        return Err(bad(format!("unknown key '{other}' (expected n, c, sign)")))
                    }
                }
            }
            let n = n.ok_or_else(|| bad("missing n".into()))?;
            let c = c.ok_or_else(|| bad("missing c".into()))?;
            let sign = sign.ok_or_else(|| bad("missing sign".into()))?;
            gen_with_bias(n, c, sign, rng)
        }
        other => Err(bad(format!(
            "unknown generator '{other}' (expected rand, dist, bias)"
        ))),
    }
}

/// Resolves a function source string (see the module docs for the three
/// forms). Generator specs draw from `rng`.
///
/// # Errors
///
/// Spec/builtin/file errors, each with a distinct message naming the source.
pub fn load_function(src: &str, rng: &mut ChaCha8Rng) -> Result<BooleanFunction> {
    if src.contains(':') {
        return generate_from_spec(src, rng);
    }
    if let Ok(f) = BooleanFunction::builtin(src) {
        return Ok(f);
    }
    let text = fs::read_to_string(src)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{src}: {e}"))))?;
    BooleanFunction::from_table_text(&text)
}

fn mode_value(s: &str) -> std::result::Result<Mode, String> {
    Mode::from_str(s).map_err(|e| e.to_string())
}

fn problem_value(s: &str) -> std::result::Result<Problem, String> {
    Problem::from_str(s).map_err(|e| e.to_string())
}

/// Output formats for single-verdict subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerdictFormat {
    /// Stable `key: value` lines.
    Text,
    /// Pretty JSON that round-trips through the verdict schema.
    Json,
}

/// Output formats for tabular subcommands (walsh/bench).
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    /// Human-oriented text.
    Text,
    /// Pretty JSON with the full configuration echoed.
    Json,
    /// One CSV row per cell.
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "qbft",
    version,
    about = "Quantum vs classical property testing of Boolean functions",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide identical vs ε-far with one amplified measurement.
    Identity(IdentityArgs),
    /// Decide |C| = 1 vs |C| = ε with certainty in exactly 6 queries.
    Correlation(CorrelationArgs),
    /// Decide balanced vs bias at least ε with one amplified measurement.
    Balance(BalanceArgs),
    /// Print the Walsh spectrum of a function.
    Walsh(WalshArgs),
    /// Sweep ε, reporting success rates, query counts, and fitted slopes.
    Bench(BenchArgs),
    /// Materialize a function source as a truth-table file.
    Gen(GenArgs),
}

#[derive(clap::Args, Debug)]
struct IdentityArgs {
    /// First function source.
    #[arg(long)]
    f: String,
    /// Second function source.
    #[arg(long)]
    g: String,
    /// Distance parameter ε (decimal or p/q).
    #[arg(long)]
    eps: String,
    /// Iteration planning: from the ε bound or from the true distance.
    #[arg(long, default_value = "bound", value_parser = mode_value)]
    mode: Mode,
    /// Seed for generator sources and the measurement.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = VerdictFormat::Text)]
    format: VerdictFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dump the pre-measurement amplitudes as "index real imag" lines.
    #[arg(long)]
    dump_state: bool,
}

#[derive(clap::Args, Debug)]
struct CorrelationArgs {
    /// First function source.
    #[arg(long)]
    f: String,
    /// Second function source.
    #[arg(long)]
    g: String,
    /// Correlation parameter ε (decimal or p/q); the pair must satisfy
    /// |C(f,g)| ∈ {ε, 1} exactly, which is validated before running.
    #[arg(long)]
    eps: String,
    /// Seed for generator sources and the measurement.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = VerdictFormat::Text)]
    format: VerdictFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dump the pre-measurement amplitudes as "index real imag" lines.
    #[arg(long)]
    dump_state: bool,
}

#[derive(clap::Args, Debug)]
struct BalanceArgs {
    /// Function source.
    #[arg(long)]
    f: String,
    /// Bias parameter ε (decimal or p/q).
    #[arg(long)]
    eps: String,
    /// Iteration planning: from the ε bound or from the true bias.
    #[arg(long, default_value = "bound", value_parser = mode_value)]
    mode: Mode,
    /// Seed for generator sources and the measurement.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = VerdictFormat::Text)]
    format: VerdictFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dump the pre-measurement amplitudes as "index real imag" lines.
    #[arg(long)]
    dump_state: bool,
}

#[derive(clap::Args, Debug)]
struct WalshArgs {
    /// Function source.
    #[arg(long)]
    f: String,
    /// Seed for generator sources.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    /// Write the spectrum here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct BenchArgs {
    /// Problem to sweep: identity | correlation | balance | dj.
    #[arg(long, value_parser = problem_value)]
    problem: Problem,
    /// Arity of the generated instances (1..=16).
    #[arg(long)]
    n: u32,
    /// Comma-separated ε grid (each decimal or p/q); ignored for dj.
    #[arg(long, default_value = "")]
    eps: String,
    /// Monte Carlo trials per classical cell.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Base seed every per-cell stream derives from.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iteration planning for the quantum cells.
    #[arg(long, default_value = "bound", value_parser = mode_value)]
    mode: Mode,
    /// Output format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    format: ReportFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct GenArgs {
    /// Function source to materialize (typically a generator spec).
    #[arg(long)]
    f: String,
    /// Seed for generator sources.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the truth table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("{}: {e}", path.display()),
            ))
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// "index real imag" lines with 17 significant digits per component.
fn dump_state_lines(state: &StateVector) -> String {
    let mut out = String::new();
    for (i, a) in state.amplitudes().iter().enumerate() {
        out.push_str(&format!("{i} {:.16e} {:.16e}\n", a.re, a.im));
    }
    out
}

fn render_verdict_text(v: &Verdict) -> String {
    let mut out = format!("decision: {}\n", v.decision);
    if let Some(z) = v.measured_z {
        out.push_str(&format!("measured_z: {z}\n"));
    }
    if let Some(p) = v.p_zero() {
        out.push_str(&format!("p_zero: {p}\n"));
    }
    out.push_str(&format!("quantum_queries: {}\n", v.quantum_queries));
    out.push_str(&format!("classical_queries: {}\n", v.classical_queries));
    if let Some(plan) = &v.plan {
        out.push_str(&format!("epsilon: {}\n", plan.epsilon));
        out.push_str(&format!("mode: {}\n", plan.mode));
        out.push_str(&format!("iterations: {}\n", plan.iterations));
        out.push_str(&format!("phase_s0: {}\n", plan.phase_s0));
        out.push_str(&format!("phase_schi: {}\n", plan.phase_schi));
        if let Some(w) = &plan.warning {
            out.push_str(&format!("warning: {w}\n"));
        }
    }
    if let Some(seed) = v.seed {
        out.push_str(&format!("seed: {seed}\n"));
    }
    out
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Io(std::io::Error::new(
        std::io::ErrorKind::InvalidData,
        format!("json: {e}"),
    ))
}

fn render_verdict(v: &Verdict, format: VerdictFormat) -> Result<String> {
    match format {
        VerdictFormat::Text => Ok(render_verdict_text(v)),
        VerdictFormat::Json => Ok(serde_json::to_string_pretty(v).map_err(json_error)? + "\n"),
    }
}

#[derive(Serialize)]
struct WalshReport {
    n: u32,
    coefficients: Vec<f64>,
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Identity(a) => {
            let eps = parse_epsilon(&a.eps)?;
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let f = OracleHandle::new(load_function(&a.f, &mut rng)?);
            let g = OracleHandle::new(load_function(&a.g, &mut rng)?);
            let circuit = identity_circuit(&f, &g, eps, a.mode)?;
            if a.dump_state {
                print!("{}", dump_state_lines(circuit.state()));
            }
            let verdict = circuit.conclude(a.seed);
            emit(a.out.as_ref(), &render_verdict(&verdict, a.format)?)
        }
        Command::Correlation(a) => {
            let eps = parse_epsilon(&a.eps)?;
            // Range problems are usage errors and must precede the promise
            // check (which exits with a different status).
            correlation_phase(eps)?;
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let f = OracleHandle::new(load_function(&a.f, &mut rng)?);
            let g = OracleHandle::new(load_function(&a.g, &mut rng)?);
            let c = f.function().correlation(g.function())?;
            // Exact check: both sides are dyadic rationals in f64.
            if c.abs() != 1.0 && c.abs() != eps {
                return Err(Error::PromiseViolation(format!(
                    "|C(f,g)| = {} is neither 1 nor ε = {eps}",
                    c.abs()
                )));
            }
            let circuit = correlation_circuit(&f, &g, eps)?;
            if a.dump_state {
                print!("{}", dump_state_lines(circuit.state()));
            }
            let verdict = circuit.conclude(a.seed);
            emit(a.out.as_ref(), &render_verdict(&verdict, a.format)?)
        }
        Command::Balance(a) => {
            let eps = parse_epsilon(&a.eps)?;
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let f = OracleHandle::new(load_function(&a.f, &mut rng)?);
            let circuit = balance_circuit(&f, eps, a.mode)?;
            if a.dump_state {
                print!("{}", dump_state_lines(circuit.state()));
            }
            let verdict = circuit.conclude(a.seed);
            emit(a.out.as_ref(), &render_verdict(&verdict, a.format)?)
        }
        Command::Walsh(a) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let f = load_function(&a.f, &mut rng)?;
            let spectrum = f.walsh_spectrum_fast()?;
            let content = match a.format {
                ReportFormat::Text => {
                    let joined: Vec<String> =
                        spectrum.coeffs().iter().map(|c| c.to_string()).collect();
                    joined.join(",") + "\n"
                }
                ReportFormat::Json => {
                    let report = WalshReport {
                        n: spectrum.arity(),
                        coefficients: spectrum.coeffs().to_vec(),
                    };
                    serde_json::to_string_pretty(&report).map_err(json_error)? + "\n"
                }
                ReportFormat::Csv => {
                    let mut out = String::from("omega,coefficient\n");
                    for (omega, c) in spectrum.coeffs().iter().enumerate() {
                        out.push_str(&format!("{omega},{c}\n"));
                    }
                    out
                }
            };
            emit(a.out.as_ref(), &content)
        }
        Command::Bench(a) => {
            let config = ExperimentConfig {
                problem: a.problem,
                n: a.n,
                epsilons: parse_epsilon_list(&a.eps)?,
                trials: a.trials,
                base_seed: a.seed,
                mode: a.mode,
            };
            let report = run_experiment(&config)?;
            let content = match a.format {
                ReportFormat::Csv => report.to_csv()?,
                ReportFormat::Json => report.to_json()? + "\n",
                ReportFormat::Text => report.to_text(),
            };
            emit(a.out.as_ref(), &content)
        }
        Command::Gen(a) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let f = load_function(&a.f, &mut rng)?;
            emit(a.out.as_ref(), &f.to_table_text())
        }
    }
}

/// Parses `args` (including the program name) and runs the invocation,
/// returning the process exit status; errors are printed to stderr as
/// single `error[<class>]: <message>` lines.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version arrive here too; let clap pick the stream
            // and status (0 for help, 2 for usage errors).
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {}", e.exit_class(), e);
            e.exit_code()
        }
    }
}

/// [`run`] on the process arguments — the binary's whole `main`.
pub fn run_from_env() -> i32 {
    run(std::env::args_os())
}
