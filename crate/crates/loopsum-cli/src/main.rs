//! `loopsum` — batch front end for the loop-model sum-rule engine.
//!
//! Subcommands:
//! * `compute` — build one sum-rule polynomial by a chosen determinantal route;
//! * `verify`  — run identity checks symbolically or by randomized exact evaluation;
//! * `dump`    — print one symmetric-family member or one determinant matrix.
//!
//! Exit codes: `0` success (for `verify`: every verdict EXACT or PROPORTIONAL),
//! `1` at least one verification FAIL, `2` usage error, `3` internal algebraic
//! failure (for example a ratio route whose division leaves a remainder).
//!
//! Output is byte-identical for identical flags and seed, independent of
//! `--jobs` and of wall-clock conditions; `--timings` deliberately trades that
//! away for per-check durations.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use loopsum_core::symfunc::{elem, eps, lam, mu, nu};
use loopsum_core::{
    build_matrix, oracle_interpolate, verify_many, z_open_compute, zp_compute, CoreError,
    IdentityId, LaurentPoly, MatrixKind, Method, Model, VarSet, VerificationReport, VerifyMode,
};

/// Exact loop-model sum rules: compute, dump, verify.
#[derive(Parser)]
#[command(name = "loopsum", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a sum-rule polynomial by one determinantal route
    Compute(ComputeArgs),
    /// Check identities symbolically or by randomized exact evaluation
    Verify(VerifyArgs),
    /// Print one family member or one determinant matrix
    Dump(DumpArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Symbolic,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Periodic,
    Open,
    Shared,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Elementary symmetric function of the doubled variable list
    E,
    /// Doubly elementary family (variables and their inverses)
    Eps,
    /// Periodic building-block family
    Mu,
    /// Open building-block family (plus signs)
    Nu,
    /// Open building-block family (minus signs)
    Lam,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SizeArgs {
    /// Number of sites; the variables are z1..zL
    #[arg(long = "L", value_name = "N")]
    l: Option<usize>,
    /// Custom comma-separated variable names (alternative to --L)
    #[arg(long, value_delimiter = ',', value_name = "NAMES", conflicts_with = "l")]
    vars: Option<Vec<String>>,
}

#[derive(Args)]
struct ComputeArgs {
    /// Boundary condition: periodic | open
    #[arg(long, value_parser = parse_model)]
    model: Model,
    /// Route: det-e | det-mu | det-lambda | v-over-pp | w-over-p | det-nu | oracle-interp
    #[arg(long, value_parser = parse_method)]
    method: Method,
    #[command(flatten)]
    size: SizeArgs,
    /// Lift the symbolic size ceiling (periodic 6, open 5)
    #[arg(long)]
    override_ceiling: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity to check; repeatable. Defaults to the full catalogue
    #[arg(long = "id", value_name = "ID", value_parser = parse_identity, conflicts_with = "suite")]
    ids: Vec<IdentityId>,
    /// Identity group to check
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    /// Check exactly this size
    #[arg(long = "L", value_name = "N", conflicts_with = "max_l")]
    l: Option<usize>,
    /// Cap each identity's size range
    #[arg(long = "max-L", value_name = "N")]
    max_l: Option<usize>,
    /// Verification mode
    #[arg(long, value_enum, default_value_t = Mode::Symbolic)]
    mode: Mode,
    /// Trials per check in random mode (default 200)
    #[arg(long, value_name = "N")]
    trials: Option<u32>,
    /// RNG seed for random mode; auto-generated and recorded when omitted
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Worker threads for independent checks
    #[arg(long, value_name = "N", env = "LOOPSUM_JOBS")]
    jobs: Option<usize>,
    /// Lift the per-identity symbolic size ceilings
    #[arg(long)]
    override_ceiling: bool,
    /// Append per-check wall-clock millis (output is then not reproducible)
    #[arg(long)]
    timings: bool,
    /// Corrupt one coefficient inside the rec1p check (soundness self-test)
    #[arg(long, hide = true)]
    plant_fault: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DumpArgs {
    /// Family: e | eps | mu | nu | lam (requires --index)
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Matrix: e-staircase | eps-doubled | v-minus | w-plus | mu | nu-diff | lambda-diff
    #[arg(long, value_name = "KIND", value_parser = parse_matrix, conflicts_with = "family")]
    matrix: Option<MatrixKind>,
    /// Family index (--m, --i, --k are synonyms matching each family's letter)
    #[arg(
        long,
        value_name = "IDX",
        visible_aliases = ["m", "i", "k"],
        allow_negative_numbers = true
    )]
    index: Option<i64>,
    #[command(flatten)]
    size: SizeArgs,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse().map_err(|e: CoreError| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: CoreError| e.to_string())
}

fn parse_identity(s: &str) -> Result<IdentityId, String> {
    s.parse().map_err(|e: CoreError| e.to_string())
}

fn parse_matrix(s: &str) -> Result<MatrixKind, String> {
    s.parse().map_err(|e: CoreError| e.to_string())
}

/// Failure cases the process reports through its exit code.
enum CliError {
    /// Bad flag combination or value: exit code 2.
    Usage(String),
    /// The algebra itself refused (nonzero remainder, size rule, ...): exit 3.
    Algebra(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Parse(msg) => CliError::Usage(msg),
            other => CliError::Algebra(other.to_string()),
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

impl SizeArgs {
    fn varset(&self) -> Result<VarSet, CliError> {
        match (self.l, &self.vars) {
            (Some(0), _) => usage("--L must be at least 1"),
            (Some(l), _) => Ok(VarSet::numbered("z", l)),
            (None, Some(names)) => {
                VarSet::new(names.iter().map(String::as_str)).map_err(|e| CliError::Usage(e.to_string()))
            }
            (None, None) => usage("one of --L or --vars is required"),
        }
    }
}

impl Suite {
    fn label(self) -> &'static str {
        match self {
            Suite::Periodic => "periodic",
            Suite::Open => "open",
            Suite::Shared => "shared",
            Suite::All => "all",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Compute(args) => run_compute(args).map(|doc| (doc, true)),
        Command::Verify(args) => run_verify(args),
        Command::Dump(args) => run_dump(args).map(|doc| (doc, true)),
    };
    match outcome {
        Ok((doc, all_passed)) => {
            let output = match &cli.command {
                Command::Compute(a) => &a.output,
                Command::Verify(a) => &a.output,
                Command::Dump(a) => &a.output,
            };
            if let Err(e) = emit(&doc, output) {
                eprintln!("error: {e}");
                return ExitCode::from(3);
            }
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Algebra(msg)) => {
            eprintln!("algebraic failure: {msg}");
            ExitCode::from(3)
        }
    }
}

fn emit(doc: &str, output: &OutputArgs) -> std::io::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, doc),
        None => {
            print!("{doc}");
            Ok(())
        }
    }
}

fn model_ceiling(model: Model) -> usize {
    match model {
        Model::Periodic => 6,
        Model::Open => 5,
    }
}

fn run_compute(args: &ComputeArgs) -> Result<String, CliError> {
    let vars = args.size.varset()?;
    let l = vars.len();
    let applicable = Method::for_model(args.model);
    if args.method != Method::OracleInterp && !applicable.contains(&args.method) {
        let names: Vec<&str> = applicable.iter().map(|m| m.name()).collect();
        return usage(format!(
            "method `{}` does not apply to the {} model; choose one of {} or oracle-interp",
            args.method,
            args.model,
            names.join(", ")
        ));
    }
    let ceiling = model_ceiling(args.model);
    if l > ceiling && !args.override_ceiling {
        return usage(format!(
            "{l} variables exceed the {} symbolic ceiling of {ceiling}; pass --override-ceiling to proceed",
            args.model
        ));
    }
    let result = if args.method == Method::OracleInterp {
        if args.size.vars.is_some() {
            return usage("the oracle route works on the canonical variables only; use --L");
        }
        oracle_interpolate(args.model, l)?
    } else {
        match args.model {
            Model::Periodic => zp_compute(&vars, args.method)?,
            Model::Open => z_open_compute(&vars, args.method)?,
        }
    };
    Ok(render::compute_doc(args.model, &result, args.output.format))
}

fn auto_seed() -> u64 {
    // Entropy quality is irrelevant here: the seed's only job is to vary
    // between unseeded runs while being recorded for exact replay.
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0x5eed)
        | 1
}

fn run_verify(args: &VerifyArgs) -> Result<(String, bool), CliError> {
    let ids: Vec<IdentityId> = if args.ids.is_empty() {
        let group = args.suite.unwrap_or(Suite::All);
        IdentityId::ALL
            .into_iter()
            .filter(|id| group == Suite::All || id.suite() == group.label())
            .collect()
    } else {
        args.ids.clone()
    };

    let mode = match args.mode {
        Mode::Symbolic => {
            if args.seed.is_some() {
                return usage("--seed applies to --mode random only");
            }
            if args.trials.is_some() {
                return usage("--trials applies to --mode random only");
            }
            VerifyMode::Symbolic
        }
        Mode::Random => {
            let trials = args.trials.unwrap_or(200);
            if trials == 0 {
                return usage("--trials must be at least 1");
            }
            VerifyMode::Random {
                trials,
                seed: args.seed.unwrap_or_else(auto_seed),
            }
        }
    };

    if args.plant_fault && (ids != [IdentityId::Rec1P] || args.mode != Mode::Random) {
        return usage("--plant-fault requires exactly --id rec1p --mode random");
    }

    if let Some(n) = args.jobs {
        if n == 0 {
            return usage("--jobs must be at least 1");
        }
        // A failure here means the pool already exists (only possible if this
        // runs twice in one process); the run stays correct, just unconfigured.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }

    let symbolic = mode == VerifyMode::Symbolic;
    let mut requests: Vec<(IdentityId, usize, VerifyMode)> = Vec::new();
    for &id in &ids {
        match args.l {
            Some(l) => {
                if !id.supports_size(l) {
                    // A suite selection quietly skips members undefined at the
                    // requested size; naming an identity makes it an error.
                    if args.ids.is_empty() {
                        continue;
                    }
                    return usage(format!(
                        "{id} is not defined at L={l} (defined for L >= {}{})",
                        id.min_l(),
                        if id == IdentityId::MuReduction { ", even sizes only" } else { "" }
                    ));
                }
                if symbolic && l > id.default_max_l() && !args.override_ceiling {
                    return usage(format!(
                        "L={l} exceeds the symbolic ceiling {} for {id}; pass --override-ceiling to proceed",
                        id.default_max_l()
                    ));
                }
                requests.push((id, l, mode));
            }
            None => {
                let cap = match (symbolic, args.override_ceiling, args.max_l) {
                    (true, false, Some(m)) => m.min(id.default_max_l()),
                    (_, _, Some(m)) => m,
                    (_, _, None) => id.default_max_l(),
                };
                for l in id.min_l()..=cap {
                    if id.supports_size(l) {
                        requests.push((id, l, mode));
                    }
                }
            }
        }
    }
    if requests.is_empty() {
        return usage("no checks selected: the requested sizes fall outside every chosen identity's range");
    }

    let reports: Vec<VerificationReport> = if args.plant_fault {
        requests
            .iter()
            .map(|&(id, l, m)| loopsum_core::sumrule::verify::verify_with_planted_fault(id, l, m))
            .collect::<Result<_, _>>()?
    } else {
        verify_many(&requests)?
    };

    let all_passed = reports.iter().all(|r| r.passed());
    let doc = render::verify_doc(&reports, mode, args.timings, args.output.format);
    Ok((doc, all_passed))
}

fn run_dump(args: &DumpArgs) -> Result<String, CliError> {
    let vars = args.size.varset()?;
    match (args.family, args.matrix) {
        (Some(family), None) => {
            let index = match args.index {
                Some(i) => i,
                None => return usage("--family needs --index (or its synonyms --m/--i/--k)"),
            };
            let poly: LaurentPoly = match family {
                Family::E => elem(&vars, index),
                Family::Eps => eps(&vars, index),
                Family::Mu => mu(&vars, index),
                Family::Nu => nu(&vars, index),
                Family::Lam => lam(&vars, index),
            };
            let name = match family {
                Family::E => "e",
                Family::Eps => "eps",
                Family::Mu => "mu",
                Family::Nu => "nu",
                Family::Lam => "lam",
            };
            Ok(render::family_doc(name, index, &poly, args.output.format))
        }
        (None, Some(kind)) => {
            if args.index.is_some() {
                return usage("--index applies to --family dumps only");
            }
            let matrix = build_matrix(kind, &vars)?;
            Ok(render::matrix_doc(kind, &matrix, args.output.format))
        }
        (None, None) => usage("one of --family or --matrix is required"),
        (Some(_), Some(_)) => unreachable!("clap rejects --family with --matrix"),
    }
}
