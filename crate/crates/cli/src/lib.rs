//! The `morrey` command-line frontend.
//!
//! Exit codes: 0 success, 2 bad input or inadmissible problem, 3 numeric
//! failure, 4 a verification contract did not hold.

pub mod num;
pub mod spec;
pub mod sweep;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use morrey_core::embeddings::{associate_norm, evaluate_embedding};
use morrey_core::hardy::EvalConfig;
use morrey_core::norms::GridFunction;
use morrey_core::oracle::{best_constant_lower_bound, divergence_witness, equivalence_report, OracleProblem};
use morrey_core::MorreyError;
use serde::Serialize;

use num::{fmt17, Num};
use spec::SpecFile;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Spec(String),
    #[error(transparent)]
    Core(#[from] MorreyError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Contract(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) | CliError::Io(_) => 2,
            CliError::Contract(_) => 4,
            CliError::Core(e) => match e {
                MorreyError::InadmissibleExponents(_)
                | MorreyError::HypothesisViolated(_)
                | MorreyError::InvalidExponent(_)
                | MorreyError::NotAWeight(_)
                | MorreyError::InvalidProfile(_)
                | MorreyError::InvalidGrid(_) => 2,
                MorreyError::WitnessNotFound { .. } | MorreyError::GateFailed { .. } => 4,
                _ => 3,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Spec(_) => "Spec",
            CliError::Io(_) => "Io",
            CliError::Contract(_) => "Contract",
            CliError::Core(MorreyError::InadmissibleExponents(_)) => "Inadmissible",
            CliError::Core(MorreyError::HypothesisViolated(_)) => "HypothesisViolated",
            CliError::Core(_) => match self.exit_code() {
                2 => "InvalidInput",
                4 => "Contract",
                _ => "NumericFailure",
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "morrey", version, about = "Embedding constants for weighted Morrey-type spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Suppress JSON on stdout.
    #[arg(long, global = true)]
    quiet: bool,
    /// Oracle seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Oracle grid cells.
    #[arg(long, global = true)]
    cells: Option<usize>,
    /// Output file: a CSV row for `constant`, the CSV for `sweep`, the argmax
    /// for `oracle`, the report for `verify` and `associate`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the closed-form constant.
    Constant {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Compare the closed form with the oracle, or find a divergence witness.
    Verify {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Evaluate a grid of exponents and power weights.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Associate norm of a step function read from a `knot,value` CSV.
    Associate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        function: PathBuf,
    },
    /// Raw oracle lower bound.
    Oracle {
        #[arg(long)]
        spec: PathBuf,
    },
}

struct Ctx<'a> {
    quiet: bool,
    seed: Option<u64>,
    cells: Option<usize>,
    out: Option<PathBuf>,
    stdout: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn out_path(&self, spec: &SpecFile) -> Option<PathBuf> {
        self.out.clone().or_else(|| spec.output.path.clone())
    }

    fn emit<T: Serialize>(&mut self, value: &T) -> Result<String, CliError> {
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
        if !self.quiet {
            writeln!(self.stdout, "{text}").map_err(|e| CliError::Io(e.to_string()))?;
        }
        Ok(text)
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn problem_name(spec: &SpecFile) -> String {
    serde_json::to_value(spec.direction)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// Runs the CLI on `args` (including the program name), writing JSON to
/// `stdout` and diagnostics to stderr. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut ctx = Ctx {
        quiet: cli.quiet,
        seed: cli.seed,
        cells: cli.cells,
        out: cli.out,
        stdout,
    };
    let result = match &cli.command {
        Command::Constant { spec } => constant(&mut ctx, spec),
        Command::Verify { spec } => verify(&mut ctx, spec),
        Command::Sweep { spec } => sweep_cmd(&mut ctx, spec),
        Command::Associate { spec, function } => associate(&mut ctx, spec, function),
        Command::Oracle { spec } => oracle(&mut ctx, spec),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            e.exit_code()
        }
    }
}

#[derive(Serialize)]
struct ConstantOut {
    problem: String,
    case: String,
    value: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    notes: Option<String>,
}

fn constant(ctx: &mut Ctx, path: &Path) -> Result<i32, CliError> {
    let spec = SpecFile::load(path)?;
    let prob = spec.problem()?;
    let eval = EvalConfig::default();
    let (value, case, notes) = match &prob {
        OracleProblem::Embedding(e) => {
            let v = evaluate_embedding(e, &eval)?;
            (v.value, format!("{}.{}", v.tag.theorem.label(), v.tag.case_id), Some(v.tag.notes))
        }
        OracleProblem::Hardy(_) => {
            let (v, label) = prob.closed_form(&eval)?;
            (v, label, None)
        }
    };
    let out = ConstantOut {
        problem: problem_name(&spec),
        case,
        value: Num(value.value()),
        notes,
    };
    ctx.emit(&out)?;
    if let Some(path) = ctx.out_path(&spec) {
        let opt = |e: Option<spec::Exponent>| e.map(|x| fmt17(x.0)).unwrap_or_default();
        let mut w = csv::Writer::from_writer(Vec::new());
        let row = [
            out.problem.clone(),
            spec.n.to_string(),
            opt(spec.p1),
            opt(spec.p2),
            opt(spec.theta),
            opt(spec.p),
            opt(spec.q),
            out.case.clone(),
            fmt17(value.value()),
        ];
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(["problem", "n", "p1", "p2", "theta", "p", "q", "case", "value"]).map_err(io)?;
        w.write_record(row).map_err(io)?;
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        write_file(&path, &bytes)?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct EquivalenceOut {
    mode: &'static str,
    case: String,
    closed_form: Num,
    lower_bound: Num,
    ratio_low: Num,
    floor: Num,
    k_recorded: Num,
    family_bests: BTreeMap<String, Num>,
    holds: bool,
}

#[derive(Serialize)]
struct DivergenceOut {
    mode: &'static str,
    case: String,
    found: bool,
    family: Option<String>,
    scales: Vec<Num>,
    ratios: Vec<Num>,
    growth: Option<Num>,
}

fn nums(xs: &[f64]) -> Vec<Num> {
    xs.iter().map(|&x| Num(x)).collect()
}

fn verify(ctx: &mut Ctx, path: &Path) -> Result<i32, CliError> {
    let spec = SpecFile::load(path)?;
    let prob = spec.problem()?;
    let cfg = spec.oracle_config(ctx.seed, ctx.cells)?;
    let (value, case) = prob.closed_form(&cfg.eval)?;
    let (text, code) = if value.is_infinite() {
        match divergence_witness(&prob, &cfg) {
            Ok(w) => {
                let out = DivergenceOut {
                    mode: "divergence",
                    case,
                    found: true,
                    family: Some(w.family.clone()),
                    scales: nums(&w.scales),
                    ratios: nums(&w.ratios),
                    growth: Some(Num(w.growth())),
                };
                (ctx.emit(&out)?, 0)
            }
            Err(MorreyError::WitnessNotFound { ratios }) => {
                let out = DivergenceOut {
                    mode: "divergence",
                    case,
                    found: false,
                    family: None,
                    scales: Vec::new(),
                    ratios: nums(&ratios),
                    growth: None,
                };
                eprintln!("error[Contract]: no divergence witness found");
                (ctx.emit(&out)?, 4)
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        let r = equivalence_report(&prob, &cfg)?;
        let out = EquivalenceOut {
            mode: "equivalence",
            case: r.case,
            closed_form: Num(r.closed_form),
            lower_bound: Num(r.lower_bound),
            ratio_low: Num(r.ratio_low),
            floor: Num(r.floor),
            k_recorded: Num(r.k_recorded),
            family_bests: r.family_bests.into_iter().map(|(k, v)| (k, Num(v))).collect(),
            holds: r.holds,
        };
        if !r.holds {
            eprintln!("error[Contract]: equivalence bounds do not hold");
        }
        (ctx.emit(&out)?, if r.holds { 0 } else { 4 })
    };
    if let Some(path) = ctx.out_path(&spec) {
        write_file(&path, format!("{text}\n").as_bytes())?;
    }
    Ok(code)
}

fn sweep_cmd(ctx: &mut Ctx, path: &Path) -> Result<i32, CliError> {
    let spec = SpecFile::load(path)?;
    let direction = spec
        .direction
        .direction()
        .ok_or_else(|| CliError::Spec("sweep needs an embedding direction".into()))?;
    let ranges = spec.sweep.as_ref().ok_or_else(|| CliError::Spec("sweep needs a `sweep` section".into()))?;
    let eval = EvalConfig::default();
    let oracle = if ranges.oracle {
        Some(spec.oracle_config(ctx.seed, ctx.cells)?)
    } else {
        None
    };
    let mut buf = Vec::new();
    let numeric = sweep::run_sweep(direction, spec.n, ranges, &eval, oracle.as_ref(), &mut buf)?;
    match ctx.out_path(&spec) {
        Some(path) => write_file(&path, &buf)?,
        None if !ctx.quiet => ctx.stdout.write_all(&buf).map_err(|e| CliError::Io(e.to_string()))?,
        None => {}
    }
    if numeric {
        eprintln!("error[NumericFailure]: some sweep cells failed numerically");
        return Ok(3);
    }
    Ok(0)
}

#[derive(Serialize)]
struct AssociateOut {
    value: Num,
}

fn associate(ctx: &mut Ctx, path: &Path, function: &Path) -> Result<i32, CliError> {
    let spec = SpecFile::load(path)?;
    let space = spec.morrey_space()?;
    let file = std::fs::File::open(function).map_err(|e| CliError::Spec(format!("cannot read {}: {e}", function.display())))?;
    let f = GridFunction::read_csv(file)?;
    let value = associate_norm(&f, &space, &EvalConfig::default())?;
    let text = ctx.emit(&AssociateOut { value: Num(value.value()) })?;
    if let Some(path) = ctx.out_path(&spec) {
        write_file(&path, format!("{text}\n").as_bytes())?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct OracleOut {
    lower_bound: Num,
    family_bests: BTreeMap<String, Num>,
    trace: Vec<(usize, Num)>,
    argmax: Option<String>,
}

fn oracle(ctx: &mut Ctx, path: &Path) -> Result<i32, CliError> {
    let spec = SpecFile::load(path)?;
    let prob = spec.problem()?;
    let cfg = spec.oracle_config(ctx.seed, ctx.cells)?;
    let res = best_constant_lower_bound(&prob, &cfg)?;
    let argmax = ctx.out_path(&spec);
    if let Some(path) = &argmax {
        let mut buf = Vec::new();
        res.argmax.write_csv(&mut buf)?;
        write_file(path, &buf)?;
    }
    ctx.emit(&OracleOut {
        lower_bound: Num(res.lower_bound.value()),
        family_bests: res.family_bests.into_iter().map(|(k, v)| (k, Num(v))).collect(),
        trace: res.trace.into_iter().map(|(i, r)| (i, Num(r))).collect(),
        argmax: argmax.map(|p| p.display().to_string()),
    })?;
    Ok(0)
}
