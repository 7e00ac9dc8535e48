//! `pmssc`: schedule, densest-subfamily, coverage and oracle runs on JSON
//! instance files.
//!
//! Exit codes: 0 success, 2 invalid input, 3 solver failure, 4 oracle
//! limits exceeded.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pmssc::io::{
    generate_instance, oracle_report, parse_instance, pds_report, pmc_report, serialize_instance, solve_report,
    GeneratorSpec, ModelKind, OracleProblem, PdsAlgo, RunParams, RunReport, SolveAlgo,
};
use pmssc::oracle::OracleLimits;
use pmssc::pmc::PmcMode;
use pmssc::{Error, ProblemInstance, Rational};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "pmssc", version, about = "Parallel min-sum set cover solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a full schedule.
    Solve(SolveArgs),
    /// One densest-subfamily call on the whole universe.
    Pds(PdsArgs),
    /// Maximum coverage under per-machine budgets via LP rounding.
    Pmc(PmcArgs),
    /// Exact optimum of a small instance.
    Oracle(OracleArgs),
    /// Write a random instance.
    Gen(GenArgs),
    /// Check an instance file.
    Validate(ValidateArgs),
    /// Compare an algorithm with the exact optimum over a directory of instances.
    Bench(BenchArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    mu: Option<f64>,
    /// Defaults to `PMSSC_SEED`, then 0.
    #[arg(long, env = "PMSSC_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    algo: SolveAlgo,
    #[command(flatten)]
    common: Common,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a CSV row instead of the JSON report.
    #[arg(long)]
    csv: bool,
    /// Compare with the exact optimum.
    #[arg(long)]
    compare: bool,
    #[arg(long, value_parser = parse_limits)]
    limits: Option<OracleLimits>,
}

#[derive(Args)]
struct PdsArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    algo: PdsAlgo,
    #[command(flatten)]
    common: Common,
    #[arg(long, value_parser = parse_limits)]
    limits: Option<OracleLimits>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Mode {
    Poly,
    Fpt,
}

#[derive(Args)]
struct PmcArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Comma-separated budgets, integers or `p/q`.
    #[arg(long, value_parser = parse_budgets)]
    budgets: Budgets,
    #[arg(long, value_enum)]
    mode: Mode,
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    r_cap: Option<u64>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    problem: OracleProblem,
    /// `k,m,n` caps, optionally followed by a node budget.
    #[arg(long, value_parser = parse_limits)]
    limits: Option<OracleLimits>,
    /// Required for `--problem pmc`.
    #[arg(long, value_parser = parse_budgets)]
    budgets: Option<Budgets>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    model: ModelKind,
    #[arg(long)]
    density: f64,
    #[arg(long, env = "PMSSC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    dag_edge_prob: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    algo: SolveAlgo,
    /// Include oracle costs and ratios.
    #[arg(long)]
    ratios: bool,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, env = "PMSSC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = parse_limits)]
    limits: Option<OracleLimits>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone)]
struct Budgets(Vec<Rational>);

fn parse_budgets(s: &str) -> Result<Budgets, String> {
    s.split(',')
        .map(|b| b.trim().parse::<Rational>().map_err(|e| format!("budget \"{b}\": {e}")))
        .collect::<Result<_, _>>()
        .map(Budgets)
}

fn parse_limits(s: &str) -> Result<OracleLimits, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if !(3..=4).contains(&parts.len()) {
        return Err("expected k,m,n or k,m,n,nodes".into());
    }
    let num = |p: &str| p.parse::<u64>().map_err(|e| format!("\"{p}\": {e}"));
    Ok(OracleLimits {
        max_k: num(parts[0])? as usize,
        max_m: num(parts[1])? as usize,
        max_n: num(parts[2])? as usize,
        node_budget: match parts.get(3) {
            Some(p) => num(p)?,
            None => OracleLimits::ENUMERATION.node_budget,
        },
    })
}

enum Failure {
    Core(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Core(e) => match e {
                Error::LimitsExceeded(_) => 4,
                Error::NoIterationKept { .. }
                | Error::NumericalFailure(_)
                | Error::LpStatus(_)
                | Error::StalledOracle { .. }
                | Error::NoCoverage => 3,
                _ => 2,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Input(s) => f.write_str(s),
        }
    }
}

type Outcome = Result<(), Failure>;

fn load(path: &Path) -> Result<ProblemInstance, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(parse_instance(&bytes)?)
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn run_params(c: &Common) -> RunParams {
    RunParams {
        mu: c.mu,
        ..RunParams::new(c.epsilon, c.seed)
    }
}

fn emit(report: &RunReport) {
    println!("{}", report.to_json());
}

#[derive(Serialize)]
struct CsvRow {
    instance: String,
    algorithm: String,
    algo_cost: Option<f64>,
    oracle_cost: Option<f64>,
    ratio: Option<f64>,
}

fn csv_row(name: &str, report: &RunReport) -> CsvRow {
    let oracle_cost = report
        .oracle
        .as_ref()
        .and_then(|o| o.cost.parse::<Rational>().ok())
        .map(|r| pmssc::rational::to_f64(&r));
    CsvRow {
        instance: name.to_owned(),
        algorithm: report.algorithm.clone(),
        algo_cost: report.cost_value,
        oracle_cost,
        ratio: report.oracle.as_ref().map(|o| o.ratio),
    }
}

fn write_csv<W: Write>(out: W, rows: &[CsvRow]) -> Outcome {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Failure::Input(e.to_string()))?;
    }
    w.flush().map_err(|e| Failure::Input(e.to_string()))
}

fn solve(a: SolveArgs) -> Outcome {
    let inst = load(&a.instance)?;
    let limits = a.limits.unwrap_or(OracleLimits::PMSSC);
    // The exact algorithm reads its limits from the comparison slot.
    let compare = (a.compare || (a.algo == SolveAlgo::Exact && a.limits.is_some())).then_some(&limits);
    let report = solve_report(&inst, a.algo, &run_params(&a.common), compare)?;
    if let Some(out) = &a.out {
        write_file(out, &report.to_json())?;
    }
    if a.csv {
        write_csv(std::io::stdout(), &[csv_row(&a.instance.display().to_string(), &report)])
    } else {
        emit(&report);
        Ok(())
    }
}

fn pds(a: PdsArgs) -> Outcome {
    let inst = load(&a.instance)?;
    let limits = a.limits.unwrap_or(OracleLimits::ENUMERATION);
    emit(&pds_report(&inst, a.algo, &run_params(&a.common), &limits)?);
    Ok(())
}

fn pmc(a: PmcArgs) -> Outcome {
    let inst = load(&a.instance)?;
    let mode = match a.mode {
        Mode::Poly => PmcMode::Poly,
        Mode::Fpt => PmcMode::Fpt,
    };
    let params = RunParams {
        r_cap: a.r_cap,
        ..run_params(&a.common)
    };
    emit(&pmc_report(&inst, &a.budgets.0, mode, &params)?);
    Ok(())
}

fn oracle(a: OracleArgs) -> Outcome {
    let inst = load(&a.instance)?;
    let limits = a.limits.unwrap_or(match a.problem {
        OracleProblem::Pmssc => OracleLimits::PMSSC,
        _ => OracleLimits::ENUMERATION,
    });
    let budgets = a.budgets.as_ref().map(|b| b.0.as_slice());
    emit(&oracle_report(&inst, a.problem, &limits, budgets)?);
    Ok(())
}

fn generate(a: GenArgs) -> Outcome {
    let spec = GeneratorSpec {
        dag_edge_prob: a.dag_edge_prob,
        ..GeneratorSpec::new(a.n, a.k, a.m, a.model, a.density, a.seed)
    };
    let inst = generate_instance(&spec)?;
    write_file(&a.out, &serialize_instance(&inst))
}

fn validate(a: ValidateArgs) -> Outcome {
    let inst = load(&a.instance)?;
    let report = inst.validate();
    let summary = json!({
        "valid": report.is_valid(),
        "coverable": report.coverable,
        "uncovered": report.uncovered,
        "issues": report.issues.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "n": inst.n(),
        "k": inst.k(),
        "m": inst.m(),
        "model": inst.cost_model().kind(),
    });
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure::Core(Error::Validation(format!("{} issue(s)", report.issues.len()))))
    }
}

fn bench(a: BenchArgs) -> Outcome {
    let mut files: Vec<PathBuf> = fs::read_dir(&a.corpus)
        .map_err(|e| Failure::Input(format!("{}: {e}", a.corpus.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let params = RunParams {
        mu: a.mu,
        ..RunParams::new(a.epsilon, a.seed)
    };
    let limits = a.limits.unwrap_or(OracleLimits::PMSSC);
    let mut rows = Vec::new();
    for path in &files {
        let inst = load(path)?;
        let name = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
        let report = match solve_report(&inst, a.algo, &params, a.ratios.then_some(&limits)) {
            Ok(r) => r,
            // Too large for the oracle: keep the algorithm's cost alone.
            Err(Error::LimitsExceeded(msg)) if a.ratios => {
                eprintln!("{name}: oracle skipped ({msg})");
                solve_report(&inst, a.algo, &params, None)?
            }
            Err(e) => return Err(e.into()),
        };
        rows.push(csv_row(&name, &report));
    }
    match &a.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            write_csv(file, &rows)
        }
        None => write_csv(std::io::stdout(), &rows),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Pds(a) => pds(a),
        Command::Pmc(a) => pmc(a),
        Command::Oracle(a) => oracle(a),
        Command::Gen(a) => generate(a),
        Command::Validate(a) => validate(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
