//! `mobo-mcs`: Pareto fronts and approximation sets of multi-objective
//! Boolean optimization instances.
//!
//! Exit codes: 0 complete, 1 error, 2 usage error, 3 stopped by the time or
//! memory budget, 4 infeasible instance. Log verbosity comes from
//! `MOBO_MCS_LOG` (e.g. `MOBO_MCS_LOG=info`).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mobo_core::io::{self, WriteOptions};
use mobo_core::oracle;
use mobo_core::quality::{self, big_to_f64};
use mobo_core::ratio::{format_ratio, parse_ratio, to_f64};
use mobo_core::{
    core_solve, enumerate_efficient_set, intre_solve, ApproxResult, Budget, Instance, Point, Ratio,
    RatioSchedule, RunStatus, SolveOptions,
};
use serde_json::json;

const EXIT_TRUNCATED: u8 = 3;
const EXIT_INFEASIBLE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "mobo-mcs",
    version,
    about = "Multi-objective Boolean optimization via MCS enumeration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Pareto front or an approximation set of an instance.
    Solve(SolveArgs),
    /// Compare a point set against a reference front and/or lower bound set.
    Evaluate(EvaluateArgs),
    /// Generate random multi-objective set covering instances.
    Generate(GenerateArgs),
    /// Brute-force Pareto front of a small instance.
    Oracle(OracleArgs),
    /// Every efficient assignment, not just one per Pareto point.
    EnumerateEfficient(EfficientArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Complete threshold domains: the exact Pareto front.
    Exact,
    /// Geometric threshold domains, refined between iterations.
    Interval,
    /// Rounded objective coefficients, refined between iterations.
    Coeff,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the per-iteration trace and final sets as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Include wall-clock times in the output (makes it non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct BudgetArgs {
    /// Wall-clock limit in seconds.
    #[arg(long, value_name = "SECONDS")]
    time_limit: Option<f64>,
    /// Advisory cap on solver clause memory, in MiB.
    #[arg(long, value_name = "MIB")]
    memory_cap: Option<usize>,
    /// Seed for the SAT solver's tie-breaking (0 = plain heuristic).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance in `.pbmo` format.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Ratio `1 + eps` of the first iteration (e.g. `2`, `1.1`, `11/10`).
    #[arg(long, value_parser = ratio_arg)]
    ratio: Option<Ratio>,
    /// Divide `eps` by this after each iteration; without it, one iteration runs.
    #[arg(long, value_parser = ratio_arg)]
    divisor: Option<Ratio>,
    /// Stop after completing an iteration at this ratio [default: 1].
    #[arg(long, value_parser = ratio_arg)]
    target_ratio: Option<Ratio>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Point set to evaluate (result JSON or one point per line).
    set: PathBuf,
    /// Reference front.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Lower bound set.
    #[arg(long)]
    lower: Option<PathBuf>,
    /// Normalize hypervolume by the instance's objective bounds.
    #[arg(long)]
    instance: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, short = 'n')]
    vars: u32,
    #[arg(long, short = 'm')]
    constraints: u32,
    #[arg(long, short = 'p', default_value_t = 2)]
    objectives: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of instances, with seeds `seed, seed+1, ...`.
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Worker threads when generating several instances.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output file (one instance) or directory (several); stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    input: PathBuf,
    /// Refuse instances with more variables than this.
    #[arg(long, default_value_t = oracle::DEFAULT_VAR_CAP)]
    var_cap: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EfficientArgs {
    input: PathBuf,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(flatten)]
    output: OutputArgs,
}

fn ratio_arg(s: &str) -> Result<Ratio, String> {
    let r = parse_ratio(s).map_err(|e| e.to_string())?;
    if r < Ratio::from_integer(1) {
        return Err("ratio must be at least 1".into());
    }
    Ok(r)
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    io::parse_pbmo(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_points(path: &Path) -> Result<Vec<Point>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    io::parse_points(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve_options(budget: &BudgetArgs, schedule: RatioSchedule) -> Result<SolveOptions> {
    let deadline = match budget.time_limit {
        Some(t) if !(t > 0.0 && t.is_finite()) => bail!("--time-limit must be positive"),
        Some(t) => Budget::with_timeout(Duration::from_secs_f64(t)),
        None => Budget::unlimited(),
    };
    Ok(SolveOptions {
        schedule,
        budget: deadline,
        seed: budget.seed,
        memory_cap: budget.memory_cap.map(|m| m.saturating_mul(1 << 20)),
    })
}

fn write_outputs(result: &ApproxResult, output: &OutputArgs) -> Result<u8> {
    let opts = WriteOptions {
        timing: output.timing,
    };
    emit(output.out.as_deref(), &io::write_result_json(result, opts))?;
    if let Some(p) = &output.trace {
        fs::write(p, io::write_result_csv(result, opts))
            .with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(match result.status {
        RunStatus::Complete => 0,
        RunStatus::Truncated => EXIT_TRUNCATED,
        RunStatus::Infeasible => EXIT_INFEASIBLE,
    })
}

fn cmd_solve(args: &SolveArgs) -> Result<u8> {
    let instance = read_instance(&args.input)?;
    let one = Ratio::from_integer(1);
    let schedule = match args.mode {
        Mode::Exact => {
            if args.ratio.is_some() || args.divisor.is_some() || args.target_ratio.is_some() {
                bail!("--ratio, --divisor and --target-ratio do not apply to --mode exact");
            }
            RatioSchedule::exact()
        }
        Mode::Interval | Mode::Coeff => {
            let start = args.ratio.context("--ratio is required for this mode")?;
            match args.divisor {
                Some(d) => RatioSchedule::new(start, d, args.target_ratio.unwrap_or(one))?,
                None => {
                    if args.target_ratio.is_some_and(|t| t != start) {
                        bail!("--target-ratio needs --divisor");
                    }
                    RatioSchedule::single(start)
                }
            }
        }
    };
    let options = solve_options(&args.budget, schedule)?;
    let result = match args.mode {
        Mode::Exact | Mode::Interval => intre_solve(&instance, &options)?,
        Mode::Coeff => core_solve(&instance, &options)?,
    };
    log::info!(
        "{} records, {} lower bound points, status {}",
        result.records.len(),
        result.lower_bound.len(),
        result.status.as_str()
    );
    write_outputs(&result, &args.output)
}

fn cmd_efficient(args: &EfficientArgs) -> Result<u8> {
    let instance = read_instance(&args.input)?;
    let options = solve_options(&args.budget, RatioSchedule::exact())?;
    let result = enumerate_efficient_set(&instance, &options)?;
    write_outputs(&result, &args.output)
}

fn epsilon_json(e: Option<quality::EpsilonValue>) -> serde_json::Value {
    match e {
        Some(e) => json!({
            "value": format_ratio(&e.value),
            "approx": to_f64(&e.value),
            "shifted": e.shifted,
        }),
        None => serde_json::Value::Null,
    }
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<u8> {
    let set = read_points(&args.set)?;
    if set.is_empty() {
        bail!("{} contains no points", args.set.display());
    }
    let reference = args.reference.as_deref().map(read_points).transpose()?;
    let lower = args.lower.as_deref().map(read_points).transpose()?;
    let dim = set[0].dim();
    for other in reference.iter().chain(&lower) {
        if other.iter().any(|p| p.dim() != dim) {
            bail!("point sets have different dimensions");
        }
    }
    let denominators = match &args.instance {
        Some(p) => quality::denominators_from_bounds(&read_instance(p)?),
        None => {
            let sets = std::iter::once(set.as_slice())
                .chain(reference.as_deref())
                .chain(lower.as_deref());
            quality::denominators_from_sets(dim, sets)
        }
    };
    let report = quality::indicator_report(
        &set,
        lower.as_deref().unwrap_or(&[]),
        reference.as_deref(),
        denominators,
    );
    let hv_ref = reference
        .as_deref()
        .map(|r| quality::normalized_hypervolume(r, &report.denominators));
    let out = json!({
        "points": set.len(),
        "epsilon_vs_lower_bound": epsilon_json(report.epsilon_vs_lower_bound.filter(|_| lower.is_some())),
        "epsilon_vs_reference": epsilon_json(report.epsilon_vs_reference),
        "hypervolume": big_to_f64(&report.hypervolume),
        "reference_hypervolume": hv_ref.as_ref().map(big_to_f64),
        "denominators": report.denominators.iter().map(big_to_f64).collect::<Vec<_>>(),
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(0)
}

fn generated_name(args: &GenerateArgs, seed: u64) -> String {
    format!(
        "mscp_n{}_m{}_p{}_s{}.pbmo",
        args.vars, args.constraints, args.objectives, seed
    )
}

fn cmd_generate(args: &GenerateArgs) -> Result<u8> {
    let make = |seed: u64| -> Result<String> {
        Ok(io::write_pbmo(&io::generate_mscp(
            args.vars,
            args.constraints,
            args.objectives,
            seed,
        )?))
    };
    if args.count <= 1 {
        emit(args.out.as_deref(), &make(args.seed)?)?;
        return Ok(0);
    }
    let dir = args
        .out
        .as_deref()
        .context("--out DIR is required with --count > 1")?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let seeds: Vec<u64> = (0..args.count).map(|i| args.seed.wrapping_add(i)).collect();
    let jobs = args.jobs.max(1);
    let chunk = seeds.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || -> Result<()> {
                    for &seed in part {
                        let path = dir.join(generated_name(args, seed));
                        fs::write(&path, make(seed)?)
                            .with_context(|| format!("writing {}", path.display()))?;
                    }
                    Ok(())
                })
            })
            .collect();
        handles
            .into_iter()
            .try_for_each(|h| h.join().expect("generator thread panicked"))
    })?;
    Ok(0)
}

fn cmd_oracle(args: &OracleArgs) -> Result<u8> {
    let instance = read_instance(&args.input)?;
    let report = oracle::brute_force_pareto_capped(&instance, args.var_cap)?;
    let out = json!({
        "pareto": report.pareto,
        "efficient": report.efficient.iter().map(|r| json!({
            "image": r.image,
            "assignment": r.assignment_string(),
        })).collect::<Vec<_>>(),
        "feasible_count": report.feasible_count,
    });
    emit(
        args.out.as_deref(),
        &(serde_json::to_string_pretty(&out)? + "\n"),
    )?;
    Ok(if report.feasible_count == 0 {
        EXIT_INFEASIBLE
    } else {
        0
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MOBO_MCS_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::EnumerateEfficient(a) => cmd_efficient(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
