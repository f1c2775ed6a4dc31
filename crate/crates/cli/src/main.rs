//! `spectral-bounds` command-line tool.
//!
//! Exit status: 0 when every enabled check passes (or is skipped), 1 when a
//! mathematical check or a solve fails, 2 on invalid input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spectral_bounds::bounds::{applicable_bounds, best_bound, GeometryData};
use spectral_bounds::config::{OneOrMany, RunConfig};
use spectral_bounds::format::fmt_f64;
use spectral_bounds::solver::solve;
use spectral_bounds::sweep::{sweep, SweepConfig};
use spectral_bounds::verify::verify;
use spectral_bounds::xi_suite::{run_xi_suite, XiSuiteConfig};
use spectral_bounds::Error;

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "spectral-bounds", version, about = "First Dirichlet eigenvalue bounds and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every applicable closed-form lower bound and the best one.
    Bounds(BoundsArgs),
    /// Check the properties of the barrier function xi on a grid.
    VerifyXi(VerifyXiArgs),
    /// Solve for the first eigenpair of a model and write the profile.
    Solve(SolveArgs),
    /// Solve a model and run every estimate check on the result.
    Verify(VerifyArgs),
    /// Solve and verify a family of models listed in a config file.
    Sweep(SweepArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Report,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    n: u32,
    /// Curvature constant: Ric >= (n-1) K.
    #[arg(long = "K")]
    k: f64,
    /// Diameter.
    #[arg(long)]
    d: Option<f64>,
    /// In-diameter.
    #[arg(long)]
    dtilde: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyXiArgs {
    /// Number of grid points on [-pi/2, pi/2].
    #[arg(long, visible_alias = "samples", default_value_t = 10_001)]
    grid: usize,
    /// Residual tolerance for the differential identities.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Flat TOML configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// cap | ball | warped | interval
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long = "K")]
    k: Option<f64>,
    /// Geodesic radius of the ball.
    #[arg(long = "R")]
    radius: Option<f64>,
    /// Interval length.
    #[arg(long = "L")]
    length: Option<f64>,
    /// shooting | finite_difference
    #[arg(long)]
    method: Option<String>,
    /// Number of grid intervals on [0, R].
    #[arg(long)]
    grid: Option<usize>,
    /// Relative eigenvalue tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    buckets: Option<usize>,
    /// Comma-separated values of b > 1.
    #[arg(long, value_delimiter = ',')]
    b_sequence: Option<Vec<f64>>,
    /// Run checks whose hypotheses fail; results are labelled out_of_hypothesis.
    #[arg(long)]
    force_hypotheses: bool,
    #[arg(long)]
    z_tol: Option<f64>,
    #[arg(long)]
    z_one_tol: Option<f64>,
    #[arg(long)]
    gradient_tol: Option<f64>,
    #[arg(long)]
    chain_tol: Option<f64>,
    #[arg(long)]
    main_tol: Option<f64>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    checks: CheckArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    checks: CheckArgs,
    #[command(flatten)]
    out: OutputArgs,
}

/// A failure that ends the run with the given exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_input_error() { EXIT_INPUT } else { EXIT_CHECK_FAILED },
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

type Outcome = Result<u8, Failure>;

fn emit(out: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| input_error(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_config(model: &ModelArgs, checks: Option<&CheckArgs>) -> Result<RunConfig, Failure> {
    let base = match &model.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let mut flags = RunConfig {
        model: model.model.clone(),
        n: model.n.map(OneOrMany::One),
        k: model.k.map(OneOrMany::One),
        radius: model.radius.map(OneOrMany::One),
        length: model.length.map(OneOrMany::One),
        method: model.method.clone(),
        grid: model.grid,
        tol: model.tol,
        ..RunConfig::default()
    };
    if let Some(c) = checks {
        flags.buckets = c.buckets;
        flags.b_sequence = c.b_sequence.clone();
        flags.force_hypotheses = c.force_hypotheses.then_some(true);
        flags.z_tol = c.z_tol;
        flags.z_one_tol = c.z_one_tol;
        flags.gradient_tol = c.gradient_tol;
        flags.chain_tol = c.chain_tol;
        flags.main_tol = c.main_tol;
    }
    Ok(base.overlay(flags))
}

fn cmd_bounds(args: &BoundsArgs) -> Outcome {
    let geometry = GeometryData::new(args.n, args.k, args.d, args.dtilde)?;
    let best = best_bound(&geometry)?;
    let all = applicable_bounds(&geometry)?;
    let text = match args.out.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("bound,value,positive_curvature,best\n");
            for b in &all {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    b.kind.name(),
                    fmt_f64(b.value),
                    b.hypotheses.positive_curvature,
                    b.kind == best.kind
                ));
            }
            s
        }
        Format::Report => {
            let mut s = String::new();
            for b in &all {
                s.push_str(&format!("{}={}\n", b.kind.name(), fmt_f64(b.value)));
            }
            s.push_str(&format!("best={}\nbest_value={}\n", best.kind.name(), fmt_f64(best.value)));
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_verify_xi(args: &VerifyXiArgs) -> Outcome {
    if args.tol.is_nan() || args.tol <= 0.0 || !args.tol.is_finite() {
        return Err(input_error(format!("tol must be positive, got {}", args.tol)));
    }
    let report = run_xi_suite(&XiSuiteConfig {
        grid_size: args.grid,
        residual_tol: args.tol,
        ..XiSuiteConfig::default()
    })?;
    let text = match args.out.format.unwrap_or(Format::Report) {
        Format::Csv => report.to_csv(),
        Format::Report => report.to_report(),
    };
    emit(&args.out, &text)?;
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_solve(args: &SolveArgs) -> Outcome {
    let cfg = run_config(&args.model, None)?;
    let model = cfg.model_spec()?.build()?;
    let solver = cfg.solver_config()?;
    let solution = solve(&model, &solver)?;
    let format = args.out.format.unwrap_or(Format::Csv);
    let text = match format {
        Format::Csv => solution.to_csv(),
        Format::Report => solution.to_report(),
    };
    emit(&args.out, &text)?;
    if args.out.output.is_some() {
        println!("lambda={}", fmt_f64(solution.lambda));
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let cfg = run_config(&args.model, Some(&args.checks))?;
    let model = cfg.model_spec()?.build()?;
    let solver = cfg.solver_config()?;
    let checks = cfg.verify_config()?;
    let (_, report) = verify(&model, &solver, &checks)?;
    let text = match args.out.format.unwrap_or(Format::Report) {
        Format::Csv => report.to_csv(),
        Format::Report => report.to_report(),
    };
    emit(&args.out, &text)?;
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_sweep(args: &SweepArgs) -> Outcome {
    let cfg = run_config(&args.model, Some(&args.checks))?;
    let specs = cfg.sweep_specs()?;
    let config = SweepConfig {
        solver: cfg.solver_config()?,
        verify: cfg.verify_config()?,
    };
    if args.out.format == Some(Format::Report) {
        return Err(input_error("sweep writes CSV only".into()));
    }
    let table = sweep(&specs, &config);
    emit(&args.out, &table.to_csv())?;
    for row in table.rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("row {:?}: {}", row.spec, row.error.as_deref().unwrap_or(""));
    }
    Ok(table.exit_status() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    let outcome = match &cli.command {
        Command::Bounds(a) => cmd_bounds(a),
        Command::VerifyXi(a) => cmd_verify_xi(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
