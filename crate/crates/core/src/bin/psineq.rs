use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use psineq::decomp::{parallel_min, Pivot};
use psineq::harness::{
    format_f64, format_matrix, parse_alpha_grid, parse_list, read_matrix_file, replay, write_matrix_file, HarnessError,
    HarnessResult, NormSelector, OutputFormat, TrialConfig, TrialDescriptor,
};
use psineq::inequalities::{chernoff_exponent, trace_distance, InequalityId};
use psineq::linalg::ToleranceModel;
use psineq::randgen::EnsembleKind;

#[derive(Parser)]
#[command(
    name = "psineq",
    version,
    about = "Numerical verification of PSD matrix inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification campaign and write the aggregate report.
    Verify(VerifyArgs),
    /// Regenerate one trial from its descriptor and print its matrices and slacks.
    Replay(ReplayArgs),
    /// Chernoff exponent and trace distance of two states given as matrix files.
    Chernoff(PairArgs),
    /// Parallel minimum of two PSD matrices given as matrix files.
    Minpair(MinpairArgs),
}

#[derive(Args)]
struct Tolerances {
    /// Relative tolerance, scaled by ||A||_2 + ||B||_2.
    #[arg(long, default_value_t = 1e-8)]
    tol_rel: f64,
    /// Absolute tolerance floor.
    #[arg(long, default_value_t = 1e-12)]
    tol_abs: f64,
}

impl Tolerances {
    fn model(&self) -> HarnessResult<ToleranceModel> {
        ToleranceModel::new(self.tol_rel, self.tol_abs).map_err(|e| HarnessError::Config(e.to_string()))
    }
}

#[derive(Args)]
struct CheckSelection {
    /// Alpha grid: `start:end:step` or a comma-separated list.
    #[arg(long, default_value = "0:1:0.1")]
    alphas: String,
    /// Comma-separated norms: operator, trace, frobenius, kyfan:<k>, kyfan:all, schatten:<p>.
    #[arg(long, default_value = "operator,trace,kyfan:all,schatten:3")]
    norms: String,
    /// Comma-separated checks (default: all).
    #[arg(long)]
    checks: Option<String>,
    #[command(flatten)]
    tol: Tolerances,
}

impl CheckSelection {
    fn apply(&self, cfg: &mut TrialConfig) -> HarnessResult<()> {
        cfg.alpha_grid = parse_alpha_grid(&self.alphas)?;
        cfg.norms = parse_list::<NormSelector>(&self.norms)?;
        if let Some(c) = &self.checks {
            cfg.checks = parse_list::<InequalityId>(c)?;
        }
        cfg.tolerances = self.tol.model()?;
        Ok(())
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated dimensions.
    #[arg(long, default_value = "2,3,4,6,8")]
    dims: String,
    /// Trials per (dimension, ensemble).
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated ensembles: gram, gram:half, gram:<r>, density, pure, commuting, dominated.
    #[arg(long)]
    ensembles: Option<String>,
    #[command(flatten)]
    select: CheckSelection,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Report path (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ReplayArgs {
    /// Descriptor such as `dim=4,ensemble=gram:half,trial=3,seed=123,hash=...,alpha=0.3`.
    descriptor: String,
    #[command(flatten)]
    select: CheckSelection,
}

#[derive(Args)]
struct PairArgs {
    a: PathBuf,
    b: PathBuf,
    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Clone, Copy, ValueEnum)]
enum PivotArg {
    A,
    B,
}

#[derive(Args)]
struct MinpairArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Matrix whose inverse square root is applied.
    #[arg(long, value_enum, default_value_t = PivotArg::B)]
    pivot: PivotArg,
    /// Output path (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn verify(args: &VerifyArgs) -> HarnessResult<ExitCode> {
    let mut cfg = TrialConfig {
        dims: parse_list(&args.dims)?,
        trials_per_dim: args.trials,
        output_path: args.out.clone(),
        format: match args.format {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        },
        ..TrialConfig::default()
    };
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(e) = &args.ensembles {
        cfg.ensembles = parse_list::<EnsembleKind>(e)?;
    }
    args.select.apply(&mut cfg)?;
    cfg.validate()?;
    let report = psineq::harness::run_suite(&cfg)?;
    match &cfg.output_path {
        Some(path) => report.write(path, cfg.format)?,
        None => emit(report.render(cfg.format)?.as_bytes())?,
    }
    eprint!("{}", report.summary_text());
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn replay_cmd(args: &ReplayArgs) -> HarnessResult<ExitCode> {
    let descriptor: TrialDescriptor = args.descriptor.parse()?;
    let mut cfg = TrialConfig::default();
    args.select.apply(&mut cfg)?;
    cfg.dims = vec![descriptor.dim];
    cfg.ensembles = vec![descriptor.ensemble];
    cfg.validate()?;
    let out = replay(&descriptor, &cfg)?;
    if out.hash_matches == Some(false) {
        eprintln!("warning: regenerated matrices differ from the recorded hash");
    }
    emit(out.text.as_bytes())?;
    let passed = out.outcome.reports.iter().all(|r| r.passed);
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Errors in user-supplied matrices are input errors.
fn as_input_error(e: psineq::Error) -> HarnessError {
    HarnessError::Parse(e.to_string())
}

fn chernoff(args: &PairArgs) -> HarnessResult<ExitCode> {
    let tol = args.tol.model()?;
    let (a, b) = (read_matrix_file(&args.a)?, read_matrix_file(&args.b)?);
    let r = chernoff_exponent(&a, &b, &tol).map_err(as_input_error)?;
    let d = trace_distance(&a, &b).map_err(as_input_error)?;
    let text = format!(
        "alpha_star {}\nq {}\ntrace_distance {}\n",
        format_f64(r.alpha_star),
        format_f64(r.q_value),
        format_f64(d)
    );
    emit(text.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn minpair(args: &MinpairArgs) -> HarnessResult<ExitCode> {
    let tol = args.pair.tol.model()?;
    let (a, b) = (read_matrix_file(&args.pair.a)?, read_matrix_file(&args.pair.b)?);
    let pivot = match args.pivot {
        PivotArg::A => Pivot::A,
        PivotArg::B => Pivot::B,
    };
    let r = parallel_min(&a, &b, pivot, &tol).map_err(as_input_error)?;
    if r.regularization_epsilon > 0.0 {
        eprintln!(
            "note: pivot regularized with epsilon {}",
            format_f64(r.regularization_epsilon)
        );
    }
    match &args.out {
        Some(path) => write_matrix_file(path, &r.s)?,
        None => emit(format_matrix(&r.s).as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn emit(bytes: &[u8]) -> HarnessResult<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(bytes)
        .and_then(|_| out.flush())
        .map_err(|e| HarnessError::Io {
            path: "<stdout>".into(),
            source: e,
        })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Replay(a) => replay_cmd(a),
        Command::Chernoff(a) => chernoff(a),
        Command::Minpair(a) => minpair(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
