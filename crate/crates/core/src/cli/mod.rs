//! Command-line front end. JSON goes to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 on success, 1 on a runtime failure, 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classifier::{exact_risk, solve_coordinate_descent_with, solve_exact, BoostOptions, MarginSolution, StepSchedule};
use crate::datagen::{empirical_risk, generate, make_ground_truth, write_dataset_csv, Dataset, GroundTruth, NoiseModel, TruthShape};
use crate::error::{Error, Result};
use crate::experiment::{run_experiment, ExperimentConfig};
use crate::numerics::{QuadratureSpec, Rng};
use crate::theory::{characterize_noise, check_gamma_concentration, predicted_risk, Regime};

#[derive(Parser, Debug)]
#[command(name = "l1margin", version, about = "Maximum l1-margin classification: data, solvers, theory and sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw a sparse ground truth and a labelled Gaussian sample.
    Datagen(DatagenArgs),
    /// Fit the max l1-margin classifier to a dataset file.
    Train(TrainArgs),
    /// Print the theoretical predictions for one (n, d) cell.
    Theory(TheoryArgs),
    /// Compare the gamma-path norms with their predicted centres.
    GammaCheck(GammaCheckArgs),
    /// Run a Monte Carlo sweep from a TOML config.
    Experiment(ExperimentArgs),
    /// Prediction error of a fitted classifier against the ground truth.
    Risk(RiskArgs),
}

#[derive(Args, Debug)]
pub struct DatagenArgs {
    /// Number of samples.
    #[arg(long)]
    pub n: usize,
    /// Feature dimension.
    #[arg(long)]
    pub d: usize,
    /// Sparsity of the ground truth.
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    /// Shape of the ground truth: unit, flat or random.
    #[arg(long, default_value = "flat")]
    pub truth: TruthShape,
    /// Label noise: none, flip, logistic or prequant.
    #[arg(long, default_value = "none")]
    pub noise: String,
    /// Noise level; required for every model except none.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Master seed.
    #[arg(long)]
    pub seed: u64,
    /// Output path.
    #[arg(long)]
    pub out: PathBuf,
    /// File format.
    #[arg(long, value_enum, default_value_t = DataFormat::Binary)]
    pub format: DataFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DataFormat {
    /// Self-describing binary file that keeps the ground truth.
    Binary,
    /// One row per sample, labels first.
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    /// Exact linear program.
    Lp,
    /// Coordinate descent on the exponential loss.
    Cd,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Dataset file written by `datagen`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Solver.
    #[arg(long, value_enum, default_value_t = SolverArg::Lp)]
    pub solver: SolverArg,
    /// Coordinate-descent iterations.
    #[arg(long, default_value_t = 200_000)]
    pub iters: usize,
    /// Coordinate-descent step: a constant step length (default 0.01); see --shrink and --line-search.
    #[arg(long)]
    pub step: Option<f64>,
    /// Coordinate-descent step as a fraction of the exact line search.
    #[arg(long, conflicts_with = "step")]
    pub shrink: Option<f64>,
    /// Coordinate descent with exact line search.
    #[arg(long, conflicts_with_all = ["step", "shrink"])]
    pub line_search: bool,
    /// Output JSON path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TheoryArgs {
    /// noiseless or noisy.
    #[arg(long)]
    pub regime: Regime,
    /// Number of samples.
    #[arg(long)]
    pub n: usize,
    /// Feature dimension.
    #[arg(long)]
    pub d: usize,
    /// Sparsity of the ground truth.
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    /// l1 norm of the unit-l2 ground truth; defaults to sqrt(s).
    #[arg(long)]
    pub l1: Option<f64>,
    /// Label noise for the noisy regime: flip, logistic or prequant.
    #[arg(long)]
    pub noise: Option<String>,
    /// Noise level.
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Args, Debug)]
pub struct GammaCheckArgs {
    /// Dimension of each Gaussian draw.
    #[arg(long)]
    pub d: usize,
    /// Breakpoint index.
    #[arg(long)]
    pub m: usize,
    /// Independent draws.
    #[arg(long, default_value_t = 5)]
    pub draws: usize,
    /// Master seed.
    #[arg(long)]
    pub seed: u64,
    /// Also write per-draw rows to this CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    /// TOML config file.
    #[arg(long)]
    pub config: PathBuf,
    /// Config override `key=value` (dotted keys reach tables); repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub struct RiskArgs {
    /// Solution JSON written by `train`.
    #[arg(long)]
    pub solution: PathBuf,
    /// Dataset file (binary) or ground-truth JSON.
    #[arg(long)]
    pub truth: PathBuf,
    /// Also estimate the risk on this many fresh test points.
    #[arg(long)]
    pub empirical: Option<usize>,
    /// Seed for the test points; required with --empirical.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command, &mut std::io::stdout().lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Runs one command, writing its JSON to `out`.
pub fn execute(cmd: &Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Datagen(a) => datagen(a, out),
        Command::Train(a) => train(a, out),
        Command::Theory(a) => theory(a, out),
        Command::GammaCheck(a) => gamma_check(a, out),
        Command::Experiment(a) => experiment(a, out),
        Command::Risk(a) => risk(a, out),
    }
}

fn emit<T: serde::Serialize>(value: &T, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn datagen(a: &DatagenArgs, out: &mut dyn Write) -> Result<()> {
    let noise = NoiseModel::from_name(&a.noise, a.sigma)?;
    let mut rng = Rng::new(a.seed, 0);
    let truth = make_ground_truth(a.d, a.s, a.truth, &mut rng)?;
    let ds = generate(a.n, &truth, &noise, &mut rng)?;
    match a.format {
        DataFormat::Binary => ds.save(&a.out)?,
        DataFormat::Csv => write_dataset_csv(&ds, std::io::BufWriter::new(std::fs::File::create(&a.out)?))?,
    }
    emit(
        &serde_json::json!({
            "path": a.out,
            "n": ds.n,
            "d": ds.d,
            "s": truth.sparsity(),
            "noise": noise,
            "corruption_rate": ds.corruption_rate(),
            "seed": a.seed,
        }),
        out,
    )
}

fn train(a: &TrainArgs, out: &mut dyn Write) -> Result<()> {
    let ds = Dataset::load(&a.input)?;
    let cd_requested = a.step.is_some() || a.shrink.is_some() || a.line_search;
    let sol = match a.solver {
        SolverArg::Lp if cd_requested => {
            return Err(Error::Config("--step, --shrink and --line-search need --solver cd".into()))
        }
        SolverArg::Lp => solve_exact(&ds)?,
        SolverArg::Cd => {
            let schedule = if a.line_search {
                StepSchedule::ExactLineSearch
            } else if let Some(factor) = a.shrink {
                StepSchedule::Shrunk { factor }
            } else if let Some(step) = a.step {
                StepSchedule::Constant { step }
            } else {
                StepSchedule::default()
            };
            solve_coordinate_descent_with(
                &ds,
                &BoostOptions {
                    max_iters: a.iters,
                    schedule,
                    ..BoostOptions::default()
                },
            )?
        }
    };
    if !sol.feasible {
        eprintln!("warning: the sample is not linearly separable");
    }
    match &a.out {
        Some(path) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
            emit(&sol, &mut f)?;
            f.flush()?;
            emit(&sol.elided(0), out)
        }
        None => emit(&sol, out),
    }
}

fn theory(a: &TheoryArgs, out: &mut dyn Write) -> Result<()> {
    let l1 = a.l1.unwrap_or((a.s as f64).sqrt());
    let chars = match (a.regime, &a.noise) {
        (Regime::Noiseless, Some(name)) if name != "none" && name != "noiseless" => {
            return Err(Error::Config(format!("noise model {name} given for the noiseless regime")))
        }
        (Regime::Noiseless, _) => None,
        (Regime::Noisy, None) => return Err(Error::Config("the noisy regime needs --noise".into())),
        (Regime::Noisy, Some(name)) => {
            let model = NoiseModel::from_name(name, a.sigma)?;
            Some(characterize_noise(&model, &QuadratureSpec::precise())?)
        }
    };
    let report = predicted_risk(a.regime, a.n, a.d, a.s, l1, chars.as_ref())?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    emit(&report, out)
}

fn gamma_check(a: &GammaCheckArgs, out: &mut dyn Write) -> Result<()> {
    let report = check_gamma_concentration(a.d, a.m, a.draws, &Rng::new(a.seed, 0))?;
    if let Some(path) = &a.csv {
        report.write_csv(std::io::BufWriter::new(std::fs::File::create(path)?))?;
    }
    emit(&report, out)
}

fn experiment(a: &ExperimentArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&a.config, &a.overrides)?;
    if a.threads.is_some() {
        cfg.threads = a.threads;
        cfg.validate()?;
    }
    let result = run_experiment(&cfg)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    crate::experiment::write_summary_json(&result, &mut *out)?;
    writeln!(out)?;
    Ok(())
}

fn load_truth(path: &Path) -> Result<GroundTruth> {
    match Dataset::load(path) {
        Ok(ds) => Ok(ds.truth),
        Err(Error::Format(_)) | Err(Error::Io(_)) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Format(format!("{} is neither a dataset nor a ground-truth JSON: {e}", path.display())))
        }
        Err(e) => Err(e),
    }
}

fn risk(a: &RiskArgs, out: &mut dyn Write) -> Result<()> {
    let sol: MarginSolution = serde_json::from_str(&std::fs::read_to_string(&a.solution)?)?;
    if sol.w.is_empty() {
        return Err(Error::Format("solution file has no weight vector (infeasible or elided)".into()));
    }
    let truth = load_truth(&a.truth)?;
    let exact = exact_risk(&sol.w, &truth)?;
    let empirical = match (a.empirical, a.seed) {
        (Some(_), None) => return Err(Error::Config("--empirical needs --seed".into())),
        (Some(n_test), Some(seed)) => Some(empirical_risk(&sol.w, &truth, n_test, &mut Rng::new(seed, 0))?),
        (None, _) => None,
    };
    emit(
        &serde_json::json!({
            "risk_exact": exact,
            "risk_empirical": empirical,
            "n_test": a.empirical,
        }),
        out,
    )
}
