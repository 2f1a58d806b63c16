//! Monte Carlo sweeps over `(n, d)` cells: generate, fit, score, aggregate,
//! and set the medians against the theory.

pub mod analysis;
pub mod config;
pub mod output;

pub use analysis::{compare_to_theory, fit_slope, SlopeFit, TheoryComparison};
pub use config::{apply_override, DimensionRule, ExperimentConfig, OutputPaths};
pub use output::{write_plot_csv, write_summary_json, write_trials_csv, TRIAL_CSV_HEADER};

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{exact_risk, solve_coordinate_descent_with, solve_exact_with, BoostOptions, SolverKind};
use crate::datagen::{empirical_risk, generate, make_ground_truth};
use crate::error::{Error, Result};
use crate::numerics::rng::mix;
use crate::numerics::{quartiles, QuadratureSpec, Rng};
use crate::optim::SimplexOptions;
use crate::theory::{characterize_noise, predicted_risk, NoiseCharacteristics, TheoryReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub feasible: bool,
    pub risk_exact: f64,
    pub risk_empirical: f64,
    pub l1_norm: f64,
    pub margin: f64,
    pub wall_ms: u64,
    /// Solver or generation failure; the cell carries on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Median and interquartile range over the feasible trials.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
}

impl Spread {
    fn of(values: &[f64]) -> Option<Spread> {
        quartiles(values).map(|(q25, median, q75)| Spread { median, q25, q75 })
    }

    pub fn iqr(&self) -> f64 {
        self.q75 - self.q25
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub feasible: usize,
    pub infeasible: usize,
    pub failed: usize,
    pub risk_exact: Option<Spread>,
    pub risk_empirical: Option<Spread>,
    pub l1_norm: Option<Spread>,
    pub margin: Option<Spread>,
}

impl Aggregates {
    /// Recomputes the aggregates from trial records; order does not matter.
    pub fn from_trials(trials: &[TrialRecord]) -> Aggregates {
        let ok: Vec<&TrialRecord> = trials.iter().filter(|t| t.feasible).collect();
        let pick = |f: fn(&TrialRecord) -> f64| {
            let v: Vec<f64> = ok.iter().map(|t| f(t)).filter(|x| x.is_finite()).collect();
            Spread::of(&v)
        };
        Aggregates {
            feasible: ok.len(),
            infeasible: trials.iter().filter(|t| !t.feasible && t.error.is_none()).count(),
            failed: trials.iter().filter(|t| t.error.is_some()).count(),
            risk_exact: pick(|t| t.risk_exact),
            risk_empirical: pick(|t| t.risk_empirical),
            l1_norm: pick(|t| t.l1_norm),
            margin: pick(|t| t.margin),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub n: usize,
    pub d: usize,
    pub s: usize,
    pub trials: Vec<TrialRecord>,
    pub aggregates: Aggregates,
    pub theory: Option<TheoryReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory_error: Option<String>,
}

impl CellResult {
    pub fn median_risk(&self) -> Option<f64> {
        self.aggregates.risk_exact.map(|s| s.median)
    }

    pub fn median_l1(&self) -> Option<f64> {
        self.aggregates.l1_norm.map(|s| s.median)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub noise: Option<NoiseCharacteristics>,
    pub cells: Vec<CellResult>,
    /// One log-log fit of median risk against `n` per fixed `d` (or per rule).
    pub slopes: Vec<(String, SlopeFit)>,
    pub comparisons: Vec<TheoryComparison>,
    pub warnings: Vec<String>,
}

/// Seed of one trial; depends only on the master seed, the cell and the trial index.
pub fn trial_seed(master_seed: u64, n: usize, d: usize, s: usize, trial: usize) -> u64 {
    let cell = mix(mix(n as u64, d as u64), s as u64);
    mix(mix(master_seed, cell), trial as u64)
}

/// Noise constants for a noisy config, `None` otherwise.
pub fn noise_characteristics(cfg: &ExperimentConfig) -> Result<Option<NoiseCharacteristics>> {
    if cfg.noise.is_noisy() {
        characterize_noise(&cfg.noise, &QuadratureSpec::precise()).map(Some)
    } else {
        Ok(None)
    }
}

pub fn run_cell(cfg: &ExperimentConfig, n: usize, d: usize) -> Result<CellResult> {
    cfg.validate()?;
    let chars = noise_characteristics(cfg)?;
    Ok(run_cell_with(cfg, n, d, chars.as_ref()))
}

/// One cell given precomputed noise constants. Trial failures are recorded,
/// not raised.
pub fn run_cell_with(cfg: &ExperimentConfig, n: usize, d: usize, chars: Option<&NoiseCharacteristics>) -> CellResult {
    let trials: Vec<TrialRecord> = (0..cfg.trials).into_par_iter().map(|k| run_trial(cfg, n, d, k)).collect();
    let aggregates = Aggregates::from_trials(&trials);
    let (theory, theory_error) = match predicted_risk(cfg.regime, n, d, cfg.s, cfg.l1_star(), chars) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    CellResult {
        n,
        d,
        s: cfg.s,
        trials,
        aggregates,
        theory,
        theory_error,
    }
}

fn run_trial(cfg: &ExperimentConfig, n: usize, d: usize, trial: usize) -> TrialRecord {
    let seed = trial_seed(cfg.master_seed, n, d, cfg.s, trial);
    let start = Instant::now();
    let outcome = trial_outcome(cfg, n, d, seed);
    let wall_ms = if cfg.record_timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    let mut rec = TrialRecord {
        trial,
        seed,
        feasible: false,
        risk_exact: f64::NAN,
        risk_empirical: f64::NAN,
        l1_norm: f64::NAN,
        margin: f64::NAN,
        wall_ms,
        error: None,
    };
    match outcome {
        Ok(Some((risk_exact, risk_empirical, l1_norm, margin))) => {
            rec.feasible = true;
            rec.risk_exact = risk_exact;
            rec.risk_empirical = risk_empirical;
            rec.l1_norm = l1_norm;
            rec.margin = margin;
        }
        Ok(None) => {}
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

/// `Some((risk_exact, risk_empirical, l1_norm, margin))`, or `None` when the
/// sample is not separable.
fn trial_outcome(cfg: &ExperimentConfig, n: usize, d: usize, seed: u64) -> Result<Option<(f64, f64, f64, f64)>> {
    let mut rng = Rng::new(seed, 0);
    let truth = make_ground_truth(d, cfg.s, cfg.truth, &mut rng)?;
    let ds = generate(n, &truth, &cfg.noise, &mut rng)?;
    let budget = Duration::from_secs_f64(cfg.trial_budget_s);
    let sol = match cfg.solver {
        SolverKind::ExactLp => solve_exact_with(
            &ds,
            &SimplexOptions {
                time_limit: Some(budget),
                ..SimplexOptions::default()
            },
        )?,
        SolverKind::CoordinateDescent => {
            let started = Instant::now();
            let sol = solve_coordinate_descent_with(
                &ds,
                &BoostOptions {
                    max_iters: cfg.cd_iters,
                    schedule: cfg.cd_schedule,
                    ..BoostOptions::default()
                },
            )?;
            if started.elapsed() > budget {
                return Err(Error::Solver(format!("coordinate descent exceeded the {budget:?} budget")));
            }
            sol
        }
    };
    if !sol.feasible {
        return Ok(None);
    }
    let risk = exact_risk(&sol.w, &truth)?;
    let emp = if cfg.n_test > 0 {
        // independent of the training stream
        empirical_risk(&sol.w, &truth, cfg.n_test, &mut Rng::new(seed, 1))?
    } else {
        f64::NAN
    };
    Ok(Some((risk, emp, sol.l1_norm, sol.margin)))
}

/// Runs every cell, fits slopes, compares with theory and writes the configured outputs.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let mut warnings = cfg.validate()?;
    let chars = noise_characteristics(cfg)?;
    let cells_spec = cfg.cells();
    let run = || -> Vec<CellResult> {
        cells_spec
            .par_iter()
            .map(|&(n, d)| run_cell_with(cfg, n, d, chars.as_ref()))
            .collect()
    };
    let cells = match cfg.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };

    let mut comparisons = Vec::new();
    for cell in &cells {
        if let Some(e) = &cell.theory_error {
            warnings.push(format!("cell n={}, d={}: no theory ({e})", cell.n, cell.d));
        }
        if let Some(report) = &cell.theory {
            warnings.extend(report.warnings.iter().map(|w| format!("cell n={}, d={}: {w}", cell.n, cell.d)));
            comparisons.push(compare_to_theory(cell, report));
        }
        if cell.aggregates.failed > 0 {
            warnings.push(format!("cell n={}, d={}: {} trials failed", cell.n, cell.d, cell.aggregates.failed));
        }
    }
    let slopes = sweep_fits(cfg, &cells, &mut warnings);

    let result = ExperimentResult {
        config: cfg.clone(),
        noise: chars,
        cells,
        slopes,
        comparisons,
        warnings,
    };
    output::write_configured(&result)?;
    Ok(result)
}

/// Cells grouped into sweeps over `n`: one per fixed `d`, or one for a rule in `n`.
pub fn sweeps(cfg: &ExperimentConfig, cells: &[CellResult]) -> Vec<(String, Vec<usize>)> {
    match &cfg.d {
        DimensionRule::Fixed { values } => values
            .iter()
            .map(|&d| {
                let idx = cells.iter().enumerate().filter(|(_, c)| c.d == d).map(|(i, _)| i).collect();
                (format!("d={d}"), idx)
            })
            .collect(),
        rule => {
            let label = match rule {
                DimensionRule::NSquaredCapped { cap } => format!("d=min(n^2,{cap})"),
                DimensionRule::ExpNP { p, cap } => format!("d=min(exp(n^{p}),{cap})"),
                DimensionRule::Fixed { .. } => unreachable!(),
            };
            vec![(label, (0..cells.len()).collect())]
        }
    }
}

fn sweep_fits(cfg: &ExperimentConfig, cells: &[CellResult], warnings: &mut Vec<String>) -> Vec<(String, SlopeFit)> {
    let mut fits = Vec::new();
    for (label, idx) in sweeps(cfg, cells) {
        let points: Vec<(f64, f64)> = idx
            .iter()
            .filter_map(|&i| cells[i].median_risk().map(|r| (cells[i].n as f64, r)))
            .collect();
        if points.len() < 3 {
            continue;
        }
        match fit_slope(&points) {
            Ok(fit) => {
                if !fit.excluded.is_empty() {
                    warnings.push(format!("{label}: {} nonpositive medians left out of the fit", fit.excluded.len()));
                }
                fits.push((label, fit));
            }
            Err(e) => warnings.push(format!("{label}: no slope ({e})")),
        }
    }
    fits
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tiny_config() -> ExperimentConfig {
        ExperimentConfig::from_toml_str(
            r#"
run_id = "tiny"
regime = "noiseless"
n = [4]
s = 1
truth = "unit_coordinate"
trials = 1
master_seed = 11
[d]
rule = "fixed"
values = [8]
[noise]
model = "noiseless"
"#,
            &[],
        )
        .unwrap()
    }

    #[test]
    fn single_trial_cell_is_reproducible() {
        let cfg = tiny_config();
        let a = run_cell(&cfg, 4, 8).unwrap();
        let b = run_cell(&cfg, 4, 8).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        assert_eq!(a.trials.len(), 1);
        assert!(a.trials[0].feasible);
    }

    #[test]
    fn noiseless_cells_keep_margin_identity_and_small_risk() {
        let mut cfg = tiny_config();
        cfg.trials = 50;
        cfg.n = vec![40];
        cfg.d = DimensionRule::Fixed { values: vec![80] };
        let cell = run_cell(&cfg, 40, 80).unwrap();
        assert_eq!(cell.aggregates.feasible, 50);
        let mut below_half = 0;
        for t in &cell.trials {
            assert!((t.margin * t.l1_norm - 1.0).abs() <= 1e-6);
            assert!((0.0..=1.0).contains(&t.risk_exact));
            below_half += (t.risk_exact <= 0.5) as usize;
        }
        assert!(below_half >= 48);
        assert!(cell.theory.is_some());
    }

    #[test]
    fn aggregates_ignore_order_and_infeasible_trials() {
        let rec = |trial, feasible, risk| TrialRecord {
            trial,
            seed: 0,
            feasible,
            risk_exact: risk,
            risk_empirical: f64::NAN,
            l1_norm: 1.0,
            margin: 1.0,
            wall_ms: 0,
            error: None,
        };
        let mut trials = vec![rec(0, true, 0.1), rec(1, true, 0.3), rec(2, false, f64::NAN), rec(3, true, 0.2)];
        let a = Aggregates::from_trials(&trials);
        trials.reverse();
        let b = Aggregates::from_trials(&trials);
        assert_eq!(a, b);
        assert_eq!((a.feasible, a.infeasible, a.failed), (3, 1, 0));
        assert_eq!(a.risk_exact.unwrap().median, 0.2);
        assert!(a.risk_empirical.is_none());
    }

    #[test]
    fn seeds_depend_on_cell_and_trial() {
        let base = trial_seed(1, 10, 20, 1, 0);
        assert_ne!(base, trial_seed(1, 10, 20, 1, 1));
        assert_ne!(base, trial_seed(1, 10, 21, 1, 0));
        assert_ne!(base, trial_seed(2, 10, 20, 1, 0));
        assert_eq!(base, trial_seed(1, 10, 20, 1, 0));
    }
}
