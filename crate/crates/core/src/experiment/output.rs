//! Trial CSV, summary JSON and plot-data CSV.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::{sweeps, Aggregates, ExperimentResult};
use crate::error::Result;
use crate::experiment::{SlopeFit, TheoryComparison};
use crate::theory::{NoiseCharacteristics, TheoryReport};

pub const TRIAL_CSV_HEADER: [&str; 16] = [
    "run_id",
    "regime",
    "n",
    "d",
    "s",
    "sigma",
    "trial",
    "seed",
    "feasible",
    "risk_exact",
    "risk_empirical",
    "l1_norm",
    "margin",
    "M",
    "predicted_risk",
    "wall_ms",
];

/// One row per trial; `M` and `predicted_risk` repeat the cell's theory values.
pub fn write_trials_csv<W: Write>(result: &ExperimentResult, out: W) -> Result<()> {
    let cfg = &result.config;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRIAL_CSV_HEADER)?;
    for cell in &result.cells {
        let (m, risk) = cell
            .theory
            .as_ref()
            .map_or((f64::NAN, f64::NAN), |t| (t.m, t.predicted_risk));
        for t in &cell.trials {
            w.serialize((
                &cfg.run_id,
                cfg.regime.name(),
                cell.n,
                cell.d,
                cell.s,
                cfg.noise.sigma(),
                t.trial,
                t.seed,
                t.feasible,
                t.risk_exact,
                t.risk_empirical,
                t.l1_norm,
                t.margin,
                m,
                risk,
                t.wall_ms,
            ))?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CellSummary<'a> {
    n: usize,
    d: usize,
    s: usize,
    aggregates: &'a Aggregates,
    theory: Option<&'a TheoryReport>,
    theory_error: Option<&'a str>,
}

#[derive(Serialize)]
struct Summary<'a> {
    run_id: &'a str,
    regime: &'static str,
    noise: Option<&'a NoiseCharacteristics>,
    cells: Vec<CellSummary<'a>>,
    slopes: &'a [(String, SlopeFit)],
    comparisons: &'a [TheoryComparison],
    warnings: &'a [String],
}

pub fn write_summary_json<W: Write>(result: &ExperimentResult, out: W) -> Result<()> {
    let summary = Summary {
        run_id: &result.config.run_id,
        regime: result.config.regime.name(),
        noise: result.noise.as_ref(),
        cells: result
            .cells
            .iter()
            .map(|c| CellSummary {
                n: c.n,
                d: c.d,
                s: c.s,
                aggregates: &c.aggregates,
                theory: c.theory.as_ref(),
                theory_error: c.theory_error.as_deref(),
            })
            .collect(),
        slopes: &result.slopes,
        comparisons: &result.comparisons,
        warnings: &result.warnings,
    };
    serde_json::to_writer_pretty(out, &summary)?;
    Ok(())
}

/// `(sweep, n, d, log_n, log_median_risk, log_predicted_risk)` per cell.
pub fn write_plot_csv<W: Write>(result: &ExperimentResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sweep", "n", "d", "log_n", "log_median_risk", "log_predicted_risk"])?;
    for (label, idx) in sweeps(&result.config, &result.cells) {
        for i in idx {
            let c = &result.cells[i];
            let median = c.median_risk().unwrap_or(f64::NAN);
            let theory = c.theory.as_ref().map_or(f64::NAN, |t| t.predicted_risk);
            w.serialize((&label, c.n, c.d, (c.n as f64).ln(), median.ln(), theory.ln()))?;
        }
    }
    w.flush()?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub(super) fn write_configured(result: &ExperimentResult) -> Result<()> {
    let out = &result.config.output;
    if let Some(p) = &out.trials_csv {
        write_trials_csv(result, create(p)?)?;
    }
    if let Some(p) = &out.summary_json {
        let mut f = create(p)?;
        write_summary_json(result, &mut f)?;
        f.write_all(b"\n")?;
    }
    if let Some(p) = &out.plot_csv {
        write_plot_csv(result, create(p)?)?;
    }
    Ok(())
}
