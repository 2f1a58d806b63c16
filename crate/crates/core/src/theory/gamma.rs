//! The gamma path on Gaussian magnitudes and its concentration around
//! `||gamma(alpha_m)||_1 / h_1 ~ 1/t_m - 2/t_m^3` and
//! `||gamma(alpha_m)||_2^2 / h_1^2 ~ 2/(m t_m^2)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::t_of_m;
use crate::error::{Error, Result};
use crate::numerics::Rng;
use crate::optim::{prepare_magnitudes, GammaProblem};

/// Breakpoints and norms of `gamma(alpha_m)` for every `m = 2..=d`.
#[derive(Clone, Debug)]
pub struct GammaPath {
    problem: GammaProblem,
    /// `(m, alpha_m)`
    pub breakpoints: Vec<(usize, f64)>,
    /// `(||gamma(alpha_m)||_1, ||gamma(alpha_m)||_2^2)`, aligned with `breakpoints`.
    pub norms: Vec<(f64, f64)>,
}

impl GammaPath {
    /// `h` is sorted descending (with tie jitter) before use.
    pub fn new(h: &[f64]) -> Result<Self> {
        let problem = GammaProblem::new(&prepare_magnitudes(h))?;
        let d = problem.dim();
        let mut breakpoints = Vec::with_capacity(d.saturating_sub(1));
        let mut norms = Vec::with_capacity(d.saturating_sub(1));
        for m in 2..=d {
            let a = problem.breakpoint(m)?;
            breakpoints.push((m, a));
            norms.push(problem.norms(a)?);
        }
        Ok(GammaPath {
            problem,
            breakpoints,
            norms,
        })
    }

    /// Magnitudes of `d` standard Gaussians.
    pub fn sample(d: usize, rng: &mut Rng) -> Result<Self> {
        let mut h = vec![0.0; d];
        rng.fill_gaussian(&mut h);
        GammaPath::new(&h)
    }

    pub fn dim(&self) -> usize {
        self.problem.dim()
    }

    pub fn h(&self) -> &[f64] {
        self.problem.h()
    }

    pub fn h_max(&self) -> f64 {
        self.problem.h_max()
    }

    pub fn alpha_max(&self) -> f64 {
        self.problem.alpha_max()
    }

    pub fn problem(&self) -> &GammaProblem {
        &self.problem
    }

    pub fn gamma(&self, alpha: f64) -> Result<Vec<f64>> {
        self.problem.solve(alpha)
    }
}

/// `alpha_m = (||H_m||_1 - m h_m) h_1 / (||H_m||_2^2 - ||H_m||_1 h_m)`, with
/// `H_m` the top-`m` entries of a descending `h`.
pub fn breakpoint_alpha(m: usize, h: &[f64]) -> Result<f64> {
    GammaProblem::new(h)?.breakpoint(m)
}

/// `(||gamma(alpha_m)||_1, ||gamma(alpha_m)||_2^2)`.
pub fn gamma_norms(path: &GammaPath, m: usize) -> Result<(f64, f64)> {
    if m < 2 || m > path.dim() {
        return Err(Error::Domain(format!("breakpoint index m={m} outside [2, {}]", path.dim())));
    }
    Ok(path.norms[m - 2])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationDraw {
    pub draw: usize,
    pub h_max: f64,
    pub alpha_m: f64,
    /// `||gamma(alpha_m)||_1 / h_1`
    pub l1_ratio: f64,
    /// `||gamma(alpha_m)||_2^2 / h_1^2`
    pub l2sq_ratio: f64,
    pub l1_rel_dev: f64,
    pub l2sq_rel_dev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationSummary {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl DeviationSummary {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let mut v: Vec<f64> = values.collect();
        v.sort_by(f64::total_cmp);
        DeviationSummary {
            min: v[0],
            median: crate::numerics::median_sorted(&v),
            max: v[v.len() - 1],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub d: usize,
    pub m: usize,
    pub t_m: f64,
    /// `1/t_m - 2/t_m^3`
    pub l1_center: f64,
    /// `2/(m t_m^2)`
    pub l2sq_center: f64,
    pub draws: Vec<ConcentrationDraw>,
    /// Summary of `|l1_rel_dev|`.
    pub l1_abs_dev: DeviationSummary,
    /// Summary of `|l2sq_rel_dev|`.
    pub l2sq_abs_dev: DeviationSummary,
}

impl ConcentrationReport {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["d", "m", "t_m", "draw", "l1_ratio", "l1_center", "l1_rel_dev", "l2sq_ratio", "l2sq_center", "l2sq_rel_dev"])?;
        for r in &self.draws {
            w.write_record(&[
                self.d.to_string(),
                self.m.to_string(),
                self.t_m.to_string(),
                r.draw.to_string(),
                r.l1_ratio.to_string(),
                self.l1_center.to_string(),
                r.l1_rel_dev.to_string(),
                r.l2sq_ratio.to_string(),
                self.l2sq_center.to_string(),
                r.l2sq_rel_dev.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Smallest `m` and `d/m` for which the concentration statement is checked.
pub const CONCENTRATION_MIN_M: usize = 30;
pub const CONCENTRATION_MIN_RATIO: usize = 50;

/// Draws `h` `draws` times and compares the path norms at `alpha_m` with
/// their predicted centers. Draw `k` uses `rng.substream(k)`.
pub fn check_gamma_concentration(d: usize, m: usize, draws: usize, rng: &Rng) -> Result<ConcentrationReport> {
    if m < CONCENTRATION_MIN_M || d < CONCENTRATION_MIN_RATIO * m {
        return Err(Error::Regime(format!(
            "concentration needs m >= {CONCENTRATION_MIN_M} and d >= {CONCENTRATION_MIN_RATIO} m, got m={m}, d={d}"
        )));
    }
    if draws == 0 {
        return Err(Error::Domain("need at least one draw".into()));
    }
    let t = t_of_m(m as f64, d)?;
    let l1_center = 1.0 / t - 2.0 / t.powi(3);
    let l2sq_center = 2.0 / (m as f64 * t * t);
    let rows: Vec<ConcentrationDraw> = (0..draws)
        .into_par_iter()
        .map(|k| {
            let mut r = rng.substream(k as u64);
            let mut h = vec![0.0; d];
            r.fill_gaussian(&mut h);
            let p = GammaProblem::new(&prepare_magnitudes(&h))?;
            let alpha = p.breakpoint(m)?;
            let (l1, l2sq) = p.norms(alpha)?;
            let h1 = p.h_max();
            let l1_ratio = l1 / h1;
            let l2sq_ratio = l2sq / (h1 * h1);
            Ok(ConcentrationDraw {
                draw: k,
                h_max: h1,
                alpha_m: alpha,
                l1_ratio,
                l2sq_ratio,
                l1_rel_dev: (l1_ratio - l1_center) / l1_center,
                l2sq_rel_dev: (l2sq_ratio - l2sq_center) / l2sq_center,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ConcentrationReport {
        d,
        m,
        t_m: t,
        l1_center,
        l2sq_center,
        l1_abs_dev: DeviationSummary::of(rows.iter().map(|r| r.l1_rel_dev.abs())),
        l2sq_abs_dev: DeviationSummary::of(rows.iter().map(|r| r.l2sq_rel_dev.abs())),
        draws: rows,
    })
}
