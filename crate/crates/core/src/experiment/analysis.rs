//! Log-log slope fits and ratios against the theory.

use serde::{Deserialize, Serialize};

use super::CellResult;
use crate::error::{Error, Result};
use crate::theory::TheoryReport;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub points: usize,
    /// Points dropped for a nonpositive coordinate.
    pub excluded: Vec<(f64, f64)>,
}

/// Ordinary least squares of `log risk` on `log n`.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<SlopeFit> {
    let (kept, excluded): (Vec<(f64, f64)>, Vec<(f64, f64)>) =
        points.iter().partition(|&&(n, r)| n > 0.0 && r > 0.0 && n.is_finite() && r.is_finite());
    if kept.len() < 3 {
        return Err(Error::Domain(format!(
            "slope fit needs at least 3 positive points, have {}",
            kept.len()
        )));
    }
    let xs: Vec<f64> = kept.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = kept.iter().map(|p| p.1.ln()).collect();
    let k = kept.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Domain("slope fit needs at least two distinct n".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (sse / (k - 2.0) / sxx).sqrt();
    Ok(SlopeFit {
        slope,
        stderr,
        intercept,
        points: kept.len(),
        excluded,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryComparison {
    pub n: usize,
    pub d: usize,
    pub s: usize,
    pub median_risk: f64,
    pub predicted_risk: f64,
    pub risk_ratio: f64,
    pub median_l1: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub l1_ratio: f64,
}

/// `median risk / predicted risk` and `median ||w_hat||_1 / M`; NaN when a
/// cell has no feasible trial.
pub fn compare_to_theory(cell: &CellResult, report: &TheoryReport) -> TheoryComparison {
    let median_risk = cell.median_risk().unwrap_or(f64::NAN);
    let median_l1 = cell.median_l1().unwrap_or(f64::NAN);
    TheoryComparison {
        n: cell.n,
        d: cell.d,
        s: cell.s,
        median_risk,
        predicted_risk: report.predicted_risk,
        risk_ratio: median_risk / report.predicted_risk,
        median_l1,
        m: report.m,
        l1_ratio: median_l1 / report.m,
    }
}
