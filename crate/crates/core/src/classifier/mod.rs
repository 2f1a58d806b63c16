//! The maximum l1-margin classifier
//!
//! ```text
//! w_hat = argmin ||w||_1  s.t.  y_i <x_i, w> >= 1  for all i
//! ```
//!
//! solved exactly as a linear program, or approximately by exponential-loss
//! coordinate descent (boosting), together with the margin and risk functionals.

mod boost;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::datagen::{Dataset, GroundTruth};
use crate::error::{domain, Result};
use crate::optim::{solve_lp_with, ColumnRef, LinearProgram, LpStatus, RowSense, SimplexOptions};

pub use boost::{solve_coordinate_descent, solve_coordinate_descent_with, BoostOptions, StepSchedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    ExactLp,
    CoordinateDescent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginSolution {
    pub dim: usize,
    /// Empty when elided for serialization.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub w: Vec<f64>,
    #[serde(with = "nonfinite::pos_inf")]
    pub l1_norm: f64,
    /// `min_i y_i <x_i, w> / ||w||_1`; `-inf` when no iterate exists.
    #[serde(with = "nonfinite::neg_inf")]
    pub margin: f64,
    pub solver: SolverKind,
    pub iterations: usize,
    pub feasible: bool,
    /// `(iteration, margin)` checkpoints; coordinate descent only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub margin_trace: Vec<(usize, f64)>,
}

impl MarginSolution {
    fn infeasible(dim: usize, solver: SolverKind, iterations: usize) -> Self {
        MarginSolution {
            dim,
            w: Vec::new(),
            l1_norm: f64::INFINITY,
            margin: f64::NEG_INFINITY,
            solver,
            iterations,
            feasible: false,
            margin_trace: Vec::new(),
        }
    }

    /// Copy without the weight vector when `dim` exceeds `max_dim`.
    pub fn elided(&self, max_dim: usize) -> MarginSolution {
        let mut out = self.clone();
        if self.dim > max_dim {
            out.w.clear();
        }
        out
    }

    pub fn support_size(&self, tol: f64) -> usize {
        self.w.iter().filter(|v| v.abs() > tol).count()
    }
}

/// Serde adapters mapping a non-finite sentinel to JSON `null`.
mod nonfinite {
    macro_rules! sentinel {
        ($name:ident, $value:expr) => {
            pub mod $name {
                use serde::{Deserialize, Deserializer, Serializer};

                pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
                    if v.is_finite() {
                        s.serialize_f64(*v)
                    } else {
                        s.serialize_none()
                    }
                }

                pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
                    Ok(Option::<f64>::deserialize(d)?.unwrap_or($value))
                }
            }
        };
    }
    sentinel!(pos_inf, f64::INFINITY);
    sentinel!(neg_inf, f64::NEG_INFINITY);
}

/// `y_i <x_i, w>` for every sample.
pub fn functional_margins(ds: &Dataset, w: &[f64]) -> Vec<f64> {
    (0..ds.n)
        .map(|i| ds.label(i) * ds.row(i).iter().zip(w).map(|(a, b)| a * b).sum::<f64>())
        .collect()
}

/// `min_i y_i <x_i, w> / ||w||_1`.
pub fn l1_margin(ds: &Dataset, w: &[f64]) -> Result<f64> {
    if w.len() != ds.d {
        return domain(format!("classifier has length {}, data has dimension {}", w.len(), ds.d));
    }
    let l1: f64 = w.iter().map(|v| v.abs()).sum();
    if !(l1 > 0.0) {
        return domain("margin of the zero vector is undefined");
    }
    let min = functional_margins(ds, w).into_iter().fold(f64::INFINITY, f64::min);
    Ok(min / l1)
}

/// The max-margin linear program over `w = w_plus - w_minus`. Both halves
/// reference the same stored columns `y_i x_i`.
pub fn margin_lp(ds: &Dataset) -> Result<LinearProgram> {
    let (n, d) = (ds.n, ds.d);
    let mut a = DMatrix::<f64>::zeros(n, d);
    for i in 0..n {
        let y = ds.label(i);
        for (j, &x) in ds.row(i).iter().enumerate() {
            a[(i, j)] = y * x;
        }
    }
    let columns = (0..2 * d)
        .map(|j| ColumnRef {
            stored: j % d,
            sign: if j < d { 1.0 } else { -1.0 },
        })
        .collect();
    LinearProgram::with_column_refs(vec![1.0; 2 * d], a, columns, vec![RowSense::Ge; n], vec![1.0; n])
}

pub fn solve_exact(ds: &Dataset) -> Result<MarginSolution> {
    solve_exact_with(ds, &SimplexOptions::default())
}

pub fn solve_exact_with(ds: &Dataset, opts: &SimplexOptions) -> Result<MarginSolution> {
    let d = ds.d;
    let lp = margin_lp(ds)?;
    let sol = solve_lp_with(&lp, opts)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Ok(MarginSolution::infeasible(d, SolverKind::ExactLp, sol.iterations)),
        LpStatus::Unbounded => unreachable!("the margin LP has a nonnegative objective"),
    }
    let w: Vec<f64> = (0..d).map(|j| sol.x[j] - sol.x[d + j]).collect();
    let l1_norm = w.iter().map(|v| v.abs()).sum();
    let margin = l1_margin(ds, &w)?;
    Ok(MarginSolution {
        dim: d,
        w,
        l1_norm,
        margin,
        solver: SolverKind::ExactLp,
        iterations: sol.iterations,
        feasible: true,
        margin_trace: Vec::new(),
    })
}

/// `(1/pi) arccos(<w/||w||_2, w*>)`, the probability that `sgn<x, w>` and
/// `sgn<x, w*>` disagree for `x ~ N(0, I_d)`.
pub fn exact_risk(w: &[f64], truth: &GroundTruth) -> Result<f64> {
    if w.len() != truth.dim {
        return domain(format!("classifier has length {}, truth has dimension {}", w.len(), truth.dim));
    }
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return domain("risk of the zero vector is undefined");
    }
    let cos = (truth.dot(w) / (norm * truth.l2_norm)).clamp(-1.0, 1.0);
    Ok(cos.acos() / std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{generate, make_ground_truth, NoiseModel, TruthShape};
    use crate::numerics::Rng;

    pub(super) fn two_point() -> Dataset {
        let truth = GroundTruth::from_sparse(2, vec![0], vec![1.0]).unwrap();
        Dataset::from_parts(vec![1.0, 0.0, -1.0, 0.0], vec![1, -1], truth, NoiseModel::Noiseless).unwrap()
    }

    pub(super) fn one_point() -> Dataset {
        let truth = GroundTruth::from_sparse(3, vec![0], vec![1.0]).unwrap();
        Dataset::from_parts(vec![2.0, 1.0, 0.0], vec![1], truth, NoiseModel::Noiseless).unwrap()
    }

    fn random(n: usize, d: usize, seed: u64, noise: NoiseModel) -> Dataset {
        let mut rng = Rng::new(seed, 0);
        let truth = make_ground_truth(d, 1, TruthShape::UnitCoordinate, &mut rng).unwrap();
        generate(n, &truth, &noise, &mut rng).unwrap()
    }

    #[test]
    fn two_point_instance() {
        let s = solve_exact(&two_point()).unwrap();
        assert!(s.feasible);
        assert!((s.w[0] - 1.0).abs() < 1e-12 && s.w[1].abs() < 1e-12);
        assert!((s.l1_norm - 1.0).abs() < 1e-12);
        assert!((s.margin - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_point_instance() {
        let s = solve_exact(&one_point()).unwrap();
        assert!((s.w[0] - 0.5).abs() < 1e-12);
        assert!(s.w[1].abs() < 1e-12 && s.w[2].abs() < 1e-12);
        assert!((s.l1_norm - 0.5).abs() < 1e-12);
    }

    #[test]
    fn nonseparable_is_flagged() {
        let truth = GroundTruth::from_sparse(1, vec![0], vec![1.0]).unwrap();
        let ds = Dataset::from_parts(vec![1.0, 1.0], vec![1, -1], truth, NoiseModel::random_flip(0.1).unwrap()).unwrap();
        let s = solve_exact(&ds).unwrap();
        assert!(!s.feasible);
        assert_eq!(s.margin, f64::NEG_INFINITY);
    }

    /// Independent optimality check for `min ||w||_1 s.t. A w >= 1`: recover
    /// the dual on the active set by least squares and verify
    /// `lambda >= 0`, `||A^T lambda||_inf <= 1`, `1^T lambda = ||w||_1`.
    fn dual_certificate(ds: &Dataset, w: &[f64]) -> (f64, f64, f64) {
        let margins = functional_margins(ds, w);
        let active: Vec<usize> = (0..ds.n).filter(|&i| margins[i] < 1.0 + 1e-7).collect();
        let support: Vec<usize> = (0..ds.d).filter(|&j| w[j].abs() > 1e-10).collect();
        // sum_i lambda_i y_i x_ij = sign(w_j) for j in support
        let a = DMatrix::from_fn(support.len(), active.len(), |r, c| {
            let i = active[c];
            ds.label(i) * ds.row(i)[support[r]]
        });
        let b = nalgebra::DVector::from_iterator(support.len(), support.iter().map(|&j| w[j].signum()));
        let lam_active = a.svd(true, true).solve(&b, 1e-12).unwrap();
        let mut lambda = vec![0.0; ds.n];
        for (c, &i) in active.iter().enumerate() {
            lambda[i] = lam_active[c];
        }
        let min_lambda = lambda.iter().copied().fold(f64::INFINITY, f64::min);
        let mut max_corr: f64 = 0.0;
        for j in 0..ds.d {
            let g: f64 = (0..ds.n).map(|i| lambda[i] * ds.label(i) * ds.row(i)[j]).sum();
            max_corr = max_corr.max(g.abs());
        }
        let gap = (lambda.iter().sum::<f64>() - w.iter().map(|v| v.abs()).sum::<f64>()).abs();
        (min_lambda, max_corr, gap)
    }

    #[test]
    fn random_instances_carry_dual_certificate() {
        for seed in 0..10 {
            let ds = random(10, 20, 300 + seed, NoiseModel::Noiseless);
            let s = solve_exact(&ds).unwrap();
            assert!(s.feasible);
            let (min_lambda, max_corr, gap) = dual_certificate(&ds, &s.w);
            assert!(min_lambda > -1e-9, "negative dual {min_lambda}");
            assert!(max_corr < 1.0 + 1e-7, "dual infeasible {max_corr}");
            assert!(gap < 1e-7, "duality gap {gap}");
        }
    }

    #[test]
    fn margin_identity_and_feasibility() {
        for seed in 0..10 {
            let noise = if seed % 2 == 0 { NoiseModel::Noiseless } else { NoiseModel::random_flip(0.2).unwrap() };
            let ds = random(30, 80, seed, noise);
            let s = solve_exact(&ds).unwrap();
            assert!(s.feasible);
            assert!((s.margin * s.l1_norm - 1.0).abs() < 1e-6);
            let fm = functional_margins(&ds, &s.w);
            assert!(fm.iter().all(|&m| m >= 1.0 - 1e-7));
        }
    }

    #[test]
    fn no_random_probe_beats_the_optimum() {
        let mut rng = Rng::new(5, 5);
        for seed in 0..20 {
            let ds = random(15, 30, 1000 + seed, NoiseModel::Noiseless);
            let s = solve_exact(&ds).unwrap();
            for _ in 0..200 {
                // perturbations of the optimum and unrelated directions
                let probe: Vec<f64> = if rng.bernoulli(0.5) {
                    s.w.iter().map(|v| v + 0.05 * rng.gaussian()).collect()
                } else {
                    (0..ds.d).map(|_| rng.gaussian()).collect()
                };
                assert!(l1_margin(&ds, &probe).unwrap() <= s.margin + 1e-7);
            }
        }
    }

    #[test]
    fn risk_examples() {
        let truth = GroundTruth::from_sparse(3, vec![1], vec![1.0]).unwrap();
        assert_eq!(exact_risk(&[0.0, 2.0, 0.0], &truth).unwrap(), 0.0);
        assert_eq!(exact_risk(&[1.0, 0.0, 0.0], &truth).unwrap(), 0.5);
        assert_eq!(exact_risk(&[0.0, -1.0, 0.0], &truth).unwrap(), 1.0);
        assert!(exact_risk(&[0.0, 0.0, 0.0], &truth).is_err());
        assert!(exact_risk(&[1.0, 0.0], &truth).is_err());
    }

    #[test]
    fn risk_small_angle_series() {
        let truth = GroundTruth::from_sparse(2, vec![0], vec![1.0]).unwrap();
        let eps: f64 = 1e-4;
        let c = 1.0 - eps;
        let w = [c, (1.0 - c * c).sqrt()];
        let series = (2.0 * eps).sqrt() / std::f64::consts::PI;
        let r = exact_risk(&w, &truth).unwrap();
        assert!((r - series).abs() < eps.powf(1.5), "{r} vs {series}");
    }

    #[test]
    fn risk_is_scale_invariant() {
        let truth = GroundTruth::from_sparse(4, vec![0, 2], vec![1.0, -2.0]).unwrap();
        let w = [0.3, -1.2, 0.7, 0.01];
        let r = exact_risk(&w, &truth).unwrap();
        for c in [1e-3, 0.5, 2.0, 1e4] {
            let scaled: Vec<f64> = w.iter().map(|v| v * c).collect();
            assert!((exact_risk(&scaled, &truth).unwrap() - r).abs() < 1e-15);
        }
    }

    #[test]
    fn json_elides_weights_and_maps_sentinels() {
        let s = solve_exact(&two_point()).unwrap();
        let full = serde_json::to_string(&s).unwrap();
        assert!(full.contains("\"w\""));
        let short = serde_json::to_value(s.elided(1)).unwrap();
        assert!(short.get("w").is_none());
        assert_eq!(short["l1_norm"], 1.0);

        let bad = MarginSolution::infeasible(3, SolverKind::CoordinateDescent, 0);
        let text = serde_json::to_string(&bad).unwrap();
        assert!(text.contains("\"margin\":null"));
        let back: MarginSolution = serde_json::from_str(&text).unwrap();
        assert_eq!(back.margin, f64::NEG_INFINITY);
        assert_eq!(back.l1_norm, f64::INFINITY);
    }
}
