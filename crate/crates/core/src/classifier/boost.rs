//! Coordinate descent on the exponential loss `L(w) = sum_i exp(-y_i <x_i, w>)`.
//!
//! Each step moves the coordinate with the largest absolute partial
//! derivative. With exact line search this is AdaBoost over the 2d signed
//! coordinate "weak learners"; shrinking the step trades speed for a margin
//! closer to the l1-optimum.

use serde::{Deserialize, Serialize};

use super::{l1_margin, MarginSolution, SolverKind};
use crate::datagen::Dataset;
use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepSchedule {
    /// Minimise the loss along the chosen coordinate.
    ExactLineSearch,
    /// A fixed fraction of the exact line-search step.
    Shrunk { factor: f64 },
    /// A fixed step length.
    Constant { step: f64 },
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule::Constant { step: 0.01 }
    }
}

#[derive(Clone, Debug)]
pub struct BoostOptions {
    pub max_iters: usize,
    pub schedule: StepSchedule,
    /// Checkpoint spacing of the margin trace.
    pub log_every: usize,
}

impl Default for BoostOptions {
    fn default() -> Self {
        BoostOptions {
            max_iters: 200_000,
            schedule: StepSchedule::default(),
            log_every: 100,
        }
    }
}

pub fn solve_coordinate_descent(ds: &Dataset, max_iters: usize, schedule: StepSchedule) -> Result<MarginSolution> {
    solve_coordinate_descent_with(
        ds,
        &BoostOptions {
            max_iters,
            schedule,
            ..BoostOptions::default()
        },
    )
}

pub fn solve_coordinate_descent_with(ds: &Dataset, opts: &BoostOptions) -> Result<MarginSolution> {
    match opts.schedule {
        StepSchedule::Shrunk { factor } if !(factor > 0.0 && factor <= 1.0) => {
            return domain(format!("shrinkage factor {factor} outside (0, 1]"));
        }
        StepSchedule::Constant { step } if !(step > 0.0 && step.is_finite()) => {
            return domain(format!("step {step} must be positive"));
        }
        _ => {}
    }
    if opts.log_every == 0 {
        return domain("log_every must be positive");
    }
    let (n, d) = (ds.n, ds.d);
    if opts.max_iters == 0 {
        return Ok(MarginSolution::infeasible(d, SolverKind::CoordinateDescent, 0));
    }

    // z_i = y_i x_i, row-major for the gradient and column-major for updates
    let mut rows = vec![0.0; n * d];
    let mut cols = vec![0.0; n * d];
    for i in 0..n {
        let y = ds.label(i);
        for (j, &x) in ds.row(i).iter().enumerate() {
            rows[i * d + j] = y * x;
            cols[j * n + i] = y * x;
        }
    }

    let mut w = vec![0.0; d];
    let mut l1 = 0.0;
    let mut r = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut a = vec![0.0; n];
    let mut grad = vec![0.0; d];
    let mut trace = Vec::new();
    let mut iterations = 0;

    for it in 1..=opts.max_iters {
        let r_min = r.iter().copied().fold(f64::INFINITY, f64::min);
        for i in 0..n {
            e[i] = (r_min - r[i]).exp();
        }
        grad.iter_mut().for_each(|g| *g = 0.0);
        for i in 0..n {
            let ei = e[i];
            for (g, z) in grad.iter_mut().zip(&rows[i * d..(i + 1) * d]) {
                *g += ei * z;
            }
        }
        let (j, gj) = grad
            .iter()
            .copied()
            .enumerate()
            .fold((0, 0.0f64), |best, (k, g)| if g.abs() > best.1.abs() { (k, g) } else { best });
        if gj == 0.0 {
            break;
        }
        let s = gj.signum();
        let col = &cols[j * n..(j + 1) * n];
        for i in 0..n {
            a[i] = s * col[i];
        }
        let t = match opts.schedule {
            StepSchedule::Constant { step } => step,
            StepSchedule::ExactLineSearch => line_search(&e, &a),
            StepSchedule::Shrunk { factor } => factor * line_search(&e, &a),
        };
        l1 += (w[j] + s * t).abs() - w[j].abs();
        w[j] += s * t;
        for i in 0..n {
            r[i] += t * a[i];
        }
        iterations = it;
        if it % opts.log_every == 0 && l1 > 0.0 {
            let m = r.iter().copied().fold(f64::INFINITY, f64::min);
            trace.push((it, m / l1));
        }
    }

    if w.iter().all(|&v| v == 0.0) {
        return Ok(MarginSolution {
            margin_trace: trace,
            ..MarginSolution::infeasible(d, SolverKind::CoordinateDescent, iterations)
        });
    }
    let margin = l1_margin(ds, &w)?;
    let l1_norm = w.iter().map(|v| v.abs()).sum();
    Ok(MarginSolution {
        dim: d,
        w,
        l1_norm,
        margin,
        solver: SolverKind::CoordinateDescent,
        iterations,
        feasible: margin > 0.0,
        margin_trace: trace,
    })
}

/// Minimiser over `t >= 0` of `phi(t) = sum_i e_i exp(-t a_i)`, given
/// `phi'(0) < 0`. Safeguarded Newton inside a doubling bracket.
fn line_search(e: &[f64], a: &[f64]) -> f64 {
    let a_max = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // with no negative a_i the loss decreases forever; cap the step
    let t_cap = 50.0 / a_max;
    // (phi', phi'') up to a common positive factor
    let derivs = |t: f64| {
        let shift = e
            .iter()
            .zip(a)
            .filter(|(ei, _)| **ei > 0.0)
            .map(|(ei, ai)| ei.ln() - t * ai)
            .fold(f64::NEG_INFINITY, f64::max);
        let (mut d1, mut d2) = (0.0, 0.0);
        for (ei, ai) in e.iter().zip(a) {
            if *ei > 0.0 {
                let v = (ei.ln() - t * ai - shift).exp();
                d1 -= v * ai;
                d2 += v * ai * ai;
            }
        }
        (d1, d2)
    };
    let mut lo = 0.0;
    let mut hi = 1.0 / a_max;
    while derivs(hi).0 < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi >= t_cap {
            return t_cap;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..100 {
        let (d1, d2) = derivs(t);
        if d1 < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        if d1.abs() <= 1e-14 * d2.max(f64::MIN_POSITIVE) * a_max || hi - lo <= 1e-14 * hi {
            break;
        }
        let newton = t - d1 / d2;
        t = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    t
}

#[cfg(test)]
mod tests {
    use super::super::solve_exact;
    use super::super::tests::{one_point, two_point};
    use super::*;

    #[test]
    fn zero_iterations_is_infeasible() {
        let s = solve_coordinate_descent(&two_point(), 0, StepSchedule::default()).unwrap();
        assert!(!s.feasible);
        assert_eq!(s.margin, f64::NEG_INFINITY);
        assert_eq!(s.iterations, 0);
    }

    #[test]
    fn two_point_margin_reaches_one() {
        let s = solve_coordinate_descent(&two_point(), 2000, StepSchedule::default()).unwrap();
        assert!(s.feasible);
        let exact = solve_exact(&two_point()).unwrap();
        assert!((s.margin - exact.margin).abs() <= 0.01 * exact.margin);
    }

    #[test]
    fn one_point_mass_on_largest_coordinate() {
        for schedule in [StepSchedule::ExactLineSearch, StepSchedule::default()] {
            let s = solve_coordinate_descent(&one_point(), 5000, schedule).unwrap();
            assert!(s.w[0] > 0.0);
            assert!(s.w[1].abs() <= 1e-3 * s.l1_norm && s.w[2].abs() <= 1e-3 * s.l1_norm);
        }
    }

    #[test]
    fn line_search_hits_stationary_point() {
        let e = [1.0, 0.5, 2.0];
        let a = [1.0, -0.5, 0.8];
        let t = line_search(&e, &a);
        let dphi: f64 = e.iter().zip(&a).map(|(ei, ai)| -ei * ai * (-t * ai).exp()).sum();
        assert!(dphi.abs() < 1e-12, "phi'({t}) = {dphi}");
    }

    #[test]
    fn bad_schedules_rejected() {
        let ds = two_point();
        assert!(solve_coordinate_descent(&ds, 10, StepSchedule::Shrunk { factor: 0.0 }).is_err());
        assert!(solve_coordinate_descent(&ds, 10, StepSchedule::Constant { step: -1.0 }).is_err());
    }
}
