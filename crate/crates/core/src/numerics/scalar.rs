//! One-dimensional minimisation and fixed-point iteration.

use crate::error::{domain, Error, Result};

/// 1/phi, the golden-section shrink factor.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimiser of a unimodal `f` on `[lo, hi]`.
///
/// Unimodality is the caller's responsibility; on a multimodal function this
/// still returns a local minimiser inside the bracket.
pub fn minimize_1d<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    if !(lo < hi) {
        return domain(format!("minimize_1d needs lo < hi, got [{lo}, {hi}]"));
    }
    if !(tol > 0.0) {
        return domain(format!("minimize_1d needs tol > 0, got {tol}"));
    }
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    // Best of the interior probes and the final midpoint.
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    let best = [(x1, f1), (x2, f2), (mid, fm)]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .expect("three candidates");
    Ok(best)
}

/// Plain fixed-point iteration `x <- g(x)` until `|x - g(x)| <= tol * max(1, |x|)`.
///
/// Callers wanting damping pass the damped map, e.g. `|x| 0.5 * x + 0.5 * g(x)`,
/// which has the same fixed points.
pub fn solve_fixed_point<G: Fn(f64) -> f64>(g: G, x0: f64, tol: f64, max_iter: usize) -> Result<f64> {
    let mut x = x0;
    let mut gx = g(x);
    for _ in 0..max_iter {
        if !gx.is_finite() {
            break;
        }
        if (x - gx).abs() <= tol * x.abs().max(1.0) {
            return Ok(x);
        }
        x = gx;
        gx = g(x);
    }
    if gx.is_finite() && (x - gx).abs() <= tol * x.abs().max(1.0) {
        return Ok(x);
    }
    Err(Error::Convergence {
        what: "fixed-point iteration",
        iterations: max_iter,
        best: x,
        error: (x - gx).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_minimum() {
        let (x, fx) = minimize_1d(|x| (x - 2.0).powi(2), 0.0, 5.0, 1e-8).unwrap();
        assert!((x - 2.0).abs() < 1e-7);
        assert_eq!(fx, (x - 2.0).powi(2));
    }

    #[test]
    fn symmetric_kink() {
        let tol = 1e-9;
        let (x, _) = minimize_1d(f64::abs, -1.0, 1.0, tol).unwrap();
        assert!(x.abs() <= tol);
    }

    #[test]
    fn bad_bracket() {
        assert!(minimize_1d(|x| x, 1.0, 1.0, 1e-6).is_err());
        assert!(minimize_1d(|x| x, 2.0, 1.0, 1e-6).is_err());
    }

    #[test]
    fn linear_contraction() {
        let tol = 1e-12;
        let x = solve_fixed_point(|x| 0.5 * x + 1.0, 0.0, tol, 200).unwrap();
        assert!((x - 2.0).abs() < 1e-10);
    }

    fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
        let fa = f(a);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if (f(m) > 0.0) == (fa > 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn cosine_fixed_point() {
        let root = bisect(|x| x - x.cos(), 0.0, 1.0);
        let x = solve_fixed_point(f64::cos, 1.0, 1e-10, 1000).unwrap();
        assert!((x - root).abs() < 1e-6);
        assert!((x - 0.739085).abs() < 1e-6);
    }

    #[test]
    fn constant_map_one_step() {
        let calls = std::cell::Cell::new(0);
        let x = solve_fixed_point(
            |_| {
                calls.set(calls.get() + 1);
                3.5
            },
            0.0,
            1e-12,
            10,
        )
        .unwrap();
        assert_eq!(x, 3.5);
        // g(x0) and the confirming g(c)
        assert_eq!(calls.get(), 2);
    }

    #[test]
    fn divergence_reports_last_iterate() {
        match solve_fixed_point(|x| 2.0 * x + 1.0, 1.0, 1e-12, 20) {
            Err(Error::Convergence { best, .. }) => assert!(best > 1e5),
            other => panic!("expected error, got {other:?}"),
        }
    }
}
