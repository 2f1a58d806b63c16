//! The least-norm nonnegative path
//!
//! ```text
//! gamma(alpha) = argmin ||w||_2^2  s.t.  <w, h> >= ||h||_inf,  w >= 0,  1^T w = alpha
//! ```
//!
//! for a descending positive `h`. KKT gives `w_i = max(0, mu + nu h_i)` with
//! `nu >= 0`, so the support is always a top prefix of `h`. On a prefix of
//! size `m` the two equality constraints fix `(mu, nu)` through a 2x2 system.
//! The support grows by one coordinate at each breakpoint `alpha_m`, where the
//! m-th coordinate sits exactly at zero.

use crate::error::{domain, Error, Result};

const TIE_JITTER: f64 = 1e-12;
/// Rounding allowance below the feasibility edge `alpha = 1`.
const ALPHA_SLACK: f64 = 1e-12;

/// Sorts magnitudes in descending order and separates exact ties by
/// `1e-12 * rank` so the order statistics are distinct.
pub fn prepare_magnitudes(h: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = h.iter().map(|x| x.abs()).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    break_ties(&mut v);
    v
}

fn break_ties(v: &mut [f64]) {
    let mut i = 0;
    while i < v.len() {
        let mut j = i + 1;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        for (rank, k) in (i + 1..j).enumerate() {
            v[k] -= TIE_JITTER * (rank + 1) as f64;
        }
        i = j;
    }
}

/// Prefix sums of a sorted `h` and the breakpoints of its path.
#[derive(Clone, Debug)]
pub struct GammaProblem {
    h: Vec<f64>,
    /// `s1[k] = h_1 + ... + h_{k+1}`
    s1: Vec<f64>,
    s2: Vec<f64>,
    /// `alphas[k]` is the breakpoint for `m = k + 2`.
    alphas: Vec<f64>,
}

impl GammaProblem {
    /// `h` must be positive and sorted in descending order; exact ties are jittered.
    pub fn new(h: &[f64]) -> Result<Self> {
        if h.is_empty() {
            return domain("gamma path needs a nonempty h");
        }
        if h.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return domain("h must be finite and strictly positive");
        }
        if h.windows(2).any(|w| w[0] < w[1]) {
            return domain("h must be sorted in descending order");
        }
        let mut h = h.to_vec();
        break_ties(&mut h);
        if h.windows(2).any(|w| w[0] <= w[1]) || h.last().map_or(false, |&x| x <= 0.0) {
            return domain("h has ties that jitter could not separate");
        }
        let d = h.len();
        let mut s1 = Vec::with_capacity(d);
        let mut s2 = Vec::with_capacity(d);
        let (mut a, mut b) = (0.0, 0.0);
        for &x in &h {
            a += x;
            b += x * x;
            s1.push(a);
            s2.push(b);
        }
        let h1 = h[0];
        let alphas = (2..=d)
            .map(|m| {
                if m == 2 {
                    // identically 1; the formula loses a few ulps
                    return 1.0;
                }
                let (p1, p2, hm) = (s1[m - 1], s2[m - 1], h[m - 1]);
                (p1 - m as f64 * hm) * h1 / (p2 - p1 * hm)
            })
            .collect();
        Ok(GammaProblem { h, s1, s2, alphas })
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn h_max(&self) -> f64 {
        self.h[0]
    }

    pub fn l1(&self) -> f64 {
        self.s1[self.dim() - 1]
    }

    /// `d * ||h||_inf / ||h||_1`, where the inequality constraint stops binding.
    pub fn alpha_max(&self) -> f64 {
        self.dim() as f64 * self.h_max() / self.l1()
    }

    /// Breakpoint `alpha_m` for `2 <= m <= d`.
    pub fn breakpoint(&self, m: usize) -> Result<f64> {
        if m < 2 || m > self.dim() {
            return domain(format!("breakpoint index m={m} outside [2, {}]", self.dim()));
        }
        let (p1, p2, hm) = (self.s1[m - 1], self.s2[m - 1], self.h[m - 1]);
        let denom = p2 - p1 * hm;
        if !(denom > 0.0) {
            return domain(format!(
                "degenerate breakpoint denominator {denom:e} at m={m} (||H||_2^2={p2}, ||H||_1 h_m={})",
                p1 * hm
            ));
        }
        Ok(self.alphas[m - 2])
    }

    /// Support size of `gamma(alpha)` for `alpha` in `[1, alpha_max)`.
    fn support_size(&self, alpha: f64) -> usize {
        // alphas is increasing; count breakpoints <= alpha
        let k = self.alphas.partition_point(|&a| a <= alpha);
        (k + 1).max(2).min(self.dim())
    }

    /// Multipliers `(mu, nu)` and support size for `alpha`, or `None` above `alpha_max`.
    fn multipliers(&self, alpha: f64) -> Result<Option<(f64, f64, usize)>> {
        if !(alpha >= 1.0 - ALPHA_SLACK) || !alpha.is_finite() {
            return domain(format!("alpha = {alpha} is infeasible (need alpha >= 1)"));
        }
        let alpha = alpha.max(1.0);
        let d = self.dim();
        if d == 1 || alpha >= self.alpha_max() {
            return Ok(None);
        }
        let m = self.support_size(alpha);
        let (p1, p2) = (self.s1[m - 1], self.s2[m - 1]);
        let mf = m as f64;
        let det = mf * p2 - p1 * p1;
        let h1 = self.h_max();
        let mu = (alpha * p2 - p1 * h1) / det;
        let nu = (mf * h1 - p1 * alpha) / det;
        Ok(Some((mu, nu, m)))
    }

    /// `gamma(alpha)`; above `alpha_max` the inequality is slack and the
    /// solution is uniform.
    pub fn solve(&self, alpha: f64) -> Result<Vec<f64>> {
        let d = self.dim();
        let w = match self.multipliers(alpha)? {
            None => vec![alpha / d as f64; d],
            Some((mu, nu, m)) => {
                let mut w = vec![0.0; d];
                for i in 0..m {
                    w[i] = (mu + nu * self.h[i]).max(0.0);
                }
                w
            }
        };
        self.verify_kkt(&w, alpha)?;
        Ok(w)
    }

    /// `(||gamma(alpha)||_1, ||gamma(alpha)||_2^2)` from prefix sums in O(log d).
    pub fn norms(&self, alpha: f64) -> Result<(f64, f64)> {
        match self.multipliers(alpha)? {
            None => Ok((alpha, alpha * alpha / self.dim() as f64)),
            Some((mu, nu, m)) => {
                let (p1, p2) = (self.s1[m - 1], self.s2[m - 1]);
                let l2sq = m as f64 * mu * mu + 2.0 * mu * nu * p1 + nu * nu * p2;
                Ok((alpha, l2sq.max(0.0)))
            }
        }
    }

    fn verify_kkt(&self, w: &[f64], alpha: f64) -> Result<()> {
        let scale = alpha.max(1.0);
        let sum: f64 = w.iter().sum();
        let inner: f64 = w.iter().zip(&self.h).map(|(a, b)| a * b).sum();
        let h1 = self.h_max();
        let mut worst = (sum - alpha).abs() / scale;
        if alpha < self.alpha_max() {
            worst = worst.max((inner - h1).abs() / (h1 * scale));
        } else {
            worst = worst.max((h1 - inner).max(0.0) / (h1 * scale));
        }
        if let Some(neg) = w.iter().copied().reduce(f64::min) {
            worst = worst.max((-neg).max(0.0) / scale);
        }
        if let Some((mu, nu, m)) = self.multipliers(alpha)? {
            worst = worst.max((-nu).max(0.0));
            if m < self.dim() {
                // zero coordinates must not want to grow
                worst = worst.max((mu + nu * self.h[m]).max(0.0) / scale);
            }
        }
        if worst > 1e-8 {
            return Err(Error::Solver(format!("gamma QP KKT residual {worst:e} exceeds 1e-8")));
        }
        Ok(())
    }
}

/// Unique minimiser of the gamma QP for a descending positive `h`.
pub fn solve_nonneg_qp_gamma(h: &[f64], alpha: f64) -> Result<Vec<f64>> {
    GammaProblem::new(h)?.solve(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_coordinate() {
        assert_eq!(solve_nonneg_qp_gamma(&[2.0], 1.5).unwrap(), vec![1.5]);
    }

    #[test]
    fn boundary_of_feasibility() {
        let w = solve_nonneg_qp_gamma(&[2.0, 1.0], 1.0).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-15 && w[1].abs() < 1e-15);
    }

    #[test]
    fn alpha_below_one_rejected() {
        assert!(solve_nonneg_qp_gamma(&[2.0, 1.0], 0.9).is_err());
        assert!(solve_nonneg_qp_gamma(&[2.0, 1.0], f64::NAN).is_err());
    }

    #[test]
    fn unsorted_h_rejected() {
        assert!(GammaProblem::new(&[1.0, 2.0]).is_err());
        assert!(GammaProblem::new(&[1.0, -2.0]).is_err());
    }

    #[test]
    fn ties_are_jittered() {
        let p = GammaProblem::new(&[3.0, 2.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(p.h().windows(2).all(|w| w[0] > w[1]));
        assert!((p.h()[3] - (2.0 - 2e-12)).abs() < 1e-15);
        let prepared = prepare_magnitudes(&[-1.0, 2.0, 1.0]);
        assert_eq!(prepared[0], 2.0);
        assert!(prepared[1] > prepared[2]);
    }

    #[test]
    fn second_breakpoint_is_one() {
        let p = GammaProblem::new(&[2.0, 1.0]).unwrap();
        assert!((p.breakpoint(2).unwrap() - 1.0).abs() < 1e-15);
        assert!(p.breakpoint(1).is_err());
        assert!(p.breakpoint(3).is_err());
    }

    #[test]
    fn above_alpha_max_is_uniform() {
        let p = GammaProblem::new(&[3.0, 2.0, 1.0]).unwrap();
        assert!((p.alpha_max() - 1.5).abs() < 1e-15);
        let w = p.solve(2.0).unwrap();
        assert!(w.iter().all(|&v| (v - 2.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn norms_agree_with_solution() {
        let h = prepare_magnitudes(&[0.3, 2.1, 1.7, 0.9, 1.2, 0.05, 1.1]);
        let p = GammaProblem::new(&h).unwrap();
        for k in 0..=40 {
            let alpha = 1.0 + (p.alpha_max() * 1.1 - 1.0) * k as f64 / 40.0;
            let w = p.solve(alpha).unwrap();
            let (l1, l2sq) = p.norms(alpha).unwrap();
            assert!((w.iter().sum::<f64>() - l1).abs() < 1e-12);
            assert!((w.iter().map(|v| v * v).sum::<f64>() - l2sq).abs() < 1e-12);
        }
    }
}
