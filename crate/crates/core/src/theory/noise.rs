//! Constants of a noise law: `nu_bar = argmin_nu f(nu, 0)`, `f* = f(nu_bar, 0)`
//! and the second derivatives of `f` at `(nu_bar, 0)`.

use serde::{Deserialize, Serialize};

use super::f_expectation;
use crate::datagen::NoiseModel;
use crate::error::{Error, Result};
use crate::numerics::{minimize_1d, QuadratureSpec};

/// Bracketing scan for `nu_bar`: 200 log-spaced points on `[1e-3, 50]`.
pub const NU_SCAN: (f64, f64, usize) = (1e-3, 50.0, 200);
pub const NU_TOL: f64 = 1e-8;
/// Base finite-difference step; the cross-check uses twice this step.
pub const FD_STEP: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseCharacteristics {
    pub model: NoiseModel,
    pub nu_bar: f64,
    pub f_star: f64,
    /// `d^2 f / d eta^2` at `(nu_bar, 0)`.
    pub zeta_eta: f64,
    /// `d^2 f / d nu^2` at `(nu_bar, 0)`.
    pub zeta_nu: f64,
    /// `df/dnu` at `(nu_bar, 0)` by central difference.
    pub grad_nu: f64,
    /// Second derivatives from the doubled step, for the stability check.
    pub zeta_eta_alt: f64,
    pub zeta_nu_alt: f64,
    pub quadrature: QuadratureSpec,
}

impl NoiseCharacteristics {
    /// Largest relative disagreement between the two step sizes.
    pub fn fd_disagreement(&self) -> f64 {
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
        rel(self.zeta_eta, self.zeta_eta_alt).max(rel(self.zeta_nu, self.zeta_nu_alt))
    }

    /// `2 f* / (zeta_eta nu_bar^2 pi^2)`.
    pub fn kappa_sigma(&self) -> f64 {
        2.0 * self.f_star / (self.zeta_eta * self.nu_bar * self.nu_bar * std::f64::consts::PI.powi(2))
    }
}

/// Second derivative by central differences with one Richardson step:
/// `(4 D(h/2) - D(h)) / 3`.
fn second_derivative(f: &dyn Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    let f0 = f(x)?;
    let d = |step: f64| -> Result<f64> { Ok((f(x + step)? - 2.0 * f0 + f(x - step)?) / (step * step)) };
    let coarse = d(h)?;
    let fine = d(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

pub fn characterize_noise(model: &NoiseModel, quad: &QuadratureSpec) -> Result<NoiseCharacteristics> {
    let f0 = |nu: f64| f_expectation(model, nu, 0.0, quad);

    let (lo, hi, count) = NU_SCAN;
    let ratio = (hi / lo).powf(1.0 / (count - 1) as f64);
    let grid: Vec<f64> = (0..count).map(|k| lo * ratio.powi(k as i32)).collect();
    let values = grid.iter().map(|&nu| f0(nu)).collect::<Result<Vec<_>>>()?;
    let best = (0..count).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    if best == 0 || best == count - 1 {
        return Err(Error::Model(format!(
            "f(., 0) for {} has no interior minimiser on [{lo}, {hi}] (smallest value at nu={})",
            model.name(),
            grid[best]
        )));
    }

    // golden section on the bracketing cell; quadrature errors become +inf
    let (nu_bar, _) = minimize_1d(|nu| f0(nu).unwrap_or(f64::INFINITY), grid[best - 1], grid[best + 1], NU_TOL)?;
    let f_star = f0(nu_bar)?;
    let grad_nu = (f0(nu_bar + FD_STEP)? - f0(nu_bar - FD_STEP)?) / (2.0 * FD_STEP);

    let along_eta = |eta: f64| f_expectation(model, nu_bar, eta, quad);
    let along_nu = |nu: f64| f_expectation(model, nu, 0.0, quad);
    let zeta_eta = second_derivative(&along_eta, 0.0, FD_STEP)?;
    let zeta_eta_alt = second_derivative(&along_eta, 0.0, 2.0 * FD_STEP)?;
    let zeta_nu = second_derivative(&along_nu, nu_bar, FD_STEP)?;
    let zeta_nu_alt = second_derivative(&along_nu, nu_bar, 2.0 * FD_STEP)?;

    let chars = NoiseCharacteristics {
        model: *model,
        nu_bar,
        f_star,
        zeta_eta,
        zeta_nu,
        grad_nu,
        zeta_eta_alt,
        zeta_nu_alt,
        quadrature: *quad,
    };
    if !(nu_bar > 0.0 && f_star > 0.0 && zeta_eta > 0.0) {
        return Err(Error::Model(format!(
            "degenerate characteristics for {}: nu_bar={nu_bar}, f*={f_star}, zeta_eta={zeta_eta}",
            model.name()
        )));
    }
    Ok(chars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_with_breaks, normal_pdf};

    fn quad() -> QuadratureSpec {
        QuadratureSpec::precise()
    }

    /// `d^2 f/d eta^2 (nu, 0) = 2 E[p_+ 1{|Z| < 1/nu} + p_-]` and
    /// `d^2 f/d nu^2 (nu, 0) = 2 E[Z^2 (p_+ 1{|Z| < 1/nu} + p_-)]`.
    fn analytic_second_derivatives(model: &NoiseModel, nu: f64) -> (f64, f64) {
        let k = 1.0 / nu;
        let weight = |z: f64| {
            let p = model.prob_clean(z);
            let inside = if z < k { p } else { 0.0 };
            2.0 * normal_pdf(z) * (inside + 1.0 - p)
        };
        let e = integrate_with_breaks(|z| 2.0 * weight(z), 0.0, f64::INFINITY, &[k], &quad()).unwrap();
        let n = integrate_with_breaks(|z| 2.0 * z * z * weight(z), 0.0, f64::INFINITY, &[k], &quad()).unwrap();
        (e, n)
    }

    #[test]
    fn random_flip_constants() {
        let m = NoiseModel::random_flip(0.2).unwrap();
        let c = characterize_noise(&m, &quad()).unwrap();
        assert!(c.nu_bar > 0.0 && c.f_star > 0.0 && c.zeta_eta > 0.0);
        assert!(c.grad_nu.abs() <= 1e-5, "gradient {}", c.grad_nu);
        assert!(c.fd_disagreement() <= 0.01);
        let (eta_oracle, nu_oracle) = analytic_second_derivatives(&m, c.nu_bar);
        assert!((c.zeta_eta - eta_oracle).abs() < 1e-4 * eta_oracle, "{} vs {eta_oracle}", c.zeta_eta);
        assert!((c.zeta_nu - nu_oracle).abs() < 1e-4 * nu_oracle, "{} vs {nu_oracle}", c.zeta_nu);
    }

    #[test]
    fn more_flips_shrink_nu_bar() {
        let a = characterize_noise(&NoiseModel::random_flip(0.1).unwrap(), &quad()).unwrap();
        let b = characterize_noise(&NoiseModel::random_flip(0.4).unwrap(), &quad()).unwrap();
        assert!(b.nu_bar < a.nu_bar);
        // grid oracle: both minimisers agree with a fine scan
        for (sigma, c) in [(0.1, &a), (0.4, &b)] {
            let m = NoiseModel::random_flip(sigma).unwrap();
            let scan = (1..=2000)
                .map(|k| k as f64 * 1e-3)
                .min_by(|&x, &y| {
                    let fx = f_expectation(&m, x, 0.0, &quad()).unwrap();
                    let fy = f_expectation(&m, y, 0.0, &quad()).unwrap();
                    fx.total_cmp(&fy)
                })
                .unwrap();
            assert!((scan - c.nu_bar).abs() <= 1e-3);
        }
    }

    #[test]
    fn all_noisy_models_are_strictly_convex_in_eta() {
        for sigma in [0.1, 0.2] {
            for m in [
                NoiseModel::random_flip(sigma).unwrap(),
                NoiseModel::logistic(sigma).unwrap(),
                NoiseModel::pre_quant_gaussian(sigma).unwrap(),
            ] {
                let c = characterize_noise(&m, &quad()).unwrap();
                assert!(c.zeta_eta > 0.0, "{m:?}");
            }
        }
    }

    #[test]
    fn noiseless_has_no_interior_minimiser() {
        assert!(matches!(characterize_noise(&NoiseModel::Noiseless, &quad()), Err(Error::Model(_))));
    }
}
