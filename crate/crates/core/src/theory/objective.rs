//! The scalar objectives of the Gaussian comparison reduction
//!
//! ```text
//! f_n(nu, eta) = (1/n) sum_i (1 - xi_i nu |z0_i| - z1_i eta)_+^2
//! f(nu, eta)   = E (1 - xi nu |Z| - Z' eta)_+^2,   xi ~ p(. | Z)
//! ```
//!
//! The inner expectation over `Z'` is closed form, leaving a 1-D integral over `|Z|`.

use std::f64::consts::PI;

use crate::datagen::{draw_xi, NoiseModel};
use crate::error::{domain, Result};
use crate::numerics::{erf, integrate_with_breaks, normal_cdf, normal_pdf, QuadratureSpec, Rng};

/// `E (c - eta Z)_+^2 = (c^2 + eta^2) Phi(c/eta) + c eta phi(c/eta)` for
/// `Z ~ N(0, 1)`; symmetric in `eta`, and `c_+^2` at `eta = 0`.
pub fn expected_hinge_sq(c: f64, eta: f64) -> f64 {
    let eta = eta.abs();
    if eta == 0.0 {
        let p = c.max(0.0);
        return p * p;
    }
    let u = c / eta;
    ((c * c + eta * eta) * normal_cdf(u) + c * eta * normal_pdf(u)).max(0.0)
}

/// Reduced sample `(|z0_i|, z1_i, xi_i)` entering `f_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedSample {
    pub abs_z0: Vec<f64>,
    pub z1: Vec<f64>,
    pub xi: Vec<i8>,
}

impl ReducedSample {
    pub fn new(abs_z0: Vec<f64>, z1: Vec<f64>, xi: Vec<i8>) -> Result<Self> {
        if abs_z0.len() != z1.len() || z1.len() != xi.len() || xi.is_empty() {
            return domain("reduced sample columns must be nonempty and of equal length");
        }
        if abs_z0.iter().any(|&v| !(v >= 0.0)) {
            return domain("abs_z0 must be nonnegative");
        }
        if xi.iter().any(|&v| v != 1 && v != -1) {
            return domain("xi must be +1 or -1");
        }
        Ok(ReducedSample { abs_z0, z1, xi })
    }

    /// `n` i.i.d. draws of `(|Z|, Z', xi)` with `xi ~ p(. | Z)`.
    pub fn draw(model: &NoiseModel, n: usize, rng: &mut Rng) -> Result<Self> {
        let mut abs_z0 = Vec::with_capacity(n);
        let mut z1 = Vec::with_capacity(n);
        let mut xi = Vec::with_capacity(n);
        for _ in 0..n {
            let z = rng.gaussian();
            xi.push(draw_xi(z, model, rng));
            abs_z0.push(z.abs());
            z1.push(rng.gaussian());
        }
        ReducedSample::new(abs_z0, z1, xi)
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }
}

pub fn f_n(sample: &ReducedSample, nu: f64, eta: f64) -> f64 {
    let total: f64 = (0..sample.len())
        .map(|i| {
            let v = 1.0 - sample.xi[i] as f64 * nu * sample.abs_z0[i] - sample.z1[i] * eta;
            let p = v.max(0.0);
            p * p
        })
        .sum();
    total / sample.len() as f64
}

/// `f(nu, eta)` by adaptive quadrature over `|Z|`, split at the kink `|Z| = 1/nu`.
pub fn f_expectation(model: &NoiseModel, nu: f64, eta: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(nu >= 0.0) || !nu.is_finite() || !eta.is_finite() {
        return domain(format!("f needs finite nu >= 0 and finite eta, got nu={nu}, eta={eta}"));
    }
    let integrand = |z: f64| {
        let p = model.prob_clean(z);
        let clean = expected_hinge_sq(1.0 - nu * z, eta);
        let flipped = if p < 1.0 { expected_hinge_sq(1.0 + nu * z, eta) } else { 0.0 };
        2.0 * normal_pdf(z) * (p * clean + (1.0 - p) * flipped)
    };
    let breaks: Vec<f64> = if nu > 0.0 { vec![1.0 / nu] } else { Vec::new() };
    integrate_with_breaks(integrand, 0.0, f64::INFINITY, &breaks, quad)
}

/// Noiseless `f(nu, 0) = (nu^2 + 1) erf(1/(sqrt(2) nu)) + sqrt(2/pi) nu (exp(-1/(2 nu^2)) - 2)`.
pub fn f_noiseless_closed_form(nu: f64) -> Result<f64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return domain(format!("closed form needs finite nu >= 0, got {nu}"));
    }
    if nu == 0.0 {
        return Ok(1.0);
    }
    let a = 1.0 / (std::f64::consts::SQRT_2 * nu);
    Ok((nu * nu + 1.0) * erf(a) + (2.0 / PI).sqrt() * nu * ((-a * a).exp() - 2.0))
}

/// Large-`nu` expansion of the noiseless `f`:
/// `sqrt(2)/(3 sqrt(pi)) / nu + sqrt(2/pi) eta^2 / nu`.
pub fn f_noiseless_taylor(nu: f64, eta: f64) -> f64 {
    (2.0f64.sqrt() / (3.0 * PI.sqrt()) + (2.0 / PI).sqrt() * eta * eta) / nu
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::precise()
    }

    #[test]
    fn hinge_matches_direct_integral() {
        for &(c, eta) in &[(1.0, 0.5), (-0.3, 0.2), (2.0, 3.0), (0.0, 1.0), (-4.0, 0.5)] {
            let direct = integrate(
                |z: f64| {
                    let v = (c - eta * z).max(0.0);
                    v * v * normal_pdf(z)
                },
                f64::NEG_INFINITY,
                f64::INFINITY,
                &quad(),
            )
            .unwrap();
            assert!((expected_hinge_sq(c, eta) - direct).abs() < 1e-11, "c={c} eta={eta}");
        }
        assert_eq!(expected_hinge_sq(-1.0, 0.0), 0.0);
        assert_eq!(expected_hinge_sq(2.0, 0.0), 4.0);
        assert_eq!(expected_hinge_sq(0.7, -0.4), expected_hinge_sq(0.7, 0.4));
    }

    #[test]
    fn f_n_examples() {
        let s = ReducedSample::new(vec![0.3, 1.2, 2.0], vec![-0.5, 0.1, 1.5], vec![1, -1, 1]).unwrap();
        assert_eq!(f_n(&s, 0.0, 0.0), 1.0);
        let one = ReducedSample::new(vec![1.0], vec![0.0], vec![1]).unwrap();
        assert_eq!(f_n(&one, 2.0, 0.0), 0.0);
        let mut expect = 0.0;
        for i in 0..3 {
            let v: f64 = 1.0 - s.xi[i] as f64 * 0.5 * s.abs_z0[i] - s.z1[i] * 0.5;
            if v > 0.0 {
                expect += v * v;
            }
        }
        assert!((f_n(&s, 0.5, 0.5) - expect / 3.0).abs() < 1e-15);
        assert!(ReducedSample::new(vec![-1.0], vec![0.0], vec![1]).is_err());
    }

    #[test]
    fn noiseless_at_origin_is_one() {
        let v = f_expectation(&NoiseModel::Noiseless, 0.0, 0.0, &quad()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(f_noiseless_closed_form(0.0).unwrap(), 1.0);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for nu in [0.05, 0.5, 1.0, 2.0, 5.0, 20.0] {
            let q = f_expectation(&NoiseModel::Noiseless, nu, 0.0, &quad()).unwrap();
            let c = f_noiseless_closed_form(nu).unwrap();
            assert!((q - c).abs() < 1e-9, "nu={nu}: {q} vs {c}");
        }
    }

    #[test]
    fn closed_form_approaches_leading_term() {
        let nu = 5.0;
        let c = f_noiseless_closed_form(nu).unwrap();
        let lead = f_noiseless_taylor(nu, 0.0);
        // next term of the expansion is O(1/nu^3)
        assert!((c - lead).abs() * nu.powi(3) < 1.0);
    }

    #[test]
    fn symmetric_in_eta() {
        let m = NoiseModel::logistic(1.0).unwrap();
        let a = f_expectation(&m, 0.7, 0.4, &quad()).unwrap();
        let b = f_expectation(&m, 0.7, -0.4, &quad()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(f_expectation(&NoiseModel::Noiseless, -1.0, 0.0, &quad()).is_err());
        assert!(f_expectation(&NoiseModel::Noiseless, 1.0, f64::NAN, &quad()).is_err());
        assert!(f_noiseless_closed_form(-0.5).is_err());
    }
}
