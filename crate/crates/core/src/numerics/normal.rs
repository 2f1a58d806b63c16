//! Standard normal distribution functions.
//!
//! The complementary CDF is evaluated through `erfc`, which keeps full
//! relative accuracy deep into the upper tail where `1 - cdf` would cancel.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{domain, Result};

/// 1/sqrt(2 pi)
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn normal_pdf(z: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

/// P(Z <= t).
pub fn normal_cdf(t: f64) -> f64 {
    0.5 * libm::erfc(-t * FRAC_1_SQRT_2)
}

/// P(Z >= t), the Gaussian upper tail.
pub fn normal_sf(t: f64) -> f64 {
    0.5 * libm::erfc(t * FRAC_1_SQRT_2)
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Inverse of [`normal_sf`]: the `t` with `P(Z >= t) = p`.
///
/// Seeded by Acklam's rational approximation of the probit and polished with
/// Halley steps on the upper-tail function itself, so the residual
/// `|normal_sf(t) - p|` sits at the level of `erfc` round-off.
pub fn normal_sf_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("normal_sf_inv requires 0 < p < 1, got {p}"));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let mut t = -acklam_probit(p);
    for _ in 0..8 {
        let err = normal_sf(t) - p;
        let dens = normal_pdf(t);
        if dens == 0.0 {
            break;
        }
        let u = err / dens;
        let step = u / (1.0 - 0.5 * t * u);
        t += step;
        if step.abs() <= 1e-15 * t.abs().max(1.0) {
            break;
        }
    }
    Ok(t)
}

/// Lower-tail probit seed; absolute error about 1e-9.
fn acklam_probit(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p > 1.0 - P_LOW {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Mean of the half-normal |Z|, sqrt(2/pi).
pub fn half_normal_mean() -> f64 {
    (2.0 / PI).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// erfc by Maclaurin series of erf for small x and a Lentz continued
    /// fraction for large x. Test-only oracle, independent of libm.
    fn erfc_oracle(x: f64) -> f64 {
        if x < 2.5 {
            let mut term = x;
            let mut sum = x;
            let mut n = 0.0;
            loop {
                n += 1.0;
                term *= -x * x / n;
                let add = term / (2.0 * n + 1.0);
                sum += add;
                if add.abs() < 1e-18 * sum.abs() {
                    break;
                }
            }
            1.0 - 2.0 / PI.sqrt() * sum
        } else {
            // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
            let tiny = 1e-300;
            let mut f = x;
            let mut c = x;
            let mut d = 0.0;
            for k in 1..200 {
                let a = k as f64 / 2.0;
                d = x + a * d;
                if d.abs() < tiny {
                    d = tiny;
                }
                c = x + a / c;
                if c.abs() < tiny {
                    c = tiny;
                }
                d = 1.0 / d;
                let delta = c * d;
                f *= delta;
                if (delta - 1.0).abs() < 1e-16 {
                    break;
                }
            }
            (-x * x).exp() / PI.sqrt() / f
        }
    }

    #[test]
    fn sf_at_zero_is_half() {
        assert_eq!(normal_sf(0.0), 0.5);
    }

    #[test]
    fn sf_far_tail() {
        assert!(normal_sf(40.0) < 1e-300);
    }

    #[test]
    fn sf_at_one_matches_oracle() {
        let expect = 0.5 * erfc_oracle(1.0 / 2f64.sqrt());
        assert!((normal_sf(1.0) - expect).abs() < 1e-14, "{} vs {}", normal_sf(1.0), expect);
        assert!((expect - 0.15865525393145705).abs() < 1e-15);
    }

    #[test]
    fn sf_tail_relative_accuracy() {
        for &t in &[3.0, 5.0, 8.0, 12.0] {
            let expect = 0.5 * erfc_oracle(t / 2f64.sqrt());
            let rel = (normal_sf(t) - expect).abs() / expect;
            assert!(rel < 1e-13, "t={t} rel={rel}");
        }
    }

    #[test]
    fn sf_symmetry_and_monotone() {
        let mut prev = 1.0;
        for i in -400..=400 {
            let t = i as f64 * 0.02;
            let s = normal_sf(t);
            assert!(s < prev);
            prev = s;
            assert!((s + normal_sf(-t) - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(normal_sf_inv(0.5).unwrap(), 0.0);
        assert!((normal_sf_inv(normal_sf(2.0)).unwrap() - 2.0).abs() < 1e-10);
        assert!((normal_sf_inv(0.15865525393145705).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn inverse_residual() {
        for &p in &[1e-300, 1e-100, 1e-12, 1e-5, 0.01, 0.02425, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-9] {
            let t = normal_sf_inv(p).unwrap();
            assert!((normal_sf(t) - p).abs() <= 1e-13, "p={p} t={t}");
        }
    }

    #[test]
    fn inverse_domain() {
        assert!(normal_sf_inv(0.0).is_err());
        assert!(normal_sf_inv(1.0).is_err());
        assert!(normal_sf_inv(f64::NAN).is_err());
    }
}
