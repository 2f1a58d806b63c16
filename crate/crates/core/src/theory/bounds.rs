//! Localization bounds on `||w_hat||_1` and the effective sparsity levels
//! at which the gamma path is evaluated. Unknown higher-order constants are
//! dropped from both bounds.

use super::{t_of_m, NoiseCharacteristics};
use crate::error::{Error, Result};
use crate::numerics::solve_fixed_point;

/// `3 (72 pi)^(-1/6)`
pub fn kappa_m() -> f64 {
    3.0 * (72.0 * std::f64::consts::PI).powf(-1.0 / 6.0)
}

/// `(s*, t_{s*}, M)` with `s* = n zeta_eta / 2` and
/// `M = sqrt(n f* / t^2) * sqrt(1 - 2 / t^2)`.
pub fn localization_bound_noisy(n: usize, d: usize, chars: &NoiseCharacteristics) -> Result<(f64, f64, f64)> {
    let m_star = n as f64 * chars.zeta_eta / 2.0;
    if !(m_star < d as f64) {
        return Err(Error::Regime(format!(
            "s* = n zeta_eta / 2 = {m_star:.3} is not below d = {d}; d is too small relative to n"
        )));
    }
    let t = t_of_m(m_star, d)?;
    let t2 = t * t;
    let correction = 1.0 - 2.0 / t2;
    if !(correction > 0.0) {
        return Err(Error::Regime(format!("t_(s*) = {t:.4} too small: 1 - 2/t^2 = {correction:.4}")));
    }
    let m = (n as f64 * chars.f_star / t2).sqrt() * correction.sqrt();
    Ok((m_star, t, m))
}

/// Right-hand side of the noiseless fixed-point equation
/// `s = sqrt(2/pi) (72 pi)^(1/6) (n t_s ||w*||_1)^(2/3)`.
pub fn s_dagger_map(s: f64, n: usize, d: usize, l1_star: f64) -> Result<f64> {
    let t = t_of_m(s, d)?;
    Ok((2.0 / std::f64::consts::PI).sqrt()
        * (72.0 * std::f64::consts::PI).powf(1.0 / 6.0)
        * (n as f64 * t * l1_star).powf(2.0 / 3.0))
}

/// Noiseless bound from a given `t`:
/// `M = kappa_m (n ||w*||_1 / t^2)^(1/3) (1 - (2/3) / t^2)`.
pub fn noiseless_m_at(n: usize, l1_star: f64, t: f64) -> f64 {
    let t2 = t * t;
    kappa_m() * (n as f64 * l1_star / t2).cbrt() * (1.0 - (2.0 / 3.0) / t2)
}

/// `(s_dagger, t_{s_dagger}, M)`; the fixed point is found with damping 0.5.
pub fn localization_bound_noiseless(n: usize, d: usize, l1_star: f64) -> Result<(f64, f64, f64)> {
    if n == 0 || !(l1_star > 0.0) || !l1_star.is_finite() {
        return Err(Error::Domain(format!("need n > 0 and ||w*||_1 > 0, got n={n}, l1={l1_star}")));
    }
    let df = d as f64;
    let damped = |s: f64| match s_dagger_map(s, n, d, l1_star) {
        Ok(g) => 0.5 * s + 0.5 * g,
        Err(_) => f64::NAN,
    };
    let s0 = (n as f64).min(0.5 * df);
    let s = solve_fixed_point(damped, s0, 1e-10, 10_000).map_err(|e| {
        Error::Regime(format!("noiseless fixed point s_dagger did not settle inside (0, {d}): {e}"))
    })?;
    if !(s > 1.0 && s < df) {
        return Err(Error::Regime(format!("s_dagger = {s:.3} outside (1, d={d})")));
    }
    let t = t_of_m(s, d)?;
    Ok((s, t, noiseless_m_at(n, l1_star, t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::NoiseModel;
    use crate::numerics::QuadratureSpec;
    use crate::theory::characterize_noise;

    fn flip_chars() -> NoiseCharacteristics {
        characterize_noise(&NoiseModel::random_flip(0.2).unwrap(), &QuadratureSpec::precise()).unwrap()
    }

    #[test]
    fn noisy_bound_matches_hand_formula() {
        let c = flip_chars();
        let (s, t, m) = localization_bound_noisy(200, 20_000, &c).unwrap();
        assert!((s - 100.0 * c.zeta_eta).abs() < 1e-12);
        let p = 0.5 * s / 20_000.0;
        assert!((2.0 * crate::numerics::normal_sf(t) - s / 20_000.0).abs() < 1e-12 * p.max(1.0));
        let hand = (200.0 * c.f_star).sqrt() / t * (1.0 - 2.0 / (t * t)).sqrt();
        assert!((m - hand).abs() < 1e-12 * hand);
        assert!(m.is_finite() && m > 0.0);
    }

    #[test]
    fn noisy_bound_homogeneous_in_f_star() {
        let c = flip_chars();
        let mut doubled = c.clone();
        doubled.f_star *= 2.0;
        let (_, _, a) = localization_bound_noisy(200, 20_000, &c).unwrap();
        let (_, _, b) = localization_bound_noisy(200, 20_000, &doubled).unwrap();
        assert!((b / a - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn noisy_bound_decreases_in_d() {
        // sqrt(1 - 2/t^2) / t peaks at t = 2, so the bound falls in d only past that
        let c = flip_chars();
        let ms: Vec<(f64, f64)> = [1_000, 10_000, 100_000]
            .iter()
            .map(|&d| {
                let (_, t, m) = localization_bound_noisy(40, d, &c).unwrap();
                (t, m)
            })
            .collect();
        assert!(ms.iter().all(|&(t, _)| t > 2.0));
        assert!(ms[0].1 > ms[1].1 && ms[1].1 > ms[2].1, "{ms:?}");
        let (_, t, low) = localization_bound_noisy(200, 1_500, &c).unwrap();
        let (_, _, high) = localization_bound_noisy(200, 2_000, &c).unwrap();
        assert!(t < 2.0 && low < high);
    }

    #[test]
    fn noisy_bound_rejects_small_d() {
        let c = flip_chars();
        assert!(matches!(localization_bound_noisy(200, 50, &c), Err(Error::Regime(_))));
    }

    #[test]
    fn s_dagger_is_a_fixed_point() {
        let (s, t, _) = localization_bound_noiseless(400, 10_000, 1.0).unwrap();
        let g = s_dagger_map(s, 400, 10_000, 1.0).unwrap();
        assert!((s - g).abs() / s <= 1e-8);
        assert!((t - t_of_m(s, 10_000).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn s_dagger_matches_bisection() {
        let phi = |s: f64| s - s_dagger_map(s, 400, 10_000, 1.0).unwrap();
        let (mut lo, mut hi) = (1.0, 9_999.0);
        assert!(phi(lo) < 0.0 && phi(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if phi(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (s, _, _) = localization_bound_noiseless(400, 10_000, 1.0).unwrap();
        assert!((s - 0.5 * (lo + hi)).abs() <= 1e-6 * s);
    }

    #[test]
    fn noiseless_m_scales_with_cube_root() {
        let t = 2.5;
        let a = noiseless_m_at(100, 1.0, t);
        let b = noiseless_m_at(800, 1.0 / 8.0, t);
        assert!((a - b).abs() < 1e-12 * a);
        let c = noiseless_m_at(800, 1.0, t);
        assert!((c / a - 2.0).abs() < 1e-12);
    }

    #[test]
    fn noiseless_rejects_bad_input() {
        assert!(localization_bound_noiseless(0, 1000, 1.0).is_err());
        assert!(localization_bound_noiseless(10, 1000, 0.0).is_err());
        // the fixed point exceeds d
        assert!(matches!(localization_bound_noiseless(100_000, 50, 10.0), Err(Error::Regime(_))));
    }
}
