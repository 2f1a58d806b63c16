//! The Gaussian tail quantile `t_m` solving `2 * Phi_bar(t_m) = m / d`.

use crate::error::{domain, Result};
use crate::numerics::normal_sf_inv;

/// `t` with `2 * normal_sf(t) = m / d`, for real `0 < m < d`.
pub fn t_of_m(m: f64, d: usize) -> Result<f64> {
    let df = d as f64;
    if !(m > 0.0) || !(m < df) {
        return domain(format!("t_m needs 0 < m < d, got m={m}, d={d}"));
    }
    normal_sf_inv(0.5 * m / df)
}

/// Asymptotic expansion
/// `t^2 ~ 2L - log L - log(pi) + log L / (2L)` with `L = log(d/m)`.
pub fn t_squared_expansion(m: f64, d: usize) -> Result<f64> {
    let ratio = d as f64 / m;
    if !(ratio > std::f64::consts::E) {
        return domain(format!("expansion needs d/m > e, got {ratio}"));
    }
    let l = ratio.ln();
    let ll = l.ln();
    Ok(2.0 * l - ll - std::f64::consts::PI.ln() + ll / (2.0 * l))
}
