//! Computable theoretical quantities: tail quantiles, the gamma path, the
//! scalar objectives `f_n` and `f`, noise constants, localization bounds and
//! the predicted risk in both label regimes.

pub mod bounds;
pub mod gamma;
pub mod noise;
pub mod objective;
pub mod tm;

pub use bounds::{kappa_m, localization_bound_noiseless, localization_bound_noisy, noiseless_m_at, s_dagger_map};
pub use gamma::{
    breakpoint_alpha, check_gamma_concentration, gamma_norms, ConcentrationDraw, ConcentrationReport,
    DeviationSummary, GammaPath,
};
pub use noise::{characterize_noise, NoiseCharacteristics};
pub use objective::{
    expected_hinge_sq, f_expectation, f_n, f_noiseless_closed_form, f_noiseless_taylor, ReducedSample,
};
pub use tm::{t_of_m, t_squared_expansion};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Noiseless,
    Noisy,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Noiseless => "noiseless",
            Regime::Noisy => "noisy",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noiseless" => Ok(Regime::Noiseless),
            "noisy" => Ok(Regime::Noisy),
            other => Err(Error::Config(format!("unknown regime {other:?} (noiseless | noisy)"))),
        }
    }
}

/// `8 / (sqrt(3) pi^(5/2))`
pub fn kappa_0() -> f64 {
    8.0 / (3f64.sqrt() * std::f64::consts::PI.powf(2.5))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryReport {
    pub regime: Regime,
    pub n: usize,
    pub d: usize,
    pub s: usize,
    pub l1_star: f64,
    /// `s*` (noisy) or `s_dagger` (noiseless).
    pub m_star: f64,
    pub t_star: f64,
    #[serde(rename = "M")]
    pub m: f64,
    /// `kappa_0` or `kappa_sigma`.
    pub kappa: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_sigma: Option<f64>,
    pub predicted_risk: f64,
    /// Theorem preconditions that fail at this size; the numbers are still reported.
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default, flatten, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseCharacteristics>,
}

/// Fills a [`TheoryReport`]. Noisy reports need the noise constants.
///
/// Noiseless: `risk = (kappa_0 ||w*||_1^2 / (n sqrt(log(d / s_dagger))))^(1/3)`.
/// Noisy: `risk = sqrt(kappa_sigma / log(d / n))`.
pub fn predicted_risk(
    regime: Regime,
    n: usize,
    d: usize,
    s: usize,
    l1_star: f64,
    chars: Option<&NoiseCharacteristics>,
) -> Result<TheoryReport> {
    if n == 0 || d == 0 {
        return domain(format!("need n, d > 0, got n={n}, d={d}"));
    }
    let (nf, df) = (n as f64, d as f64);
    let mut warnings = Vec::new();
    let report = match regime {
        Regime::Noiseless => {
            let (s_dag, t, m) = localization_bound_noiseless(n, d, l1_star)?;
            let log_ratio = (df / s_dag).ln();
            if !(log_ratio > 0.0) {
                return Err(Error::Regime(format!("log(d / s_dagger) = {log_ratio} is not positive")));
            }
            if (s as f64) > nf.powf(2.0 / 3.0) {
                warnings.push(format!("sparsity s={s} exceeds n^(2/3) = {:.1}", nf.powf(2.0 / 3.0)));
            }
            if df < 10.0 * s_dag {
                warnings.push(format!("d={d} is less than 10 s_dagger = {:.1}", 10.0 * s_dag));
            }
            let k0 = kappa_0();
            TheoryReport {
                regime,
                n,
                d,
                s,
                l1_star,
                m_star: s_dag,
                t_star: t,
                m,
                kappa: k0,
                kappa_sigma: None,
                predicted_risk: (k0 * l1_star * l1_star / (nf * log_ratio.sqrt())).cbrt(),
                warnings: Vec::new(),
                noise: None,
            }
        }
        Regime::Noisy => {
            let chars = chars.ok_or_else(|| Error::Domain("noisy report needs noise characteristics".into()))?;
            let log_ratio = (df / nf).ln();
            if !(log_ratio > 0.0) {
                return Err(Error::Regime(format!("log(d / n) = {log_ratio} is not positive")));
            }
            let (s_star, t, m) = localization_bound_noisy(n, d, chars)?;
            if df < 10.0 * nf {
                warnings.push(format!("d={d} is less than 10 n = {}", 10 * n));
            }
            let cap = nf / log_ratio.powi(4);
            if (s as f64) > cap {
                warnings.push(format!("sparsity s={s} exceeds n / log^4(d/n) = {cap:.2}"));
            }
            let ks = chars.kappa_sigma();
            TheoryReport {
                regime,
                n,
                d,
                s,
                l1_star,
                m_star: s_star,
                t_star: t,
                m,
                kappa: ks,
                kappa_sigma: Some(ks),
                predicted_risk: (ks / log_ratio).sqrt(),
                warnings: Vec::new(),
                noise: Some(chars.clone()),
            }
        }
    };
    if !(report.predicted_risk < 1.0) {
        warnings.push(format!(
            "predicted risk {:.3} is not below 1; the asymptotic bound is vacuous here",
            report.predicted_risk
        ));
    }
    Ok(TheoryReport { warnings, ..report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::NoiseModel;
    use crate::numerics::QuadratureSpec;

    #[test]
    fn kappa_0_value() {
        let pi = std::f64::consts::PI;
        let oracle = 8.0 / (3f64.sqrt() * pi * pi * pi.sqrt());
        assert!((kappa_0() - oracle).abs() < 1e-15);
        assert!((kappa_0() - 0.26404).abs() < 1e-4);
    }

    #[test]
    fn noisy_risk_ignores_sparsity() {
        let c = characterize_noise(&NoiseModel::random_flip(0.2).unwrap(), &QuadratureSpec::precise()).unwrap();
        let a = predicted_risk(Regime::Noisy, 200, 20_000, 1, 1.0, Some(&c)).unwrap();
        let b = predicted_risk(Regime::Noisy, 200, 20_000, 7, 3.0, Some(&c)).unwrap();
        assert_eq!(a.predicted_risk, b.predicted_risk);
        assert!((a.predicted_risk - (c.kappa_sigma() / 100f64.ln()).sqrt()).abs() < 1e-15);
        let json = serde_json::to_value(&a).unwrap();
        for key in ["nu_bar", "f_star", "zeta_eta", "M", "kappa_sigma", "predicted_risk"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        let back: TheoryReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn noiseless_rate_in_n() {
        let a = predicted_risk(Regime::Noiseless, 100, 10_000, 1, 1.0, None).unwrap();
        let b = predicted_risk(Regime::Noiseless, 400, 10_000, 1, 1.0, None).unwrap();
        // freeze the log factor
        let la = (10_000.0 / a.m_star).ln().sqrt();
        let lb = (10_000.0 / b.m_star).ln().sqrt();
        let ratio = (a.predicted_risk / b.predicted_risk) * (la / lb).cbrt();
        assert!((ratio - 4f64.cbrt()).abs() < 1e-12);
        assert!(a.predicted_risk > 0.0 && a.predicted_risk < 1.0);
    }

    #[test]
    fn noisy_needs_chars_and_room() {
        assert!(predicted_risk(Regime::Noisy, 200, 20_000, 1, 1.0, None).is_err());
        let c = characterize_noise(&NoiseModel::random_flip(0.2).unwrap(), &QuadratureSpec::precise()).unwrap();
        assert!(matches!(predicted_risk(Regime::Noisy, 200, 150, 1, 1.0, Some(&c)), Err(Error::Regime(_))));
        let small = predicted_risk(Regime::Noisy, 200, 1_500, 1, 1.0, Some(&c)).unwrap();
        assert!(!small.warnings.is_empty());
    }

    #[test]
    fn regime_parses() {
        assert_eq!("noisy".parse::<Regime>().unwrap(), Regime::Noisy);
        assert!("loud".parse::<Regime>().is_err());
    }
}
