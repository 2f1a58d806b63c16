//! Sweep configuration, read from TOML with `key=value` overrides.
//!
//! ```toml
//! run_id = "noiseless-rate"
//! regime = "noiseless"
//! n = [50, 100, 200, 400, 800]
//! s = 1
//! truth = "unit_coordinate"
//! trials = 20
//! master_seed = 7
//!
//! [d]
//! rule = "fixed"
//! values = [10000]
//!
//! [noise]
//! model = "noiseless"
//!
//! [output]
//! trials_csv = "out/trials.csv"
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::classifier::{SolverKind, StepSchedule};
use crate::datagen::{NoiseModel, TruthShape};
use crate::error::{Error, Result};
use crate::theory::Regime;

/// How the dimension grid is built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum DimensionRule {
    /// The same absolute `d` values for every `n`.
    Fixed { values: Vec<usize> },
    /// `d = min(n^2, cap)`.
    NSquaredCapped { cap: usize },
    /// `d = min(round(exp(n^p)), cap)`.
    ExpNP { p: f64, cap: usize },
}

impl DimensionRule {
    pub fn dims_for(&self, n: usize) -> Vec<usize> {
        match self {
            DimensionRule::Fixed { values } => values.clone(),
            DimensionRule::NSquaredCapped { cap } => vec![n.saturating_mul(n).min(*cap)],
            DimensionRule::ExpNP { p, cap } => {
                let d = (n as f64).powf(*p).exp().round();
                vec![if d >= *cap as f64 { *cap } else { d as usize }]
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub trials_csv: Option<PathBuf>,
    pub summary_json: Option<PathBuf>,
    pub plot_csv: Option<PathBuf>,
}

fn default_trials() -> usize {
    20
}

fn default_budget() -> f64 {
    120.0
}

fn default_cd_iters() -> usize {
    200_000
}

fn default_truth() -> TruthShape {
    TruthShape::Flat
}

fn default_solver() -> SolverKind {
    SolverKind::ExactLp
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub run_id: String,
    pub regime: Regime,
    pub n: Vec<usize>,
    pub d: DimensionRule,
    pub s: usize,
    #[serde(default = "default_truth")]
    pub truth: TruthShape,
    pub noise: NoiseModel,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_solver")]
    pub solver: SolverKind,
    #[serde(default = "default_cd_iters")]
    pub cd_iters: usize,
    #[serde(default)]
    pub cd_schedule: StepSchedule,
    pub master_seed: u64,
    /// Test points for the Monte Carlo risk; 0 skips it.
    #[serde(default)]
    pub n_test: usize,
    /// Wall-clock budget per trial in seconds; a trial over budget is recorded as failed.
    #[serde(default = "default_budget")]
    pub trial_budget_s: f64,
    /// Fill `wall_ms`; off by default so repeated runs give identical files.
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub output: OutputPaths,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        for item in overrides {
            apply_override(&mut table, item)?;
        }
        let cfg: ExperimentConfig = table.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<std::path::Path>, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text, overrides)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Every `(n, d)` cell in grid order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        self.n
            .iter()
            .flat_map(|&n| self.d.dims_for(n).into_iter().map(move |d| (n, d)))
            .collect()
    }

    /// `||w*||_1` of the configured truth; every shape is unit-l2 with equal magnitudes.
    pub fn l1_star(&self) -> f64 {
        (self.s as f64).sqrt()
    }

    /// Rejects inconsistent configs; returns warnings for questionable ones.
    pub fn validate(&self) -> Result<Vec<String>> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.n.is_empty() || self.n.contains(&0) {
            return bad("n grid must be nonempty with positive entries".into());
        }
        if self.s == 0 {
            return bad("s must be positive".into());
        }
        if self.truth == TruthShape::UnitCoordinate && self.s != 1 {
            return bad("unit_coordinate truth needs s = 1".into());
        }
        match (&self.regime, self.noise.is_noisy()) {
            (Regime::Noiseless, true) => return bad(format!("noiseless regime with noise model {}", self.noise.name())),
            (Regime::Noisy, false) => return bad("noisy regime needs a noise model".into()),
            _ => {}
        }
        if !(self.trial_budget_s > 0.0) {
            return bad("trial_budget_s must be positive".into());
        }
        if let DimensionRule::ExpNP { p, .. } = self.d {
            if !(p > 0.0 && p.is_finite()) {
                return bad(format!("exp_n_p exponent must be positive, got {p}"));
            }
        }
        if self.threads == Some(0) {
            return bad("threads must be positive".into());
        }
        let cells = self.cells();
        if cells.is_empty() {
            return bad("d grid is empty".into());
        }
        let mut warnings = Vec::new();
        for (n, d) in cells {
            if d < self.s {
                return bad(format!("cell n={n}, d={d} has d below s={}", self.s));
            }
            if self.regime == Regime::Noisy && d <= n {
                warnings.push(format!("cell n={n}, d={d}: d <= n, data may not be separable"));
            }
        }
        Ok(warnings)
    }
}

/// Sets `a.b.c = value` in a TOML tree. The value is parsed as TOML and
/// falls back to a bare string.
pub fn apply_override(table: &mut toml::Table, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override {item:?} is not key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("bad override key {key:?}")));
    }
    let mut node = table;
    for part in &parts[..parts.len() - 1] {
        let entry = node
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        node = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override {key:?}: {part:?} is not a table")))?;
    }
    node.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}
