//! Synthetic data: isotropic Gaussian features, a sparse unit-norm ground
//! truth, and labels `y_i = sgn(<x_i, w*>) * xi_i` under one of the noise laws.

mod io;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numerics::{normal_cdf, Rng};

pub use io::{read_dataset, write_dataset, write_dataset_csv, DATASET_MAGIC, DATASET_VERSION};

/// Sign with the convention `sgn(0) = +1`.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruthShape {
    /// `e_j` for a single support index; requires `s = 1`.
    UnitCoordinate,
    /// All support entries equal to `1/sqrt(s)`.
    Flat,
    /// Support entries `+-1/sqrt(s)` with independent random signs on a random support.
    RandomSigns,
}

impl std::str::FromStr for TruthShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit_coordinate" | "unit" => Ok(TruthShape::UnitCoordinate),
            "flat" => Ok(TruthShape::Flat),
            "random_signs" | "random" => Ok(TruthShape::RandomSigns),
            other => Err(Error::Domain(format!("unknown truth shape '{other}'"))),
        }
    }
}

/// Sparse ground truth `w*` with unit l2 norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub dim: usize,
    pub support: Vec<usize>,
    pub values: Vec<f64>,
    pub l1_norm: f64,
    pub l2_norm: f64,
}

impl GroundTruth {
    /// Builds a truth from a sparse pattern, normalising it to unit l2 norm.
    pub fn from_sparse(dim: usize, support: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if support.len() != values.len() {
            return domain("support and values differ in length");
        }
        if support.is_empty() {
            return domain("ground truth needs a nonempty support");
        }
        if support.iter().any(|&j| j >= dim) {
            return domain(format!("support index out of range for dimension {dim}"));
        }
        let mut sorted = support.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != support.len() {
            return domain("support indices must be distinct");
        }
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return domain("ground truth values must be finite and not all zero");
        }
        let values: Vec<f64> = values.iter().map(|v| v / norm).collect();
        let l1_norm = values.iter().map(|v| v.abs()).sum();
        let l2_norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        Ok(GroundTruth {
            dim,
            support,
            values,
            l1_norm,
            l2_norm,
        })
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn dense(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.dim];
        for (&j, &v) in self.support.iter().zip(&self.values) {
            w[j] = v;
        }
        w
    }

    /// `<x, w*>` for a dense `x`.
    pub fn dot(&self, x: &[f64]) -> f64 {
        self.support.iter().zip(&self.values).map(|(&j, &v)| x[j] * v).sum()
    }
}

pub fn make_ground_truth(d: usize, s: usize, shape: TruthShape, rng: &mut Rng) -> Result<GroundTruth> {
    if s == 0 || s > d {
        return domain(format!("need 1 <= s <= d, got s={s}, d={d}"));
    }
    let scale = 1.0 / (s as f64).sqrt();
    match shape {
        TruthShape::UnitCoordinate => {
            if s != 1 {
                return domain(format!("unit_coordinate truth requires s = 1, got {s}"));
            }
            GroundTruth::from_sparse(d, vec![0], vec![1.0])
        }
        TruthShape::Flat => GroundTruth::from_sparse(d, (0..s).collect(), vec![scale; s]),
        TruthShape::RandomSigns => {
            let mut support = rand::seq::index::sample(rng, d, s).into_vec();
            support.sort_unstable();
            let values = (0..s)
                .map(|_| if rng.bernoulli(0.5) { scale } else { -scale })
                .collect();
            GroundTruth::from_sparse(d, support, values)
        }
    }
}

/// Law of the corruption variable `xi` given `z = <x, w*>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum NoiseModel {
    Noiseless,
    /// `xi = -1` with probability `sigma`, independently of the features.
    RandomFlip { sigma: f64 },
    /// `P(xi = +1 | z) = e^{|z sigma|} / (1 + e^{|z sigma|})`.
    Logistic { sigma: f64 },
    /// `y = sgn(z + sigma N)`, recorded as `xi = y sgn(z)`.
    PreQuantGaussian { sigma: f64 },
}

impl NoiseModel {
    pub fn random_flip(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 0.5) {
            return domain(format!("random flip rate must lie in (0, 1/2), got {sigma}"));
        }
        Ok(NoiseModel::RandomFlip { sigma })
    }

    pub fn logistic(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return domain(format!("logistic sigma must be positive, got {sigma}"));
        }
        Ok(NoiseModel::Logistic { sigma })
    }

    pub fn pre_quant_gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return domain(format!("pre-quantisation sigma must be positive, got {sigma}"));
        }
        Ok(NoiseModel::PreQuantGaussian { sigma })
    }

    /// Parses the CLI/config spelling: `none`, `flip`, `logistic`, `prequant`.
    pub fn from_name(name: &str, sigma: Option<f64>) -> Result<Self> {
        let need = || sigma.ok_or_else(|| Error::Domain(format!("noise model '{name}' needs a sigma")));
        match name {
            "none" | "noiseless" => Ok(NoiseModel::Noiseless),
            "flip" | "random_flip" => NoiseModel::random_flip(need()?),
            "logistic" => NoiseModel::logistic(need()?),
            "prequant" | "pre_quant_gaussian" | "gaussian" => NoiseModel::pre_quant_gaussian(need()?),
            other => domain(format!("unknown noise model '{other}'")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NoiseModel::Noiseless => "noiseless",
            NoiseModel::RandomFlip { .. } => "random_flip",
            NoiseModel::Logistic { .. } => "logistic",
            NoiseModel::PreQuantGaussian { .. } => "pre_quant_gaussian",
        }
    }

    pub fn sigma(&self) -> f64 {
        match *self {
            NoiseModel::Noiseless => 0.0,
            NoiseModel::RandomFlip { sigma }
            | NoiseModel::Logistic { sigma }
            | NoiseModel::PreQuantGaussian { sigma } => sigma,
        }
    }

    pub fn is_noisy(&self) -> bool {
        !matches!(self, NoiseModel::Noiseless)
    }

    /// `P(xi = +1 | <x, w*> = z)`.
    pub fn prob_clean(&self, z: f64) -> f64 {
        match *self {
            NoiseModel::Noiseless => 1.0,
            NoiseModel::RandomFlip { sigma } => 1.0 - sigma,
            NoiseModel::Logistic { sigma } => {
                // e^a / (1 + e^a) with a >= 0, written to avoid overflow
                let a = (z * sigma).abs();
                1.0 / (1.0 + (-a).exp())
            }
            NoiseModel::PreQuantGaussian { sigma } => normal_cdf(z.abs() / sigma),
        }
    }
}

/// Draws the corruption `xi in {-1, +1}` for a sample with `<x, w*> = z_par`.
pub fn draw_xi(z_par: f64, model: &NoiseModel, rng: &mut Rng) -> i8 {
    match *model {
        NoiseModel::Noiseless => 1,
        NoiseModel::PreQuantGaussian { sigma } => {
            let y = sgn(z_par + sigma * rng.gaussian());
            (y * sgn(z_par)) as i8
        }
        _ => {
            if rng.bernoulli(model.prob_clean(z_par)) {
                1
            } else {
                -1
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub n: usize,
    pub d: usize,
    /// Row-major `n x d`.
    pub features: Vec<f64>,
    pub labels: Vec<i8>,
    pub xi: Vec<i8>,
    pub truth: GroundTruth,
    pub noise: NoiseModel,
    /// `(master_seed, stream_id)` of the stream that generated the samples.
    pub seed_record: (u64, u64),
}

impl Dataset {
    /// Assembles a dataset from explicit rows; `xi` is recomputed from the labels.
    pub fn from_parts(features: Vec<f64>, labels: Vec<i8>, truth: GroundTruth, noise: NoiseModel) -> Result<Self> {
        let d = truth.dim;
        let n = labels.len();
        if n == 0 || features.len() != n * d {
            return domain(format!("feature matrix has {} entries, expected {n} x {d}", features.len()));
        }
        if labels.iter().any(|&y| y != 1 && y != -1) {
            return domain("labels must be +1 or -1");
        }
        let xi = (0..n)
            .map(|i| labels[i] * sgn(truth.dot(&features[i * d..(i + 1) * d])) as i8)
            .collect();
        Ok(Dataset {
            n,
            d,
            features,
            labels,
            xi,
            truth,
            noise,
            seed_record: (0, 0),
        })
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    pub fn label(&self, i: usize) -> f64 {
        self.labels[i] as f64
    }

    /// Checks `labels[i] = sgn(<x_i, w*>) xi[i]` for every row.
    pub fn check_invariants(&self) -> Result<()> {
        for i in 0..self.n {
            let expect = sgn(self.truth.dot(self.row(i))) as i8 * self.xi[i];
            if expect != self.labels[i] {
                return Err(Error::Format(format!("row {i} violates y = sgn(<x, w*>) xi")));
            }
        }
        if !self.noise.is_noisy() && self.xi.iter().any(|&v| v != 1) {
            return Err(Error::Format("noiseless dataset has a corrupted label".into()));
        }
        Ok(())
    }

    /// Fraction of corrupted labels.
    pub fn corruption_rate(&self) -> f64 {
        self.xi.iter().filter(|&&v| v < 0).count() as f64 / self.n as f64
    }
}

pub fn generate(n: usize, truth: &GroundTruth, model: &NoiseModel, rng: &mut Rng) -> Result<Dataset> {
    if n == 0 {
        return domain("need at least one sample");
    }
    let d = truth.dim;
    let seed_record = (rng.master_seed(), rng.stream_id());
    let mut features = vec![0.0; n * d];
    let mut labels = Vec::with_capacity(n);
    let mut xi = Vec::with_capacity(n);
    for row in features.chunks_exact_mut(d) {
        rng.fill_gaussian(row);
        let z = truth.dot(row);
        let corruption = draw_xi(z, model, rng);
        labels.push(sgn(z) as i8 * corruption);
        xi.push(corruption);
    }
    Ok(Dataset {
        n,
        d,
        features,
        labels,
        xi,
        truth: truth.clone(),
        noise: *model,
        seed_record,
    })
}

/// Monte Carlo estimate of `P(sgn<x, w> != sgn<x, w*>)` over fresh `x ~ N(0, I_d)`.
///
/// Only the projection of `x` onto `span{w*, w}` affects either sign, and that
/// projection is a standard bivariate Gaussian in an orthonormal basis of the
/// span. Each test point therefore costs two normal draws regardless of `d`.
pub fn empirical_risk(w: &[f64], truth: &GroundTruth, n_test: usize, rng: &mut Rng) -> Result<f64> {
    if w.len() != truth.dim {
        return domain(format!("classifier has length {}, truth has dimension {}", w.len(), truth.dim));
    }
    let norm2: f64 = w.iter().map(|v| v * v).sum();
    if !(norm2 > 0.0) {
        return domain("empirical risk of the zero vector is undefined");
    }
    if n_test == 0 {
        return domain("need at least one test point");
    }
    let along = truth.dot(w);
    let across = (norm2 - along * along).max(0.0).sqrt();
    let mut wrong = 0usize;
    for _ in 0..n_test {
        let g_truth = rng.gaussian();
        let g_perp = rng.gaussian();
        let score = along * g_truth + across * g_perp;
        if sgn(score) != sgn(g_truth) {
            wrong += 1;
        }
    }
    Ok(wrong as f64 / n_test as f64)
}
