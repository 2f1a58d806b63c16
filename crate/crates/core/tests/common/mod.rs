//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use l1margin::datagen::{draw_xi, NoiseModel};
use l1margin::numerics::{normal_sf_inv, Rng};
use l1margin::theory::ReducedSample;
use rand::seq::SliceRandom;

/// Gaussian elimination with partial pivoting; `None` for a (numerically) singular system.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-11 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Optimal value of `min sum(u+ + u-)` s.t. `z_i . (u+ - u-) >= 1`, `u+-, >= 0`,
/// by enumerating every basis of the standard form `Z u+ - Z u- - s = 1`.
/// `z` holds the rows `y_i x_i`. `None` when no basis is feasible.
pub fn lp_vertex_oracle(z: &[Vec<f64>]) -> Option<f64> {
    let n = z.len();
    let d = z[0].len();
    let cols = 2 * d + n;
    let column = |j: usize| -> Vec<f64> {
        (0..n)
            .map(|i| {
                if j < d {
                    z[i][j]
                } else if j < 2 * d {
                    -z[i][j - d]
                } else if j - 2 * d == i {
                    -1.0
                } else {
                    0.0
                }
            })
            .collect()
    };
    let all: Vec<Vec<f64>> = (0..cols).map(column).collect();
    let mut best: Option<f64> = None;
    for_each_subset(cols, n, &mut |basis| {
        let a: Vec<Vec<f64>> = (0..n).map(|i| basis.iter().map(|&j| all[j][i]).collect()).collect();
        if let Some(x) = solve_dense(a, vec![1.0; n]) {
            if x.iter().all(|&v| v >= -1e-10) {
                let obj: f64 = basis.iter().zip(&x).filter(|(&j, _)| j < 2 * d).map(|(_, v)| v).sum();
                if best.map_or(true, |b| obj < b) {
                    best = Some(obj);
                }
            }
        }
    });
    best
}

/// `argmin ||w||^2` s.t. `<w, h> >= h_max`, `w >= 0`, `sum w = alpha`, by trying
/// every support with the inequality active or slack and keeping the
/// feasible candidate of least norm.
pub fn gamma_oracle(h: &[f64], alpha: f64) -> Vec<f64> {
    let d = h.len();
    let h1 = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut consider = |w: Vec<f64>| {
        let sum: f64 = w.iter().sum();
        let inner: f64 = w.iter().zip(h).map(|(a, b)| a * b).sum();
        if w.iter().all(|&v| v >= -1e-12) && (sum - alpha).abs() < 1e-9 && inner >= h1 - 1e-9 {
            let norm: f64 = w.iter().map(|v| v * v).sum();
            if best.as_ref().map_or(true, |(b, _)| norm < *b - 1e-15) {
                best = Some((norm, w));
            }
        }
    };
    for mask in 1u32..(1 << d) {
        let support: Vec<usize> = (0..d).filter(|&j| mask >> j & 1 == 1).collect();
        let k = support.len() as f64;
        // slack inequality: uniform on the support
        let mut w = vec![0.0; d];
        for &j in &support {
            w[j] = alpha / k;
        }
        consider(w);
        // active inequality: w_S = mu + nu h_S from the two equalities
        let p1: f64 = support.iter().map(|&j| h[j]).sum();
        let p2: f64 = support.iter().map(|&j| h[j] * h[j]).sum();
        if let Some(mn) = solve_dense(vec![vec![k, p1], vec![p1, p2]], vec![alpha, h1]) {
            let mut w = vec![0.0; d];
            for &j in &support {
                w[j] = mn[0] + mn[1] * h[j];
            }
            consider(w);
        }
    }
    best.expect("alpha >= 1 is always feasible").1
}

/// Latin-hypercube estimate of `E (1 - nu |Z0| - eta Z1)_+^2` for clean labels,
/// with `k` strata per coordinate.
pub fn lhs_noiseless_f(nu: f64, eta: f64, k: usize, rng: &mut Rng) -> f64 {
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    let kf = k as f64;
    let mut total = 0.0;
    for (i, &p) in perm.iter().enumerate() {
        let u0 = (i as f64 + rng.uniform()) / kf;
        let u1 = (p as f64 + rng.uniform()) / kf;
        let z0 = normal_sf_inv(0.5 * u0).unwrap();
        let z1 = normal_sf_inv(u1).unwrap();
        total += (1.0 - nu * z0 - eta * z1).max(0.0).powi(2);
    }
    total / kf
}

/// A reduced sample whose Gaussian coordinates are Latin-hypercube stratified;
/// labels are drawn from the noise law given the signed `z0`.
pub fn lhs_reduced_sample(model: &NoiseModel, k: usize, rng: &mut Rng) -> ReducedSample {
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    let kf = k as f64;
    let (mut a, mut b, mut xi) = (Vec::with_capacity(k), Vec::with_capacity(k), Vec::with_capacity(k));
    for (i, &p) in perm.iter().enumerate() {
        let z0 = normal_sf_inv((i as f64 + rng.uniform()) / kf).unwrap();
        let z1 = normal_sf_inv((p as f64 + rng.uniform()) / kf).unwrap();
        xi.push(draw_xi(z0, model, rng));
        a.push(z0.abs());
        b.push(z1);
    }
    ReducedSample::new(a, b, xi).unwrap()
}
