//! Dense bounded-variable revised simplex.
//!
//! Rows are brought to equality form with one signed slack per inequality.
//! Phase 1 minimises the sum of artificial variables from a slack/artificial
//! crash basis; phase 2 optimises the real objective from the feasible basis.
//! The basis inverse is held explicitly, updated by rank-one eta steps and
//! rebuilt from a partial-pivoting LU every `refactor_interval` pivots.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;

use super::{LinearProgram, LpSolution, LpStatus, RowSense};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SimplexOptions {
    pub feas_tol: f64,
    pub opt_tol: f64,
    /// Hard cap on pivots across both phases; `None` picks a size-based default.
    pub max_iter: Option<usize>,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub degeneracy_streak: usize,
    /// Pivots allowed under Bland's rule without progress before giving up.
    pub bland_limit: usize,
    /// Pivots between LU rebuilds of the basis inverse; raised to `m / 2`
    /// on large bases, where a rebuild costs `O(m^3)`.
    pub refactor_interval: usize,
    pub time_limit: Option<Duration>,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            feas_tol: 1e-9,
            opt_tol: 1e-9,
            max_iter: None,
            degeneracy_streak: 50,
            bland_limit: 100_000,
            refactor_interval: 100,
            time_limit: None,
        }
    }
}

const PIVOT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable resting at zero.
    FreeZero,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Column {
    Structural(usize),
    /// `sign * e_row`
    Unit { row: usize, sign: f64 },
}

struct Tableau<'a> {
    lp: &'a LinearProgram,
    m: usize,
    columns: Vec<Column>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    binv: DMatrix<f64>,
    first_artificial: usize,
    iterations: usize,
    since_refactor: usize,
    opts: SimplexOptions,
    deadline: Option<Instant>,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

enum DualEnd {
    Feasible,
    /// Row multipliers proving primal infeasibility.
    Infeasible(Vec<f64>),
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 8];
    let (ca, cb) = (a.chunks_exact(8), b.chunks_exact(8));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    let mut s = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}

impl<'a> Tableau<'a> {
    fn new(lp: &'a LinearProgram, opts: &SimplexOptions) -> Self {
        let m = lp.rhs.len();
        let n = lp.objective.len();
        let mut columns: Vec<Column> = (0..n).map(Column::Structural).collect();
        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        let mut slack_of_row = vec![None; m];
        for (i, sense) in lp.senses.iter().enumerate() {
            let sign = match sense {
                RowSense::Ge => -1.0,
                RowSense::Le => 1.0,
                RowSense::Eq => continue,
            };
            slack_of_row[i] = Some(columns.len());
            columns.push(Column::Unit { row: i, sign });
            lower.push(0.0);
            upper.push(f64::INFINITY);
        }
        let first_artificial = columns.len();

        let mut x = vec![0.0; first_artificial];
        let mut state = vec![VarState::AtLower; first_artificial];
        for j in 0..first_artificial {
            if lower[j].is_finite() {
                x[j] = lower[j];
            } else if upper[j].is_finite() {
                x[j] = upper[j];
                state[j] = VarState::AtUpper;
            } else {
                state[j] = VarState::FreeZero;
            }
        }

        // residual b - A x over the nonbasic starting point
        let mut resid = lp.rhs.clone();
        for j in 0..n {
            if x[j] != 0.0 {
                let (col, sign) = lp.column(j);
                for i in 0..m {
                    resid[i] -= sign * col[i] * x[j];
                }
            }
        }

        let mut basis = vec![usize::MAX; m];
        let mut binv = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            // Slack crash: keep the slack basic when its value is feasible.
            if let Some(sj) = slack_of_row[i] {
                let Column::Unit { sign, .. } = columns[sj] else { unreachable!() };
                let val = resid[i] * sign;
                if val >= 0.0 {
                    basis[i] = sj;
                    state[sj] = VarState::Basic;
                    x[sj] = val;
                    binv[(i, i)] = sign;
                    continue;
                }
            }
            let sign = if resid[i] >= 0.0 { 1.0 } else { -1.0 };
            let aj = columns.len();
            columns.push(Column::Unit { row: i, sign });
            lower.push(0.0);
            upper.push(f64::INFINITY);
            x.push(resid[i].abs());
            state.push(VarState::Basic);
            basis[i] = aj;
            binv[(i, i)] = sign;
        }

        let total = columns.len();
        let deadline = opts.time_limit.map(|t| Instant::now() + t);
        Tableau {
            lp,
            m,
            columns,
            lower,
            upper,
            cost: vec![0.0; total],
            x,
            state,
            basis,
            binv,
            first_artificial,
            iterations: 0,
            since_refactor: 0,
            opts: opts.clone(),
            deadline,
        }
    }

    /// All-slack starting basis when it is dual feasible: inequality rows
    /// only, nonnegative costs, every variable resting at a finite lower
    /// bound with no upper bound. Basic slacks may be negative.
    fn slack_basis(lp: &'a LinearProgram, opts: &SimplexOptions) -> Option<Self> {
        let n = lp.objective.len();
        let m = lp.rhs.len();
        let dual_feasible = lp.senses.iter().all(|s| *s != RowSense::Eq)
            && (0..n).all(|j| lp.objective[j] >= 0.0 && lp.lower[j].is_finite() && lp.upper[j] == f64::INFINITY);
        if !dual_feasible {
            return None;
        }
        let mut columns: Vec<Column> = (0..n).map(Column::Structural).collect();
        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        let mut x = lp.lower.clone();
        let mut state = vec![VarState::AtLower; n];
        let mut resid = lp.rhs.clone();
        for j in 0..n {
            if x[j] != 0.0 {
                let (col, sign) = lp.column(j);
                for (r, a) in resid.iter_mut().zip(col) {
                    *r -= sign * a * x[j];
                }
            }
        }
        let mut basis = Vec::with_capacity(m);
        let mut binv = DMatrix::<f64>::zeros(m, m);
        for (i, sense) in lp.senses.iter().enumerate() {
            let sign = if *sense == RowSense::Ge { -1.0 } else { 1.0 };
            basis.push(columns.len());
            columns.push(Column::Unit { row: i, sign });
            lower.push(0.0);
            upper.push(f64::INFINITY);
            x.push(sign * resid[i]);
            state.push(VarState::Basic);
            binv[(i, i)] = sign;
        }
        let total = columns.len();
        let mut cost = lp.objective.clone();
        cost.resize(total, 0.0);
        Some(Tableau {
            lp,
            m,
            columns,
            lower,
            upper,
            cost,
            x,
            state,
            basis,
            binv,
            first_artificial: total,
            iterations: 0,
            since_refactor: 0,
            opts: opts.clone(),
            deadline: opts.time_limit.map(|t| Instant::now() + t),
        })
    }

    /// Dual simplex from a dual-feasible basis in which every basic variable
    /// has only a lower bound. Leaves the basis primal feasible, or reports
    /// the row that proves infeasibility.
    fn run_dual(&mut self, max_iter: usize) -> Result<DualEnd> {
        let m = self.m;
        let total = self.columns.len();
        let tol = self.opts.feas_tol;
        let mut reduced = self.reduced_costs();
        let mut row_alpha = vec![0.0; total];
        let mut stored_alpha = vec![0.0; self.lp.matrix.ncols()];
        let mut fresh = false;
        loop {
            self.check_budget(max_iter)?;
            if self.since_refactor >= self.refactor_every() {
                self.refactor()?;
                reduced = self.reduced_costs();
                fresh = true;
            }

            // leaving row: dual steepest edge, violation^2 / ||e_r^T B^{-1}||^2
            let weights = self.binv_row_norms();
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                let j = self.basis[r];
                let viol = self.lower[j] - self.x[j];
                if viol > tol {
                    let score = viol * viol / weights[r];
                    if leave.map_or(true, |(_, v)| score > v) {
                        leave = Some((r, score));
                    }
                }
            }
            let Some((r, _)) = leave else {
                if fresh {
                    return Ok(DualEnd::Feasible);
                }
                self.refactor()?;
                reduced = self.reduced_costs();
                fresh = true;
                continue;
            };

            // row r of B^{-1} A over the nonbasic columns
            let rho: Vec<f64> = self.binv.row(r).iter().copied().collect();
            // one product per stored column, shared by its signed references
            for (k, col) in self.lp.matrix.as_slice().chunks_exact(m).enumerate() {
                stored_alpha[k] = dot(&rho, col);
            }
            for j in 0..total {
                row_alpha[j] = match (self.state[j], self.columns[j]) {
                    (VarState::Basic, _) => 0.0,
                    (_, Column::Structural(k)) => {
                        let c = self.lp.columns[k];
                        c.sign * stored_alpha[c.stored]
                    }
                    (_, Column::Unit { row, sign }) => sign * rho[row],
                };
            }

            // Harris ratio test on the dual step
            let mut theta_max = f64::INFINITY;
            for j in 0..total {
                let a = row_alpha[j];
                if self.state[j] != VarState::Basic && a < -PIVOT_TOL {
                    theta_max = theta_max.min((reduced[j].max(0.0) + self.opts.opt_tol) / -a);
                }
            }
            if theta_max == f64::INFINITY {
                return Ok(DualEnd::Infeasible(rho.iter().map(|v| -v).collect()));
            }
            let mut entering: Option<usize> = None;
            let mut best = 0.0;
            for j in 0..total {
                let a = row_alpha[j];
                if self.state[j] != VarState::Basic && a < -PIVOT_TOL && reduced[j].max(0.0) / -a <= theta_max {
                    if -a > best {
                        best = -a;
                        entering = Some(j);
                    }
                }
            }
            let q = entering.expect("a column attains the Harris bound");

            let alpha = self.ftran(q);
            let arq = alpha[r];
            if (arq - row_alpha[q]).abs() > 1e-7 * (1.0 + arq.abs()) {
                // the eta file has drifted; rebuild and retry this row
                if fresh {
                    return Err(Error::Solver("dual simplex pivot is numerically unstable".into()));
                }
                self.refactor()?;
                reduced = self.reduced_costs();
                fresh = true;
                continue;
            }

            let theta_d = reduced[q].max(0.0) / arq;
            for j in 0..total {
                if self.state[j] != VarState::Basic {
                    reduced[j] -= theta_d * row_alpha[j];
                }
            }
            let out = self.basis[r];
            let theta_p = (self.x[out] - self.lower[out]) / arq;
            for (i, &a) in alpha.iter().enumerate() {
                let j = self.basis[i];
                self.x[j] -= theta_p * a;
            }
            self.x[q] += theta_p;
            self.pivot(r, q, &alpha);
            self.x[out] = self.lower[out];
            self.state[out] = VarState::AtLower;
            reduced[q] = 0.0;
            reduced[out] = -theta_d;
            self.iterations += 1;
            fresh = false;
        }
    }

    /// Squared Euclidean norms of the rows of `B^{-1}`.
    fn binv_row_norms(&self) -> Vec<f64> {
        let m = self.m;
        let mut out = vec![0.0; m];
        for col in self.binv.as_slice().chunks_exact(m) {
            for (o, v) in out.iter_mut().zip(col) {
                *o += v * v;
            }
        }
        out
    }

    /// `c_j - pi^T a_j` for every column (zero on basic columns).
    fn reduced_costs(&self) -> Vec<f64> {
        let pi = self.duals();
        (0..self.columns.len())
            .map(|j| if self.state[j] == VarState::Basic { 0.0 } else { self.cost[j] - self.price(&pi, j) })
            .collect()
    }

    fn refactor_every(&self) -> usize {
        self.opts.refactor_interval.max(self.m / 2).max(1)
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.first_artificial
    }

    fn dense_column(&self, j: usize) -> Vec<f64> {
        match self.columns[j] {
            Column::Structural(k) => {
                let (col, sign) = self.lp.column(k);
                col.iter().map(|a| sign * a).collect()
            }
            Column::Unit { row, sign } => {
                let mut v = vec![0.0; self.m];
                v[row] = sign;
                v
            }
        }
    }

    /// `pi^T a_j`
    fn price(&self, pi: &[f64], j: usize) -> f64 {
        match self.columns[j] {
            Column::Structural(k) => {
                let (col, sign) = self.lp.column(k);
                sign * dot(pi, col)
            }
            Column::Unit { row, sign } => sign * pi[row],
        }
    }

    /// `B^{-1} a_j`
    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut out = vec![0.0; m];
        match self.columns[j] {
            Column::Structural(k) => {
                let (col, sign) = self.lp.column(k);
                let data = self.binv.as_slice();
                for (kk, &a) in col.iter().enumerate() {
                    let a = sign * a;
                    if a != 0.0 {
                        let bcol = &data[kk * m..(kk + 1) * m];
                        for i in 0..m {
                            out[i] += bcol[i] * a;
                        }
                    }
                }
            }
            Column::Unit { row, sign } => {
                let data = self.binv.as_slice();
                for i in 0..m {
                    out[i] = sign * data[row * m + i];
                }
            }
        }
        out
    }

    /// `pi = B^{-T} c_B`
    fn duals(&self) -> Vec<f64> {
        let m = self.m;
        let cb: Vec<f64> = self.basis.iter().map(|&j| self.cost[j]).collect();
        let data = self.binv.as_slice();
        (0..m).map(|k| dot(&cb, &data[k * m..(k + 1) * m])).collect()
    }

    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        let mut b = DMatrix::<f64>::zeros(m, m);
        for (pos, &j) in self.basis.iter().enumerate() {
            let col = self.dense_column(j);
            b.column_mut(pos).copy_from_slice(&col);
        }
        let inv = b
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Solver("basis matrix became singular".into()))?;
        self.binv = inv;
        self.since_refactor = 0;
        self.recompute_basic_values();
        Ok(())
    }

    fn recompute_basic_values(&mut self) {
        let m = self.m;
        let mut resid = self.lp.rhs.clone();
        for j in 0..self.columns.len() {
            if self.state[j] == VarState::Basic || self.x[j] == 0.0 {
                continue;
            }
            let xj = self.x[j];
            match self.columns[j] {
                Column::Structural(k) => {
                    let (col, sign) = self.lp.column(k);
                    for i in 0..m {
                        resid[i] -= sign * col[i] * xj;
                    }
                }
                Column::Unit { row, sign } => resid[row] -= sign * xj,
            }
        }
        let data = self.binv.as_slice();
        let mut xb = vec![0.0; m];
        for (k, &r) in resid.iter().enumerate() {
            if r != 0.0 {
                let bcol = &data[k * m..(k + 1) * m];
                for i in 0..m {
                    xb[i] += bcol[i] * r;
                }
            }
        }
        for (pos, &j) in self.basis.iter().enumerate() {
            self.x[j] = xb[pos];
        }
    }

    fn eligible(&self, j: usize, dj: f64) -> bool {
        let tol = self.opts.opt_tol;
        match self.state[j] {
            VarState::Basic => false,
            VarState::AtLower => dj < -tol && self.upper[j] > self.lower[j],
            VarState::AtUpper => dj > tol && self.upper[j] > self.lower[j],
            VarState::FreeZero => dj.abs() > tol,
        }
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[f64]) {
        let m = self.m;
        let ar = alpha[r];
        let data = self.binv.as_mut_slice();
        for k in 0..m {
            let col = &mut data[k * m..(k + 1) * m];
            let t = col[r] / ar;
            if t != 0.0 {
                for i in 0..m {
                    col[i] -= alpha[i] * t;
                }
            }
            col[r] = t;
        }
        self.basis[r] = q;
        self.state[q] = VarState::Basic;
        self.since_refactor += 1;
    }

    fn check_budget(&self, max_iter: usize) -> Result<()> {
        if self.iterations >= max_iter {
            return Err(Error::Solver(format!("iteration limit {max_iter} reached")));
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() > deadline {
                return Err(Error::Solver("time limit reached".into()));
            }
        }
        Ok(())
    }

    fn run_phase(&mut self, max_iter: usize) -> Result<PhaseEnd> {
        let mut degenerate = 0usize;
        let mut bland = false;
        let mut bland_steps = 0usize;
        let mut fresh = false;
        loop {
            self.check_budget(max_iter)?;
            if self.since_refactor >= self.refactor_every() {
                self.refactor()?;
                fresh = true;
            }
            let pi = self.duals();

            // pricing
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.columns.len() {
                if self.state[j] == VarState::Basic {
                    continue;
                }
                let dj = self.cost[j] - self.price(&pi, j);
                if !self.eligible(j, dj) {
                    continue;
                }
                if bland {
                    entering = Some((j, dj));
                    break;
                }
                if entering.map_or(true, |(_, best)| dj.abs() > best.abs()) {
                    entering = Some((j, dj));
                }
            }
            let Some((q, dq)) = entering else {
                if fresh {
                    return Ok(PhaseEnd::Optimal);
                }
                // confirm optimality against a clean factorisation
                self.refactor()?;
                fresh = true;
                continue;
            };

            let alpha = self.ftran(q);
            // dir = +1 when x_q increases
            let dir = if dq < 0.0 { 1.0 } else { -1.0 };
            let delta = self.opts.feas_tol;

            // Harris pass 1: relaxed step bound
            let mut theta_max = self.upper[q] - self.lower[q];
            if !theta_max.is_finite() {
                theta_max = f64::INFINITY;
            }
            for (i, &a) in alpha.iter().enumerate() {
                let rate = dir * a;
                let j = self.basis[i];
                if rate > PIVOT_TOL && self.lower[j].is_finite() {
                    theta_max = theta_max.min((self.x[j] - self.lower[j] + delta) / rate);
                } else if rate < -PIVOT_TOL && self.upper[j].is_finite() {
                    theta_max = theta_max.min((self.upper[j] - self.x[j] + delta) / -rate);
                }
            }
            if theta_max == f64::INFINITY {
                return Ok(PhaseEnd::Unbounded);
            }

            // pass 2: among rows blocking within theta_max, the largest pivot
            let mut leave: Option<(usize, f64, bool)> = None; // (row, theta, to_lower)
            let mut best_score = 0.0;
            for (i, &a) in alpha.iter().enumerate() {
                let rate = dir * a;
                let j = self.basis[i];
                let (theta_i, to_lower) = if rate > PIVOT_TOL && self.lower[j].is_finite() {
                    ((self.x[j] - self.lower[j]) / rate, true)
                } else if rate < -PIVOT_TOL && self.upper[j].is_finite() {
                    ((self.upper[j] - self.x[j]) / -rate, false)
                } else {
                    continue;
                };
                if theta_i > theta_max {
                    continue;
                }
                let better = if bland {
                    match leave {
                        None => true,
                        Some((r, th, _)) => {
                            theta_i < th - 1e-12 || (theta_i <= th + 1e-12 && j < self.basis[r])
                        }
                    }
                } else {
                    a.abs() > best_score
                };
                if better {
                    best_score = a.abs();
                    leave = Some((i, theta_i, to_lower));
                }
            }

            let flip_len = self.upper[q] - self.lower[q];
            let (theta, leaving) = match leave {
                Some((r, th, to_lower)) if !(flip_len.is_finite() && flip_len <= th) => {
                    (th.max(0.0), Some((r, to_lower)))
                }
                _ => (flip_len, None),
            };

            // primal update
            for (i, &a) in alpha.iter().enumerate() {
                let j = self.basis[i];
                self.x[j] -= theta * dir * a;
            }
            self.x[q] += theta * dir;
            self.iterations += 1;

            match leaving {
                None => {
                    // bound flip, basis unchanged
                    self.state[q] = if dir > 0.0 { VarState::AtUpper } else { VarState::AtLower };
                    self.x[q] = if dir > 0.0 { self.upper[q] } else { self.lower[q] };
                }
                Some((r, to_lower)) => {
                    let out = self.basis[r];
                    self.pivot(r, q, &alpha);
                    if to_lower {
                        self.x[out] = self.lower[out];
                        self.state[out] = VarState::AtLower;
                    } else {
                        self.x[out] = self.upper[out];
                        self.state[out] = VarState::AtUpper;
                    }
                    if self.is_artificial(out) {
                        // artificial variables never re-enter
                        self.upper[out] = self.lower[out];
                    }
                    fresh = false;
                }
            }

            if theta <= 1e-12 {
                degenerate += 1;
                if degenerate >= self.opts.degeneracy_streak {
                    bland = true;
                }
            } else {
                degenerate = 0;
                bland = false;
                bland_steps = 0;
            }
            if bland {
                bland_steps += 1;
                if bland_steps > self.opts.bland_limit {
                    return Err(Error::Solver(format!(
                        "cycling guard: {bland_steps} degenerate pivots under Bland's rule"
                    )));
                }
            }
        }
    }

    fn artificial_sum(&self) -> f64 {
        (self.first_artificial..self.columns.len()).map(|j| self.x[j].abs()).sum()
    }

    /// Drives basic artificials at zero out of the basis where a structural or
    /// slack pivot exists; the rest mark redundant rows.
    fn purge_artificials(&mut self) {
        for r in 0..self.m {
            let j = self.basis[r];
            if !self.is_artificial(j) {
                continue;
            }
            let row: Vec<f64> = self.binv.row(r).iter().copied().collect();
            let mut best: Option<(usize, f64)> = None;
            for k in 0..self.first_artificial {
                if self.state[k] == VarState::Basic || self.upper[k] == self.lower[k] {
                    continue;
                }
                let v = self.price(&row, k);
                if v.abs() > 1e-7 && best.map_or(true, |(_, b)| v.abs() > b.abs()) {
                    best = Some((k, v));
                }
            }
            if let Some((k, _)) = best {
                let alpha = self.ftran(k);
                // degenerate pivot: the artificial is at zero, so the
                // entering variable keeps its nonbasic value
                self.pivot(r, k, &alpha);
                self.state[j] = VarState::AtLower;
                self.x[j] = 0.0;
            }
            self.upper[j] = 0.0;
            self.lower[j] = 0.0;
        }
        for j in self.first_artificial..self.columns.len() {
            self.lower[j] = 0.0;
            self.upper[j] = 0.0;
        }
    }

    /// Farkas check for the phase-1 duals: `pi^T b > sup_{l <= x <= u} pi^T A x`.
    fn infeasibility_certified(&self, pi: &[f64]) -> bool {
        let tol = self.opts.opt_tol;
        let mut sup = 0.0;
        for j in 0..self.first_artificial {
            let g = self.price(pi, j);
            if g > tol {
                if !self.upper[j].is_finite() {
                    return false;
                }
                sup += g * self.upper[j];
            } else if g < -tol {
                if !self.lower[j].is_finite() {
                    return false;
                }
                sup += g * self.lower[j];
            } else if self.lower[j].is_finite() || self.upper[j].is_finite() {
                let bound = if self.lower[j].is_finite() { self.lower[j] } else { self.upper[j] };
                sup += (g * bound).max(0.0);
            }
        }
        let pib = dot(pi, &self.lp.rhs);
        pib - sup > self.opts.feas_tol
    }
}

pub fn solve_lp(lp: &LinearProgram, feas_tol: f64, opt_tol: f64) -> Result<LpSolution> {
    solve_lp_with(
        lp,
        &SimplexOptions {
            feas_tol,
            opt_tol,
            ..SimplexOptions::default()
        },
    )
}

pub fn solve_lp_with(lp: &LinearProgram, opts: &SimplexOptions) -> Result<LpSolution> {
    lp.validate()?;
    if lp.rhs.is_empty() {
        return solve_unconstrained(lp);
    }
    if let Some(mut t) = Tableau::slack_basis(lp, opts) {
        let max_iter = opts.max_iter.unwrap_or(1_000 + 50 * (t.m + t.columns.len()));
        match t.run_dual(max_iter)? {
            DualEnd::Feasible => return finish(lp, t, max_iter),
            DualEnd::Infeasible(pi) => {
                if !t.infeasibility_certified(&pi) {
                    return Err(Error::Solver("dual simplex infeasibility certificate failed".into()));
                }
                return Ok(LpSolution {
                    status: LpStatus::Infeasible,
                    x: t.x[..lp.objective.len()].to_vec(),
                    objective_value: f64::NAN,
                    iterations: t.iterations,
                    duals: pi,
                });
            }
        }
    }
    let m = lp.rhs.len();
    let n = lp.objective.len();
    let mut t = Tableau::new(lp, opts);
    let max_iter = opts.max_iter.unwrap_or(1_000 + 50 * (m + t.columns.len()));

    // phase 1
    if t.artificial_sum() > 0.0 {
        for j in t.first_artificial..t.columns.len() {
            t.cost[j] = 1.0;
        }
        t.run_phase(max_iter)?;
        if t.artificial_sum() > opts.feas_tol * (1.0 + m as f64).sqrt() {
            let pi = t.duals();
            if !t.infeasibility_certified(&pi) {
                return Err(Error::Solver(format!(
                    "phase 1 stalled at infeasibility {:e} without a Farkas certificate",
                    t.artificial_sum()
                )));
            }
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                x: t.x[..n].to_vec(),
                objective_value: f64::NAN,
                iterations: t.iterations,
                duals: pi,
            });
        }
        for j in t.first_artificial..t.columns.len() {
            t.cost[j] = 0.0;
        }
    }
    t.purge_artificials();
    t.refactor()?;

    for j in 0..n {
        t.cost[j] = lp.objective[j];
    }
    finish(lp, t, max_iter)
}

/// Each variable independently at its cheaper bound.
fn solve_unconstrained(lp: &LinearProgram) -> Result<LpSolution> {
    let mut x = Vec::with_capacity(lp.objective.len());
    let mut status = LpStatus::Optimal;
    for (j, &c) in lp.objective.iter().enumerate() {
        let (l, u) = (lp.lower[j], lp.upper[j]);
        let v = if c > 0.0 {
            l
        } else if c < 0.0 {
            u
        } else if l.is_finite() {
            l
        } else if u.is_finite() {
            u
        } else {
            0.0
        };
        if !v.is_finite() {
            status = LpStatus::Unbounded;
        }
        x.push(if v.is_finite() { v } else { 0.0 });
    }
    let objective_value = if status == LpStatus::Optimal { dot(&lp.objective, &x) } else { f64::NEG_INFINITY };
    Ok(LpSolution {
        status,
        x,
        objective_value,
        iterations: 0,
        duals: Vec::new(),
    })
}

/// Phase 2 from a primal feasible basis.
fn finish(lp: &LinearProgram, mut t: Tableau, max_iter: usize) -> Result<LpSolution> {
    let n = lp.objective.len();
    let end = t.run_phase(max_iter)?;
    let x = t.x[..n].to_vec();
    let objective_value = dot(&lp.objective, &x);
    let duals = t.duals();
    let status = match end {
        PhaseEnd::Optimal => LpStatus::Optimal,
        PhaseEnd::Unbounded => LpStatus::Unbounded,
    };
    Ok(LpSolution {
        status,
        x,
        objective_value,
        iterations: t.iterations,
        duals,
    })
}
