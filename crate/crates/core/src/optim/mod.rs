//! Solvers: a dense revised simplex for linear programs and the structured
//! least-norm QP that defines the gamma path.

mod gamma_qp;
mod simplex;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use gamma_qp::{prepare_magnitudes, solve_nonneg_qp_gamma, GammaProblem};
pub use simplex::{solve_lp, solve_lp_with, SimplexOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowSense {
    Ge,
    Le,
    Eq,
}

/// Column `j` of `A` is `sign * stored[:, stored_index]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColumnRef {
    pub stored: usize,
    pub sign: f64,
}

/// `min c^T x  s.t.  A x (>=|<=|=) b,  lower <= x <= upper`.
///
/// The columns of `A` are signed references into a stored matrix, so a
/// variable split `x = x_plus - x_minus` shares one copy of its column.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    /// `m x k` stored columns, column-major.
    pub matrix: DMatrix<f64>,
    /// One reference per variable.
    pub columns: Vec<ColumnRef>,
    pub rhs: Vec<f64>,
    pub senses: Vec<RowSense>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    /// Dense constructor with default bounds `x >= 0`.
    pub fn new(objective: Vec<f64>, matrix: DMatrix<f64>, senses: Vec<RowSense>, rhs: Vec<f64>) -> Result<Self> {
        let columns = (0..matrix.ncols()).map(|k| ColumnRef { stored: k, sign: 1.0 }).collect();
        LinearProgram::with_column_refs(objective, matrix, columns, senses, rhs)
    }

    /// Constructor over signed column references, with default bounds `x >= 0`.
    pub fn with_column_refs(
        objective: Vec<f64>,
        matrix: DMatrix<f64>,
        columns: Vec<ColumnRef>,
        senses: Vec<RowSense>,
        rhs: Vec<f64>,
    ) -> Result<Self> {
        let n = objective.len();
        let lp = LinearProgram {
            objective,
            matrix,
            columns,
            rhs,
            senses,
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        };
        lp.validate()?;
        Ok(lp)
    }

    /// Builds from row vectors; convenient for small hand-written programs.
    pub fn from_rows(objective: Vec<f64>, rows: &[(Vec<f64>, RowSense, f64)]) -> Result<Self> {
        let n = objective.len();
        if rows.iter().any(|(r, _, _)| r.len() != n) {
            return domain("every constraint row must have one coefficient per variable");
        }
        let matrix = DMatrix::from_fn(rows.len(), n, |i, j| rows[i].0[j]);
        let senses = rows.iter().map(|r| r.1).collect();
        let rhs = rows.iter().map(|r| r.2).collect();
        LinearProgram::new(objective, matrix, senses, rhs)
    }

    pub fn with_bounds(mut self, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        self.lower = lower;
        self.upper = upper;
        self.validate()?;
        Ok(self)
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Column `j` of the constraint matrix as a stored slice and its sign.
    #[inline]
    pub fn column(&self, j: usize) -> (&[f64], f64) {
        let m = self.num_rows();
        let r = self.columns[j];
        (&self.matrix.as_slice()[r.stored * m..(r.stored + 1) * m], r.sign)
    }

    /// Entry `A[i, j]`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let r = self.columns[j];
        r.sign * self.matrix[(i, r.stored)]
    }

    pub fn validate(&self) -> Result<()> {
        let (m, n) = (self.rhs.len(), self.objective.len());
        if self.matrix.nrows() != m {
            return domain(format!("matrix has {} rows, expected {m}", self.matrix.nrows()));
        }
        if self.columns.len() != n {
            return domain(format!("{} column references for {n} variables", self.columns.len()));
        }
        let k = self.matrix.ncols();
        if self.columns.iter().any(|r| r.stored >= k || !(r.sign == 1.0 || r.sign == -1.0)) {
            return domain("column references must point at a stored column with sign +-1");
        }
        if self.senses.len() != m || self.lower.len() != n || self.upper.len() != n {
            return domain("row senses or bounds have the wrong length");
        }
        let finite = |v: &f64| v.is_finite();
        if !self.objective.iter().all(finite) || !self.rhs.iter().all(finite) || !self.matrix.iter().all(finite) {
            return domain("linear program data must be finite");
        }
        for j in 0..n {
            let (l, u) = (self.lower[j], self.upper[j]);
            if l.is_nan() || u.is_nan() || l > u || l == f64::INFINITY || u == f64::NEG_INFINITY {
                return domain(format!("invalid bounds [{l}, {u}] on variable {j}"));
            }
        }
        Ok(())
    }

    /// Largest violation of the row senses and bounds at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut ax = vec![0.0; self.num_rows()];
        for (j, &xj) in x.iter().enumerate() {
            let (col, sign) = self.column(j);
            for (o, a) in ax.iter_mut().zip(col) {
                *o += sign * a * xj;
            }
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.num_rows() {
            let r = ax[i] - self.rhs[i];
            let v = match self.senses[i] {
                RowSense::Ge => (-r).max(0.0),
                RowSense::Le => r.max(0.0),
                RowSense::Eq => r.abs(),
            };
            worst = worst.max(v);
        }
        for j in 0..self.num_vars() {
            worst = worst.max(self.lower[j] - x[j]).max(x[j] - self.upper[j]);
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective_value: f64,
    pub iterations: usize,
    /// Row multipliers of the final basis (phase-1 multipliers when infeasible).
    pub duals: Vec<f64>,
}
