// SPDX-License-Identifier: MIT
//! Named data matrices and ordinary least squares with an intercept.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::PdagGraph;

/// Samples in rows, variables in named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    values: DMatrix<f64>,
}

impl Dataset {
    pub fn new(names: Vec<String>, values: DMatrix<f64>) -> Result<Self> {
        if names.len() != values.ncols() {
            return Err(Error::Data(format!("{} column names for {} columns", names.len(), values.ncols())));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::Data(format!("duplicate column '{a}'")));
            }
        }
        Ok(Dataset { names, values })
    }

    pub fn from_rows(names: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let p = names.len();
        if let Some((i, _)) = rows.iter().enumerate().find(|(_, r)| r.len() != p) {
            return Err(Error::Data(format!("row {} has the wrong number of fields", i + 1)));
        }
        let values = DMatrix::from_fn(rows.len(), p, |i, j| rows[i][j]);
        Dataset::new(names, values)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn n_rows(&self) -> usize {
        self.values.nrows()
    }

    /// Columns reordered to the node order of `g`. Every node needs a column;
    /// extra columns are dropped.
    pub fn aligned_to(&self, g: &PdagGraph) -> Result<Dataset> {
        let mut idx = Vec::with_capacity(g.n());
        for name in g.names() {
            let j = self
                .names
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| Error::Data(format!("no column for node '{name}'")))?;
            idx.push(j);
        }
        let values = self.values.select_columns(&idx);
        Ok(Dataset { names: g.names().to_vec(), values })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub intercept: f64,
    /// One per regressor, in the order given.
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub residual_variance: f64,
}

/// Least-squares fit of column `response` on the `regressors` columns plus an
/// intercept. `None` when the design is rank deficient or has no residual
/// degrees of freedom.
pub fn ols(data: &DMatrix<f64>, response: usize, regressors: &[usize]) -> Option<OlsFit> {
    let n = data.nrows();
    let k = regressors.len() + 1;
    if n <= k {
        return None;
    }
    let x = DMatrix::from_fn(n, k, |i, j| if j == 0 { 1.0 } else { data[(i, regressors[j - 1])] });
    let y: DVector<f64> = data.column(response).into_owned();
    let xtx = x.transpose() * &x;
    let chol = xtx.clone().cholesky()?;
    let beta = chol.solve(&(x.transpose() * &y));
    // guard against near-singular designs the factorization still accepts
    let diag_min = (0..k).map(|i| chol.l()[(i, i)].abs()).fold(f64::INFINITY, f64::min);
    let diag_max = (0..k).map(|i| chol.l()[(i, i)].abs()).fold(0.0, f64::max);
    if diag_min <= diag_max * 1e-7 {
        return None;
    }
    let resid = &y - &x * &beta;
    let sigma2 = resid.norm_squared() / (n - k) as f64;
    let inv = chol.inverse();
    Some(OlsFit {
        intercept: beta[0],
        coefficients: beta.iter().skip(1).copied().collect(),
        std_errors: (1..k).map(|j| (sigma2 * inv[(j, j)]).sqrt()).collect(),
        residual_variance: sigma2,
    })
}
