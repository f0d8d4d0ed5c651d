//! Classical least-squares SVM numerics.
//!
//! Training solves the bordered system
//!
//! ```text
//! [ 0   1ᵀ          ] [ b ]   [ 0 ]
//! [ 1   K + γ⁻¹ I   ] [ α ] = [ y ]
//! ```
//!
//! by dense LU with partial pivoting. The same solve is the reference that the
//! simulated quantum training is checked against.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dataset::PairSubset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelSpec {
    Linear,
    Rbf { sigma: f64 },
}

impl KernelSpec {
    pub fn rbf(sigma: f64) -> Result<Self> {
        if sigma > 0.0 && sigma.is_finite() {
            Ok(Self::Rbf { sigma })
        } else {
            Err(Error::InvalidArgument(format!("rbf sigma must be > 0, got {sigma}")))
        }
    }

    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            Self::Linear => dot(a, b),
            Self::Rbf { sigma } => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-d2 / (2.0 * sigma * sigma)).exp()
            }
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(pub DMatrix<f64>);

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

pub fn gram_matrix(subset: &PairSubset, kernel: KernelSpec) -> Result<GramMatrix> {
    let xs = subset.features();
    gram_from_points(&xs, kernel)
}

pub fn gram_from_points(xs: &[&[f64]], kernel: KernelSpec) -> Result<GramMatrix> {
    let m = xs.len();
    if m == 0 {
        return Err(Error::NoExamples);
    }
    let d = xs[0].len();
    if let Some(bad) = xs.iter().find(|x| x.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: bad.len(),
        });
    }
    let mut k = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = kernel.eval(xs[i], xs[j]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    #[cfg(debug_assertions)]
    {
        let scale = k.trace().abs().max(1.0);
        let min_eig = k.clone().symmetric_eigenvalues().min();
        debug_assert!(min_eig >= -1e-9 * scale, "Gram matrix not PSD: {min_eig}");
    }
    Ok(GramMatrix(k))
}

/// Bordered LS-SVM system matrix `[[0, 1ᵀ], [1, K + γ⁻¹I]]`.
pub fn system_matrix(k: &GramMatrix, gamma: f64) -> DMatrix<f64> {
    let m = k.dim();
    let mut f = DMatrix::zeros(m + 1, m + 1);
    for i in 0..m {
        f[(0, i + 1)] = 1.0;
        f[(i + 1, 0)] = 1.0;
        for j in 0..m {
            f[(i + 1, j + 1)] = k.0[(i, j)];
        }
        f[(i + 1, i + 1)] += 1.0 / gamma;
    }
    f
}

/// Right-hand side `(0, y)`.
pub fn system_rhs(y: &[f64]) -> DVector<f64> {
    let mut r = DVector::zeros(y.len() + 1);
    r.rows_mut(1, y.len()).copy_from_slice(y);
    r
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LssvmModel {
    pub b: f64,
    pub alpha: Vec<f64>,
    pub gamma: f64,
    pub kernel: KernelSpec,
    /// `(f, s)` for a pair classifier. One-vs-all models use `(class, 0)`.
    pub pair: (usize, usize),
    /// Training points `x_l`, aligned with `alpha`.
    pub support: Vec<Vec<f64>>,
}

impl LssvmModel {
    pub fn d(&self) -> usize {
        self.support.first().map_or(0, Vec::len)
    }

    /// Relative residual of the bordered system and the Σα constraint value.
    pub fn residuals(&self, y: &[f64]) -> Result<(f64, f64)> {
        let pts: Vec<&[f64]> = self.support.iter().map(Vec::as_slice).collect();
        let k = gram_from_points(&pts, self.kernel)?;
        let f = system_matrix(&k, self.gamma);
        let mut sol = DVector::zeros(self.alpha.len() + 1);
        sol[0] = self.b;
        sol.rows_mut(1, self.alpha.len()).copy_from_slice(&self.alpha);
        let rhs = system_rhs(y);
        let rel = (&f * sol - &rhs).norm() / rhs.norm();
        Ok((rel, self.alpha.iter().sum()))
    }
}

/// Solves for `(b, α)` given the Gram matrix of `subset`.
pub fn solve_lssvm(k: &GramMatrix, y: &[f64], gamma: f64) -> Result<(f64, Vec<f64>)> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidArgument(format!("gamma must be > 0, got {gamma}")));
    }
    if y.len() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            got: y.len(),
        });
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(Error::InvalidArgument("labels must be ±1".into()));
    }
    let f = system_matrix(k, gamma);
    let rhs = system_rhs(y);
    let sol = f.clone().lu().solve(&rhs).ok_or(Error::Singular)?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular);
    }
    let alpha = sol.rows(1, y.len()).iter().copied().collect();
    Ok((sol[0], alpha))
}

/// Builds the Gram matrix for `subset` and trains a pair model on it.
pub fn train_pair(subset: &PairSubset, kernel: KernelSpec, gamma: f64) -> Result<LssvmModel> {
    let k = gram_matrix(subset, kernel)?;
    let (b, alpha) = solve_lssvm(&k, &subset.binary_labels, gamma)?;
    Ok(LssvmModel {
        b,
        alpha,
        gamma,
        kernel,
        pair: (subset.f, subset.s),
        support: subset.examples.iter().map(|e| e.features.clone()).collect(),
    })
}

/// Pre-sign margin `Σ α_l K(x_l, x) + b`.
pub fn decision(model: &LssvmModel, x: &[f64]) -> Result<f64> {
    let d = model.d();
    if x.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: x.len(),
        });
    }
    Ok(model
        .alpha
        .iter()
        .zip(&model.support)
        .map(|(a, xl)| a * model.kernel.eval(xl, x))
        .sum::<f64>()
        + model.b)
}

/// `+1` for a strictly positive margin, `-1` otherwise (a zero margin votes for `s`).
pub fn classify_binary(margin: f64) -> i8 {
    if margin > 0.0 {
        1
    } else {
        -1
    }
}
