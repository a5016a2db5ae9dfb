//! Regularized FOCUSS: re-weighted least squares for sparse coefficients under
//! the cost `sum |c_i|^q + mu * ||f - U c||^2`, `0 < q <= 1`.
//!
//! Each step solves the ridge problem on the reweighted dictionary `A = U W`
//! with `W = diag(|c_prev|^(1 - q/2))`:
//!
//! ```text
//! c = W A^T (A A^T + lambda I)^-1 f = W (A^T A + lambda I)^-1 A^T f
//! ```
//!
//! That step is the exact minimizer of a quadratic majorizer of the cost with
//! `mu = q / (2 lambda)`, so the cost evaluated at that weight never increases.
//! [`fidelity_weight`] gives the mapping and the recorded trace uses it.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Init {
    /// One unweighted ridge solve.
    #[default]
    Ridge,
    /// All-ones vector.
    Ones,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FocussConfig {
    pub q: f64,
    pub lambda: f64,
    /// Relative threshold on `||c^k - c^{k-1}||`.
    pub epsilon: f64,
    pub max_iter: usize,
    /// Coefficients below `prune_floor * max|c|` are frozen at zero.
    pub prune_floor: f64,
    pub init: Init,
}

impl Default for FocussConfig {
    fn default() -> Self {
        FocussConfig {
            q: 0.5,
            lambda: 1e-8,
            epsilon: 1e-8,
            max_iter: 500,
            prune_floor: 1e-12,
            init: Init::Ridge,
        }
    }
}

impl FocussConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(Error::Parameter(format!(
                "q must lie in (0, 1], got {}",
                self.q
            )));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Parameter(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Parameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Parameter("max_iter must be positive".into()));
        }
        if !(self.prune_floor >= 0.0 && self.prune_floor < 1.0) {
            return Err(Error::Parameter(format!(
                "prune_floor must lie in [0, 1), got {}",
                self.prune_floor
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FocussResult {
    pub coefficients: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Cost at the initial vector and after every iteration.
    pub functional_trace: Vec<f64>,
    pub residual_norm: f64,
}

impl FocussResult {
    pub fn support(&self) -> Vec<usize> {
        support_of(&self.coefficients, 0.0)
    }
}

/// Indices with `|c_i| > tol * max|c|`.
pub fn support_of(c: &[f64], tol: f64) -> Vec<usize> {
    let peak = c.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if peak == 0.0 {
        return Vec::new();
    }
    (0..c.len()).filter(|&i| c[i].abs() > tol * peak).collect()
}

/// Residual weight `q / (2 lambda)` under which a step with regularization
/// `lambda` is a majorize-minimize step.
pub fn fidelity_weight(q: f64, lambda: f64) -> f64 {
    q / (2.0 * lambda)
}

fn check_dims(dict: &DMatrix<f64>, target: &[f64], coef: Option<&[f64]>) -> Result<()> {
    if dict.nrows() != target.len() {
        return Err(Error::Dimension {
            expected: dict.nrows(),
            found: target.len(),
        });
    }
    if let Some(c) = coef {
        if c.len() != dict.ncols() {
            return Err(Error::Dimension {
                expected: dict.ncols(),
                found: c.len(),
            });
        }
    }
    Ok(())
}

/// `sum |c_i|^q + lambda * ||target - dict c||^2`, with `|0|^q = 0`.
pub fn functional_value(
    c: &[f64],
    dict: &DMatrix<f64>,
    target: &[f64],
    q: f64,
    lambda: f64,
) -> Result<f64> {
    check_dims(dict, target, Some(c))?;
    Ok(sparsity(c, q) + lambda * residual(dict, target, c).norm_squared())
}

fn sparsity(c: &[f64], q: f64) -> f64 {
    c.iter()
        .filter(|v| **v != 0.0)
        .map(|v| v.abs().powf(q))
        .sum()
}

fn residual(dict: &DMatrix<f64>, target: &[f64], c: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(target) - dict * DVector::from_column_slice(c)
}

/// Which linear system a step solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepSystem {
    /// Smaller of the two.
    Auto,
    /// `(A^T A + lambda I)`, size = active coefficients.
    Coefficients,
    /// `(A A^T + lambda I)`, size = samples.
    Samples,
}

/// Dictionary with its Gram matrix and correlations cached across steps.
struct Problem<'a> {
    dict: &'a DMatrix<f64>,
    target: DVector<f64>,
    gram: DMatrix<f64>,
    corr: DVector<f64>,
}

impl<'a> Problem<'a> {
    fn new(dict: &'a DMatrix<f64>, target: &[f64]) -> Self {
        let target = DVector::from_column_slice(target);
        Problem {
            dict,
            gram: dict.tr_mul(dict),
            corr: dict.tr_mul(&target),
            target,
        }
    }

    fn step(&self, prev: &[f64], cfg: &FocussConfig, system: StepSystem) -> Result<Vec<f64>> {
        if let Some(i) = prev.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("coefficient {i} is not finite")));
        }
        let peak = prev.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let floor = cfg.prune_floor * peak;
        let exponent = 1.0 - 0.5 * cfg.q;
        let mut active = Vec::new();
        let mut weights = Vec::new();
        for (i, &c) in prev.iter().enumerate() {
            if c != 0.0 && c.abs() >= floor {
                let w = c.abs().powf(exponent);
                if !w.is_finite() {
                    return Err(Error::Numeric(format!("weight {i} is not finite")));
                }
                active.push(i);
                weights.push(w);
            }
        }
        let mut out = vec![0.0; prev.len()];
        if active.is_empty() {
            return Ok(out);
        }
        let k = active.len();
        let samples = self.dict.nrows();
        let use_samples = match system {
            StepSystem::Auto => k > samples,
            StepSystem::Coefficients => false,
            StepSystem::Samples => true,
        };
        let conditioning = Error::Conditioning { lambda: cfg.lambda };
        if use_samples {
            // scaled active columns A = U_a W
            let a = DMatrix::from_fn(samples, k, |r, j| self.dict[(r, active[j])] * weights[j]);
            let mut h = &a * a.transpose();
            for i in 0..samples {
                h[(i, i)] += cfg.lambda;
            }
            let chol = Cholesky::<f64, Dyn>::new(h).ok_or(conditioning)?;
            let y = chol.solve(&self.target);
            let z = a.tr_mul(&y);
            for j in 0..k {
                out[active[j]] = weights[j] * z[j];
            }
        } else {
            let mut h = DMatrix::from_fn(k, k, |i, j| {
                weights[i] * self.gram[(active[i], active[j])] * weights[j]
            });
            for i in 0..k {
                h[(i, i)] += cfg.lambda;
            }
            let rhs = DVector::from_fn(k, |j, _| weights[j] * self.corr[active[j]]);
            let chol = Cholesky::<f64, Dyn>::new(h).ok_or(conditioning)?;
            let z = chol.solve(&rhs);
            for j in 0..k {
                out[active[j]] = weights[j] * z[j];
            }
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric(
                "step produced non-finite coefficients".into(),
            ));
        }
        Ok(out)
    }
}

/// One re-weighted update from `c_prev`.
pub fn focuss_step(
    c_prev: &[f64],
    dict: &DMatrix<f64>,
    target: &[f64],
    cfg: &FocussConfig,
) -> Result<Vec<f64>> {
    focuss_step_with(c_prev, dict, target, cfg, StepSystem::Auto)
}

/// [`focuss_step`] with an explicit choice of linear system.
pub fn focuss_step_with(
    c_prev: &[f64],
    dict: &DMatrix<f64>,
    target: &[f64],
    cfg: &FocussConfig,
    system: StepSystem,
) -> Result<Vec<f64>> {
    check_dims(dict, target, Some(c_prev))?;
    Problem::new(dict, target).step(c_prev, cfg, system)
}

/// Iterates [`focuss_step`] from the configured start until the relative
/// coefficient change drops to `epsilon` or `max_iter` is spent.
pub fn run_focuss(dict: &DMatrix<f64>, target: &[f64], cfg: &FocussConfig) -> Result<FocussResult> {
    cfg.validate()?;
    check_dims(dict, target, None)?;
    if let Some(column) = (0..dict.ncols()).find(|&j| dict.column(j).iter().all(|v| *v == 0.0)) {
        return Err(Error::Dictionary { column });
    }
    let problem = Problem::new(dict, target);
    let mu = fidelity_weight(cfg.q, cfg.lambda);
    let cost = |c: &[f64]| sparsity(c, cfg.q) + mu * residual(dict, target, c).norm_squared();

    let mut prev = match cfg.init {
        Init::Ridge => ridge_from_gram(&problem.gram, &problem.corr, cfg.lambda)?,
        Init::Ones => vec![1.0; dict.ncols()],
    };
    let mut trace = vec![cost(&prev)];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        let next = problem.step(&prev, cfg, StepSystem::Auto)?;
        iterations += 1;
        trace.push(cost(&next));
        let change = next
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let scale = prev.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
        prev = next;
        if change <= cfg.epsilon * scale {
            converged = true;
            break;
        }
    }
    let residual_norm = residual(dict, target, &prev).norm();
    Ok(FocussResult {
        coefficients: prev,
        iterations,
        converged,
        functional_trace: trace,
        residual_norm,
    })
}

fn ridge_from_gram(gram: &DMatrix<f64>, corr: &DVector<f64>, lambda: f64) -> Result<Vec<f64>> {
    let mut h = gram.clone();
    for i in 0..h.nrows() {
        h[(i, i)] += lambda;
    }
    spd_solve(h, corr, lambda).map(|x| x.as_slice().to_vec())
}

/// Cholesky solve; at `lambda = 0` a numerically singular system is rejected.
fn spd_solve(h: DMatrix<f64>, rhs: &DVector<f64>, lambda: f64) -> Result<DVector<f64>> {
    let diag_max = h.diagonal().amax();
    let chol = Cholesky::<f64, Dyn>::new(h).ok_or(Error::Conditioning { lambda })?;
    if lambda == 0.0 {
        let pivot_min = chol
            .l_dirty()
            .diagonal()
            .iter()
            .fold(f64::INFINITY, |a, v| a.min(v.abs()));
        if pivot_min * pivot_min <= 1e-14 * diag_max {
            return Err(Error::Conditioning { lambda });
        }
    }
    Ok(chol.solve(rhs))
}

/// `argmin ||target - dict c||^2 + lambda ||c||^2`.
pub fn ridge_solve(dict: &DMatrix<f64>, target: &[f64], lambda: f64) -> Result<Vec<f64>> {
    check_dims(dict, target, None)?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Parameter(format!(
            "lambda must be >= 0, got {lambda}"
        )));
    }
    let f = DVector::from_column_slice(target);
    if dict.ncols() <= dict.nrows() {
        let gram = dict.tr_mul(dict);
        let corr = dict.tr_mul(&f);
        ridge_from_gram(&gram, &corr, lambda)
    } else {
        let mut h = dict * dict.transpose();
        for i in 0..h.nrows() {
            h[(i, i)] += lambda;
        }
        let y = spd_solve(h, &f, lambda)?;
        Ok(dict.tr_mul(&y).as_slice().to_vec())
    }
}
