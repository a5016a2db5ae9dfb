//! The fixed low-frequency noise subspace and its orthogonal projectors.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Signal;

/// Default relative rank tolerance for [`orthonormalize`].
pub const RANK_TOL: f64 = 1e-10;

/// Span of the Fourier modes `|n| <= n_max` on a uniform grid of `length` samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSubspaceSpec {
    pub length: usize,
    pub n_max: usize,
    /// Whether the constant (n = 0) mode belongs to the noise subspace.
    pub include_dc: bool,
}

impl Default for NoiseSubspaceSpec {
    fn default() -> Self {
        NoiseSubspaceSpec {
            length: 403,
            n_max: 21,
            include_dc: true,
        }
    }
}

impl NoiseSubspaceSpec {
    pub fn new(length: usize, n_max: usize) -> Self {
        NoiseSubspaceSpec {
            length,
            n_max,
            include_dc: true,
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.n_max + usize::from(self.include_dc)
    }

    pub fn validate(&self) -> Result<()> {
        if 2 * self.n_max + 1 > self.length {
            return Err(Error::Parameter(format!(
                "noise subspace with n_max = {} needs at least {} samples, got {}",
                self.n_max,
                2 * self.n_max + 1,
                self.length
            )));
        }
        if self.dim() == 0 {
            return Err(Error::Parameter("noise subspace is empty".into()));
        }
        Ok(())
    }
}

/// Real trig atoms spanning the noise subspace: the constant column (if
/// included), then `cos` and `sin` for `n = 1..=n_max`.
pub fn build_noise_atoms(spec: &NoiseSubspaceSpec) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let len = spec.length;
    let mut atoms = DMatrix::zeros(len, spec.dim());
    let mut col = 0;
    if spec.include_dc {
        atoms.column_mut(0).fill(1.0);
        col = 1;
    }
    for n in 1..=spec.n_max {
        for i in 0..len {
            // n*i reduced mod L keeps the phase argument small
            let phase = 2.0 * PI * ((n * i) % len) as f64 / len as f64;
            atoms[(i, col)] = phase.cos();
            atoms[(i, col + 1)] = phase.sin();
        }
        col += 2;
    }
    Ok(atoms)
}

/// Orthogonal projector held as an explicit orthonormal basis `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    q: DMatrix<f64>,
}

impl Projector {
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn rank(&self) -> usize {
        self.q.ncols()
    }

    /// Ambient dimension `L`.
    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    /// Noise projector for a Fourier spec with the default rank tolerance.
    pub fn for_noise(spec: &NoiseSubspaceSpec) -> Result<Self> {
        orthonormalize(&build_noise_atoms(spec)?, RANK_TOL)
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: len,
            });
        }
        Ok(())
    }

    /// Returns `(Q Q^T x, x - Q Q^T x)` computed from a single `Q^T x`.
    pub fn split(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check(x.len())?;
        let v = DVector::from_column_slice(x);
        let onto = &self.q * self.q.tr_mul(&v);
        let out = x.iter().zip(onto.iter()).map(|(a, b)| a - b).collect();
        Ok((onto.as_slice().to_vec(), out))
    }
}

/// Pivoted Gram-Schmidt with one re-orthogonalization pass.
///
/// Columns whose residual norm falls below `tol` times the largest input column
/// norm are dropped.
pub fn orthonormalize(atoms: &DMatrix<f64>, tol: f64) -> Result<Projector> {
    if atoms.ncols() == 0 || atoms.nrows() == 0 {
        return Err(Error::Parameter("atom matrix is empty".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Parameter(format!(
            "rank tolerance must be positive, got {tol}"
        )));
    }
    let scale = atoms.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::RankZero);
    }
    let threshold = tol * scale;
    let mut work: Vec<DVector<f64>> = atoms.column_iter().map(|c| c.into_owned()).collect();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut remaining: Vec<usize> = (0..work.len()).collect();
    while !remaining.is_empty() {
        let (pos, &pick) = remaining
            .iter()
            .enumerate()
            .max_by(|a, b| work[*a.1].norm().total_cmp(&work[*b.1].norm()))
            .expect("nonempty");
        remaining.swap_remove(pos);
        let mut v = work[pick].clone();
        for _ in 0..2 {
            for q in &basis {
                let r = q.dot(&v);
                v.axpy(-r, q, 1.0);
            }
        }
        let norm = v.norm();
        if norm < threshold {
            // every remaining column has a residual no larger than this one
            break;
        }
        let q = v / norm;
        for &k in &remaining {
            let r = q.dot(&work[k]);
            work[k].axpy(-r, &q, 1.0);
        }
        basis.push(q);
    }
    if basis.is_empty() {
        return Err(Error::RankZero);
    }
    Ok(Projector {
        q: DMatrix::from_columns(&basis),
    })
}

/// `P_W s = s - Q Q^T s`: removes the noise-subspace component.
pub fn project_out(p: &Projector, s: &Signal) -> Result<Signal> {
    let (_, out) = p.split(s.samples())?;
    s.with_samples(out)
}

/// `Q Q^T s`: the noise-subspace component.
pub fn project_onto(p: &Projector, s: &Signal) -> Result<Signal> {
    let (onto, _) = p.split(s.samples())?;
    s.with_samples(onto)
}

/// Column-wise [`project_out`]: the dictionary of projected atoms.
pub fn project_atoms(p: &Projector, design: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    p.check(design.nrows())?;
    let coeffs = p.q.tr_mul(design);
    Ok(design - &p.q * coeffs)
}
