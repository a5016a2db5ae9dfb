//! End-to-end separation, the FFT band-stop baseline and the q sweep.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Stage};
use crate::focuss::{run_focuss, FocussConfig, FocussResult};
use crate::signal::Signal;
use crate::spline::{curvature_knots, design_matrix, BSplineBasis, CurvatureConfig, Partition};
use crate::subspace::{project_atoms, NoiseSubspaceSpec, Projector};

/// Below this fraction of the input's peak, the noise-free target is treated
/// as exactly zero: it holds nothing but rounding from the projection.
const TARGET_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeparationConfig {
    pub noise: NoiseSubspaceSpec,
    pub spline_order: usize,
    /// Interior knot count of the adaptive partition.
    pub knot_target: usize,
    pub curvature: CurvatureConfig,
    pub solver: FocussConfig,
    /// Fixed partition; bypasses curvature-driven placement when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub knots: Option<Partition>,
}

impl Default for SeparationConfig {
    fn default() -> Self {
        SeparationConfig {
            noise: NoiseSubspaceSpec::default(),
            spline_order: 4,
            knot_target: 341,
            curvature: CurvatureConfig::default(),
            solver: FocussConfig::default(),
            knots: None,
        }
    }
}

impl SeparationConfig {
    pub fn validate(&self) -> Result<()> {
        self.noise.validate()?;
        self.curvature.validate()?;
        self.solver.validate()?;
        if self.spline_order < 1 {
            return Err(Error::Parameter("spline_order must be at least 1".into()));
        }
        let interior = self.knots.as_ref().map_or(self.knot_target, Partition::len);
        if interior + self.spline_order > self.noise.length {
            return Err(Error::Parameter(format!(
                "{} knots of order {} exceed the {} samples",
                interior, self.spline_order, self.noise.length
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationResult {
    /// Recovered signal component.
    pub f_v: Signal,
    /// `f - f_v`.
    pub noise_estimate: Signal,
    pub knots: Partition,
    /// Curvature critical points seeding the partition; `None` for fixed knots.
    pub critical_points: Option<usize>,
    pub solver: FocussResult,
    /// Input with its noise-subspace component removed.
    pub f_w: Signal,
}

/// Everything in a separation that does not depend on the solver settings.
#[derive(Debug, Clone)]
pub struct PreparedSeparation {
    input: Signal,
    f_w: Signal,
    knots: Partition,
    critical_points: Option<usize>,
    design: DMatrix<f64>,
    dictionary: DMatrix<f64>,
}

impl PreparedSeparation {
    pub fn new(f: &Signal, cfg: &SeparationConfig) -> Result<Self> {
        cfg.validate().map_err(|e| e.at(Stage::Validation))?;
        if f.len() != cfg.noise.length {
            return Err(Error::Dimension {
                expected: cfg.noise.length,
                found: f.len(),
            }
            .at(Stage::Validation));
        }

        let projector = Projector::for_noise(&cfg.noise).map_err(|e| e.at(Stage::Projection))?;
        let (_, mut target) = projector
            .split(f.samples())
            .map_err(|e| e.at(Stage::Projection))?;
        let peak = |x: &[f64]| x.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        if peak(&target) <= TARGET_FLOOR * peak(f.samples()) {
            target.iter_mut().for_each(|v| *v = 0.0);
        }
        let f_w = f
            .with_samples(target)
            .map_err(|e| e.at(Stage::Projection))?;

        let (knots, critical_points) = match &cfg.knots {
            Some(p) => (p.clone(), None),
            None => {
                let p = curvature_knots(&f_w, cfg.knot_target, &cfg.curvature)
                    .map_err(|e| e.at(Stage::Knots))?;
                let seeds = crate::spline::critical_points(&f_w, &cfg.curvature)
                    .map_err(|e| e.at(Stage::Knots))?
                    .len();
                (p, Some(seeds))
            }
        };

        let basis =
            BSplineBasis::clamped(&knots, cfg.spline_order).map_err(|e| e.at(Stage::Dictionary))?;
        let grid = sample_grid(f, &knots);
        let design = design_matrix(&basis, &grid).map_err(|e| e.at(Stage::Dictionary))?;
        let dictionary = project_atoms(&projector, &design).map_err(|e| e.at(Stage::Dictionary))?;
        Ok(PreparedSeparation {
            input: f.clone(),
            f_w,
            knots,
            critical_points,
            design,
            dictionary,
        })
    }

    pub fn f_w(&self) -> &Signal {
        &self.f_w
    }

    pub fn knots(&self) -> &Partition {
        &self.knots
    }

    /// Raw B-spline design matrix on the sample grid.
    pub fn design(&self) -> &DMatrix<f64> {
        &self.design
    }

    /// Projected atoms `u_i`.
    pub fn dictionary(&self) -> &DMatrix<f64> {
        &self.dictionary
    }

    pub fn solve(&self, solver: &FocussConfig) -> Result<SeparationResult> {
        let result = run_focuss(&self.dictionary, self.f_w.samples(), solver)
            .map_err(|e| e.at(Stage::Solver))?;
        let f_v = &self.design * DVector::from_column_slice(&result.coefficients);
        let noise: Vec<f64> = self
            .input
            .samples()
            .iter()
            .zip(f_v.iter())
            .map(|(a, b)| a - b)
            .collect();
        let wrap = |e: Error| e.at(Stage::Solver);
        Ok(SeparationResult {
            f_v: self
                .input
                .with_samples(f_v.as_slice().to_vec())
                .map_err(wrap)?,
            noise_estimate: self.input.with_samples(noise).map_err(wrap)?,
            knots: self.knots.clone(),
            critical_points: self.critical_points,
            solver: result,
            f_w: self.f_w.clone(),
        })
    }
}

/// Sample times mapped into `[c, d]`; times within rounding of an end are clamped.
fn sample_grid(f: &Signal, knots: &Partition) -> Vec<f64> {
    let slack = 1e-9 * (knots.d() - knots.c());
    f.times()
        .into_iter()
        .map(|t| {
            if t < knots.c() && t >= knots.c() - slack {
                knots.c()
            } else if t > knots.d() && t <= knots.d() + slack {
                knots.d()
            } else {
                t
            }
        })
        .collect()
}

/// Splits `f` into its spline-sparse component and the remainder.
pub fn separate(f: &Signal, cfg: &SeparationConfig) -> Result<SeparationResult> {
    PreparedSeparation::new(f, cfg)?.solve(&cfg.solver)
}

/// Band-stop by DFT: zeroes bins `|n| <= n_max` (bin 0 kept when the subspace
/// excludes DC) and transforms back.
pub fn fft_baseline(f: &Signal, spec: &NoiseSubspaceSpec) -> Result<Signal> {
    spec.validate()?;
    let len = f.len();
    if len != spec.length {
        return Err(Error::Dimension {
            expected: spec.length,
            found: len,
        });
    }
    let mut planner = FftPlanner::<f64>::new();
    let mut buf: Vec<Complex<f64>> = f.samples().iter().map(|&v| Complex::new(v, 0.0)).collect();
    planner.plan_fft_forward(len).process(&mut buf);
    for (k, bin) in buf.iter_mut().enumerate() {
        let n = k.min(len - k);
        if n <= spec.n_max && (n > 0 || spec.include_dc) {
            *bin = Complex::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let scale = 1.0 / len as f64;
    debug_assert!(
        buf.iter().map(|z| z.im.abs()).fold(0.0, f64::max) * scale <= 1e-10 * f.norm().max(1e-300),
        "imaginary residue after inverse transform"
    );
    f.with_samples(buf.iter().map(|z| z.re * scale).collect())
}

/// Euclidean norm of `estimate - truth`.
pub fn error_norm(estimate: &Signal, truth: &Signal) -> Result<f64> {
    if estimate.len() != truth.len() {
        return Err(Error::Dimension {
            expected: truth.len(),
            found: estimate.len(),
        });
    }
    Ok(estimate
        .samples()
        .iter()
        .zip(truth.samples())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// `{step, 2 step, ..., 1}`; when `step` divides 1 the points are `k / n` exactly.
pub fn q_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::Parameter(format!(
            "grid step must lie in (0, 1], got {step}"
        )));
    }
    let n = (1.0 / step + 1e-9).floor() as usize;
    let exact = (n as f64 * step - 1.0).abs() < 1e-9;
    Ok((1..=n)
        .map(|k| {
            if exact {
                k as f64 / n as f64
            } else {
                k as f64 * step
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub q: f64,
    /// `||f^q - f^s||`; `None` when the separation failed.
    pub error: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub best_q: f64,
    pub best_error: f64,
    pub fft_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub best_q: f64,
    pub best_error: f64,
    pub fft_error: f64,
}

impl SweepResult {
    pub fn q_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.q).collect()
    }

    /// Errors per grid point, NaN where the separation failed.
    pub fn errors(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| p.error.unwrap_or(f64::NAN))
            .collect()
    }

    pub fn summary(&self) -> SweepSummary {
        SweepSummary {
            best_q: self.best_q,
            best_error: self.best_error,
            fft_error: self.fft_error,
        }
    }

    /// `q,error,converged,iterations`, one row per grid point.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "q,error,converged,iterations")?;
        for p in &self.points {
            let err = p
                .error
                .map_or_else(|| "nan".to_string(), |e| format!("{e:.16e}"));
            writeln!(w, "{},{},{},{}", p.q, err, p.converged, p.iterations)?;
        }
        w.flush()
    }
}

/// How the per-q separations of a sweep are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    /// On the current rayon pool.
    #[default]
    Parallel,
}

/// Error of the separation against `truth` for every `q` on the grid.
pub fn sweep_q(
    f: &Signal,
    truth: &Signal,
    grid_step: f64,
    cfg: &SeparationConfig,
) -> Result<SweepResult> {
    sweep_q_with(f, truth, grid_step, cfg, Execution::default())
}

pub fn sweep_q_with(
    f: &Signal,
    truth: &Signal,
    grid_step: f64,
    cfg: &SeparationConfig,
    exec: Execution,
) -> Result<SweepResult> {
    let grid = q_grid(grid_step)?;
    if truth.len() != f.len() {
        return Err(Error::Dimension {
            expected: f.len(),
            found: truth.len(),
        });
    }
    let prepared = PreparedSeparation::new(f, cfg)?;
    let fft_error = error_norm(&fft_baseline(f, &cfg.noise)?, truth)?;
    let evaluate = |&q: &f64| {
        let solver = FocussConfig { q, ..cfg.solver };
        match prepared
            .solve(&solver)
            .and_then(|r| Ok((error_norm(&r.f_v, truth)?, r.solver)))
        {
            Ok((error, res)) => SweepPoint {
                q,
                error: Some(error),
                converged: res.converged,
                iterations: res.iterations,
                failure: None,
            },
            Err(e) => SweepPoint {
                q,
                error: None,
                converged: false,
                iterations: 0,
                failure: Some(e.to_string()),
            },
        }
    };
    let points: Vec<SweepPoint> = match exec {
        Execution::Serial => grid.iter().map(evaluate).collect(),
        Execution::Parallel => grid.par_iter().map(evaluate).collect(),
    };
    let (best_q, best_error) = points
        .iter()
        .filter_map(|p| p.error.map(|e| (p.q, e)))
        .fold(None, |best: Option<(f64, f64)>, (q, e)| match best {
            Some((_, be)) if be <= e => best,
            _ => Some((q, e)),
        })
        .ok_or(Error::SweepFailed)?;
    Ok(SweepResult {
        points,
        best_q,
        best_error,
        fft_error,
    })
}
