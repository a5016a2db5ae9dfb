//! Separation of a sampled trace into a low-frequency Fourier noise component
//! and a signal component held sparsely in an adaptive B-spline space.
//!
//! The pipeline removes the noise subspace from the trace, places spline knots
//! at curvature critical points of what remains, and recovers sparse spline
//! coefficients with a regularized FOCUSS iteration over the projected atoms.

pub mod cli;
pub mod error;
pub mod focuss;
pub mod pipeline;
pub mod signal;
pub mod spline;
pub mod subspace;

pub use error::{Error, Result, Stage};
pub use focuss::{FocussConfig, FocussResult, Init};
pub use pipeline::{SeparationConfig, SeparationResult, SweepResult};
pub use signal::{Signal, SynthSpec};
pub use spline::{BSplineBasis, CurvatureConfig, CurvatureMode, ExtendedPartition, Partition};
pub use subspace::{NoiseSubspaceSpec, Projector};
