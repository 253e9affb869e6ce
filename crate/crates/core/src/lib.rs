//! Nonlocal nonlinear diffusion filters.
//!
//! The diffusivity at each point is driven by the ratio between the net
//! variation of the data over a surrounding window and its total variation:
//! close to one on monotone structure such as edges and spikes, close to zero
//! on oscillating noise. In 1D the ratio uses a forward window and the
//! equation is integrated semi-implicitly; in 2D the net variation is the
//! supremum of boundary integrals against harmonic test functions, computed
//! with a small linear program per pixel, and time stepping is explicit.

pub mod baselines;
pub mod config;
pub mod error;
pub mod grid;
pub mod harmonic;
pub mod io;
pub mod metrics;
pub mod noise;
pub mod ratio1d;
pub mod smoothing;
pub mod solver1d;
pub mod solver2d;
pub mod synth;
pub mod tv2d;

pub use error::{Error, Result};
pub use grid::{Image2D, Signal1D, SolverParams, Window1D, Window2D};
pub use harmonic::{BoundaryTables, HarmonicBasis, RatioField2D, RatioSolver2D};
pub use metrics::{mse, psnr, StepStats};
pub use ratio1d::{EdgeStopForm, EdgeStopSpec};
pub use solver1d::{run_1d, Run1D};
pub use solver2d::{run_2d, Config2D, DiffusivityField2D, Run2D};
