//! Statistical checks of the stochastic controller against the exact engine.

mod convergence;
mod gof;
pub mod oracle;
mod settling;
mod surface;

pub use convergence::{convergence_curve, fit_loglog_slope, Checkpoint, ConvergenceReport, CONVERGENCE_HEADER};
pub use gof::{chi_square_gof, GofBin, GofResult, GOF_HEADER, GOF_SIGNIFICANCE};
pub use settling::{settling_study, settling_time};
pub use surface::{grid_axis, surface_compare, SurfacePoint, SurfaceReport, SURFACE_HEADER};
