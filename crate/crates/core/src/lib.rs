//! Stationary random fields indexed by the unitary dual of a compact group.
//!
//! - [`dual_hypergroup`]: duals, tensor multiplicities and the two hypergroup
//!   convolutions.
//! - [`central_measures`]: central measures, their transforms, Bochner
//!   inversion on finite groups and positive-definiteness tests.
//! - [`stationary_fields`]: white noise, Kolmogorov fields, stationarity
//!   checks, translation and the finite Cramer decomposition.
//! - [`time_series`]: AR(1) and MA(q) processes on the dual of SU(2).

pub mod central_measures;
pub mod dual_hypergroup;
pub mod error;
pub mod exec;
pub mod monte_carlo;
pub mod quadrature;
pub mod stationary_fields;
pub mod time_series;

pub use dual_hypergroup::{ConvolutionKind, Dual, DualVector, GroupPoint, Label};
pub use error::{Error, Result};
pub use exec::Execution;
