//! Finite-n and edge-limit eigenvalue statistics of the chiral non-Hermitian
//! Gaussian unitary ensemble.
//!
//! * [`ensemble`] samples the two-matrix Dirac model and computes edge scalings.
//! * [`kernels_finite`] and [`kernels_limit`] evaluate correlation kernels.
//! * [`fredholm`] turns the limiting kernel into last-particle distributions.
//! * [`stats`] runs Monte Carlo experiments against those limits.

pub mod ensemble;
pub mod error;
pub mod exec;
pub mod fredholm;
pub mod io;
pub mod kernels_finite;
pub mod kernels_limit;
pub mod linalg;
pub mod specfun;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
