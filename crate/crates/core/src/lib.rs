//! Vertical helicoids and catenoids in product spaces M x R.
//!
//! Construction of the surfaces and pointwise numerical verification of their
//! curvature identities, for Riemannian and Lorentzian product metrics.

pub mod ambient;
pub mod catenoid;
pub mod cli;
pub mod error;
pub mod gallery;
pub mod params;
pub mod real;
pub mod report;
pub mod surface;
pub mod tolerances;

pub use error::{GeomError, Result};
pub use params::Params;
