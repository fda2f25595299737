//! Information geometry of the univariate Gaussian family.
//!
//! Forward-mode second-order dual numbers ([`autodiff`]), the Gaussian model
//! in its two charts with several expectation engines ([`models`]),
//! chart-generic tensor kernels ([`geometry`]), a transcription of a set of
//! published closed forms ([`published`]) and the audit that checks them
//! ([`audit`]).

pub mod audit;
pub mod autodiff;
pub mod error;
pub mod geometry;
pub mod models;
pub mod published;
pub mod quadrature;
pub mod tolerances;

pub use error::{GeoError, Result};
pub use models::{Chart, ExpectationEngine, ParamPoint};
