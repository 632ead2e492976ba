//! Regularization matrices, quasi-derivative systems and Weyl matrices for
//! higher-order differential expressions with distribution coefficients.

pub mod cli;
pub mod equivalence;
pub mod error;
pub mod model;
pub mod quasideriv;
pub mod regularize;
pub mod spectral;
pub mod symbolic;

pub use error::{Error, Result};
