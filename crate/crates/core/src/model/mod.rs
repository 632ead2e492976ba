//! Core domain types: singularity orders, coefficients, boundary forms and
//! sector bookkeeping for the spectral parameter.

mod boundary;
mod coefficient;
mod geometry;
pub mod json;
mod orders;
mod sector;

pub use boundary::{validate_boundary_form, BoundaryForm};
pub use geometry::Geometry;
pub use coefficient::{BumpProfile, CoefficientFunction, CoefficientSet, Side};
pub use orders::{order_bound, singular_set, validate_orders, SingularIndexSet, SingularityOrders};
pub use sector::{order_roots, rho_from_lambda, root_of_unity, sector_of, SectorContext};
