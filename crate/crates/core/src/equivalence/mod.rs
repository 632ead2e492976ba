//! Correspondences between problems whose coefficients differ in singularity
//! order but share Weyl matrices, plus the boundary data those problems need.

mod checks;
mod knowns;
mod problem;
mod shift;

pub use checks::{v_equivalence_check, weyl_invariance_check, InvarianceReport, VEquivalenceReport};
pub use knowns::{knowns_vectors, required_knowns, Known, KnownBoundaryData};
pub use problem::ProblemSpec;
pub use shift::{
    apply, finite_shift_n2, finite_shift_n4, shift_n2, shift_n2_spec, shift_n4, Correspondence, Direction, N4Case,
};
