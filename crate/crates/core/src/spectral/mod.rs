//! Shooting solvers for the first-order system: fundamental matrices, Weyl
//! matrices on `[0, 1]` and on a truncated half-line, exponential seeds,
//! asymptotic probes, and the two-by-two counterexample kit.

mod asymptotics;
mod birkhoff;
mod counterexample;
mod fundamental;
mod integrate;
mod weyl;

pub use asymptotics::{asymptotics_probe, d_kk, limit_constant, AsymptoticProbe, ProbeSample};
pub use birkhoff::{birkhoff_seed, BirkhoffSolution};
pub use counterexample::{counterexample_pair, f2_system, potential_from_f2};
pub use fundamental::{fundamental_c, FundamentalMatrix};
pub use integrate::{integrate_on_grid, integrate_system, step_grid, SolverConfig};
pub use weyl::{
    weyl_matrix, weyl_matrix_finite, weyl_matrix_halfline, weyl_solutions_finite, weyl_solutions_halfline, weyl_solutions_halfline_rho,
    wronskian_drift, Orientation, WeylFlag, WeylSample, WeylSolutions,
};
