use crate::equivalence::{Correspondence, Direction, ProblemSpec};
use crate::model::json::C64;
use crate::spectral::SolverConfig;
use num_complex::Complex64;
use serde::Deserialize;

/// Spectral parameter grid: explicit values or `r e^{i phi}` along a ray.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LambdaGrid {
    List(Vec<C64>),
    Ray { phi: f64, magnitudes: Vec<f64> },
}

impl LambdaGrid {
    pub fn values(&self) -> Vec<Complex64> {
        match self {
            LambdaGrid::List(v) => v.iter().map(|c| c.0).collect(),
            LambdaGrid::Ray { phi, magnitudes } => magnitudes.iter().map(|&r| Complex64::from_polar(r, *phi)).collect(),
        }
    }
}

impl Default for LambdaGrid {
    fn default() -> Self {
        LambdaGrid::Ray { phi: 1.0, magnitudes: vec![1.0, 2.0, 4.0, 8.0, 16.0] }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenMatrixConfig {
    pub n: usize,
    pub orders: Vec<usize>,
    #[serde(default)]
    pub latex: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeylSweepConfig {
    pub problem: ProblemSpec,
    pub lambdas: LambdaGrid,
    #[serde(default)]
    pub solver: SolverConfig,
}

fn default_ns() -> Vec<usize> {
    vec![2, 3, 4, 5, 6]
}

fn default_seed_count() -> u64 {
    100
}

fn default_first_seed() -> u64 {
    1
}

fn default_max_degree() -> usize {
    6
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "default_ns")]
    pub ns: Vec<usize>,
    #[serde(default = "default_first_seed")]
    pub first_seed: u64,
    #[serde(default = "default_seed_count")]
    pub seeds: u64,
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { ns: default_ns(), first_seed: 1, seeds: 100, max_degree: 6 }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    #[serde(default)]
    pub lambdas: LambdaGrid,
    /// Defaults to 1e-6 on the finite interval and 1e-4 on the half-line.
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformConfig {
    pub problem: ProblemSpec,
    pub correspondence: Correspondence,
    pub direction: Direction,
    /// New value of the free boundary coefficient when raising on the finite interval.
    pub free: Option<C64>,
    pub check: Option<CheckConfig>,
    #[serde(default)]
    pub solver: SolverConfig,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymProbeConfig {
    pub problem: ProblemSpec,
    pub k: usize,
    pub j: usize,
    pub phi: f64,
    pub magnitudes: Vec<f64>,
    pub x: f64,
    #[serde(default = "default_jitter")]
    pub jitter: f64,
    #[serde(default)]
    pub solver: SolverConfig,
}

fn default_jitter() -> f64 {
    0.1
}
