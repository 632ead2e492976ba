use thiserror::Error;

/// Errors raised by the library. The CLI maps them onto exit codes via
/// [`Error::is_configuration`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("order n must be at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("expected {expected} entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("singularity order i_{0} is out of range")]
    OrderOutOfRange(usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("rho must be nonzero")]
    ZeroRho,
    #[error("no n-th root of lambda lies in sector {0}")]
    NoRootInSector(usize),

    #[error("not a permutation of 0..n: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("matrix is not unit lower-triangular (entry ({row}, {col}))")]
    NotUnitLowerTriangular { row: usize, col: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("structure conditions violated: {0}")]
    StructureViolation(String),

    #[error("coefficient is not an exact polynomial")]
    NonPolynomialCoefficient,
    #[error("coefficient is not differentiable in its representation: {0}")]
    NonDifferentiableKind(String),
    #[error("coefficient has a non-integrable tail on the half-line")]
    NonIntegrableTail,
    #[error("coefficient class violated: {0}")]
    CoefficientClass(String),
    #[error("coefficient must be continuous at zero")]
    ContinuityAtZeroRequired,
    #[error("invalid coefficient: {0}")]
    InvalidCoefficient(String),

    #[error("point {0} lies outside the coefficient domain")]
    DomainViolation(f64),
    #[error("solution norm exceeded the overflow bound near x = {0}")]
    Overflow(f64),
    #[error("exponent guard exceeded: |Re(rho*omega)|*X = {0}")]
    ExponentGuard(f64),
    #[error("truncation point {truncation} lies inside the coefficient support (ends at {support_end})")]
    TruncationInsideSupport { truncation: f64, support_end: f64 },
    #[error("boundary system is singular at lambda = {0}")]
    SingularAtLambda(String),
    #[error("rho lies on a sector boundary: {0}")]
    SectorBoundary(String),

    #[error("invalid equivalence case: {0}")]
    InvalidCase(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Whether the error stems from malformed input rather than a numerical failure.
    pub fn is_configuration(&self) -> bool {
        !matches!(
            self,
            Error::Overflow(_)
                | Error::ExponentGuard(_)
                | Error::SingularAtLambda(_)
                | Error::SectorBoundary(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
