use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix has a negative eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("functional is not positive (min Gram eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("functional value at the unit is not real (imaginary part {imag:e})")]
    NonRealUnitValue { imag: f64 },

    #[error("representations are not equivalent (deviation {deviation:e})")]
    NotEquivalent { deviation: f64 },

    #[error("commutant split failed after {attempts} attempts")]
    SplitFailure { attempts: usize },

    #[error("functional is zero")]
    ZeroFunctional,

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("scalar must be nonnegative, got {0}")]
    NegativeScalar(f64),

    #[error("kernel is not dominated (min eigenvalue of difference {min_eigenvalue:e})")]
    NotDominated { min_eigenvalue: f64 },

    #[error("kernel is zero")]
    ZeroKernel,

    #[error("chain is not monotone at step {step}")]
    MonotonicityViolation { step: usize },

    #[error("increasing chain is not majorized (quadratic form {value:e} at step {step})")]
    NotMajorized { step: usize, value: f64 },

    #[error("chain did not converge within {steps} steps")]
    NoConvergence { steps: usize },

    #[error("weight must be nonnegative, got {0}")]
    NegativeWeight(f64),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("kernel is not *-invariant (deviation {deviation:e})")]
    NotStarInvariant { deviation: f64 },

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("invalid *-homomorphism: {0}")]
    InvalidHomomorphism(String),

    #[error("pullback is not *-invariant (deviation {deviation:e})")]
    PullbackInvarianceFailure { deviation: f64 },
}

impl Error {
    /// Stable variant name, used in machine-readable reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonSquare { .. } => "NonSquare",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NegativeEigenvalue { .. } => "NegativeEigenvalue",
            Error::Singular => "Singular",
            Error::NonFinite { .. } => "NonFinite",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::DimMismatch { .. } => "DimMismatch",
            Error::NotAGroup(_) => "NotAGroup",
            Error::NotPositive { .. } => "NotPositive",
            Error::NonRealUnitValue { .. } => "NonRealUnitValue",
            Error::NotEquivalent { .. } => "NotEquivalent",
            Error::SplitFailure { .. } => "SplitFailure",
            Error::ZeroFunctional => "ZeroFunctional",
            Error::NotPsd { .. } => "NotPsd",
            Error::NegativeScalar(_) => "NegativeScalar",
            Error::NotDominated { .. } => "NotDominated",
            Error::ZeroKernel => "ZeroKernel",
            Error::MonotonicityViolation { .. } => "MonotonicityViolation",
            Error::NotMajorized { .. } => "NotMajorized",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NegativeWeight(_) => "NegativeWeight",
            Error::EmptyInput(_) => "EmptyInput",
            Error::NotStarInvariant { .. } => "NotStarInvariant",
            Error::InvalidRepresentation(_) => "InvalidRepresentation",
            Error::InvalidHomomorphism(_) => "InvalidHomomorphism",
            Error::PullbackInvarianceFailure { .. } => "PullbackInvarianceFailure",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimMismatch { expected, found })
    }
}
