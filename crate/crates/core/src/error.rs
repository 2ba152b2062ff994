use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Numerical variants carry the offending magnitude so callers can tell a
/// borderline tolerance miss from a structural violation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not Hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("matrix {index} of the family is not normal (defect {defect:.3e})")]
    NotNormal { index: usize, defect: f64 },

    #[error("matrices {first} and {second} do not commute (commutator norm {norm:.3e})")]
    NotCommuting {
        first: usize,
        second: usize,
        norm: f64,
    },

    #[error("joint diagonalization left residual {residual:.3e}")]
    JointDiagonalization { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceError { trace: f64 },

    #[error("state vector has norm {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("input contains a non-finite entry")]
    NonFinite,

    #[error(
        "condition (A) is violated (commutator norm {norm:.3e} for pairs {pair_a:?}, {pair_b:?})"
    )]
    ConditionAViolated {
        pair_a: (usize, usize),
        pair_b: (usize, usize),
        norm: f64,
    },

    #[error("constructed B-side basis deviates from orthonormal by {defect:.3e}")]
    BasisOrthogonalityFailure { defect: f64 },

    #[error("vectors are not simultaneously Schmidt decomposable")]
    NotDecomposable,

    #[error("maximally correlated form mismatches the conjugated state by {mismatch:.3e}")]
    VerificationFailure { mismatch: f64 },

    #[error("state certified as maximally correlated but |I_A - I_B| = {gap:.3e}")]
    McsInconsistent { gap: f64 },

    #[error("enumeration of {subsets} subsets exceeds the cap of {cap}")]
    TooLarge { subsets: u128, cap: u128 },

    #[error("invalid Bell index set: {0}")]
    InvalidBellSet(String),

    #[error("Bell set fails the algebraic criterion")]
    NotAPrime,

    #[error("no label assignment matches the canonical form (best mismatch {mismatch:.3e})")]
    CanonicalizationFailure { mismatch: f64 },

    #[error("protocol does not match the state set: {0}")]
    ProtocolMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable variant name for machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::NonSquare { .. } => "NonSquare",
            Self::DimensionMismatch { .. } => "DimensionMismatch",
            Self::NotHermitian { .. } => "NotHermitian",
            Self::NotUnitary { .. } => "NotUnitary",
            Self::NoConvergence { .. } => "NoConvergence",
            Self::NotNormal { .. } => "NotNormal",
            Self::NotCommuting { .. } => "NotCommuting",
            Self::JointDiagonalization { .. } => "JointDiagonalization",
            Self::NotPsd { .. } => "NotPsd",
            Self::TraceError { .. } => "TraceError",
            Self::NotNormalized { .. } => "NotNormalized",
            Self::NonFinite => "NonFinite",
            Self::ConditionAViolated { .. } => "ConditionAViolated",
            Self::BasisOrthogonalityFailure { .. } => "BasisOrthogonalityFailure",
            Self::NotDecomposable => "NotDecomposable",
            Self::VerificationFailure { .. } => "VerificationFailure",
            Self::McsInconsistent { .. } => "McsInconsistent",
            Self::TooLarge { .. } => "TooLarge",
            Self::InvalidBellSet(_) => "InvalidBellSet",
            Self::NotAPrime => "NotAPrime",
            Self::CanonicalizationFailure { .. } => "CanonicalizationFailure",
            Self::ProtocolMismatch(_) => "ProtocolMismatch",
            Self::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
