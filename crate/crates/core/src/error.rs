use thiserror::Error;

/// Errors raised by the library. Variants map onto the failure modes of the
/// individual operations; the CLI turns them into exit statuses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{d} exceeds the supported limit {limit}")]
    FieldTooLarge { p: u64, d: u32, limit: u64 },
    #[error("modulus is not monic of degree {0}")]
    MalformedModulus(u32),
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u32),
    #[error("coefficient {value} out of range for GF({p})")]
    CoefficientOutOfRange { value: u64, p: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("element is not a square")]
    NotASquare,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("subspaces live in ambient spaces of different dimension ({0} vs {1})")]
    AmbientMismatch(usize, usize),

    #[error("nonzero coefficient below the diagonal at ({row}, {col})")]
    LowerTriangularEntry { row: usize, col: usize },
    #[error("ambient quadratic form is not non-degenerate")]
    DegenerateAmbient,
    #[error("bilinear form does not vanish on the given subspace")]
    NotTotallyIsotropic,
    #[error("operation requires characteristic 2")]
    NotCharacteristicTwo,
    #[error("bilinear form is not alternating")]
    NotAlternating,
    #[error("alternating form in odd dimension {dim} is singular; kernel vector {certificate:?}")]
    OddDimension { dim: usize, certificate: Vec<u64> },
    #[error("Gram matrix is singular")]
    DegenerateGram,

    #[error("quadratic form has a nontrivial radical")]
    NonTrivialRadical,
    #[error("vector is not singular (Q(v) != 0)")]
    NotSingular,
    #[error("vector lies in the radical")]
    InRadical,
    #[error("virtual quadratic space is not minimal (U^perp is not contained in U)")]
    NotMinimal,
    #[error("virtual quadratic space is degenerate (nontrivial radical on U)")]
    Degenerate,
    #[error("dimension {dim} is inconsistent with type {kind}")]
    ParityMismatch { dim: usize, kind: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
