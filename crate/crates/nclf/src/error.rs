use thiserror::Error;

/// Crate-wide error type.
///
/// The library works with several interlocking algebraic layers (fields,
/// coefficient rings, series rings, schemes, sheaves); most operations can
/// surface failures from the layers below them, so a single enum keeps
/// propagation simple.
#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("zero cannot be raised to a negative power")]
    ZeroToNegativePower,
    #[error("fields are not part of the same tower: {0}")]
    NotInTower(String),
    #[error("enumeration of {size} elements exceeds the bound {bound}")]
    EnumerationTooLarge { size: u128, bound: u128 },
    #[error("element is not in the subgroup of {r}-th roots of unity")]
    NotInSubgroup { r: u64 },
    #[error("element does not have exact multiplicative order {expected}")]
    BadOrder { expected: u64 },
    #[error("group table is invalid: {0}")]
    TableInvalid(String),
    #[error("ring size overflows the representable range")]
    SizeOverflow,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("character data invalid: {0}")]
    BadCharacterOrder(String),
    #[error("character homomorphisms require a cyclic group")]
    NonCyclicGroup,
    #[error("ring homomorphism failed validation: {0}")]
    HomValidationFailed(String),
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("operands have different truncation orders")]
    TruncationMismatch,
    #[error("constant term of the series is not a unit")]
    NonUnitConstantTerm,
    #[error("operation requires a commutative ring")]
    NoncommutativeRing,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("pivot search exhausted over a semilocal ring; this is a bug")]
    PivotSearchExhausted,
    #[error("open/closed splits are only supported on single-chart schemes")]
    MultiChartSplitUnsupported,
    #[error("Kummer order {r} does not divide q - 1 = {qm1}")]
    BadKummerOrder { r: u64, qm1: u64 },
    #[error("function vanishes somewhere on the scheme (degree {0})")]
    VanishingFunction(usize),
    #[error("closed point does not lie on the covering's base scheme: {0}")]
    PointNotOnBase(String),
    #[error("cocycle is not multiplicative on the pair ({0}, {1})")]
    CocycleNotMultiplicative(usize, usize),
    #[error("scheme is not zero-dimensional")]
    NotZeroDimensional,
    #[error("no tabulated global side for this scheme/sheaf")]
    UnsupportedScheme,
    #[error("no rational function within the degree bounds matches the counts")]
    NoSolutionWithinBounds,
    #[error("degree bounds admit more than one rational function; tighten them")]
    AmbiguousSolution,
    #[error("the residue characteristic p = {p} is not invertible in the coefficient ring")]
    PNotInvertible { p: u64 },
    #[error("no applicable verification method for this scheme/sheaf")]
    NoApplicableMethod,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
