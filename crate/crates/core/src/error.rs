use alloc::string::String;
use core::fmt;

/// Errors raised by lattice operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    /// Two operands live on different lattice models.
    IncompatibleModels,
    /// A coefficient vector does not have `rank` entries.
    WrongLength { expected: usize, found: usize },
    /// Reflection requested along a class whose square is not ±1 or ±2.
    ReflectionUndefined { square: i64 },
    /// The operation is only defined on the rational model.
    RationalOnly(&'static str),
    /// The operation is only defined on the ruled model.
    RuledOnly(&'static str),
    /// The canonical class is not `K_0` (or a sign variant of it).
    NotStandardCanonical,
    /// The `K_δ` family is only certified for classes with positive H-coefficient.
    EtaFamilyNotCertified,
    /// `n >= 9` needs an explicit degree bound for the exceptional set.
    DegreeBoundRequired { n: usize },
    /// A bounded (incomplete) exceptional set was used without an explicit override.
    IncompleteExceptionalSet,
    /// The form is not in the symplectic cone.
    FormNotInCone,
    /// A square matrix of the wrong size was supplied.
    MatrixShape { rank: usize, rows: usize, cols: usize },
    /// An isometry failed validation.
    Validation(String),
    /// After the inductive phase the residual isometry was not a known finite case.
    ResidualNotResolvable(String),
    /// The α-minimal exceptional basis could not be built.
    MinimalityBasisFailed(String),
    /// `n = 0` ruled model with a non-trivial isometry.
    NoTwistsAvailable,
    /// The search space exceeds the configured safety limit.
    SafetyLimit(String),
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::IncompatibleModels => write!(f, "incompatible lattice models"),
            Self::WrongLength { expected, found } => {
                write!(f, "expected {expected} coefficients, found {found}")
            }
            Self::ReflectionUndefined { square } => {
                write!(f, "reflection undefined for this square ({square})")
            }
            Self::RationalOnly(what) => write!(f, "{what} defined for rational model only"),
            Self::RuledOnly(what) => write!(f, "{what} defined for ruled model only"),
            Self::NotStandardCanonical => write!(f, "conjugate to K_0 first"),
            Self::EtaFamilyNotCertified => {
                write!(f, "K_delta family not certified for classes with H-coefficient <= 0")
            }
            Self::DegreeBoundRequired { n } => {
                write!(f, "exceptional set is infinite for n = {n}; a degree bound is required")
            }
            Self::IncompleteExceptionalSet => {
                write!(f, "exceptional set is incomplete; explicit override required")
            }
            Self::FormNotInCone => write!(f, "form is not in the symplectic cone"),
            Self::MatrixShape { rank, rows, cols } => {
                write!(f, "matrix must be {rank}x{rank}, got {rows}x{cols}")
            }
            Self::Validation(msg) => write!(f, "isometry validation failed: {msg}"),
            Self::ResidualNotResolvable(msg) => write!(f, "residual not resolvable: {msg}"),
            Self::MinimalityBasisFailed(msg) => {
                write!(f, "alpha-minimality basis construction failed: {msg}")
            }
            Self::NoTwistsAvailable => write!(f, "no twists available"),
            Self::SafetyLimit(msg) => write!(f, "search exceeds safety limit: {msg}"),
        }
    }
}

impl core::error::Error for LatticeError {}

pub type Result<T> = core::result::Result<T, LatticeError>;
