use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("gram matrix is not square: row {row} has {len} entries, expected {rank}")]
    NotSquare { row: usize, len: usize, rank: usize },

    #[error("gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown lattice name `{0}`")]
    UnknownLattice(String),

    #[error("invalid lattice parameter: {0}")]
    InvalidParameter(String),

    #[error("twist factor must be nonzero")]
    ZeroTwist,

    #[error("gram matrix is degenerate")]
    Degenerate,

    #[error("vector is zero")]
    ZeroVector,

    #[error("vector is not primitive")]
    NotPrimitive,

    #[error("generators are linearly dependent")]
    DependentGenerators,

    #[error("vector has square zero")]
    IsotropicVector,

    #[error("reflection in a vector of square {square} is not integral on this input")]
    NonIntegralReflection { square: String },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("discriminant {0} is not admissible (need d >= 8 and d = 0, 2 mod 6)")]
    InadmissibleDiscriminant(i64),

    #[error("linear series does not exist for these parameters")]
    NoLinearSeries,

    #[error("arithmetic overflow")]
    Overflow,

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag, used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "not_square",
            Error::NotSymmetric(..) => "not_symmetric",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::UnknownLattice(_) => "unknown_lattice",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::ZeroTwist => "zero_twist",
            Error::Degenerate => "degenerate",
            Error::ZeroVector => "zero_vector",
            Error::NotPrimitive => "not_primitive",
            Error::DependentGenerators => "dependent_generators",
            Error::IsotropicVector => "isotropic_vector",
            Error::NonIntegralReflection { .. } => "non_integral_reflection",
            Error::OutOfRange(_) => "out_of_range",
            Error::InadmissibleDiscriminant(_) => "inadmissible_discriminant",
            Error::NoLinearSeries => "no_linear_series",
            Error::Overflow => "overflow",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
