use thiserror::Error;

/// Errors raised by every module of the crate.
///
/// Each variant carries a stable machine-readable code (see [`Error::code`]) that the
/// command line front end prints and maps to its exit status.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("point {point} appears in more than one cycle")]
    OverlappingCycles { point: usize },

    #[error("index {index} out of range 1..={degree}")]
    IndexOutOfRange { index: usize, degree: usize },

    #[error("image is not a bijection")]
    NotABijection,

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("orbit exceeds cap of {cap} elements")]
    OrbitCapExceeded { cap: usize },

    #[error("string of length {len} exceeds integer cost width {width}")]
    WidthExceeded { len: usize, width: usize },

    #[error("permutation order exceeds cap {cap}")]
    OrderCapExceeded { cap: u64 },

    #[error("lcm of moduli exceeds cap {cap}")]
    LcmCapExceeded { cap: u64 },

    #[error("prime search exceeded cap {cap}")]
    PrimeCapExceeded { cap: u64 },

    #[error("assignment is not well-behaved: {0}")]
    NotWellBehaved(String),

    #[error("twin pair at condensed position {position} is not complementary")]
    TwinViolation { position: usize },

    #[error("permutation is not a member of the generated group")]
    NotInGroup,

    #[error("start assignment does not satisfy the formula (clause {clause})")]
    UnsatStart { clause: usize },

    #[error("malformed DIMACS input at line {line}: {msg}")]
    MalformedDimacs { line: usize, msg: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::OverlappingCycles { .. } => "OverlappingCycles",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::NotABijection => "NotABijection",
            Error::UnknownGenerator(_) => "UnknownGenerator",
            Error::DuplicateGenerator(_) => "DuplicateGenerator",
            Error::OrbitCapExceeded { .. } => "OrbitCapExceeded",
            Error::WidthExceeded { .. } => "WidthExceeded",
            Error::OrderCapExceeded { .. } => "OrderCapExceeded",
            Error::LcmCapExceeded { .. } => "LcmCapExceeded",
            Error::PrimeCapExceeded { .. } => "PrimeCapExceeded",
            Error::NotWellBehaved(_) => "NotWellBehaved",
            Error::TwinViolation { .. } => "TwinViolation",
            Error::NotInGroup => "NotInGroup",
            Error::UnsatStart { .. } => "UnsatStart",
            Error::MalformedDimacs { .. } => "MalformedDimacs",
            Error::Parse { .. } => "ParseError",
            Error::InvalidCircuit(_) => "InvalidCircuit",
            Error::InvalidInstance(_) => "InvalidInstance",
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
