use thiserror::Error;

/// Errors raised while reading inputs or running the alignment pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate sequence id '{0}'")]
    DuplicateId(String),

    #[error("sequence '{id}': illegal residue '{residue}'")]
    IllegalResidue { id: String, residue: char },

    #[error("sequence '{0}' is empty")]
    EmptySequence(String),

    #[error("unknown sequence id '{0}'")]
    UnknownSequence(String),

    #[error("sequence '{id}': segments [{a_start},{a_end}) and [{b_start},{b_end}) overlap")]
    OverlappingSegments {
        id: String,
        a_start: usize,
        a_end: usize,
        b_start: usize,
        b_end: usize,
    },

    #[error("sequence '{id}': segment [{start},{end}) out of range for length {len}")]
    SegmentOutOfRange {
        id: String,
        start: usize,
        end: usize,
        len: usize,
    },

    #[error("sequence '{id}': negative segment weight {weight}")]
    NegativeWeight { id: String, weight: f64 },

    #[error("invalid threshold curve: {0}")]
    InvalidCurve(String),

    #[error("divergence {0} outside [0, 2]")]
    DivergenceOutOfDomain(f64),

    #[error("segments of different types cannot be scored as a pair ({0} vs {1})")]
    TypeMismatch(String, String),

    #[error("no score stored for {0}")]
    MissingScore(String),

    #[error("invalid substitution matrix: {0}")]
    Matrix(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("at least {needed} sequences are required, got {got}")]
    TooFewSequences { needed: usize, got: usize },

    #[error("alignment members differ: {0}")]
    MemberMismatch(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// True when the error reflects a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
