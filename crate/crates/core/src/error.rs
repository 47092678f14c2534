use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{family} lattice requires L >= {min}, got {got}")]
    LatticeTooSmall {
        family: &'static str,
        min: usize,
        got: usize,
    },

    #[error("invalid syndrome parity")]
    InvalidSyndromeParity,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("chain grade mismatch: expected {expected}, got {got}")]
    GradeMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("decoration profile: {0}")]
    Profile(String),

    #[error("unsupported gadget: parity {parity}, degree {degree}, planar {planar}")]
    UnsupportedGadget {
        parity: &'static str,
        degree: usize,
        planar: bool,
    },

    #[error("matching is not perfect ({unmatched} unmatched vertices)")]
    NotPerfect { unmatched: usize },

    #[error("gadget grid overlay: {0}")]
    Overlay(String),

    #[error("join is not minimal: xoring the 4-cycle at vertex {vertex} shrinks it")]
    NonMinimalJoin { vertex: usize },

    #[error("bad-defect walk from vertex {vertex} reaches a missing corner partner in both directions")]
    CornerDeadEnd { vertex: usize },

    #[error("bad-defect resolution exceeded {0} iterations")]
    IterationCap(usize),

    #[error("decorated graph has no embedding")]
    MissingEmbedding,

    #[error("embedding check failed: {0}")]
    Embedding(String),

    #[error("skew matrix has odd dimension {0}")]
    OddDimension(usize),

    #[error("too large to enumerate: {0}")]
    TooLarge(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors caused by the caller's input rather than by a broken invariant.
    pub fn is_user_error(&self) -> bool {
        !matches!(
            self,
            Error::Invariant(_)
                | Error::IterationCap(_)
                | Error::CornerDeadEnd { .. }
                | Error::Embedding(_)
                | Error::NotPerfect { .. }
        )
    }
}
