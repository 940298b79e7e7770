use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A continued-fraction stream ran out of partial quotients before the
    /// requested depth or precision was reached.
    #[error("continued-fraction stream exhausted: {0}")]
    DepthExhausted(String),

    /// The operation needs a quadratic irrational (a continued fraction with
    /// a periodic tail).
    #[error("operation requires a quadratic irrational (periodic tail)")]
    NonQuadratic,

    /// A partial quotient or intermediate value does not fit the working
    /// integer width.
    #[error("partial quotient overflows the supported range")]
    QuotientOverflow,

    #[error("matrix determinant must be +1 or -1, got {0}")]
    NotUnimodular(String),

    #[error("invalid blow-up weight: weights must be positive")]
    InvalidWeight,

    /// Two orbit seeds lie on the same rotation orbit.
    #[error("orbit collision: seeds {0} and {1} lie on the same rotation orbit")]
    OrbitCollision(usize, usize),

    /// An enclosure overlaps a resolved orbit point, so an order comparison
    /// cannot be certified; the caller must refine precision.
    #[error("undecidable comparison: enclosure overlaps a resolved orbit point")]
    UndecidableComparison,

    /// The input angle may coincide with a resolved orbit point.
    #[error("angle enclosure may hit resolved orbit point x_{n}", n = .0)]
    OrbitHit(i64),

    /// A gap index left the resolved range `|n| <= N`.
    #[error("resolved-depth exceeded: gap index {index} outside |n| <= {depth}")]
    ResolvedDepth { index: i64, depth: i64 },

    #[error("cell complex is not connected")]
    DisconnectedComplex,

    /// The 2-cells do not match the collapsible square pattern, so the free
    /// fundamental-group rank cannot be read off.
    #[error("unsupported face pattern: complex is not a collapsible square stack")]
    UnsupportedFacePattern,

    #[error("handle record is not connected")]
    DisconnectedRecord,

    #[error("gluing boundary mismatch: {0}")]
    BoundaryMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
