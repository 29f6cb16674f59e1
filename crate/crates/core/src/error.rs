use thiserror::Error;

/// Errors surfaced by the geometric kernel and the maintenance schemes.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A static input violates general position (cocircular quadruple,
    /// collinear hull triple, coincident points, exact ties).
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    /// The motion itself is degenerate: identically-zero certificate
    /// polynomial, coincident event times, or an unresolvable root tie.
    #[error("degenerate motion: {0}")]
    DegenerateMotion(String),

    /// The queried pair is not an edge of the (Q-)Delaunay triangulation.
    #[error("pair ({0}, {1}) is not a Delaunay edge")]
    NotDelaunayEdge(usize, usize),

    /// The stability parameter is out of range (k must exceed 4).
    #[error("invalid alpha: {0}")]
    InvalidAlpha(String),

    /// Tournament already contains this entry id.
    #[error("duplicate tournament id {0}")]
    DuplicateId(usize),

    /// Tournament does not contain this entry id.
    #[error("unknown tournament id {0}")]
    UnknownId(usize),

    /// Direction set for this k is not representable (k odd or < 4).
    #[error("unsupported direction count k = {0}: k must be even and at least 4")]
    UnsupportedK(usize),

    /// Scenario file failed to parse.
    #[error("parse error at {at}: {msg}")]
    ParseError { at: String, msg: String },

    /// Scenario file parsed but violates the schema.
    #[error("schema error: {0}")]
    SchemaError(String),

    /// An oracle check failed; carries the counterexample description.
    #[error("verification failure: {0}")]
    VerificationFailure(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
