use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point |z| = {modulus} lies outside the open unit disk")]
    OutsideDisk { modulus: f64 },

    #[error("radius {radius} outside the admissible range {range}")]
    InvalidRadius { radius: f64, range: &'static str },

    #[error("order alpha = {0} must satisfy 0 <= alpha < 1")]
    InvalidOrder(f64),

    #[error("truncation tail bound {bound:e} exceeds tolerance {tolerance:e} at |z| = {modulus}")]
    TailTooLarge {
        bound: f64,
        tolerance: f64,
        modulus: f64,
    },

    #[error("coefficient tail is unbounded: {0}")]
    UnboundedTail(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown gallery map `{0}`")]
    UnknownMap(String),

    #[error("unknown radius equation `{0}`")]
    UnknownEquation(String),

    #[error("degenerate point: {what} vanishes at z = ({re}, {im})")]
    Degenerate {
        what: &'static str,
        re: f64,
        im: f64,
    },

    #[error("no root in (0, 1)")]
    NoRoot,

    #[error("{count} roots in (0, 1); expected exactly one")]
    MultipleRoots { count: usize },

    #[error("bracket [{lo}, {hi}] does not isolate a sign change")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("property still holds up to r = {limit}; no failure found")]
    NoFailureFound { limit: f64 },

    #[error("property fails already at the sanity floor r = {floor}")]
    FailsAtFloor { floor: f64 },

    #[error("minimization did not converge: {0}")]
    NoConvergence(String),

    #[error("denominator vanishes at r = {0}")]
    ZeroDenominator(f64),

    #[error("malformed coefficient file: {0}")]
    Format(String),

    #[error("i/o: {0}")]
    Io(String),

    /// The reader of our output went away.
    #[error("output closed")]
    BrokenPipe,
}

impl Error {
    /// Stable machine-readable code used in CLI error JSON.
    pub fn code(&self) -> &'static str {
        match self {
            Error::OutsideDisk { .. } => "outside_disk",
            Error::InvalidRadius { .. } => "invalid_radius",
            Error::InvalidOrder(_) => "invalid_order",
            Error::TailTooLarge { .. } => "tail_too_large",
            Error::UnboundedTail(_) => "unbounded_tail",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::UnknownMap(_) => "unknown_map",
            Error::UnknownEquation(_) => "unknown_equation",
            Error::Degenerate { .. } => "degenerate",
            Error::NoRoot => "no_root",
            Error::MultipleRoots { .. } => "multiple_roots",
            Error::BracketFailure { .. } => "bracket_failure",
            Error::NoFailureFound { .. } => "no_failure_found",
            Error::FailsAtFloor { .. } => "fails_at_floor",
            Error::NoConvergence(_) => "no_convergence",
            Error::ZeroDenominator(_) => "zero_denominator",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
            Error::BrokenPipe => "broken_pipe",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Error::BrokenPipe;
        }
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}
