use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines and the text formats.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value left the finite double range (overflow, or underflow of a
    /// coefficient that must stay nonzero).
    #[error("value out of range: {0}")]
    Range(String),

    /// The Newton ratio was requested at (numerically) a zero of the polynomial.
    #[error("pole of the Newton ratio at {at}")]
    Pole { at: Complex64 },

    #[error("division by zero: {0}")]
    DivByZero(String),

    #[error("input not normalized: {0}")]
    Normalization(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    /// Node count would exceed the configured cap.
    #[error("node count {required} exceeds cap {cap}; rescale the variable so the isolation improves")]
    Cap { required: u64, cap: u64 },

    #[error("recursion depth {h} exceeds the limit of {limit}")]
    Depth { h: usize, limit: usize },

    #[error("radius bracket invalid: {0}")]
    Bracket(String),

    #[error("root count unstable near radius {radius}")]
    CountUnstable { radius: f64 },

    /// Extremal zero is not separated in modulus from the next one.
    #[error("extremal zero not separated: ratio bound {delta} (recenter and retry)")]
    Separation { delta: f64 },

    #[error("Newton iteration stalled; best iterate {best}")]
    Stall { best: Complex64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    /// Stable error name used in CLI reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Range(_) => "RangeError",
            Error::Pole { .. } => "PoleError",
            Error::DivByZero(_) => "DivByZeroError",
            Error::Normalization(_) => "NormalizationError",
            Error::Domain(_) => "DomainError",
            Error::Cap { .. } => "CapError",
            Error::Depth { .. } => "DepthError",
            Error::Bracket(_) => "BracketError",
            Error::CountUnstable { .. } => "CountUnstable",
            Error::Separation { .. } => "SeparationError",
            Error::Stall { .. } => "StallError",
            Error::Parse { .. } => "ParseError",
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

/// Non-fatal conditions attached to results.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Both square-root candidates fit almost equally well at this level.
    AmbiguousDescent { level: usize },
    /// A Cauchy-sum count was not close to an integer.
    LowConfidence { value: Complex64 },
    /// No separation ratio was available, so no error bound was attached.
    SeparationUnknown,
    /// The Newton ratio vanished at a center and the center was moved.
    DegenerateCenter { round: usize, center: Complex64 },
    /// The iteration budget ran out; the best iterate was returned.
    NotConverged { rounds: usize },
}

impl Warning {
    pub fn name(&self) -> &'static str {
        match self {
            Warning::AmbiguousDescent { .. } => "AmbiguityWarning",
            Warning::LowConfidence { .. } => "LowConfidence",
            Warning::SeparationUnknown => "SeparationUnknown",
            Warning::DegenerateCenter { .. } => "DegenerateCenter",
            Warning::NotConverged { .. } => "NotConverged",
        }
    }
}
