use alloc::string::String;
use core::fmt;

/// Error type shared by all modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    Domain(String),
    /// An iteration failed to converge; carries a diagnostic.
    Nonconvergence(String),
    /// A computed quantity failed an internal consistency check.
    Inconsistent(String),
    /// A least-squares / interpolation step was too ill-conditioned.
    Conditioning { residual: f64 },
    /// Composition or iteration would exceed the configured degree cap.
    DegreeCap { cap: usize, requested: usize },
    /// Exact orbit entries outgrew the configured bit-size cap.
    GrowthCap { index: usize, bits: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Nonconvergence(msg) => write!(f, "nonconvergence: {msg}"),
            Error::Inconsistent(msg) => write!(f, "internal consistency failure: {msg}"),
            Error::Conditioning { residual } => {
                write!(f, "conditioning error: holdout residual {residual:.3e}")
            }
            Error::DegreeCap { cap, requested } => {
                write!(f, "degree {requested} exceeds configured cap {cap}")
            }
            Error::GrowthCap { index, bits } => {
                write!(
                    f,
                    "orbit entry {index} needs {bits} bits, over the growth cap"
                )
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn nonconvergence(msg: impl Into<String>) -> Self {
        Error::Nonconvergence(msg.into())
    }

    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistent(msg.into())
    }
}
