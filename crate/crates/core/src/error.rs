use alloc::string::String;
use core::fmt;

/// Failure modes shared by every engine operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Input that does not make sense for the object it was applied to:
    /// unknown generators, classes from another ring, out-of-range indices.
    Malformed(String),
    /// A request outside the supported envelope (rank caps, dimension bounds).
    Unsupported(String),
    /// An identity that must hold for catalog data failed; signals a wrong presentation.
    InternalConsistency(String),
    /// User-supplied hypotheses that contradict each other.
    InconsistentInputs(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Malformed(_) => "malformed",
            Error::Unsupported(_) => "unsupported",
            Error::InternalConsistency(_) => "internal-consistency",
            Error::InconsistentInputs(_) => "inconsistent-inputs",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Error::Malformed(m)
            | Error::Unsupported(m)
            | Error::InternalConsistency(m)
            | Error::InconsistentInputs(m) => m,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind(), self.message())
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;

macro_rules! malformed {
    ($($arg:tt)*) => { $crate::error::Error::Malformed(alloc::format!($($arg)*)) };
}
macro_rules! unsupported {
    ($($arg:tt)*) => { $crate::error::Error::Unsupported(alloc::format!($($arg)*)) };
}
pub(crate) use malformed;
pub(crate) use unsupported;
