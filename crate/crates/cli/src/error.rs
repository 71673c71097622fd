use std::fmt;

use selfsim::decide::DecideError;
use selfsim::frontends::FrontendError;
use selfsim::levelsets::LevelError;
use selfsim::numeric::NumericError;
use selfsim::sigma::SigmaError;

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_GUARD: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unparseable input.
    Usage(String),
    /// An enumeration guard or arithmetic limit tripped.
    Guard(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Guard(_) => EXIT_GUARD,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Guard(m) => write!(f, "limit reached: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<NumericError> for CliError {
    fn from(e: NumericError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SigmaError> for CliError {
    fn from(e: SigmaError) -> Self {
        match e {
            SigmaError::SubsetEnumerationTooLarge(_) => CliError::Guard(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<LevelError> for CliError {
    fn from(e: LevelError) -> Self {
        match e {
            LevelError::TooLarge { .. } | LevelError::Overflow(_) | LevelError::QuadraticDepth { .. } => {
                CliError::Guard(e.to_string())
            }
            LevelError::Sigma(inner) => inner.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<DecideError> for CliError {
    fn from(e: DecideError) -> Self {
        match e {
            DecideError::Sigma(inner) => inner.into(),
            DecideError::Level(inner) => inner.into(),
            DecideError::Cyclotomic(_) => CliError::Guard(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FrontendError> for CliError {
    fn from(e: FrontendError) -> Self {
        match e {
            FrontendError::Invalid(m) => CliError::Usage(m),
            FrontendError::Numeric(inner) => inner.into(),
            FrontendError::Sigma(inner) => inner.into(),
            FrontendError::Decide(inner) => inner.into(),
            FrontendError::Level(inner) => inner.into(),
        }
    }
}
