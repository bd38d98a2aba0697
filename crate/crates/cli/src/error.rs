use std::fmt;

use crate::parse::ParseError;

/// Exit status for a failed verification.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for syntax and usage errors.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for errors raised by the library.
pub const EXIT_MODULE: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Parse(ParseError),
    Usage(String),
    Module(berkfilter::Error),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "syntax_error",
            CliError::Usage(_) => "usage_error",
            CliError::Module(e) => e.code(),
            CliError::Io(_) => "io_error",
        }
    }

    pub fn exit_status(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Module(_) | CliError::Io(_) => EXIT_MODULE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => e.fmt(f),
            CliError::Usage(m) => f.write_str(m),
            CliError::Module(e) => e.fmt(f),
            CliError::Io(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<berkfilter::Error> for CliError {
    fn from(e: berkfilter::Error) -> Self {
        CliError::Module(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
