//! The stable exit-code contract: 0 analysis-ok, 1 selftest failure,
//! 2 parse error, 3 invalid effect, 4 precondition not satisfied,
//! 5 wrong shape for the Bloch commands.

use effectkit::Error;

pub const SELFTEST_FAILURE: u8 = 1;
pub const PARSE_ERROR: u8 = 2;
pub const INVALID_EFFECT: u8 = 3;
pub const PRECONDITION: u8 = 4;
pub const SHAPE: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }

    pub fn invalid_effect(message: impl Into<String>) -> Self {
        CliError { code: INVALID_EFFECT, message: message.into() }
    }

    /// Maps a core error in a decomposition context: failed preconditions
    /// keep their own exit code.
    pub fn precondition(err: Error) -> Self {
        CliError { code: PRECONDITION, message: err.to_string() }
    }

    /// Maps a core error in a Bloch context: shape problems get exit 5.
    pub fn bloch(err: Error) -> Self {
        let code = match err {
            Error::NotTwoByTwo { .. } | Error::TraceNotOne { .. } => SHAPE,
            Error::NotX0Compatible { .. }
            | Error::NotInternalCouple { .. }
            | Error::DegenerateCouple => PRECONDITION,
            _ => PARSE_ERROR,
        };
        CliError { code, message: err.to_string() }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::NotAnEffect { .. } | Error::NotAProjection { .. } | Error::NotHermitian { .. } => {
                INVALID_EFFECT
            }
            Error::NotAbsCompatible { .. }
            | Error::NotX0Compatible { .. }
            | Error::NotX0Strict { .. }
            | Error::NotStrictPair { .. }
            | Error::NotPartiallyOrthoCoexistent { .. }
            | Error::SixBlockRemainder { .. }
            | Error::BlockDimMismatch { .. }
            | Error::NotInternalCouple { .. }
            | Error::DegenerateCouple => PRECONDITION,
            Error::NotTwoByTwo { .. } | Error::TraceNotOne { .. } => SHAPE,
            _ => PARSE_ERROR,
        };
        CliError { code, message: err.to_string() }
    }
}
