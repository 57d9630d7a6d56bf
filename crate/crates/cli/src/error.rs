//! Error-to-exit-code mapping for the binary.
//!
//! The contract: 0 success, 2 bad flags or semantic flag errors, 3 malformed
//! input files, 4 non-dyadic signal length, 5 benchmark runs with failed
//! cells. clap already exits with 2 on its own parse errors, so everything
//! here covers post-parse failures.

use sureblock_core::Error;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn flags(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }

    pub fn partial(message: impl Into<String>) -> Self {
        CliError { code: 5, message: message.into() }
    }

    pub fn io(context: &std::path::Path, err: std::io::Error) -> Self {
        CliError { code: 3, message: format!("{}: {err}", context.display()) }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        // Flag-shaped failures call out the flag that caused them; the
        // messages below otherwise reuse the library's own wording.
        let (code, prefix) = match &err {
            Error::NonDyadicLength { .. } => (4, None),
            Error::CoarseLevelOutOfRange { .. } => (2, Some("--j0")),
            Error::UnknownFilter { .. } => (2, Some("--wavelet")),
            Error::UnknownMethod { .. } => (2, Some("--method")),
            Error::UnknownSignal { .. } => (2, Some("--functions")),
            _ => (2, None),
        };
        let message = match prefix {
            Some(flag) => format!("{flag}: {err}"),
            None => err.to_string(),
        };
        CliError { code, message }
    }
}
