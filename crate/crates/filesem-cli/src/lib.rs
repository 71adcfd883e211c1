//! Command implementations behind the `filesem` binary.
//!
//! Each command returns a [`CmdOutput`]: the text to print, an equivalent
//! JSON value carrying the same fields, and the process exit code.  Keeping
//! the logic here lets integration tests drive commands without spawning a
//! process.

pub mod cmd;
pub mod scenario;

/// What a command wants printed and how the process should exit.
#[derive(Debug, Clone)]
pub struct CmdOutput {
    pub text: String,
    pub json: serde_json::Value,
    pub exit_code: i32,
}

/// Exit code for inputs that fail to parse or validate.
pub const EXIT_INVALID: i32 = 3;
/// Exit code for scenario or oracle runs with failures.
pub const EXIT_FAILURES: i32 = 4;
