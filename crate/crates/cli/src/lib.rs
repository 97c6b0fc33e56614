//! Library side of the `trigcurve` command: input parsing, the analysis
//! report, sweeps, extremal fixtures and SVG plots.

pub mod config;
pub mod fixtures;
pub mod input;
pub mod plot;
pub mod report;
pub mod sweep;

pub use input::ParseError;

/// Exit status for unparseable input or configuration.
pub const EXIT_PARSE: i32 = 2;
/// Exit status for a run whose output was produced but flags a violation.
pub const EXIT_BOUND_VIOLATED: i32 = 3;

/// Process exit code for an error returned by a command.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<ParseError>().is_some() {
        EXIT_PARSE
    } else {
        1
    }
}
