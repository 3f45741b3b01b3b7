//! Text formats and the job pipeline used by the command-line tool.

pub mod job;
pub mod parse;

pub use job::{run, run_source, Command, ExitStatus, JobSpec, Outcome, OutputFormat};
pub use parse::{
    parse_document, parse_input, print_diagram, print_input, print_presentation, Input, Location,
    NamedPresentation, ParseError, ParseErrorKind, Parsed, Warning,
};
