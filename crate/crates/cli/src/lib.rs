//! Library half of the `qgk` command: the circuit text format, generator
//! files and the command drivers.

pub mod commands;
pub mod format;
pub mod genfile;

pub use format::{parse_circuit, print_circuit, ParseError};
pub use genfile::parse_generators;
