//! Spec-file language and directive runner behind the `lfw` binary.

pub mod ast;
pub mod lexer;
pub mod parser;
mod printer;

pub use parser::{parse_spec, NameKind};
mod run;

pub use run::{named_functions, named_sets, run, Entry, Report, RunOptions, Status};
