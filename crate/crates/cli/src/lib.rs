//! Library side of the `ilsf` command-line tool: the expression grammar,
//! structured reports, and the command runners. The binary in `main.rs`
//! is a thin clap wrapper over [`run::run`].

pub mod parse;
pub mod report;
pub mod run;
