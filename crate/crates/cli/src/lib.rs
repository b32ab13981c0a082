//! Command-line front end for `opineq`.

pub mod output;
pub mod run;
pub mod spec;

pub use run::{exit_code, run, Outcome};
pub use spec::RunSpec;
