//! Scenario language, evaluator, reports and fixture corpus on top of
//! [`degloci_core`].
//!
//! A scenario declares varieties and bundles and then asks queries:
//!
//! ```text
//! variety Q = quadric(4)
//! bundle E = sum(spinor(Q, 1), spinor(Q, 2))
//! query chern(E)
//! ```

pub mod ast;
pub mod error;
pub mod eval;
pub mod lexer;
pub mod output;
pub mod parser;
pub mod pretty;
pub mod selftest;
pub mod signature;

pub use error::DslError;
pub use eval::{execute, Record, Report};
pub use output::{render_json, render_text};
pub use parser::parse;

/// Parses, checks and runs a script. Only parse-phase failures are returned
/// as `Err`; engine failures are recorded per statement.
pub fn run_source(src: &str) -> Result<Report, DslError> {
    Ok(execute(&parse(src)?))
}
