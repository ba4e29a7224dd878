//! Command-line front end: the expression parser and the named verification
//! suites, split out as a library so integration tests can drive them
//! directly.

pub mod parser;
pub mod suites;
