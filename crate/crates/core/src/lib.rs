pub mod calculus;
pub mod cli;
pub mod config;
pub mod connections;
pub mod error;
pub mod expr;
pub mod hypercomplex;
pub mod metric;
pub mod nlconn;
pub mod report;
pub mod tensor;

pub use error::{Error, ParseError, Result};
