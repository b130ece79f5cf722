pub mod arith;
pub mod certify;
pub mod cli;
pub mod construct;
pub mod error;
pub mod frobenius;
pub mod newton;
pub mod permgroup;
pub mod poly;

pub use error::{Error, Result};
