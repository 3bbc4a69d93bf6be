pub mod centralizer;
pub mod cli;
pub mod diffop;
pub mod dwalgebra;
pub mod error;
pub mod exactfield;
pub mod gegenbauer;
pub mod json;
pub mod matpoly;
pub mod presented;
pub mod report;

pub use error::{Error, Result};
