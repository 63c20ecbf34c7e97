//! File formats, graph sources, the verification suite and report output
//! behind the `crossnum` binary.

pub mod io;
pub mod source;
pub mod suite;

mod error;

pub use error::LabError;

pub type Result<T, E = LabError> = std::result::Result<T, E>;
