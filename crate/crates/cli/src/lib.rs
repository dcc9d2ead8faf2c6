//! Library surface of the `idiv` binary: report assembly and shared
//! plumbing, exposed so integration tests can compose the same stages
//! in-process.

pub mod report;
pub mod util;
