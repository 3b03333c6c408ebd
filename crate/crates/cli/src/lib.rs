//! Library surface of the batch front-end: the workspace document format,
//! deterministic reports, and the named verification suites.

pub mod report;
pub mod suites;
pub mod workspace;
