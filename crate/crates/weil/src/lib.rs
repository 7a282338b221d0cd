//! IO, file formats, verification suites and the command line for `weil-core`.

pub mod cli;
pub mod format;
pub mod oracle;
pub mod verify;
