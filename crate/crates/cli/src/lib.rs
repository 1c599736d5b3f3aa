//! Dataset generation, experiment orchestration, and persistence for the
//! locsearch library. The `locsearch` binary in this crate exposes the same
//! functionality on the command line; see SCHEMAS.md for file formats.

pub mod datasets;
pub mod runner;
