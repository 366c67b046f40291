//! Std companion of [`ctxprob_core`]: chunk-parallel simulation, output
//! formats, the property sweep behind `ctxprob verify`, and the CLI.

pub mod cli;
pub mod output;
pub mod parallel;
pub mod verify;

pub use ctxprob_core as core;
