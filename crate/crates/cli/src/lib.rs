//! Network files, the `tt` command line and physics demos on top of
//! `tensor_types`.

pub mod commands;
pub mod demos;
pub mod format;

pub use commands::{run, Outcome};
