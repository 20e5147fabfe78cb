//! File formats and command implementations for the `ghzgraph` binary.

pub mod commands;
pub mod graph_file;
pub mod program_text;
