//! File formats, JSON documents and the command-line front end for
//! `genreach-core`.

pub mod cli;
pub mod dimacs;
pub mod dot;
pub mod format;
pub mod json;
