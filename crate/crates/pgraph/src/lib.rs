//! File formats, run reports and the command-line front end for
//! [`pgraph_core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod io;
pub mod registry;
pub mod report;

pub use io::{load_graph, load_graph_path, GraphFormat, LoadError, LoadedGraph};
pub use report::Report;
