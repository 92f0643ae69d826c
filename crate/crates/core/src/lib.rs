//! Document-layout graphs and a hierarchical recurrent graph generator.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: undirected graphs, BFS node orderings and the adjacency
//!   sequence encoding the generator is trained on.
//! - [`layout`]: annotated pages to visibility graphs with 7-dim node features.
//! - [`nn`]: a small f64 engine (GRU stacks, MLPs, BCE, Adam) with exact
//!   hand-written gradients.
//! - [`model`]: the graph-level / edge-level generator, training and sampling.
//! - [`stats`]: degree, clustering and orbit descriptors and MMD scoring.
//! - [`datasets`]: synthetic corpora and train/test splitting.
//! - [`io`]: the line-oriented corpus format and DOT/GraphML/SVG rendering.
//!
//! With the default `parallel` feature the data-parallel loops (per-example
//! gradients, per-graph descriptors, per-sample generation) run on rayon;
//! without it every [`Exec`] request falls back to sequential iteration.

pub mod datasets;
pub mod error;
pub mod graph;
pub mod io;
pub mod layout;
pub mod model;
pub mod nn;
pub mod par;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{BfsSequence, Graph, NodeOrdering};
pub use par::Exec;

/// Version string embedded into every artifact this crate writes.
pub const VERSION: &str = concat!("layoutgen ", env!("CARGO_PKG_VERSION"));
