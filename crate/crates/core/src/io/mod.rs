//! Corpus files and graph drawings.

mod corpus;
mod render;

pub use corpus::{load_corpus, parse_corpus, save_corpus, write_corpus};
pub use render::{force_layout, render, RenderFormat};

/// Provenance line embedded in written artifacts.
pub fn provenance(seed: u64) -> String {
    format!("{} seed={seed}", crate::VERSION)
}
