use super::{Graph, NodeOrdering};
use crate::error::{Error, Result};

/// Adjacency-vector encoding of an ordered graph.
///
/// `rows[0]` is empty. For `i >= 1`, `rows[i]` has length `min(i, width)` and
/// bit `k` records whether position `i` connects to position `i - 1 - k`
/// (most recent predecessor first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsSequence {
    width: usize,
    rows: Vec<Vec<u8>>,
}

impl BfsSequence {
    /// Validates row lengths and bit values.
    pub fn new(width: usize, rows: Vec<Vec<u8>>) -> Result<Self> {
        if width == 0 {
            return Err(Error::structural("truncation width must be positive"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != i.min(width) {
                return Err(Error::structural(format!(
                    "row {i} has length {}, expected {}",
                    row.len(),
                    i.min(width)
                )));
            }
            if row.iter().any(|&b| b > 1) {
                return Err(Error::structural(format!("row {i} holds a non-binary entry")));
            }
        }
        Ok(BfsSequence { width, rows })
    }

    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }
}

/// Encodes `g` under `order` with truncation width `width`.
/// Edges spanning more than `width` positions are dropped.
pub fn graph_to_sequence(g: &Graph, order: &NodeOrdering, width: usize) -> Result<BfsSequence> {
    if width == 0 {
        return Err(Error::structural("truncation width must be positive"));
    }
    order.check_len(g.node_count())?;
    let pos = order.positions();
    let mut rows: Vec<Vec<u8>> = (0..g.node_count()).map(|i| vec![0; i.min(width)]).collect();
    for &(u, v) in g.edges() {
        let (a, b) = (pos[u].min(pos[v]), pos[u].max(pos[v]));
        let back = b - a;
        if back <= width {
            rows[b][back - 1] = 1;
        }
    }
    Ok(BfsSequence { width, rows })
}

/// Inverse of [`graph_to_sequence`] under the identity ordering.
pub fn sequence_to_graph(s: &BfsSequence) -> Result<Graph> {
    let mut edges = Vec::new();
    for (i, row) in s.rows.iter().enumerate() {
        if row.len() != i.min(s.width) {
            return Err(Error::structural(format!("row {i} has malformed length")));
        }
        for (k, &bit) in row.iter().enumerate() {
            if bit == 1 {
                edges.push((i - 1 - k, i));
            }
        }
    }
    Graph::new(s.rows.len(), edges)
}
