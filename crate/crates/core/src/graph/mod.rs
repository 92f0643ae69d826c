//! Undirected simple graphs, node orderings and the adjacency-sequence codec.

mod bfs;
mod sequence;

pub use bfs::{bfs_bandwidth, bfs_order, estimate_truncation_width, random_bfs_order};
pub use sequence::{graph_to_sequence, sequence_to_graph, BfsSequence};

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `0..n`.
///
/// Edges are stored canonically as `(u, v)` with `u < v`, sorted and
/// deduplicated, so derived equality is edge-set equality.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    features: Option<Vec<Vec<f64>>>,
    labels: Option<Vec<u32>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range
    /// endpoints. Edge orientation does not matter.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::structural(format!("self-loop on node {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::structural(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::structural(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(Graph {
            n,
            edges: set.into_iter().collect(),
            features: None,
            labels: None,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            ..Default::default()
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph {
            n,
            edges,
            ..Default::default()
        }
    }

    pub fn path(n: usize) -> Self {
        Graph {
            n,
            edges: (1..n).map(|v| (v - 1, v)).collect(),
            ..Default::default()
        }
    }

    /// Star `K_{1,leaves}` with the center at node 0.
    pub fn star(leaves: usize) -> Self {
        Graph {
            n: leaves + 1,
            edges: (1..=leaves).map(|v| (0, v)).collect(),
            ..Default::default()
        }
    }

    pub fn with_features(mut self, features: Vec<Vec<f64>>) -> Result<Self> {
        if features.len() != self.n {
            return Err(Error::structural(format!(
                "{} feature vectors for {} nodes",
                features.len(),
                self.n
            )));
        }
        if let Some(first) = features.first() {
            if features.iter().any(|f| f.len() != first.len()) {
                return Err(Error::structural("feature vectors differ in length"));
            }
        }
        self.features = Some(features);
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::structural(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical `(u, v)` pairs with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn features(&self) -> Option<&[Vec<f64>]> {
        self.features.as_deref()
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Sorted neighbor lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Dense boolean adjacency matrix, row-major `n × n`.
    pub fn adjacency_matrix(&self) -> Vec<bool> {
        let mut m = vec![false; self.n * self.n];
        for &(u, v) in &self.edges {
            m[u * self.n + v] = true;
            m[v * self.n + u] = true;
        }
        m
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Renumbers nodes so that new node `k` is old node `order.perm()[k]`.
    /// Features and labels travel with their nodes.
    pub fn relabel(&self, order: &NodeOrdering) -> Result<Graph> {
        order.check_len(self.n)?;
        let pos = order.positions();
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (pos[u], pos[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        let perm = order.perm();
        Ok(Graph {
            n: self.n,
            edges,
            features: self
                .features
                .as_ref()
                .map(|f| perm.iter().map(|&old| f[old].clone()).collect()),
            labels: self
                .labels
                .as_ref()
                .map(|l| perm.iter().map(|&old| l[old]).collect()),
        })
    }
}

/// A permutation of `0..n`; `perm[k]` is the original node placed at position `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeOrdering {
    perm: Vec<usize>,
}

impl NodeOrdering {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::structural(format!(
                    "{perm:?} is not a permutation of 0..{}",
                    perm.len()
                )));
            }
        }
        Ok(NodeOrdering { perm })
    }

    pub fn identity(n: usize) -> Self {
        NodeOrdering {
            perm: (0..n).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        NodeOrdering { perm }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Inverse permutation: `positions()[node]` is the node's position.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.perm.len()];
        for (k, &v) in self.perm.iter().enumerate() {
            pos[v] = k;
        }
        pos
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.perm.len() != n {
            return Err(Error::structural(format!(
                "ordering of length {} used on a graph with {n} nodes",
                self.perm.len()
            )));
        }
        Ok(())
    }
}
