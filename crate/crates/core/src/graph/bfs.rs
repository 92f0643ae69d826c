use std::collections::VecDeque;

use rand::Rng;

use super::{Graph, NodeOrdering};
use crate::error::Result;

/// Breadth-first visiting order seeded by `pi`.
///
/// The search starts at `pi.perm()[0]`; a dequeued node appends its
/// unvisited neighbors in ascending rank under `pi`. When the queue drains
/// with nodes left over, the lowest-ranked unvisited node starts a new tree.
pub fn bfs_order(g: &Graph, pi: &NodeOrdering) -> Result<NodeOrdering> {
    let n = g.node_count();
    pi.check_len(n)?;
    let rank = pi.positions();
    let mut adj = g.adjacency();
    for list in &mut adj {
        list.sort_unstable_by_key(|&v| rank[v]);
    }

    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    for &root in pi.perm() {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &adj[u] {
                if !visited[v] {
                    visited[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    Ok(NodeOrdering { perm: order })
}

/// BFS order from a uniformly random seed permutation.
pub fn random_bfs_order<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> NodeOrdering {
    let pi = NodeOrdering::random(g.node_count(), rng);
    bfs_order(g, &pi).expect("permutation built for this graph")
}

/// Largest positional distance `|i - j|` over all edges under `order`;
/// the smallest truncation width that encodes the ordering losslessly.
pub fn bfs_bandwidth(g: &Graph, order: &NodeOrdering) -> Result<usize> {
    order.check_len(g.node_count())?;
    let pos = order.positions();
    Ok(g.edges()
        .iter()
        .map(|&(u, v)| pos[u].abs_diff(pos[v]))
        .max()
        .unwrap_or(0))
}

/// Corpus-level truncation width: the maximum bandwidth seen over `probes`
/// random-start BFS orderings of every graph. Never returns less than 1.
pub fn estimate_truncation_width<R: Rng + ?Sized>(
    corpus: &[Graph],
    probes: usize,
    rng: &mut R,
) -> usize {
    let mut width = 1;
    for g in corpus {
        for _ in 0..probes.max(1) {
            let order = random_bfs_order(g, rng);
            let bw = bfs_bandwidth(g, &order).expect("ordering built for this graph");
            width = width.max(bw);
        }
    }
    width
}
