//! Per-node graphlet orbit counts for connected graphlets on 2–4 nodes,
//! in the standard orbit numbering:
//!
//! | orbit | graphlet | position |
//! |-------|----------|----------|
//! | 0 | edge | either end (degree) |
//! | 1, 2 | path P3 | end, middle |
//! | 3 | triangle | any |
//! | 4, 5 | path P4 | end, inner |
//! | 6, 7 | star K1,3 | leaf, center |
//! | 8 | cycle C4 | any |
//! | 9, 10, 11 | paw | tail, triangle degree 2, triangle degree 3 |
//! | 12, 13 | diamond | degree 2, degree 3 |
//! | 14 | K4 | any |
//!
//! Counts are over induced subgraphs. Connected 4-node sets are enumerated
//! with ESU and classified through a 64-entry lookup keyed by adjacency bits.

use std::sync::OnceLock;

use crate::graph::Graph;

pub const NUM_ORBITS: usize = 15;

pub type OrbitCounts = [u64; NUM_ORBITS];

/// Bit index of each node pair in a 4-node adjacency pattern.
const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pattern(adj: impl Fn(usize, usize) -> bool) -> usize {
    PAIRS
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| adj(a, b))
        .fold(0, |acc, (bit, _)| acc | (1 << bit))
}

type Graphlet = (&'static [(usize, usize)], [u8; 4]);

/// Representative edge lists with the orbit of each of their four nodes.
const GRAPHLETS: [Graphlet; 6] = [
    (&[(0, 1), (1, 2), (2, 3)], [4, 5, 5, 4]),
    (&[(0, 1), (0, 2), (0, 3)], [7, 6, 6, 6]),
    (&[(0, 1), (1, 2), (2, 3), (0, 3)], [8, 8, 8, 8]),
    (&[(0, 1), (0, 2), (1, 2), (2, 3)], [10, 10, 11, 9]),
    (&[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], [12, 12, 13, 13]),
    (&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], [14, 14, 14, 14]),
];

/// Orbit of each position for every connected 4-node adjacency pattern.
fn orbit_table() -> &'static [Option<[u8; 4]>; 64] {
    static TABLE: OnceLock<[Option<[u8; 4]>; 64]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [None; 64];
        let mut perms = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = [a, b, c, d];
                        if (0..4).all(|i| (0..4).filter(|&j| p[j] == i).count() == 1) {
                            perms.push(p);
                        }
                    }
                }
            }
        }
        for (edges, orbits) in GRAPHLETS {
            for p in &perms {
                // representative node i sits at position p[i]
                let bits = pattern(|x, y| {
                    edges
                        .iter()
                        .any(|&(u, v)| (p[u] == x && p[v] == y) || (p[u] == y && p[v] == x))
                });
                let mut at = [0u8; 4];
                for i in 0..4 {
                    at[p[i]] = orbits[i];
                }
                table[bits] = Some(at);
            }
        }
        table
    })
}

/// Exact orbit counts for every node.
pub fn orbit_counts(g: &Graph) -> Vec<OrbitCounts> {
    let n = g.node_count();
    let adj = g.adjacency();
    let dense = g.adjacency_matrix();
    let is_edge = |a: usize, b: usize| dense[a * n + b];
    let mut counts = vec![[0u64; NUM_ORBITS]; n];

    for (u, nb) in adj.iter().enumerate() {
        counts[u][0] = nb.len() as u64;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if is_edge(a, b) {
                    counts[u][3] += 1;
                } else {
                    counts[u][2] += 1;
                    counts[a][1] += 1;
                    counts[b][1] += 1;
                }
            }
        }
    }

    let table = orbit_table();
    for_each_connected_quad(&adj, &mut |q| {
        let bits = pattern(|x, y| is_edge(q[x], q[y]));
        let orbits = table[bits].expect("ESU yields connected sets");
        for (node, orbit) in q.iter().zip(orbits) {
            counts[*node][orbit as usize] += 1;
        }
    });
    counts
}

/// ESU enumeration of connected induced 4-node subgraphs; each set is
/// visited exactly once.
fn for_each_connected_quad(adj: &[Vec<usize>], f: &mut impl FnMut([usize; 4])) {
    let n = adj.len();
    let mut in_sub = vec![false; n];
    let mut in_nbhd = vec![0u32; n];
    for v in 0..n {
        let ext: Vec<usize> = adj[v].iter().copied().filter(|&u| u > v).collect();
        let mut sub = vec![v];
        in_sub[v] = true;
        mark(adj, v, &mut in_nbhd, 1);
        extend(adj, &mut sub, ext, v, &mut in_sub, &mut in_nbhd, f);
        mark(adj, v, &mut in_nbhd, -1);
        in_sub[v] = false;
    }
}

fn mark(adj: &[Vec<usize>], w: usize, in_nbhd: &mut [u32], by: i32) {
    for &u in &adj[w] {
        in_nbhd[u] = (in_nbhd[u] as i32 + by) as u32;
    }
}

fn extend(
    adj: &[Vec<usize>],
    sub: &mut Vec<usize>,
    mut ext: Vec<usize>,
    root: usize,
    in_sub: &mut [bool],
    in_nbhd: &mut [u32],
    f: &mut impl FnMut([usize; 4]),
) {
    if sub.len() == 4 {
        f([sub[0], sub[1], sub[2], sub[3]]);
        return;
    }
    while let Some(w) = ext.pop() {
        // exclusive neighbors of w: not in the subgraph nor adjacent to it
        let mut next = ext.clone();
        for &u in &adj[w] {
            if u > root && !in_sub[u] && in_nbhd[u] == 0 {
                next.push(u);
            }
        }
        sub.push(w);
        in_sub[w] = true;
        mark(adj, w, in_nbhd, 1);
        extend(adj, sub, next, root, in_sub, in_nbhd, f);
        mark(adj, w, in_nbhd, -1);
        in_sub[w] = false;
        sub.pop();
    }
}
