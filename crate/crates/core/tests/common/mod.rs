//! Brute-force oracles and seeded generators shared by the integration
//! tests and the acceptance suite. Nothing here calls the code it checks.

#![allow(dead_code)]

use layoutgen::layout::{BBox, Content, LayoutPage, Region};
use layoutgen::Graph;
use rand::Rng;

/// `G(n, p)` redrawn until connected.
pub fn connected_er<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, edges).unwrap();
        if n <= 1 || reachable(&g, 0).iter().all(|&r| r) {
            return g;
        }
    }
}

pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen::<f64>() < p)
        .collect();
    Graph::new(n, edges).unwrap()
}

fn reachable(g: &Graph, s: usize) -> Vec<bool> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(u) = stack.pop() {
        for (v, s) in seen.iter_mut().enumerate() {
            if !*s && g.has_edge(u, v) {
                *s = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// Edge-list relabeling: node `order[i]` becomes node `i`.
pub fn relabel_oracle(g: &Graph, order: &[usize]) -> Graph {
    let mut pos = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    Graph::new(g.node_count(), g.edges().iter().map(|&(u, v)| (pos[u], pos[v]))).unwrap()
}

pub fn degree_oracle(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    (0..n).map(|u| (0..n).filter(|&v| g.has_edge(u, v)).count()).collect()
}

/// Triangles through each node, by scanning every node triple.
pub fn triangle_oracle(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut t = vec![0; n];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                    t[a] += 1;
                    t[b] += 1;
                    t[c] += 1;
                }
            }
        }
    }
    t
}

pub fn clustering_oracle(g: &Graph) -> Vec<f64> {
    let d = degree_oracle(g);
    let t = triangle_oracle(g);
    (0..g.node_count())
        .map(|v| if d[v] < 2 { 0.0 } else { t[v] as f64 / (d[v] * (d[v] - 1) / 2) as f64 })
        .collect()
}

/// Graphlet orbits 0..14 by exhaustive enumeration of every 3- and 4-node
/// subset, classifying each connected induced subgraph by its degree
/// sequence.
pub fn orbit_oracle(g: &Graph) -> Vec<[u64; 15]> {
    let n = g.node_count();
    let mut out = vec![[0u64; 15]; n];
    for (v, d) in degree_oracle(g).into_iter().enumerate() {
        out[v][0] = d as u64;
    }
    let local_degrees = |nodes: &[usize]| -> Vec<usize> {
        nodes
            .iter()
            .map(|&u| nodes.iter().filter(|&&w| w != u && g.has_edge(u, w)).count())
            .collect()
    };
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let nodes = [a, b, c];
                let deg = local_degrees(&nodes);
                let edges: usize = deg.iter().sum::<usize>() / 2;
                for (i, &v) in nodes.iter().enumerate() {
                    match (edges, deg[i]) {
                        (2, 1) => out[v][1] += 1,
                        (2, 2) => out[v][2] += 1,
                        (3, _) => out[v][3] += 1,
                        _ => {}
                    }
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let nodes = [a, b, c, d];
                    let deg = local_degrees(&nodes);
                    if !connected4(g, &nodes) {
                        continue;
                    }
                    let mut sorted = deg.clone();
                    sorted.sort_unstable();
                    for (i, &v) in nodes.iter().enumerate() {
                        let orbit = match (sorted.as_slice(), deg[i]) {
                            ([1, 1, 2, 2], 1) => 4,
                            ([1, 1, 2, 2], 2) => 5,
                            ([1, 1, 1, 3], 1) => 6,
                            ([1, 1, 1, 3], 3) => 7,
                            ([2, 2, 2, 2], _) => 8,
                            ([1, 2, 2, 3], 1) => 9,
                            ([1, 2, 2, 3], 2) => 10,
                            ([1, 2, 2, 3], 3) => 11,
                            ([2, 2, 3, 3], 2) => 12,
                            ([2, 2, 3, 3], 3) => 13,
                            ([3, 3, 3, 3], _) => 14,
                            other => panic!("unexpected connected 4-node degree pattern {other:?}"),
                        };
                        out[v][orbit] += 1;
                    }
                }
            }
        }
    }
    out
}

fn connected4(g: &Graph, nodes: &[usize; 4]) -> bool {
    let mut seen = [true, false, false, false];
    for _ in 0..3 {
        for i in 0..4 {
            if seen[i] {
                for j in 0..4 {
                    if g.has_edge(nodes[i], nodes[j]) {
                        seen[j] = true;
                    }
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Random page of integer-coordinate boxes (boxes may overlap).
pub fn random_page<R: Rng>(boxes: usize, rng: &mut R) -> LayoutPage {
    let width = 100.0;
    let height = rng.gen_range(60..=160) as f64;
    let regions = (0..boxes)
        .map(|_| {
            let w = rng.gen_range(1..=40);
            let h = rng.gen_range(1..=12);
            let x0 = rng.gen_range(0..=100 - w);
            let y0 = rng.gen_range(0..=height as i32 - h);
            let bbox = BBox::new(x0 as f64, y0 as f64, (x0 + w) as f64, (y0 + h) as f64);
            Region::new(rng.gen_range(0..6), bbox, Content::Text("x1".into()))
        })
        .collect();
    LayoutPage { width, height, regions }
}

/// Visibility by casting a dense fan of axis-parallel segments between the
/// facing edges of each pair; on integer pages a step of 0.5 starting at
/// 0.25 hits every unit cell of the shared interval. A pair is visible when
/// no segment touches another box's interior.
pub fn visibility_oracle(page: &LayoutPage, max_vertical_gap: f64) -> Vec<(usize, usize)> {
    let boxes: Vec<BBox> = page.regions.iter().map(|r| r.bbox).collect();
    let mut edges = Vec::new();
    let hits = |o: &BBox, x: f64, ya: f64, yb: f64| o.x0 < x && x < o.x1 && o.y0 < yb && o.y1 > ya;
    let hits_h = |o: &BBox, y: f64, xa: f64, xb: f64| o.y0 < y && y < o.y1 && o.x0 < xb && o.x1 > xa;
    for i in 0..boxes.len() {
        for j in i + 1..boxes.len() {
            let (a, b) = (boxes[i], boxes[j]);
            let (ox0, ox1) = (a.x0.max(b.x0), a.x1.min(b.x1));
            let (oy0, oy1) = (a.y0.max(b.y0), a.y1.min(b.y1));
            let others: Vec<&BBox> = (0..boxes.len()).filter(|&k| k != i && k != j).map(|k| &boxes[k]).collect();
            let visible = if ox1 > ox0 && oy1 > oy0 {
                true
            } else if ox1 > ox0 {
                let (ya, yb) = if a.y1 <= b.y0 { (a.y1, b.y0) } else { (b.y1, a.y0) };
                let fan = ((ox1 - ox0) / 0.5) as usize;
                yb - ya <= max_vertical_gap * page.height
                    && (0..fan).all(|k| {
                        let x = ox0 + 0.25 + 0.5 * k as f64;
                        others.iter().all(|o| !hits(o, x, ya, yb))
                    })
            } else if oy1 > oy0 {
                let (xa, xb) = if a.x1 <= b.x0 { (a.x1, b.x0) } else { (b.x1, a.x0) };
                let fan = ((oy1 - oy0) / 0.5) as usize;
                (0..fan).all(|k| {
                    let y = oy0 + 0.25 + 0.5 * k as f64;
                    others.iter().all(|o| !hits_h(o, y, xa, xb))
                })
            } else {
                false
            };
            if visible {
                edges.push((i, j));
            }
        }
    }
    edges
}
