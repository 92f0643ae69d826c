//! DOT, GraphML and SVG output.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::layout::class_name;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Dot,
    GraphMl,
    Svg,
}

impl FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(RenderFormat::Dot),
            "graphml" => Ok(RenderFormat::GraphMl),
            "svg" => Ok(RenderFormat::Svg),
            _ => Err(Error::structural(format!("unknown render format '{s}' (dot, graphml, svg)"))),
        }
    }
}

/// Renders `g`; `seed` drives the SVG layout and is recorded in every format.
pub fn render(g: &Graph, format: RenderFormat, seed: u64) -> String {
    let tag = super::provenance(seed);
    match format {
        RenderFormat::Dot => dot(g, &tag),
        RenderFormat::GraphMl => graphml(g, &tag),
        RenderFormat::Svg => svg(g, &tag, seed),
    }
}

fn node_label(g: &Graph, v: usize) -> Option<String> {
    g.labels().map(|ls| match class_name(ls[v]) {
        Some(name) => name.to_string(),
        None => ls[v].to_string(),
    })
}

fn dot(g: &Graph, tag: &str) -> String {
    let mut out = format!("// {tag}\ngraph G {{\n");
    if g.labels().is_some() {
        for v in 0..g.node_count() {
            let _ = writeln!(out, "  {v} [label=\"{v}:{}\"];", node_label(g, v).unwrap_or_default());
        }
    } else {
        // Isolated nodes must still appear.
        let deg = g.degrees();
        for v in (0..g.node_count()).filter(|&v| deg[v] == 0) {
            let _ = writeln!(out, "  {v};");
        }
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

fn graphml(g: &Graph, tag: &str) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(out, "<!-- {tag} -->");
    out.push_str(
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\"\n    \
         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\"\n    \
         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns \
         http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n",
    );
    let nf = g.features().and_then(|f| f.first()).map_or(0, Vec::len);
    if g.labels().is_some() {
        out.push_str("  <key id=\"class\" for=\"node\" attr.name=\"class\" attr.type=\"string\"/>\n");
    }
    for k in 0..nf {
        let _ = writeln!(out, "  <key id=\"f{k}\" for=\"node\" attr.name=\"f{k}\" attr.type=\"double\"/>");
    }
    out.push_str("  <graph id=\"G\" edgedefault=\"undirected\">\n");
    for v in 0..g.node_count() {
        let label = node_label(g, v);
        if label.is_none() && nf == 0 {
            let _ = writeln!(out, "    <node id=\"n{v}\"/>");
            continue;
        }
        let _ = writeln!(out, "    <node id=\"n{v}\">");
        if let Some(l) = label {
            let _ = writeln!(out, "      <data key=\"class\">{l}</data>");
        }
        if let Some(f) = g.features() {
            for (k, x) in f[v].iter().enumerate() {
                let _ = writeln!(out, "      <data key=\"f{k}\">{x}</data>");
            }
        }
        out.push_str("    </node>\n");
    }
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        let _ = writeln!(out, "    <edge id=\"e{i}\" source=\"n{u}\" target=\"n{v}\"/>");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

/// Fruchterman–Reingold positions in the unit square, deterministic in `seed`.
pub fn force_layout(g: &Graph, seed: u64, iterations: usize) -> Vec<(f64, f64)> {
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    if n < 2 {
        return pos.iter().map(|_| (0.5, 0.5)).collect();
    }
    let k = (1.0 / n as f64).sqrt();
    let mut disp = vec![(0.0, 0.0); n];
    for it in 0..iterations {
        let temp = 0.1 * (1.0 - it as f64 / iterations as f64);
        disp.iter_mut().for_each(|d| *d = (0.0, 0.0));
        for u in 0..n {
            for v in u + 1..n {
                let (dx, dy) = (pos[u].0 - pos[v].0, pos[u].1 - pos[v].1);
                let d = (dx * dx + dy * dy).sqrt().max(1e-9);
                let f = k * k / d;
                disp[u].0 += dx / d * f;
                disp[u].1 += dy / d * f;
                disp[v].0 -= dx / d * f;
                disp[v].1 -= dy / d * f;
            }
        }
        for &(u, v) in g.edges() {
            let (dx, dy) = (pos[u].0 - pos[v].0, pos[u].1 - pos[v].1);
            let d = (dx * dx + dy * dy).sqrt().max(1e-9);
            let f = d * d / k;
            disp[u].0 -= dx / d * f;
            disp[u].1 -= dy / d * f;
            disp[v].0 += dx / d * f;
            disp[v].1 += dy / d * f;
        }
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = (d.0 * d.0 + d.1 * d.1).sqrt().max(1e-9);
            let step = len.min(temp);
            p.0 += d.0 / len * step;
            p.1 += d.1 / len * step;
        }
    }
    // Normalize into [0, 1] keeping the aspect ratio.
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in &pos {
        lo_x = lo_x.min(x);
        lo_y = lo_y.min(y);
        hi_x = hi_x.max(x);
        hi_y = hi_y.max(y);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
    pos.iter()
        .map(|&(x, y)| (
            (x - lo_x) / span + (1.0 - (hi_x - lo_x) / span) / 2.0,
            (y - lo_y) / span + (1.0 - (hi_y - lo_y) / span) / 2.0,
        ))
        .collect()
}

const PALETTE: [&str; 6] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#9c9c9c"];

fn svg(g: &Graph, tag: &str, seed: u64) -> String {
    const SIZE: f64 = 600.0;
    const MARGIN: f64 = 30.0;
    let pos = force_layout(g, seed, 300);
    let at = |v: usize| {
        let (x, y) = pos[v];
        (MARGIN + x * (SIZE - 2.0 * MARGIN), MARGIN + y * (SIZE - 2.0 * MARGIN))
    };
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" \
         viewBox=\"0 0 {SIZE} {SIZE}\">\n<!-- {tag} -->\n"
    );
    out.push_str("<g stroke=\"#555\" stroke-width=\"1.5\">\n");
    for &(u, v) in g.edges() {
        let ((x1, y1), (x2, y2)) = (at(u), at(v));
        let _ = writeln!(out, "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\"/>");
    }
    out.push_str("</g>\n<g font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">\n");
    for v in 0..g.node_count() {
        let (x, y) = at(v);
        let fill = g.labels().map_or(PALETTE[0], |ls| PALETTE[ls[v] as usize % PALETTE.len()]);
        let _ = writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"9\" fill=\"{fill}\"/>");
        let _ = writeln!(out, "<text x=\"{x:.2}\" y=\"{:.2}\" fill=\"#fff\">{v}</text>", y + 3.5);
    }
    out.push_str("</g>\n</svg>\n");
    out
}
