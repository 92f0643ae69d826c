//! Plain-text corpus format.
//!
//! ```text
//! # comment
//! G <n> <m>
//! <u> <v>          (m lines, 0 <= u < v < n)
//! F <node> f1 .. fk  (optional)
//! L <node> <class>   (optional)
//! ```
//!
//! Graph blocks are separated by blank lines. A graph that carries features
//! or labels must list them for every node.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Serializes a corpus; each entry of `comments` becomes a leading `#` line.
pub fn write_corpus(graphs: &[Graph], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for (i, g) in graphs.iter().enumerate() {
        if i > 0 || !comments.is_empty() {
            out.push('\n');
        }
        let _ = writeln!(out, "G {} {}", g.node_count(), g.edge_count());
        for &(u, v) in g.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        if let Some(features) = g.features() {
            for (node, f) in features.iter().enumerate() {
                let _ = write!(out, "F {node}");
                for x in f {
                    let _ = write!(out, " {x}");
                }
                out.push('\n');
            }
        }
        if let Some(labels) = g.labels() {
            for (node, l) in labels.iter().enumerate() {
                let _ = writeln!(out, "L {node} {l}");
            }
        }
    }
    out
}

pub fn save_corpus(path: &Path, graphs: &[Graph], comments: &[String]) -> Result<()> {
    std::fs::write(path, write_corpus(graphs, comments))?;
    Ok(())
}

pub fn load_corpus(path: &Path) -> Result<Vec<Graph>> {
    parse_corpus(&std::fs::read_to_string(path)?)
}

struct Block {
    line: usize,
    n: usize,
    m: usize,
    edges: Vec<(usize, usize)>,
    seen: HashSet<(usize, usize)>,
    features: Vec<Option<Vec<f64>>>,
    labels: Vec<Option<u32>>,
}

impl Block {
    fn finish(self) -> Result<Graph> {
        if self.edges.len() != self.m {
            return Err(Error::parse(
                self.line,
                format!("header declares {} edges but {} were listed", self.m, self.edges.len()),
            ));
        }
        let mut g = Graph::new(self.n, self.edges).map_err(|e| Error::parse(self.line, e.to_string()))?;
        if self.features.iter().any(Option::is_some) {
            let features = collect_all(self.features, "feature", self.line)?;
            g = g.with_features(features).map_err(|e| Error::parse(self.line, e.to_string()))?;
        }
        if self.labels.iter().any(Option::is_some) {
            g = g.with_labels(collect_all(self.labels, "label", self.line)?)?;
        }
        Ok(g)
    }
}

fn collect_all<T>(items: Vec<Option<T>>, what: &str, line: usize) -> Result<Vec<T>> {
    items
        .into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| Error::parse(line, format!("node {i} has no {what} line"))))
        .collect()
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} '{tok}'")))
}

fn parse_node(tok: &str, line: usize, n: usize) -> Result<usize> {
    let v: usize = parse_num(tok, line, "node index")?;
    if v >= n {
        return Err(Error::parse(line, format!("node {v} out of range for {n} nodes")));
    }
    Ok(v)
}

/// Parses a corpus; errors carry the 1-based line number.
pub fn parse_corpus(text: &str) -> Result<Vec<Graph>> {
    let mut graphs = Vec::new();
    let mut block: Option<Block> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            // Only a truly blank line ends a block; comment lines do not.
            if raw.trim().is_empty() {
                if let Some(b) = block.take() {
                    graphs.push(b.finish()?);
                }
            }
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "G" => {
                if let Some(b) = block.take() {
                    graphs.push(b.finish()?);
                }
                if toks.len() != 3 {
                    return Err(Error::parse(line, "header must be 'G <n> <m>'"));
                }
                let n: usize = parse_num(toks[1], line, "node count")?;
                let m: usize = parse_num(toks[2], line, "edge count")?;
                block = Some(Block {
                    line,
                    n,
                    m,
                    edges: Vec::with_capacity(m.min(1 << 16)),
                    seen: HashSet::new(),
                    features: vec![None; n],
                    labels: vec![None; n],
                });
            }
            tag => {
                let b = block
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, format!("'{tag}' line before any 'G' header")))?;
                match tag {
                    "F" => {
                        if toks.len() < 3 {
                            return Err(Error::parse(line, "feature line must be 'F <node> <values>'"));
                        }
                        let node = parse_node(toks[1], line, b.n)?;
                        let vals = toks[2..]
                            .iter()
                            .map(|t| parse_num::<f64>(t, line, "feature value"))
                            .collect::<Result<Vec<_>>>()?;
                        if b.features[node].replace(vals).is_some() {
                            return Err(Error::parse(line, format!("duplicate features for node {node}")));
                        }
                    }
                    "L" => {
                        if toks.len() != 3 {
                            return Err(Error::parse(line, "label line must be 'L <node> <class>'"));
                        }
                        let node = parse_node(toks[1], line, b.n)?;
                        let class: u32 = parse_num(toks[2], line, "class")?;
                        if b.labels[node].replace(class).is_some() {
                            return Err(Error::parse(line, format!("duplicate label for node {node}")));
                        }
                    }
                    _ => {
                        if toks.len() != 2 {
                            return Err(Error::parse(line, format!("unrecognized line '{content}'")));
                        }
                        let u = parse_node(toks[0], line, b.n)?;
                        let v = parse_node(toks[1], line, b.n)?;
                        if u == v {
                            return Err(Error::parse(line, format!("self-loop on node {u}")));
                        }
                        let key = (u.min(v), u.max(v));
                        if !b.seen.insert(key) {
                            return Err(Error::parse(line, format!("duplicate edge {} {}", key.0, key.1)));
                        }
                        if b.edges.len() == b.m {
                            return Err(Error::parse(
                                line,
                                format!("more edges than the {} declared at line {}", b.m, b.line),
                            ));
                        }
                        b.edges.push(key);
                    }
                }
            }
        }
    }
    if let Some(b) = block {
        graphs.push(b.finish()?);
    }
    Ok(graphs)
}
