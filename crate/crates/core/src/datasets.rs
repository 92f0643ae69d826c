//! Synthetic corpora and train/test splitting.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par::{self, Exec};

/// Erdős–Rényi `G(n, p)`: each pair is an edge independently with probability `p`.
pub fn gen_er<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::structural(format!("edge probability {p} outside [0, 1]")));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// Two Erdős–Rényi communities joined by a few random bridges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommunityParams {
    pub num_graphs: usize,
    pub size_lo: usize,
    pub size_hi: usize,
    pub p_intra: f64,
    pub inter_edges: usize,
}

impl Default for CommunityParams {
    fn default() -> Self {
        CommunityParams {
            num_graphs: 500,
            size_lo: 6,
            size_hi: 10,
            p_intra: 0.7,
            inter_edges: 2,
        }
    }
}

impl CommunityParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_intra) {
            return Err(Error::structural("p_intra outside [0, 1]"));
        }
        if self.size_lo < 2 || self.size_hi < self.size_lo {
            return Err(Error::structural(format!(
                "community sizes [{}, {}] invalid (need 2 <= lo <= hi)",
                self.size_lo, self.size_hi
            )));
        }
        if self.inter_edges < 1 || self.inter_edges > self.size_lo * self.size_lo {
            return Err(Error::structural(format!(
                "inter_edges must be in [1, {}]",
                self.size_lo * self.size_lo
            )));
        }
        Ok(())
    }
}

/// Nodes `0..a` form the first community and `a..a+b` the second.
pub fn gen_two_community<R: Rng + ?Sized>(params: &CommunityParams, rng: &mut R) -> Result<Graph> {
    params.validate()?;
    let a = rng.gen_range(params.size_lo..=params.size_hi);
    let b = rng.gen_range(params.size_lo..=params.size_hi);
    let left = gen_er(a, params.p_intra, rng)?;
    let right = gen_er(b, params.p_intra, rng)?;
    let mut edges: Vec<(usize, usize)> = left.edges().to_vec();
    edges.extend(right.edges().iter().map(|&(u, v)| (u + a, v + a)));
    for k in index::sample(rng, a * b, params.inter_edges) {
        edges.push((k / b, a + k % b));
    }
    Graph::new(a + b, edges)
}

fn stream(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

/// `params.num_graphs` community graphs; graph `i` draws from stream `i`.
pub fn community_corpus(params: &CommunityParams, seed: u64, exec: Exec) -> Result<Vec<Graph>> {
    params.validate()?;
    par::map_range(exec, params.num_graphs, |i| gen_two_community(params, &mut stream(seed, i)))
        .into_iter()
        .collect()
}

/// `count` independent `G(n, p)` graphs; graph `i` draws from stream `i`.
pub fn er_corpus(count: usize, n: usize, p: f64, seed: u64, exec: Exec) -> Result<Vec<Graph>> {
    par::map_range(exec, count, |i| gen_er(n, p, &mut stream(seed, i)))
        .into_iter()
        .collect()
}

/// Shuffles, then puts the first `⌊fraction · N⌋` graphs in the training part.
pub fn split<R: Rng + ?Sized>(
    corpus: &[Graph],
    train_fraction: f64,
    rng: &mut R,
) -> Result<(Vec<Graph>, Vec<Graph>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::structural(format!("train fraction {train_fraction} outside (0, 1)")));
    }
    if corpus.len() < 2 {
        return Err(Error::structural("cannot split a corpus of fewer than two graphs"));
    }
    let mut idx: Vec<usize> = (0..corpus.len()).collect();
    idx.shuffle(rng);
    let cut = (train_fraction * corpus.len() as f64).floor() as usize;
    let take = |ids: &[usize]| ids.iter().map(|&i| corpus[i].clone()).collect();
    Ok((take(&idx[..cut]), take(&idx[cut..])))
}
