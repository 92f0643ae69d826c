use crate::error::{Error, Result};
use crate::graph::Graph;

/// Fraction of nodes at each degree `0..=max_degree`.
pub fn degree_histogram(g: &Graph) -> Result<Vec<f64>> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::structural("degree histogram of an empty graph"));
    }
    let degrees = g.degrees();
    let max = degrees.iter().copied().max().unwrap_or(0);
    let mut hist = vec![0.0; max + 1];
    for d in degrees {
        hist[d] += 1.0;
    }
    for h in &mut hist {
        *h /= n as f64;
    }
    Ok(hist)
}

/// Local clustering coefficient `2·T_v / (d_v (d_v − 1))`, zero below degree 2.
pub fn clustering_coefficients(g: &Graph) -> Vec<f64> {
    let adj = g.adjacency();
    let dense = g.adjacency_matrix();
    let n = g.node_count();
    adj.iter()
        .map(|nb| {
            let d = nb.len();
            if d < 2 {
                return 0.0;
            }
            let mut t = 0usize;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if dense[a * n + b] {
                        t += 1;
                    }
                }
            }
            2.0 * t as f64 / (d * (d - 1)) as f64
        })
        .collect()
}

/// Normalized histogram of clustering coefficients over `bins` equal bins on
/// `[0, 1]`; a coefficient of exactly 1 lands in the last bin.
pub fn clustering_histogram(g: &Graph, bins: usize) -> Result<Vec<f64>> {
    if g.node_count() == 0 {
        return Err(Error::structural("clustering histogram of an empty graph"));
    }
    if bins == 0 {
        return Err(Error::structural("clustering histogram needs at least one bin"));
    }
    let coeffs = clustering_coefficients(g);
    let mut hist = vec![0.0; bins];
    for c in &coeffs {
        let b = ((c * bins as f64).floor() as usize).min(bins - 1);
        hist[b] += 1.0;
    }
    for h in &mut hist {
        *h /= coeffs.len() as f64;
    }
    Ok(hist)
}
