use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// 1-D earth mover's distance between normalized histograms on a shared
/// integer grid with unit bin width. The shorter input is zero-padded.
pub fn wasserstein1(h1: &[f64], h2: &[f64]) -> Result<f64> {
    for h in [h1, h2] {
        let total: f64 = h.iter().sum();
        if (total - 1.0).abs() > 1e-9 || h.iter().any(|&x| x < 0.0) {
            return Err(Error::structural(format!("histogram is not normalized (sum {total})")));
        }
    }
    let len = h1.len().max(h2.len());
    let (mut c1, mut c2, mut dist) = (0.0, 0.0, 0.0);
    for k in 0..len {
        c1 += h1.get(k).copied().unwrap_or(0.0);
        c2 += h2.get(k).copied().unwrap_or(0.0);
        dist += (c1 - c2).abs();
    }
    Ok(dist)
}

/// Positive-definite kernels over descriptor vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `exp(−(bin_width · W1(x, y))² / 2σ²)` over normalized histograms.
    GaussianEmd { sigma: f64, bin_width: f64 },
    /// `exp(−‖x − y‖² / 2σ²)`.
    GaussianEuclidean { sigma: f64 },
}

impl Kernel {
    pub fn sigma(&self) -> f64 {
        match *self {
            Kernel::GaussianEmd { sigma, .. } | Kernel::GaussianEuclidean { sigma } => sigma,
        }
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        match *self {
            Kernel::GaussianEmd { sigma, bin_width } => {
                let d = bin_width * wasserstein1(x, y)?;
                Ok((-d * d / (2.0 * sigma * sigma)).exp())
            }
            Kernel::GaussianEuclidean { sigma } => {
                if x.len() != y.len() {
                    return Err(Error::structural("euclidean kernel on vectors of different length"));
                }
                let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                Ok((-d2 / (2.0 * sigma * sigma)).exp())
            }
        }
    }
}

/// Mean kernel value over all pairs, rows summed in a fixed order.
fn mean_kernel(a: &[Vec<f64>], b: &[Vec<f64>], kernel: &Kernel, exec: Exec) -> Result<f64> {
    let rows = par::map(exec, a, |x| -> Result<f64> {
        let mut s = 0.0;
        for y in b {
            s += kernel.eval(x, y)?;
        }
        Ok(s)
    });
    let mut total = 0.0;
    for r in rows {
        total += r?;
    }
    Ok(total / (a.len() * b.len()) as f64)
}

/// Biased (V-statistic) squared MMD before clamping; may be slightly
/// negative from rounding.
pub fn mmd_squared_raw(a: &[Vec<f64>], b: &[Vec<f64>], kernel: &Kernel, exec: Exec) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::structural("mmd needs two non-empty sets"));
    }
    let kaa = mean_kernel(a, a, kernel, exec)?;
    let kbb = mean_kernel(b, b, kernel, exec)?;
    let kab = mean_kernel(a, b, kernel, exec)?;
    Ok(kaa + kbb - 2.0 * kab)
}

/// Biased squared MMD, clamped at zero.
pub fn mmd_squared(a: &[Vec<f64>], b: &[Vec<f64>], kernel: &Kernel, exec: Exec) -> Result<f64> {
    Ok(mmd_squared_raw(a, b, kernel, exec)?.max(0.0))
}
