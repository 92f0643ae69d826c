use crate::error::{Error, Result};

/// Probabilities are clamped to `[PROB_EPS, 1 − PROB_EPS]` before logs.
pub const PROB_EPS: f64 = 1e-7;

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[inline]
pub fn clamp_prob(p: f64) -> f64 {
    p.clamp(PROB_EPS, 1.0 - PROB_EPS)
}

/// Mean binary cross-entropy over positions where `mask` is set.
pub fn bce_loss(p: &[f64], y: &[f64], mask: &[bool]) -> Result<f64> {
    if p.len() != y.len() || p.len() != mask.len() {
        return Err(Error::structural("bce inputs differ in length"));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for ((&p, &y), &m) in p.iter().zip(y).zip(mask) {
        if m {
            sum += bce_term(p, y);
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::structural("bce mask selects no positions"));
    }
    Ok(sum / count as f64)
}

#[inline]
pub(crate) fn bce_term(p: f64, y: f64) -> f64 {
    let p = clamp_prob(p);
    -(y * p.ln() + (1.0 - y) * (1.0 - p).ln())
}

/// Gradient of one BCE term w.r.t. the logit `a` where `p = σ(a)`:
/// `p − y` inside the clamp range, zero where the clamp is active.
#[inline]
pub fn bce_logit_grad(p: f64, y: f64) -> f64 {
    if (PROB_EPS..=1.0 - PROB_EPS).contains(&p) {
        p - y
    } else {
        0.0
    }
}
