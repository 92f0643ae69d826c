use super::Params;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// Adam moments, flattened in [`Params::tensors`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub cfg: AdamConfig,
    pub step: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl AdamState {
    pub fn new<P: Params>(params: &P, cfg: AdamConfig) -> Self {
        let n = params.param_count();
        AdamState {
            cfg,
            step: 0,
            m: vec![0.0; n],
            v: vec![0.0; n],
        }
    }

    /// One bias-corrected Adam update. Fails before touching anything if a
    /// gradient is not finite or shapes disagree.
    pub fn step<P: Params>(&mut self, params: &mut P, grads: &P, lr: f64) -> Result<()> {
        if grads.param_count() != self.m.len() || params.param_count() != self.m.len() {
            return Err(Error::structural("adam state does not match parameter shapes"));
        }
        if !grads.all_finite() {
            return Err(Error::Numeric("non-finite gradient".into()));
        }
        self.step += 1;
        let AdamConfig { beta1, beta2, eps } = self.cfg;
        let bc1 = 1.0 - beta1.powi(self.step as i32);
        let bc2 = 1.0 - beta2.powi(self.step as i32);
        let mut i = 0;
        for (p, g) in params.tensors_mut().into_iter().zip(grads.tensors()) {
            for (theta, &g) in p.iter_mut().zip(g) {
                let m = &mut self.m[i];
                let v = &mut self.v[i];
                *m = beta1 * *m + (1.0 - beta1) * g;
                *v = beta2 * *v + (1.0 - beta2) * g * g;
                let m_hat = *m / bc1;
                let v_hat = *v / bc2;
                *theta -= lr * m_hat / (v_hat.sqrt() + eps);
                i += 1;
            }
        }
        Ok(())
    }
}

/// Step decay: the rate is multiplied by `factor` every `every` epochs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrSchedule {
    pub base_lr: f64,
    pub factor: f64,
    pub every: u32,
}

impl Default for LrSchedule {
    fn default() -> Self {
        LrSchedule {
            base_lr: 0.001,
            factor: 0.2,
            every: 100,
        }
    }
}

impl LrSchedule {
    pub fn at(&self, epoch: u32) -> f64 {
        self.base_lr * self.factor.powi((epoch / self.every.max(1)) as i32)
    }
}

/// `base_lr · 0.2^⌊epoch / 100⌋`
pub fn lr_schedule(base_lr: f64, epoch: u32) -> f64 {
    LrSchedule {
        base_lr,
        ..Default::default()
    }
    .at(epoch)
}
