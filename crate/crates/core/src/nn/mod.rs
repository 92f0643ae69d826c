//! Minimal f64 neural engine: GRU stacks, dense layers, BCE and Adam.
//!
//! There is no general autodiff. Each op records what its backward pass
//! needs in a trace and exposes an explicit `backward` that accumulates
//! parameter gradients into a structure of the same shape as the
//! parameters.

mod adam;
mod gru;
mod loss;
mod matrix;
mod mlp;

pub use adam::{lr_schedule, AdamConfig, AdamState, LrSchedule};
pub use gru::{GruLayer, GruStack, GruStackTrace};
pub use loss::{bce_logit_grad, bce_loss, clamp_prob, sigmoid, PROB_EPS};
pub use matrix::Matrix;
pub use mlp::{Activation, Dense, Mlp, MlpTrace};

use rand::Rng;

/// Anything that is a fixed list of f64 tensors.
///
/// The order of [`Params::tensors`] is the canonical parameter order used by
/// the optimizer and by checkpoints.
pub trait Params {
    fn tensors(&self) -> Vec<&[f64]>;
    fn tensors_mut(&mut self) -> Vec<&mut [f64]>;

    fn param_count(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    /// Same shape, all zeros.
    fn zeros_like(&self) -> Self
    where
        Self: Clone,
    {
        let mut z = self.clone();
        for t in z.tensors_mut() {
            t.fill(0.0);
        }
        z
    }

    /// `self += other`, tensor by tensor.
    fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.tensors_mut().into_iter().zip(other.tensors()) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    fn scale(&mut self, s: f64) {
        for t in self.tensors_mut() {
            for x in t {
                *x *= s;
            }
        }
    }

    fn all_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.iter().all(|x| x.is_finite()))
    }
}

/// Tag recorded in checkpoints for [`init_uniform`].
pub const INIT_POLICY: &str = "uniform_fan_in";

/// Fills `w` with U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
pub fn init_uniform<R: Rng + ?Sized>(w: &mut Matrix, rng: &mut R) {
    let bound = 1.0 / (w.cols().max(1) as f64).sqrt();
    for x in w.data_mut() {
        *x = rng.gen_range(-bound..=bound);
    }
}
