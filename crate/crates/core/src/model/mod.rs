//! Hierarchical recurrent graph generator.
//!
//! A graph-level GRU stack advances one step per node. Its top hidden state
//! is projected by a single linear map and copied into every layer of an
//! edge-level GRU stack, which then emits the node's adjacency bits one at
//! a time through a small MLP head (`relu` then `sigmoid`). Training feeds
//! ground-truth rows and bits (teacher forcing); sampling feeds back the
//! model's own draws and stops on an all-zero row.

mod checkpoint;
mod forward;
mod sample;
mod train;

pub use checkpoint::{load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint, CHECKPOINT_VERSION};
pub use forward::{forward_teacher_forced, loss_and_grad, EdgePredictions};
pub use sample::{sample_graph, sample_graphs};
pub use train::{prepare_hyperparams, train, TrainConfig, Trainer};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nn::{Activation, Dense, GruStack, Mlp, Params, INIT_POLICY};

/// Architecture and generation limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrnnHyperparams {
    /// Truncation width of adjacency vectors (graph-level input size).
    pub m: usize,
    pub graph_layers: usize,
    pub graph_hidden: usize,
    pub edge_layers: usize,
    pub edge_hidden: usize,
    pub head_hidden: usize,
    /// Largest graph the sampler will emit.
    pub n_max: usize,
}

impl GrnnHyperparams {
    /// Full-size architecture: 4×128 graph-level, 4×16 edge-level, 8-unit head.
    pub fn new(m: usize, n_max: usize) -> Self {
        GrnnHyperparams {
            m,
            graph_layers: 4,
            graph_hidden: 128,
            edge_layers: 4,
            edge_hidden: 16,
            head_hidden: 8,
            n_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dims = [
            self.m,
            self.graph_layers,
            self.graph_hidden,
            self.edge_layers,
            self.edge_hidden,
            self.head_hidden,
            self.n_max,
        ];
        if dims.contains(&0) {
            return Err(Error::structural(format!("hyperparameters must be positive: {self:?}")));
        }
        Ok(())
    }
}

/// Every learnable tensor of the generator. Also used as the gradient
/// container, since gradients share the parameters' shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct GrnnParams {
    pub graph_rnn: GruStack,
    pub edge_rnn: GruStack,
    /// Graph-level top hidden → edge-level initial hidden.
    pub init_proj: Dense,
    pub head: Mlp,
}

impl GrnnParams {
    pub fn zeros(hp: &GrnnHyperparams) -> Self {
        GrnnParams {
            graph_rnn: GruStack::zeros(hp.graph_layers, hp.m, hp.graph_hidden),
            edge_rnn: GruStack::zeros(hp.edge_layers, 1, hp.edge_hidden),
            init_proj: Dense::zeros(hp.graph_hidden, hp.edge_hidden, Activation::Identity),
            head: Mlp {
                layers: vec![
                    Dense::zeros(hp.edge_hidden, hp.head_hidden, Activation::Relu),
                    Dense::zeros(hp.head_hidden, 1, Activation::Sigmoid),
                ],
            },
        }
    }

    pub fn random(hp: &GrnnHyperparams, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GrnnParams {
            graph_rnn: GruStack::random(hp.graph_layers, hp.m, hp.graph_hidden, &mut rng),
            edge_rnn: GruStack::random(hp.edge_layers, 1, hp.edge_hidden, &mut rng),
            init_proj: Dense::random(hp.graph_hidden, hp.edge_hidden, Activation::Identity, &mut rng),
            head: Mlp {
                layers: vec![
                    Dense::random(hp.edge_hidden, hp.head_hidden, Activation::Relu, &mut rng),
                    Dense::random(hp.head_hidden, 1, Activation::Sigmoid, &mut rng),
                ],
            },
        }
    }
}

impl Params for GrnnParams {
    fn tensors(&self) -> Vec<&[f64]> {
        let mut t = self.graph_rnn.tensors();
        t.extend(self.edge_rnn.tensors());
        t.extend(self.init_proj.tensors());
        t.extend(self.head.tensors());
        t
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let mut t = self.graph_rnn.tensors_mut();
        t.extend(self.edge_rnn.tensors_mut());
        t.extend(self.init_proj.tensors_mut());
        t.extend(self.head.tensors_mut());
        t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrnnModel {
    pub hp: GrnnHyperparams,
    /// Seed the parameters were initialized from.
    pub seed: u64,
    pub init_policy: String,
    pub params: GrnnParams,
}

impl GrnnModel {
    /// Uniform fan-in initialization from `seed`, biases zero.
    pub fn init(hp: GrnnHyperparams, seed: u64) -> Result<Self> {
        hp.validate()?;
        Ok(GrnnModel {
            hp,
            seed,
            init_policy: INIT_POLICY.to_string(),
            params: GrnnParams::random(&hp, seed),
        })
    }

    /// All parameters zero.
    pub fn zeros(hp: GrnnHyperparams) -> Result<Self> {
        hp.validate()?;
        Ok(GrnnModel {
            hp,
            seed: 0,
            init_policy: "zeros".to_string(),
            params: GrnnParams::zeros(&hp),
        })
    }

    pub fn param_count(&self) -> usize {
        self.params.param_count()
    }
}

/// Same as [`GrnnModel::init`].
pub fn init_model(hp: GrnnHyperparams, seed: u64) -> Result<GrnnModel> {
    GrnnModel::init(hp, seed)
}
