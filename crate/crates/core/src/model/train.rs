use log::debug;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{loss_and_grad, GrnnModel, GrnnParams};
use crate::error::{Error, Result};
use crate::graph::{bfs_bandwidth, estimate_truncation_width, graph_to_sequence, random_bfs_order, Graph};
use crate::nn::{AdamConfig, AdamState, LrSchedule, Params};
use crate::par::{self, Exec};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub batch_size: usize,
    pub schedule: LrSchedule,
    pub epochs: u32,
    pub seed: u64,
    /// Also train the all-zero row that ends each graph.
    pub termination_row: bool,
    pub adam: AdamConfig,
    pub exec: Exec,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            batch_size: 32,
            schedule: LrSchedule::default(),
            epochs: 100,
            seed: 0,
            termination_row: true,
            adam: AdamConfig::default(),
            exec: Exec::default(),
        }
    }
}

/// Resolves automatic truncation width and node limit for a corpus.
///
/// `m` defaults to the largest bandwidth over `probes` random-start BFS
/// orderings per graph; `n_max` defaults to the largest node count.
pub fn prepare_hyperparams<R: Rng + ?Sized>(
    corpus: &[Graph],
    m: Option<usize>,
    n_max: Option<usize>,
    probes: usize,
    rng: &mut R,
) -> (usize, usize) {
    let m = m.unwrap_or_else(|| estimate_truncation_width(corpus, probes, rng));
    let n_max = n_max.unwrap_or_else(|| corpus.iter().map(Graph::node_count).max().unwrap_or(1).max(1));
    (m, n_max)
}

/// Owns the model, optimizer state and the training random stream.
pub struct Trainer {
    pub model: GrnnModel,
    pub cfg: TrainConfig,
    adam: AdamState,
    rng: ChaCha8Rng,
    epoch: u32,
}

impl Trainer {
    pub fn new(model: GrnnModel, cfg: TrainConfig) -> Result<Self> {
        if cfg.batch_size == 0 {
            return Err(Error::structural("batch size must be at least 1"));
        }
        let adam = AdamState::new(&model.params, cfg.adam);
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(Trainer {
            model,
            cfg,
            adam,
            rng,
            epoch: 0,
        })
    }

    /// Epochs completed so far.
    pub fn epoch(&self) -> u32 {
        self.epoch
    }

    pub fn current_lr(&self) -> f64 {
        self.cfg.schedule.at(self.epoch)
    }

    /// Rejects graphs the model can never emit.
    pub fn check_corpus(&self, corpus: &[Graph]) -> Result<()> {
        if corpus.is_empty() {
            return Err(Error::structural("training corpus is empty"));
        }
        if let Some((i, g)) = corpus
            .iter()
            .enumerate()
            .find(|(_, g)| g.node_count() > self.model.hp.n_max)
        {
            return Err(Error::structural(format!(
                "graph {i} has {} nodes, more than n_max = {}",
                g.node_count(),
                self.model.hp.n_max
            )));
        }
        Ok(())
    }

    /// One pass over `corpus` in shuffled order with a fresh BFS ordering
    /// per graph and one Adam step per minibatch. Returns the mean BCE over
    /// every predicted slot in the epoch.
    pub fn train_epoch(&mut self, corpus: &[Graph]) -> Result<f64> {
        self.check_corpus(corpus)?;
        let m = self.model.hp.m;
        let mut order: Vec<usize> = (0..corpus.len()).collect();
        order.shuffle(&mut self.rng);
        let mut truncated = 0usize;
        let mut seqs = Vec::with_capacity(order.len());
        for &i in &order {
            let g = &corpus[i];
            let bfs = random_bfs_order(g, &mut self.rng);
            if bfs_bandwidth(g, &bfs)? > m {
                truncated += 1;
            }
            seqs.push(graph_to_sequence(g, &bfs, m)?);
        }
        if truncated > 0 {
            debug!("epoch {}: {truncated} orderings exceeded width {m}", self.epoch);
        }

        let lr = self.current_lr();
        let termination = self.cfg.termination_row;
        let mut epoch_loss = 0.0;
        let mut epoch_count = 0usize;
        for batch in seqs.chunks(self.cfg.batch_size) {
            let model = &self.model;
            let results = par::map(self.cfg.exec, batch, |s| loss_and_grad(model, s, termination));
            let mut grads: Option<GrnnParams> = None;
            let mut loss = 0.0;
            let mut count = 0usize;
            for r in results {
                let (l, c, g) = r?;
                loss += l;
                count += c;
                match grads.as_mut() {
                    Some(acc) => acc.add_assign(&g),
                    None => grads = Some(g),
                }
            }
            if !loss.is_finite() {
                return Err(Error::Numeric(format!("non-finite loss in epoch {}", self.epoch)));
            }
            if count == 0 {
                continue;
            }
            let mut grads = grads.expect("non-empty batch");
            grads.scale(1.0 / count as f64);
            self.adam.step(&mut self.model.params, &grads, lr)?;
            epoch_loss += loss;
            epoch_count += count;
        }
        self.epoch += 1;
        Ok(if epoch_count == 0 {
            0.0
        } else {
            epoch_loss / epoch_count as f64
        })
    }
}

/// Trains for `cfg.epochs` epochs, reporting `(epoch, lr, loss)` after each.
pub fn train(
    model: GrnnModel,
    corpus: &[Graph],
    cfg: TrainConfig,
    mut on_epoch: impl FnMut(u32, f64, f64),
) -> Result<GrnnModel> {
    let mut trainer = Trainer::new(model, cfg)?;
    trainer.check_corpus(corpus)?;
    for _ in 0..trainer.cfg.epochs {
        let epoch = trainer.epoch();
        let lr = trainer.current_lr();
        let loss = trainer.train_epoch(corpus)?;
        on_epoch(epoch, lr, loss);
    }
    Ok(trainer.model)
}
