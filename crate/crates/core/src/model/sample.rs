use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GrnnModel;
use crate::graph::{sequence_to_graph, BfsSequence, Graph};
use crate::nn::clamp_prob;
use crate::par::{self, Exec};

/// Draws one graph autoregressively.
///
/// Each node step samples its adjacency bits one by one from the head's
/// Bernoulli probabilities, feeding every draw back into the edge-level
/// stack. An all-zero row ends generation without adding the node, as does
/// reaching `n_max` nodes.
pub fn sample_graph<R: Rng + ?Sized>(model: &GrnnModel, rng: &mut R) -> Graph {
    let hp = &model.hp;
    let p = &model.params;
    let mut rows: Vec<Vec<u8>> = vec![Vec::new()];
    let mut graph_h = vec![vec![0.0; hp.graph_hidden]; hp.graph_layers];
    let mut x = vec![1.0; hp.m];

    while rows.len() < hp.n_max {
        p.graph_rnn
            .step(&x, &mut graph_h)
            .expect("model shapes are consistent");
        let top = graph_h.last().expect("non-empty stack");
        let seed = p.init_proj.forward(top).expect("model shapes are consistent");
        let mut edge_h = vec![seed; hp.edge_layers];

        let len = rows.len().min(hp.m);
        let mut row = Vec::with_capacity(len);
        let mut prev = 1.0;
        for _ in 0..len {
            p.edge_rnn
                .step(&[prev], &mut edge_h)
                .expect("model shapes are consistent");
            let out = p
                .head
                .forward(edge_h.last().expect("non-empty stack"))
                .expect("model shapes are consistent");
            let bit = rng.gen::<f64>() < clamp_prob(out[0]);
            row.push(bit as u8);
            prev = if bit { 1.0 } else { 0.0 };
        }
        if row.iter().all(|&b| b == 0) {
            break;
        }
        x.fill(0.0);
        for (dst, &b) in x.iter_mut().zip(&row) {
            *dst = b as f64;
        }
        rows.push(row);
    }
    let s = BfsSequence::new(hp.m, rows).expect("rows are built to width");
    sequence_to_graph(&s).expect("decoded rows form a simple graph")
}

/// Draws `count` graphs. Graph `i` uses its own ChaCha stream `i` under
/// `seed`, so the output does not depend on the execution mode.
pub fn sample_graphs(model: &GrnnModel, count: usize, seed: u64, exec: Exec) -> Vec<Graph> {
    par::map_range(exec, count, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        sample_graph(model, &mut rng)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GrnnHyperparams;

    fn rigged(bias: f64, m: usize, n_max: usize) -> GrnnModel {
        let hp = GrnnHyperparams {
            m,
            graph_layers: 2,
            graph_hidden: 5,
            edge_layers: 2,
            edge_hidden: 3,
            head_hidden: 2,
            n_max,
        };
        let mut model = GrnnModel::init(hp, 9).unwrap();
        let last = model.params.head.layers.last_mut().unwrap();
        last.w.data_mut().fill(0.0);
        last.b[0] = bias;
        model
    }

    #[test]
    fn always_zero_stops_after_first_node() {
        let model = rigged(-100.0, 3, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sample_graph(&model, &mut rng), Graph::empty(1));
    }

    #[test]
    fn always_one_builds_complete_graph() {
        let model = rigged(100.0, 3, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sample_graph(&model, &mut rng), Graph::complete(4));
    }

    #[test]
    fn respects_n_max_and_seed() {
        let model = GrnnModel::init(GrnnHyperparams::new(4, 7), 3).unwrap();
        let a = sample_graphs(&model, 20, 42, Exec::Sequential);
        let b = sample_graphs(&model, 20, 42, Exec::Parallel);
        assert_eq!(a, b);
        assert!(a.iter().all(|g| g.node_count() <= 7 && g.node_count() >= 1));
    }
}
