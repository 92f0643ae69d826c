use super::{GrnnModel, GrnnParams};
use crate::error::{Error, Result};
use crate::graph::BfsSequence;
use crate::nn::{bce_logit_grad, clamp_prob, GruStackTrace, MlpTrace, Params};

/// Teacher-forced edge probabilities, one row per predicted adjacency
/// vector, each padded to the truncation width.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgePredictions {
    pub width: usize,
    /// `rows() × width`, row-major. Masked-out slots hold 0.
    pub probs: Vec<f64>,
    pub targets: Vec<f64>,
    pub mask: Vec<bool>,
}

impl EdgePredictions {
    pub fn rows(&self) -> usize {
        self.probs.len() / self.width
    }

    /// Sum of BCE terms and number of masked slots.
    pub fn loss_sum(&self) -> (f64, usize) {
        let mut sum = 0.0;
        let mut count = 0;
        for ((&p, &y), &m) in self.probs.iter().zip(&self.targets).zip(&self.mask) {
            if m {
                sum += crate::nn::bce_loss(&[p], &[y], &[true]).expect("single masked slot");
                count += 1;
            }
        }
        (sum, count)
    }
}

/// Edge-level work for one node step.
struct NodeStep {
    edge_trace: GruStackTrace,
    heads: Vec<MlpTrace>,
    targets: Vec<f64>,
}

struct ForwardTrace {
    graph_trace: GruStackTrace,
    nodes: Vec<NodeStep>,
}

/// Targets for each node step: rows `1..n`, then the all-zero termination
/// row of length `min(n, m)` when `termination` is set.
fn step_targets(s: &BfsSequence, termination: bool) -> Vec<Vec<f64>> {
    let n = s.node_count();
    let mut t: Vec<Vec<f64>> = s.rows()[1.min(n)..]
        .iter()
        .map(|r| r.iter().map(|&b| b as f64).collect())
        .collect();
    if termination && n > 0 {
        t.push(vec![0.0; n.min(s.width())]);
    }
    t
}

fn run(model: &GrnnModel, s: &BfsSequence, termination: bool) -> Result<ForwardTrace> {
    let hp = &model.hp;
    if s.width() != hp.m {
        return Err(Error::structural(format!(
            "sequence width {} does not match model width {}",
            s.width(),
            hp.m
        )));
    }
    let p: &GrnnParams = &model.params;
    let targets = step_targets(s, termination);
    let steps = targets.len();

    // Graph-level inputs: start token, then the previous ground-truth row.
    let mut xs = vec![0.0; steps * hp.m];
    for i in 0..steps {
        let x = &mut xs[i * hp.m..(i + 1) * hp.m];
        if i == 0 {
            x.fill(1.0);
        } else {
            for (dst, &b) in x.iter_mut().zip(&s.rows()[i]) {
                *dst = b as f64;
            }
        }
    }
    let h0 = vec![vec![0.0; hp.graph_hidden]; hp.graph_layers];
    let graph_trace = p.graph_rnn.forward_traced(xs, &h0)?;

    let mut nodes = Vec::with_capacity(steps);
    for (i, target) in targets.into_iter().enumerate() {
        let seed = p.init_proj.forward(graph_trace.top_output(i))?;
        let eh0 = vec![seed; hp.edge_layers];
        let mut ex = Vec::with_capacity(target.len());
        ex.push(1.0);
        ex.extend_from_slice(&target[..target.len().saturating_sub(1)]);
        let edge_trace = p.edge_rnn.forward_traced(ex, &eh0)?;
        let heads = (0..target.len())
            .map(|t| p.head.forward_traced(edge_trace.top_output(t)))
            .collect::<Result<Vec<_>>>()?;
        nodes.push(NodeStep {
            edge_trace,
            heads,
            targets: target,
        });
    }
    Ok(ForwardTrace { graph_trace, nodes })
}

/// Edge probabilities under teacher forcing. With `termination` set, an
/// extra all-zero row after the last node is predicted as well.
pub fn forward_teacher_forced(
    model: &GrnnModel,
    s: &BfsSequence,
    termination: bool,
) -> Result<EdgePredictions> {
    let tr = run(model, s, termination)?;
    let width = model.hp.m;
    let rows = tr.nodes.len();
    let mut out = EdgePredictions {
        width,
        probs: vec![0.0; rows * width],
        targets: vec![0.0; rows * width],
        mask: vec![false; rows * width],
    };
    for (i, node) in tr.nodes.iter().enumerate() {
        for (t, (head, &y)) in node.heads.iter().zip(&node.targets).enumerate() {
            out.probs[i * width + t] = clamp_prob(head.output()[0]);
            out.targets[i * width + t] = y;
            out.mask[i * width + t] = true;
        }
    }
    Ok(out)
}

/// Summed BCE over all predicted slots, the slot count, and the gradient of
/// the sum with respect to every parameter.
pub fn loss_and_grad(
    model: &GrnnModel,
    s: &BfsSequence,
    termination: bool,
) -> Result<(f64, usize, GrnnParams)> {
    let tr = run(model, s, termination)?;
    let p = &model.params;
    let hp = &model.hp;
    let mut grads = p.zeros_like();
    let mut loss = 0.0;
    let mut count = 0;
    let mut d_graph_top = vec![0.0; tr.nodes.len() * hp.graph_hidden];

    for (i, node) in tr.nodes.iter().enumerate() {
        let mut d_edge_top = vec![0.0; node.targets.len() * hp.edge_hidden];
        for (t, (head, &y)) in node.heads.iter().zip(&node.targets).enumerate() {
            let prob = head.output()[0];
            loss += crate::nn::bce_loss(&[prob], &[y], &[true])?;
            count += 1;
            let d = p.head.backward_from_logits(head, &[bce_logit_grad(prob, y)], &mut grads.head);
            d_edge_top[t * hp.edge_hidden..(t + 1) * hp.edge_hidden].copy_from_slice(&d);
        }
        let (_, d_eh0) = p.edge_rnn.backward(&node.edge_trace, &d_edge_top, &mut grads.edge_rnn);
        let mut d_seed = vec![0.0; hp.edge_hidden];
        for d in &d_eh0 {
            for (acc, v) in d_seed.iter_mut().zip(d) {
                *acc += v;
            }
        }
        let top = tr.graph_trace.top_output(i);
        let d_top = p.init_proj.backward_pre(top, &d_seed, &mut grads.init_proj);
        d_graph_top[i * hp.graph_hidden..(i + 1) * hp.graph_hidden].copy_from_slice(&d_top);
    }
    p.graph_rnn.backward(&tr.graph_trace, &d_graph_top, &mut grads.graph_rnn);
    Ok((loss, count, grads))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{graph_to_sequence, Graph, NodeOrdering};
    use crate::model::GrnnHyperparams;

    fn small_hp(m: usize) -> GrnnHyperparams {
        GrnnHyperparams {
            m,
            graph_layers: 2,
            graph_hidden: 6,
            edge_layers: 2,
            edge_hidden: 4,
            head_hidden: 3,
            n_max: 10,
        }
    }

    #[test]
    fn zero_model_predicts_half() {
        let model = GrnnModel::zeros(small_hp(3)).unwrap();
        let s = graph_to_sequence(&Graph::star(3), &NodeOrdering::identity(4), 3).unwrap();
        let out = forward_teacher_forced(&model, &s, false).unwrap();
        assert_eq!(out.rows(), 3);
        assert_eq!(out.mask.iter().filter(|&&m| m).count(), 1 + 2 + 3);
        for (p, m) in out.probs.iter().zip(&out.mask) {
            assert_eq!(*p, if *m { 0.5 } else { 0.0 });
        }
        let (sum, count) = out.loss_sum();
        assert!((sum / count as f64 - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn single_node_is_empty_without_termination() {
        let model = GrnnModel::zeros(small_hp(2)).unwrap();
        let s = BfsSequence::new(2, vec![vec![]]).unwrap();
        let out = forward_teacher_forced(&model, &s, false).unwrap();
        assert_eq!(out.rows(), 0);
        let out = forward_teacher_forced(&model, &s, true).unwrap();
        assert_eq!(out.rows(), 1);
        assert_eq!(out.mask, vec![true, false]);
    }

    #[test]
    fn width_mismatch() {
        let model = GrnnModel::zeros(small_hp(2)).unwrap();
        let s = graph_to_sequence(&Graph::path(3), &NodeOrdering::identity(3), 3).unwrap();
        assert!(forward_teacher_forced(&model, &s, false).is_err());
    }

    #[test]
    fn loss_matches_forward() {
        let model = GrnnModel::init(small_hp(3), 4).unwrap();
        let s = graph_to_sequence(&Graph::complete(4), &NodeOrdering::identity(4), 3).unwrap();
        let (sum, count) = forward_teacher_forced(&model, &s, true).unwrap().loss_sum();
        let (l, c, _) = loss_and_grad(&model, &s, true).unwrap();
        assert_eq!(c, count);
        assert!((l - sum).abs() < 1e-12);
    }
}
