use rand::Rng;

use super::matrix::Matrix;
use super::{init_uniform, Params};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Identity,
    Relu,
    Sigmoid,
}

impl Activation {
    fn apply(self, a: f64) -> f64 {
        match self {
            Activation::Identity => a,
            Activation::Relu => a.max(0.0),
            Activation::Sigmoid => super::sigmoid(a),
        }
    }

    /// Derivative expressed through the pre-activation and the output.
    fn derivative(self, pre: f64, out: f64) -> f64 {
        match self {
            Activation::Identity => 1.0,
            Activation::Relu => {
                if pre > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Sigmoid => out * (1.0 - out),
        }
    }
}

/// Affine map followed by an activation.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub w: Matrix,
    pub b: Vec<f64>,
    pub act: Activation,
}

impl Dense {
    pub fn zeros(input_dim: usize, output_dim: usize, act: Activation) -> Self {
        Dense {
            w: Matrix::zeros(output_dim, input_dim),
            b: vec![0.0; output_dim],
            act,
        }
    }

    pub fn random<R: Rng + ?Sized>(input_dim: usize, output_dim: usize, act: Activation, rng: &mut R) -> Self {
        let mut d = Self::zeros(input_dim, output_dim, act);
        init_uniform(&mut d.w, rng);
        d
    }

    pub fn input_dim(&self) -> usize {
        self.w.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.w.rows()
    }

    fn pre_activation(&self, x: &[f64]) -> Vec<f64> {
        let mut a = self.b.clone();
        self.w.matvec_add(x, &mut a);
        a
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim() {
            return Err(Error::structural(format!(
                "dense layer expects input {}, got {}",
                self.input_dim(),
                x.len()
            )));
        }
        Ok(self.pre_activation(x).into_iter().map(|a| self.act.apply(a)).collect())
    }

    /// Accumulates parameter gradients for upstream gradient `d_pre`
    /// (w.r.t. the pre-activation) and returns the input gradient.
    pub fn backward_pre(&self, x: &[f64], d_pre: &[f64], grads: &mut Dense) -> Vec<f64> {
        grads.w.outer_add(d_pre, x);
        for (g, d) in grads.b.iter_mut().zip(d_pre) {
            *g += d;
        }
        let mut dx = vec![0.0; self.input_dim()];
        self.w.matvec_t_add(d_pre, &mut dx);
        dx
    }
}

impl Params for Dense {
    fn tensors(&self) -> Vec<&[f64]> {
        vec![self.w.data(), &self.b]
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        vec![self.w.data_mut(), &mut self.b]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub layers: Vec<Dense>,
}

/// Per-layer inputs and pre-activations from [`Mlp::forward_traced`].
#[derive(Debug, Clone)]
pub struct MlpTrace {
    inputs: Vec<Vec<f64>>,
    pre: Vec<Vec<f64>>,
    output: Vec<f64>,
}

impl MlpTrace {
    pub fn output(&self) -> &[f64] {
        &self.output
    }

    /// Pre-activation of the final layer.
    pub fn logits(&self) -> &[f64] {
        self.pre.last().expect("non-empty mlp")
    }
}

impl Mlp {
    pub fn new(layers: Vec<Dense>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::structural("mlp needs at least one layer"));
        }
        if layers.windows(2).any(|w| w[0].output_dim() != w[1].input_dim()) {
            return Err(Error::structural("mlp layer dimensions do not chain"));
        }
        Ok(Mlp { layers })
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].input_dim()
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut h = x.to_vec();
        for l in &self.layers {
            h = l.forward(&h)?;
        }
        Ok(h)
    }

    pub fn forward_traced(&self, x: &[f64]) -> Result<MlpTrace> {
        if x.len() != self.input_dim() {
            return Err(Error::structural("mlp input dimension mismatch"));
        }
        let mut inputs = Vec::with_capacity(self.layers.len());
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut h = x.to_vec();
        for l in &self.layers {
            let a = l.pre_activation(&h);
            let out = a.iter().map(|&v| l.act.apply(v)).collect();
            inputs.push(std::mem::replace(&mut h, out));
            pre.push(a);
        }
        Ok(MlpTrace { inputs, pre, output: h })
    }

    /// Backward pass from the gradient w.r.t. the network output.
    pub fn backward(&self, tr: &MlpTrace, d_out: &[f64], grads: &mut Mlp) -> Vec<f64> {
        let last = self.layers.len() - 1;
        let d_pre: Vec<f64> = d_out
            .iter()
            .zip(&tr.pre[last])
            .zip(&tr.output)
            .map(|((d, &a), &o)| d * self.layers[last].act.derivative(a, o))
            .collect();
        self.backward_from_logits(tr, &d_pre, grads)
    }

    /// Backward pass starting at the final layer's pre-activation. Pairing a
    /// sigmoid head with BCE this way avoids dividing by saturated outputs.
    pub fn backward_from_logits(&self, tr: &MlpTrace, d_logits: &[f64], grads: &mut Mlp) -> Vec<f64> {
        let mut d_pre = d_logits.to_vec();
        for l in (0..self.layers.len()).rev() {
            let dx = self.layers[l].backward_pre(&tr.inputs[l], &d_pre, &mut grads.layers[l]);
            if l == 0 {
                return dx;
            }
            let prev = &self.layers[l - 1];
            let outs = &tr.inputs[l];
            d_pre = dx
                .iter()
                .zip(&tr.pre[l - 1])
                .zip(outs)
                .map(|((d, &a), &o)| d * prev.act.derivative(a, o))
                .collect();
        }
        unreachable!("mlp has at least one layer")
    }
}

impl Params for Mlp {
    fn tensors(&self) -> Vec<&[f64]> {
        self.layers.iter().flat_map(|l| l.tensors()).collect()
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        self.layers.iter_mut().flat_map(|l| l.tensors_mut()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_sigmoid_head_is_half() {
        let m = Mlp::new(vec![Dense::zeros(3, 2, Activation::Sigmoid)]).unwrap();
        assert_eq!(m.forward(&[1.0, 2.0, 3.0]).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn relu_clips_negative() {
        let mut d = Dense::zeros(1, 1, Activation::Relu);
        d.w.data_mut()[0] = 1.0;
        d.b[0] = -3.0;
        assert_eq!(d.forward(&[2.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn identity_layer_is_affine() {
        let d = Dense {
            w: Matrix::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]),
            b: vec![0.5, -0.5],
            act: Activation::Identity,
        };
        assert_eq!(d.forward(&[1.0, 1.0]).unwrap(), vec![3.5, 6.5]);
        assert!(d.forward(&[1.0]).is_err());
    }

    #[test]
    fn dims_must_chain() {
        assert!(Mlp::new(vec![
            Dense::zeros(2, 3, Activation::Relu),
            Dense::zeros(4, 1, Activation::Sigmoid)
        ])
        .is_err());
        assert!(Mlp::new(vec![]).is_err());
    }

    #[test]
    fn backward_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = Mlp::new(vec![
            Dense::random(4, 5, Activation::Relu, &mut rng),
            Dense::random(5, 3, Activation::Identity, &mut rng),
            Dense::random(3, 2, Activation::Sigmoid, &mut rng),
        ])
        .unwrap();
        let x = [0.3, -0.7, 0.9, 0.1];
        let w = [0.6, -1.3];
        let loss = |m: &Mlp, x: &[f64]| -> f64 {
            m.forward(x).unwrap().iter().zip(&w).map(|(a, b)| a * b).sum()
        };
        let tr = m.forward_traced(&x).unwrap();
        let mut g = m.zeros_like();
        let dx = m.backward(&tr, &w, &mut g);
        let eps = 1e-6;
        let flat = m.tensors().concat();
        let gflat = g.tensors().concat();
        for i in 0..flat.len() {
            let (mut p, mut q) = (m.clone(), m.clone());
            nudge(&mut p, i, eps);
            nudge(&mut q, i, -eps);
            let num = (loss(&p, &x) - loss(&q, &x)) / (2.0 * eps);
            assert!((num - gflat[i]).abs() < 1e-7, "param {i}: {num} vs {}", gflat[i]);
        }
        for i in 0..4 {
            let (mut p, mut q) = (x, x);
            p[i] += eps;
            q[i] -= eps;
            let num = (loss(&m, &p) - loss(&m, &q)) / (2.0 * eps);
            assert!((num - dx[i]).abs() < 1e-7);
        }
    }

    fn nudge(m: &mut Mlp, mut i: usize, by: f64) {
        for t in m.tensors_mut() {
            if i < t.len() {
                t[i] += by;
                return;
            }
            i -= t.len();
        }
    }
}
