use rand::Rng;

use super::matrix::Matrix;
use super::{init_uniform, sigmoid, Params};
use crate::error::{Error, Result};

/// One GRU layer. Gate blocks are stacked `[reset; update; candidate]` in
/// both weight matrices and in the bias:
///
/// ```text
/// r  = σ(W_r x + U_r h + b_r)
/// z  = σ(W_z x + U_z h + b_z)
/// c  = tanh(W_c x + r ⊙ (U_c h + b_c))
/// h' = (1 − z) ⊙ c + z ⊙ h
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct GruLayer {
    pub w_x: Matrix,
    pub w_h: Matrix,
    pub b: Vec<f64>,
}

impl GruLayer {
    pub fn zeros(input_dim: usize, hidden_dim: usize) -> Self {
        GruLayer {
            w_x: Matrix::zeros(3 * hidden_dim, input_dim),
            w_h: Matrix::zeros(3 * hidden_dim, hidden_dim),
            b: vec![0.0; 3 * hidden_dim],
        }
    }

    pub fn random<R: Rng + ?Sized>(input_dim: usize, hidden_dim: usize, rng: &mut R) -> Self {
        let mut l = Self::zeros(input_dim, hidden_dim);
        init_uniform(&mut l.w_x, rng);
        init_uniform(&mut l.w_h, rng);
        l
    }

    pub fn input_dim(&self) -> usize {
        self.w_x.cols()
    }

    pub fn hidden_dim(&self) -> usize {
        self.w_h.cols()
    }

    /// Single cell update; `out` receives the new hidden state.
    pub fn step(&self, x: &[f64], h: &[f64], out: &mut [f64]) -> Result<()> {
        let hd = self.hidden_dim();
        if x.len() != self.input_dim() || h.len() != hd || out.len() != hd {
            return Err(Error::structural(format!(
                "gru cell expects input {} / hidden {}, got {} / {}",
                self.input_dim(),
                hd,
                x.len(),
                h.len()
            )));
        }
        let mut gx = vec![0.0; 3 * hd];
        let mut gh = self.b.clone();
        self.w_x.matvec_add(x, &mut gx);
        self.w_h.matvec_add(h, &mut gh);
        for k in 0..hd {
            let r = sigmoid(gx[k] + gh[k]);
            let z = sigmoid(gx[hd + k] + gh[hd + k]);
            let c = (gx[2 * hd + k] + r * gh[2 * hd + k]).tanh();
            out[k] = (1.0 - z) * c + z * h[k];
        }
        Ok(())
    }

    /// Runs the layer over `t` steps of flat row-major inputs.
    fn forward_traced(&self, xs: Vec<f64>, h0: &[f64]) -> LayerTrace {
        let (id, hd) = (self.input_dim(), self.hidden_dim());
        let t = xs.len().checked_div(id).unwrap_or(0);
        let mut tr = LayerTrace {
            xs,
            hs: vec![0.0; (t + 1) * hd],
            r: vec![0.0; t * hd],
            z: vec![0.0; t * hd],
            c: vec![0.0; t * hd],
            ghc: vec![0.0; t * hd],
        };
        tr.hs[..hd].copy_from_slice(h0);
        let mut gx = vec![0.0; 3 * hd];
        let mut gh = vec![0.0; 3 * hd];
        for s in 0..t {
            gx.fill(0.0);
            gh.copy_from_slice(&self.b);
            self.w_x.matvec_add(&tr.xs[s * id..(s + 1) * id], &mut gx);
            let (prev, next) = tr.hs.split_at_mut((s + 1) * hd);
            let h = &prev[s * hd..];
            self.w_h.matvec_add(h, &mut gh);
            let o = s * hd;
            for k in 0..hd {
                let r = sigmoid(gx[k] + gh[k]);
                let z = sigmoid(gx[hd + k] + gh[hd + k]);
                let c = (gx[2 * hd + k] + r * gh[2 * hd + k]).tanh();
                tr.r[o + k] = r;
                tr.z[o + k] = z;
                tr.c[o + k] = c;
                tr.ghc[o + k] = gh[2 * hd + k];
                next[k] = (1.0 - z) * c + z * h[k];
            }
        }
        tr
    }

    /// BPTT through one layer. `d_out` holds the loss gradient w.r.t. each
    /// step's output (`t × hidden`). Parameter gradients accumulate into
    /// `grads`; returns gradients w.r.t. the inputs and the initial hidden.
    fn backward(&self, tr: &LayerTrace, d_out: &[f64], grads: &mut GruLayer) -> (Vec<f64>, Vec<f64>) {
        let (id, hd) = (self.input_dim(), self.hidden_dim());
        let t = tr.r.len() / hd.max(1);
        let mut d_xs = vec![0.0; t * id];
        let mut dh = vec![0.0; hd];
        let mut dax = vec![0.0; 3 * hd];
        let mut dah = vec![0.0; 3 * hd];
        for s in (0..t).rev() {
            let o = s * hd;
            let h_prev = &tr.hs[o..o + hd];
            let mut dh_prev = vec![0.0; hd];
            for k in 0..hd {
                let (r, z, c, ghc) = (tr.r[o + k], tr.z[o + k], tr.c[o + k], tr.ghc[o + k]);
                let dht = d_out[o + k] + dh[k];
                let dc = dht * (1.0 - z);
                let dz = dht * (h_prev[k] - c);
                dh_prev[k] = dht * z;
                let dac = dc * (1.0 - c * c);
                let dr = dac * ghc;
                let dar = dr * r * (1.0 - r);
                let daz = dz * z * (1.0 - z);
                dax[k] = dar;
                dax[hd + k] = daz;
                dax[2 * hd + k] = dac;
                dah[k] = dar;
                dah[hd + k] = daz;
                dah[2 * hd + k] = dac * r;
            }
            let x = &tr.xs[s * id..(s + 1) * id];
            grads.w_x.outer_add(&dax, x);
            grads.w_h.outer_add(&dah, h_prev);
            for (g, d) in grads.b.iter_mut().zip(&dah) {
                *g += d;
            }
            self.w_x.matvec_t_add(&dax, &mut d_xs[s * id..(s + 1) * id]);
            self.w_h.matvec_t_add(&dah, &mut dh_prev);
            dh = dh_prev;
        }
        (d_xs, dh)
    }
}

impl Params for GruLayer {
    fn tensors(&self) -> Vec<&[f64]> {
        vec![self.w_x.data(), self.w_h.data(), &self.b]
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        vec![self.w_x.data_mut(), self.w_h.data_mut(), &mut self.b]
    }
}

#[derive(Debug, Clone)]
struct LayerTrace {
    xs: Vec<f64>,
    hs: Vec<f64>,
    r: Vec<f64>,
    z: Vec<f64>,
    c: Vec<f64>,
    ghc: Vec<f64>,
}

/// Stack of GRU layers; layer `l` consumes layer `l − 1`'s outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct GruStack {
    pub layers: Vec<GruLayer>,
}

/// Intermediate values of a traced stack forward pass.
#[derive(Debug, Clone)]
pub struct GruStackTrace {
    layers: Vec<LayerTrace>,
    steps: usize,
}

impl GruStackTrace {
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Top-layer hidden state after step `s`.
    pub fn top_output(&self, s: usize) -> &[f64] {
        let top = self.layers.last().expect("non-empty stack");
        let hd = top.hs.len() / (self.steps + 1);
        &top.hs[(s + 1) * hd..(s + 2) * hd]
    }
}

impl GruStack {
    pub fn zeros(num_layers: usize, input_dim: usize, hidden_dim: usize) -> Self {
        GruStack {
            layers: (0..num_layers)
                .map(|l| GruLayer::zeros(if l == 0 { input_dim } else { hidden_dim }, hidden_dim))
                .collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(
        num_layers: usize,
        input_dim: usize,
        hidden_dim: usize,
        rng: &mut R,
    ) -> Self {
        GruStack {
            layers: (0..num_layers)
                .map(|l| {
                    GruLayer::random(if l == 0 { input_dim } else { hidden_dim }, hidden_dim, rng)
                })
                .collect(),
        }
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].input_dim()
    }

    pub fn hidden_dim(&self) -> usize {
        self.layers[0].hidden_dim()
    }

    fn check(&self, input_len: Option<usize>, h0: &[Vec<f64>]) -> Result<()> {
        if h0.len() != self.layers.len() || h0.iter().any(|h| h.len() != self.hidden_dim()) {
            return Err(Error::structural("initial hidden states do not match the stack"));
        }
        if let Some(len) = input_len {
            if len != self.input_dim() {
                return Err(Error::structural(format!(
                    "stack input has length {len}, expected {}",
                    self.input_dim()
                )));
            }
        }
        Ok(())
    }

    /// Runs the stack over a sequence. Returns the top layer's hidden state
    /// at every step and each layer's final hidden state.
    #[allow(clippy::type_complexity)]
    pub fn forward(&self, inputs: &[Vec<f64>], h0: &[Vec<f64>]) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        self.check(None, h0)?;
        if let Some(bad) = inputs.iter().find(|x| x.len() != self.input_dim()) {
            self.check(Some(bad.len()), h0)?;
        }
        let mut hs: Vec<Vec<f64>> = h0.to_vec();
        let mut outputs = Vec::with_capacity(inputs.len());
        for x in inputs {
            self.step(x, &mut hs)?;
            outputs.push(hs.last().expect("non-empty stack").clone());
        }
        Ok((outputs, hs))
    }

    /// Advances every layer by one step in place.
    pub fn step(&self, x: &[f64], hs: &mut [Vec<f64>]) -> Result<()> {
        let mut input = x.to_vec();
        for (layer, h) in self.layers.iter().zip(hs.iter_mut()) {
            let mut out = vec![0.0; h.len()];
            layer.step(&input, h, &mut out)?;
            h.copy_from_slice(&out);
            input = out;
        }
        Ok(())
    }

    /// Forward pass over `xs` (flat, `steps × input_dim`) that keeps what
    /// [`GruStack::backward`] needs.
    pub fn forward_traced(&self, xs: Vec<f64>, h0: &[Vec<f64>]) -> Result<GruStackTrace> {
        self.check(None, h0)?;
        if !xs.len().is_multiple_of(self.input_dim()) {
            return Err(Error::structural("flat input length is not a multiple of input_dim"));
        }
        let steps = xs.len() / self.input_dim();
        let mut layers: Vec<LayerTrace> = Vec::with_capacity(self.layers.len());
        let mut input = xs;
        for (layer, h) in self.layers.iter().zip(h0) {
            let tr = layer.forward_traced(input, h);
            let hd = layer.hidden_dim();
            input = tr.hs[hd..].to_vec();
            layers.push(tr);
        }
        Ok(GruStackTrace { layers, steps })
    }

    /// Backpropagates `d_top` (gradient w.r.t. the top layer's output at
    /// each step, flat `steps × hidden`). Returns gradients w.r.t. the flat
    /// inputs and each layer's initial hidden state.
    pub fn backward(
        &self,
        trace: &GruStackTrace,
        d_top: &[f64],
        grads: &mut GruStack,
    ) -> (Vec<f64>, Vec<Vec<f64>>) {
        let mut d_out = d_top.to_vec();
        let mut d_h0 = vec![Vec::new(); self.layers.len()];
        for l in (0..self.layers.len()).rev() {
            let (d_in, dh0) = self.layers[l].backward(&trace.layers[l], &d_out, &mut grads.layers[l]);
            d_h0[l] = dh0;
            d_out = d_in;
        }
        (d_out, d_h0)
    }
}

impl Params for GruStack {
    fn tensors(&self) -> Vec<&[f64]> {
        self.layers.iter().flat_map(|l| l.tensors()).collect()
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        self.layers.iter_mut().flat_map(|l| l.tensors_mut()).collect()
    }
}
