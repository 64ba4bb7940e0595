//! Feedforward ReLU networks: inference, exact network constructions for
//! ENO / ENO-SR stencil selection, and the trained DeLENO weights.

pub mod circuit;
pub mod eno_nets;
pub mod io;
pub mod sr_nets;
pub mod targets;
pub mod trained;
pub mod verify;

pub use circuit::{Circuit, Expr};
pub use eno_nets::{
    build_eno3_explicit, build_eno4_explicit, build_eno_interp_net, build_eno_rec_net,
    expected_hidden_layers,
};
pub use io::{load_network, network_from_json, network_to_json, save_network};
pub use sr_nets::{
    approx_enosr_scalar, build_enosr_class_net, build_enosr_regression_net, h_eps, star,
    StarOp, STAR_LAMBDA,
};
pub use trained::trained_deleno;
pub use verify::{agreement_rate, Agreement};

use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Identity,
}

/// How raw outputs turn into a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputRule {
    None,
    MinArgMax,
    MinArgMin,
    Softmax,
}

/// `Z = A(W Z_prev + b)` with `W` stored row-major as `out x in`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseLayer {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl DenseLayer {
    pub fn new(weights: Vec<Vec<f64>>, bias: Vec<f64>, activation: Activation) -> Result<Self> {
        let l = DenseLayer {
            weights,
            bias,
            activation,
        };
        l.check(0)?;
        Ok(l)
    }

    /// Layer with zero bias.
    pub fn unbiased(weights: Vec<Vec<f64>>, activation: Activation) -> Self {
        let bias = vec![0.0; weights.len()];
        DenseLayer {
            weights,
            bias,
            activation,
        }
    }

    pub fn out_width(&self) -> usize {
        self.weights.len()
    }

    pub fn in_width(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    fn check(&self, layer: usize) -> Result<()> {
        let err = |message: String| Err(Error::LayerParse { layer, message });
        if self.weights.is_empty() {
            return err("layer has no rows".into());
        }
        if self.bias.len() != self.weights.len() {
            return err(format!(
                "bias length {} does not match {} weight rows",
                self.bias.len(),
                self.weights.len()
            ));
        }
        let w = self.in_width();
        if w == 0 || self.weights.iter().any(|r| r.len() != w) {
            return err("weight rows must be non-empty and equally long".into());
        }
        if self
            .weights
            .iter()
            .flatten()
            .chain(&self.bias)
            .any(|v| !v.is_finite())
        {
            return err("non-finite weight or bias".into());
        }
        Ok(())
    }
}

/// Compressed-row copy of a layer used by the forward pass.
#[derive(Clone, Debug)]
struct SparseLayer {
    row_ptr: Vec<usize>,
    col: Vec<usize>,
    val: Vec<f64>,
    bias: Vec<f64>,
    relu: bool,
}

impl SparseLayer {
    fn from_dense(l: &DenseLayer) -> Self {
        let mut row_ptr = vec![0];
        let mut col = Vec::new();
        let mut val = Vec::new();
        for row in &l.weights {
            for (j, &w) in row.iter().enumerate() {
                if w != 0.0 {
                    col.push(j);
                    val.push(w);
                }
            }
            row_ptr.push(col.len());
        }
        SparseLayer {
            row_ptr,
            col,
            val,
            bias: l.bias.clone(),
            relu: l.activation == Activation::Relu,
        }
    }

    #[inline]
    fn apply(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for (r, &b) in self.bias.iter().enumerate() {
            let mut acc = b;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.val[k] * x[self.col[k]];
            }
            if self.relu && !(acc > 0.0) {
                acc = 0.0;
            }
            out.push(acc);
        }
    }
}

/// Immutable multilayer perceptron.
#[derive(Clone, Debug)]
pub struct MlpNetwork {
    input_width: usize,
    layers: Vec<DenseLayer>,
    output_rule: OutputRule,
    sparse: Vec<SparseLayer>,
}

impl PartialEq for MlpNetwork {
    fn eq(&self, o: &Self) -> bool {
        self.input_width == o.input_width
            && self.layers == o.layers
            && self.output_rule == o.output_rule
    }
}

/// Scratch buffers for allocation-free evaluation.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl MlpNetwork {
    pub fn new(input_width: usize, layers: Vec<DenseLayer>, output_rule: OutputRule) -> Result<Self> {
        if layers.is_empty() {
            return invalid("network needs at least one layer");
        }
        let mut width = input_width;
        let last = layers.len() - 1;
        for (i, l) in layers.iter().enumerate() {
            l.check(i)?;
            if l.in_width() != width {
                return Err(Error::LayerParse {
                    layer: i,
                    message: format!("expects {} inputs but previous width is {width}", l.in_width()),
                });
            }
            let want = if i == last {
                Activation::Identity
            } else {
                Activation::Relu
            };
            if l.activation != want {
                return Err(Error::LayerParse {
                    layer: i,
                    message: format!("activation must be {want:?}"),
                });
            }
            width = l.out_width();
        }
        let sparse = layers.iter().map(SparseLayer::from_dense).collect();
        Ok(MlpNetwork {
            input_width,
            layers,
            output_rule,
            sparse,
        })
    }

    pub fn input_width(&self) -> usize {
        self.input_width
    }

    pub fn output_width(&self) -> usize {
        self.layers.last().map_or(0, DenseLayer::out_width)
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    pub fn output_rule(&self) -> OutputRule {
        self.output_rule
    }

    pub fn hidden_layers(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn hidden_widths(&self) -> Vec<usize> {
        self.layers[..self.layers.len() - 1]
            .iter()
            .map(DenseLayer::out_width)
            .collect()
    }

    pub fn with_output_rule(&self, rule: OutputRule) -> Self {
        let mut n = self.clone();
        n.output_rule = rule;
        n
    }

    /// Raw output of the last layer.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut ws = Workspace::default();
        Ok(self.forward_with(x, &mut ws).to_vec())
    }

    /// Forward pass reusing `ws`; the input length is only debug-checked.
    pub fn forward_with<'w>(&self, x: &[f64], ws: &'w mut Workspace) -> &'w [f64] {
        debug_assert_eq!(x.len(), self.input_width);
        let Workspace { a, b } = ws;
        let mut cur: &mut Vec<f64> = a;
        let mut next: &mut Vec<f64> = b;
        self.sparse[0].apply(x, cur);
        for l in &self.sparse[1..] {
            l.apply(cur, next);
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    /// Activations of every layer (after activation), input excluded.
    pub fn trace(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_input(x)?;
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(self.sparse.len());
        let mut buf = Vec::new();
        for l in &self.sparse {
            l.apply(out.last().map_or(x, |v| v.as_slice()), &mut buf);
            out.push(buf.clone());
        }
        Ok(out)
    }

    /// 0-based class under the network's output rule.
    pub fn classify(&self, x: &[f64]) -> Result<usize> {
        self.check_input(x)?;
        let mut ws = Workspace::default();
        Ok(self.classify_with(x, &mut ws))
    }

    pub fn classify_with(&self, x: &[f64], ws: &mut Workspace) -> usize {
        let rule = self.output_rule;
        let raw = self.forward_with(x, ws);
        classify_raw(raw, rule)
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_width {
            return invalid(format!(
                "input has length {} but the network expects {}",
                x.len(),
                self.input_width
            ));
        }
        Ok(())
    }
}

/// Class from raw scores; `None` behaves like min-argmax.
pub fn classify_raw(raw: &[f64], rule: OutputRule) -> usize {
    match rule {
        OutputRule::MinArgMin => min_argmin(raw),
        OutputRule::Softmax => min_argmax(&softmax(raw)),
        OutputRule::MinArgMax | OutputRule::None => min_argmax(raw),
    }
}

/// Smallest index of the maximum.
pub fn min_argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i] > v[best] {
            best = i;
        }
    }
    best
}

pub use crate::eno_sr::min_argmin;

/// Numerically stable softmax.
pub fn softmax(v: &[f64]) -> Vec<f64> {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = v.iter().map(|x| (x - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}
