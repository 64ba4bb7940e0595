//! Small compiler from ReLU circuits to layered networks.
//!
//! A circuit is a DAG whose internal nodes are `relu(affine form)`. Each
//! ReLU node lands in the layer equal to its depth. Values needed by later
//! layers are carried forward: non-negative ReLU outputs through one
//! identity-like ReLU neuron per layer, signed inputs through a
//! `(x)+ / (-x)+` pair.

use super::{Activation, DenseLayer, MlpNetwork, OutputRule};
use crate::error::{invalid, Result};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Src {
    Input(usize),
    Relu(usize),
}

/// Affine combination of circuit sources.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Expr {
    terms: Vec<(Src, f64)>,
    bias: f64,
}

impl Expr {
    pub fn constant(c: f64) -> Self {
        Expr {
            terms: Vec::new(),
            bias: c,
        }
    }

    fn src(s: Src) -> Self {
        Expr {
            terms: vec![(s, 1.0)],
            bias: 0.0,
        }
    }

    /// Linear combination `sum_j w_j x_j` of circuit inputs.
    pub fn inputs(weights: &[f64]) -> Self {
        Expr {
            terms: weights
                .iter()
                .enumerate()
                .filter(|(_, &w)| w != 0.0)
                .map(|(j, &w)| (Src::Input(j), w))
                .collect(),
            bias: 0.0,
        }
    }

    pub fn scale(mut self, c: f64) -> Self {
        for t in &mut self.terms {
            t.1 *= c;
        }
        self.bias *= c;
        self
    }

    pub fn plus_const(mut self, c: f64) -> Self {
        self.bias += c;
        self
    }

    /// Merges duplicate sources and drops zero coefficients.
    fn normalized(&self) -> Vec<(Src, f64)> {
        let mut m: BTreeMap<Src, f64> = BTreeMap::new();
        for &(s, w) in &self.terms {
            *m.entry(s).or_insert(0.0) += w;
        }
        m.into_iter().filter(|&(_, w)| w != 0.0).collect()
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(mut self, o: Expr) -> Expr {
        self.terms.extend(o.terms);
        self.bias += o.bias;
        self
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        self + (-o)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Expr {
    type Output = Expr;
    fn mul(self, c: f64) -> Expr {
        self.scale(c)
    }
}

#[derive(Clone, Debug)]
struct ReluNode {
    arg: Vec<(Src, f64)>,
    bias: f64,
    depth: usize,
}

/// Builder for ReLU circuits.
#[derive(Clone, Debug)]
pub struct Circuit {
    inputs: usize,
    nodes: Vec<ReluNode>,
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    One(usize),
    Pair(usize, usize),
}

impl Circuit {
    pub fn new(inputs: usize) -> Self {
        Circuit {
            inputs,
            nodes: Vec::new(),
        }
    }

    pub fn input(&self, j: usize) -> Expr {
        assert!(j < self.inputs, "input {j} out of range");
        Expr::src(Src::Input(j))
    }

    fn depth_of(&self, s: Src) -> usize {
        match s {
            Src::Input(_) => 0,
            Src::Relu(k) => self.nodes[k].depth,
        }
    }

    fn expr_depth(&self, e: &Expr) -> usize {
        e.terms.iter().map(|&(s, _)| self.depth_of(s)).max().unwrap_or(0)
    }

    /// `(e)+` as a new node.
    pub fn relu(&mut self, e: Expr) -> Expr {
        let arg = e.normalized();
        let depth = 1 + self.expr_depth(&Expr {
            terms: arg.clone(),
            bias: 0.0,
        });
        self.nodes.push(ReluNode {
            arg,
            bias: e.bias,
            depth,
        });
        Expr::src(Src::Relu(self.nodes.len() - 1))
    }

    /// `|e| = (e)+ + (-e)+`.
    pub fn abs(&mut self, e: Expr) -> Expr {
        let p = self.relu(e.clone());
        let n = self.relu(-e);
        p + n
    }

    /// `max{a, b} = a + (b - a)+` for arbitrary signs.
    pub fn max(&mut self, a: Expr, b: Expr) -> Expr {
        let d = self.relu(b - a.clone());
        a + d
    }

    /// `min{a, b} = a - (a - b)+`.
    pub fn min(&mut self, a: Expr, b: Expr) -> Expr {
        let d = self.relu(a.clone() - b);
        a - d
    }

    /// `max{a, b} = (a)+ + (b - a)+`, valid when `a >= 0`; both terms share a layer.
    pub fn max_nonneg(&mut self, a: Expr, b: Expr) -> Expr {
        let d = self.relu(b - a.clone());
        let r = self.relu(a);
        r + d
    }

    /// Pairwise tree of [`Circuit::max_nonneg`], depth `ceil(log2 n)`.
    pub fn max_tree_nonneg(&mut self, mut v: Vec<Expr>) -> Expr {
        assert!(!v.is_empty(), "max of nothing");
        while v.len() > 1 {
            let mut next = Vec::with_capacity(v.len().div_ceil(2));
            let mut it = v.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(self.max_nonneg(a, b)),
                    None => next.push(a),
                }
            }
            v = next;
        }
        v.pop().unwrap()
    }

    /// Compiles the circuit into a network computing `outputs`.
    pub fn compile(&self, outputs: &[Expr], rule: OutputRule) -> Result<MlpNetwork> {
        if outputs.is_empty() {
            return invalid("circuit has no outputs");
        }
        let outs: Vec<(Vec<(Src, f64)>, f64)> =
            outputs.iter().map(|e| (e.normalized(), e.bias)).collect();

        // reachable nodes
        let mut used = vec![false; self.nodes.len()];
        let mut stack: Vec<usize> = Vec::new();
        let mark = |s: &Src, used: &mut Vec<bool>, stack: &mut Vec<usize>| {
            if let Src::Relu(k) = *s {
                if !used[k] {
                    used[k] = true;
                    stack.push(k);
                }
            }
        };
        for (t, _) in &outs {
            for (s, _) in t {
                mark(s, &mut used, &mut stack);
            }
        }
        while let Some(k) = stack.pop() {
            for (s, _) in &self.nodes[k].arg {
                mark(s, &mut used, &mut stack);
            }
        }
        let depth = (0..self.nodes.len())
            .filter(|&k| used[k])
            .map(|k| self.nodes[k].depth)
            .max()
            .unwrap_or(0);

        // last layer in which each source must be readable
        let mut need: BTreeMap<Src, usize> = BTreeMap::new();
        let mut bump = |s: Src, layer: usize| {
            let e = need.entry(s).or_insert(layer);
            *e = (*e).max(layer);
        };
        for k in (0..self.nodes.len()).filter(|&k| used[k]) {
            let n = &self.nodes[k];
            for &(s, _) in &n.arg {
                bump(s, n.depth - 1);
            }
        }
        for (t, _) in &outs {
            for &(s, _) in t {
                bump(s, depth);
            }
        }

        // slots of every source in the previous layer
        let mut slots: BTreeMap<Src, Slot> = (0..self.inputs)
            .map(|j| (Src::Input(j), Slot::One(j)))
            .collect();
        let mut layers = Vec::with_capacity(depth + 1);
        let mut prev_width = self.inputs;
        let row_for = |arg: &[(Src, f64)], slots: &BTreeMap<Src, Slot>, width: usize| {
            let mut row = vec![0.0; width];
            for &(s, w) in arg {
                match slots[&s] {
                    Slot::One(i) => row[i] += w,
                    Slot::Pair(p, n) => {
                        row[p] += w;
                        row[n] -= w;
                    }
                }
            }
            row
        };
        for layer in 1..=depth {
            let mut weights: Vec<Vec<f64>> = Vec::new();
            let mut bias = Vec::new();
            let mut next: BTreeMap<Src, Slot> = BTreeMap::new();
            for (k, n) in self.nodes.iter().enumerate() {
                if used[k] && n.depth == layer {
                    next.insert(Src::Relu(k), Slot::One(weights.len()));
                    weights.push(row_for(&n.arg, &slots, prev_width));
                    bias.push(n.bias);
                }
            }
            for (&s, &last) in &need {
                if self.depth_of(s) >= layer || last < layer {
                    continue;
                }
                match (s, slots[&s]) {
                    (Src::Relu(_), slot) => {
                        next.insert(s, Slot::One(weights.len()));
                        weights.push(row_for(&[(s, 1.0)], &slots, prev_width));
                        bias.push(0.0);
                        debug_assert!(matches!(slot, Slot::One(_)));
                    }
                    (Src::Input(_), Slot::One(i)) => {
                        let mut pos = vec![0.0; prev_width];
                        pos[i] = 1.0;
                        let mut neg = vec![0.0; prev_width];
                        neg[i] = -1.0;
                        next.insert(s, Slot::Pair(weights.len(), weights.len() + 1));
                        weights.push(pos);
                        weights.push(neg);
                        bias.extend([0.0, 0.0]);
                    }
                    (Src::Input(_), Slot::Pair(p, n)) => {
                        let mut pos = vec![0.0; prev_width];
                        pos[p] = 1.0;
                        let mut neg = vec![0.0; prev_width];
                        neg[n] = 1.0;
                        next.insert(s, Slot::Pair(weights.len(), weights.len() + 1));
                        weights.push(pos);
                        weights.push(neg);
                        bias.extend([0.0, 0.0]);
                    }
                }
            }
            if weights.is_empty() {
                // keep the chain intact for degenerate circuits
                weights.push(vec![0.0; prev_width]);
                bias.push(0.0);
            }
            prev_width = weights.len();
            layers.push(DenseLayer {
                weights,
                bias,
                activation: Activation::Relu,
            });
            slots = next;
        }
        let weights: Vec<Vec<f64>> = outs
            .iter()
            .map(|(t, _)| row_for(t, &slots, prev_width))
            .collect();
        let bias = outs.iter().map(|(_, b)| *b).collect();
        layers.push(DenseLayer {
            weights,
            bias,
            activation: Activation::Identity,
        });
        MlpNetwork::new(self.inputs, layers, rule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_and_max() {
        let mut c = Circuit::new(2);
        let a = c.input(0);
        let b = c.input(1);
        let ab = c.abs(a.clone() - b.clone());
        let m = c.max(a.clone(), b.clone());
        let mn = c.min(a, b);
        let net = c.compile(&[ab, m, mn], OutputRule::None).unwrap();
        assert_eq!(net.hidden_layers(), 1);
        assert_eq!(net.forward(&[1.0, -2.5]).unwrap(), vec![3.5, 1.0, -2.5]);
        assert_eq!(net.forward(&[-1.0, 2.0]).unwrap(), vec![3.0, 2.0, -1.0]);
    }

    #[test]
    fn carries_inputs_and_values() {
        let mut c = Circuit::new(3);
        let x: Vec<Expr> = (0..3).map(|j| c.input(j)).collect();
        let a = c.abs(x[0].clone());
        let b = c.abs(x[1].clone());
        let t = c.max_tree_nonneg(vec![a.clone(), b]);
        // deep value plus a raw input and a shallow value
        let out = t + x[2].clone() * 2.0 + a;
        let net = c.compile(&[out.plus_const(0.5)], OutputRule::None).unwrap();
        assert_eq!(net.hidden_layers(), 2);
        for v in [[1.0f64, -3.0, 0.25], [-2.0, 0.5, -7.0]] {
            let want = v[0].abs().max(v[1].abs()) + 2.0 * v[2] + v[0].abs() + 0.5;
            assert_eq!(net.forward(&v).unwrap()[0], want);
        }
    }

    #[test]
    fn tree_depth_is_log2() {
        for n in 1..=9usize {
            let mut c = Circuit::new(n);
            let leaves: Vec<Expr> = (0..n).map(|j| c.input(j)).collect();
            let m = c.max_tree_nonneg(leaves);
            let net = c.compile(&[m], OutputRule::None).unwrap();
            let want = (n as f64).log2().ceil() as usize;
            assert_eq!(net.hidden_layers(), want, "n={n}");
            let x: Vec<f64> = (0..n).map(|j| ((j * 7) % 5) as f64).collect();
            assert_eq!(net.forward(&x).unwrap()[0], x.iter().copied().fold(0.0, f64::max));
        }
    }
}
