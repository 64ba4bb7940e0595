//! Adapted second-order ENO-SR: interval labelling from second differences,
//! singularity location by intersecting neighbouring linear pieces, and the
//! indicator pipeline shared with the ReLU network builders.
//!
//! Every decision about interval `I_i = [x_{i-1}, x_i]` reads the ten samples
//! `f_{i-5}..f_{i+4}`. Inside such a window the nodes sit at `0..=9`, the
//! interval of interest is `[4, 5]` and the prediction point is `4.5`.

use crate::eno_core::{GhostPolicy, Layout};
use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// Default numerical guard for strict comparisons.
pub const DEFAULT_GUARD: f64 = 1e-10;
/// Samples per decision window.
pub const WINDOW: usize = 10;
/// Prediction point in window coordinates.
pub const X_STAR: f64 = 4.5;
/// Intervals at each end of a grid that are always treated as good.
pub const BOUNDARY_INTERVALS: usize = 4;

/// `f(x_{i-1}) - 2 f(x_i) + f(x_{i+1})` at interior nodes `1..N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondDifferences {
    pub values: Vec<f64>,
}

impl SecondDifferences {
    pub fn new(samples: &[f64]) -> Self {
        SecondDifferences {
            values: samples.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).collect(),
        }
    }

    /// Value at node `m` (1-based, `1 <= m <= N - 1`).
    pub fn at(&self, m: usize) -> f64 {
        self.values[m - 1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    Good,
    Bad,
}

/// One label per interval `I_1..I_N` (stored 0-based).
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalLabels {
    pub labels: Vec<Label>,
}

impl IntervalLabels {
    pub fn bad_runs(&self) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut i = 0;
        while i < self.labels.len() {
            if self.labels[i] == Label::Bad {
                let s = i;
                while i < self.labels.len() && self.labels[i] == Label::Bad {
                    i += 1;
                }
                runs.push((s, i - s));
            } else {
                i += 1;
            }
        }
        runs
    }
}

/// `x -> a x + b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearPiece {
    pub a: f64,
    pub b: f64,
}

impl LinearPiece {
    pub fn new(a: f64, b: f64) -> Self {
        LinearPiece { a, b }
    }

    /// Line through `(x0, f0)` and `(x0 + 1, f1)`.
    pub fn unit(x0: f64, f0: f64, f1: f64) -> Self {
        let a = f1 - f0;
        LinearPiece { a, b: f0 - x0 * a }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.a * x + self.b
    }
}

/// Intersection of two lines, `None` if their slopes agree within the guard.
pub fn intersect(a: LinearPiece, b: LinearPiece) -> Option<f64> {
    intersect_with_guard(a, b, DEFAULT_GUARD)
}

pub fn intersect_with_guard(a: LinearPiece, b: LinearPiece, guard: f64) -> Option<f64> {
    let da = a.a - b.a;
    if da.abs() <= parallel_tolerance(a.a, b.a, guard) {
        return None;
    }
    Some((b.b - a.b) / da)
}

#[inline]
pub fn parallel_tolerance(a1: f64, a2: f64, guard: f64) -> f64 {
    guard * 1f64.max(a1.abs()).max(a2.abs())
}

/// `|[f']| / (4 sup |f''|)`.
pub fn critical_scale(jump: f64, second_deriv_sup: f64) -> Result<f64> {
    if !(second_deriv_sup > 0.0) {
        return invalid("second derivative bound must be positive");
    }
    Ok(jump.abs() / (4.0 * second_deriv_sup))
}

#[inline]
fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

fn max_abs(x1: &[f64; 9], nodes: &[usize]) -> f64 {
    nodes.iter().map(|&m| x1[m].abs()).fold(0.0, f64::max)
}

/// Everything the classifier computes for one ten-sample window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowIndicators {
    /// `x1[m]` is the second difference at window node `m` (`x1[0]` unused).
    pub x1: [f64; 9],
    /// `M_i`, `M_{i-1}`, `N^+_i`, `N^-_{i-1}`.
    pub m_right: f64,
    pub m_left: f64,
    pub n_plus: f64,
    pub n_minus: f64,
    pub x2: f64,
    pub x3: [f64; 4],
    /// 1-based class.
    pub class: u8,
    /// `p_{i-2}`, `p_i`, `p_{i+2}` evaluated at the prediction point.
    pub p_left: f64,
    pub p_mid: f64,
    pub p_right: f64,
}

impl WindowIndicators {
    /// Prediction selected by the class.
    pub fn prediction(&self) -> f64 {
        match self.class {
            3 => self.p_right,
            4 => self.p_left,
            _ => self.p_mid,
        }
    }
}

/// Left neighbour line `p_{i-2}` on window `[2, 3]`.
pub fn left_piece(s: &[f64]) -> LinearPiece {
    LinearPiece::unit(2.0, s[2], s[3])
}

/// Right neighbour line `p_{i+2}` on window `[6, 7]`.
pub fn right_piece(s: &[f64]) -> LinearPiece {
    LinearPiece::unit(6.0, s[6], s[7])
}

/// Indicators for the interval `[4, 5]` of a ten-sample window.
pub fn window_indicators(s: &[f64], guard: f64) -> WindowIndicators {
    assert_eq!(s.len(), WINDOW, "window must hold {WINDOW} samples");
    let mut x1 = [0.0; 9];
    for m in 1..=8 {
        x1[m] = s[m - 1] - 2.0 * s[m] + s[m + 1];
    }
    let m_right = max_abs(&x1, &[2, 3, 4, 6, 7, 8]);
    let m_left = max_abs(&x1, &[1, 2, 3, 5, 6, 7]);
    let n_plus = max_abs(&x1, &[6, 7]);
    let n_minus = max_abs(&x1, &[2, 3]);
    let (c5, c4) = (x1[5].abs(), x1[4].abs());
    let x2 = relu((c5 - n_plus).min(c4 - n_minus) - guard)
        + relu(c5 - m_right - guard)
        + relu(c4 - m_left - guard);

    let l = left_piece(s);
    let r = right_piece(s);
    let da = (l.a - r.a).abs();
    let db = (l.b - r.b).abs();
    let x3 = [
        x2,
        relu(da - parallel_tolerance(l.a, r.a, guard)),
        relu(db - X_STAR * da),
        relu(X_STAR * da - db),
    ];
    let class = min_argmin(&x3) as u8 + 1;
    WindowIndicators {
        x1,
        m_right,
        m_left,
        n_plus,
        n_minus,
        x2,
        x3,
        class,
        p_left: l.eval(X_STAR),
        p_mid: 0.5 * (s[4] + s[5]),
        p_right: r.eval(X_STAR),
    }
}

/// Smallest index attaining the minimum.
pub fn min_argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x < v[best] {
            best = i;
        }
    }
    best
}

/// Detection rules applied literally to one window (`x > y` as `x - y > guard`).
pub fn window_is_bad(s: &[f64], guard: f64) -> bool {
    let d = SecondDifferences::new(s);
    let a = |m: usize| d.at(m).abs();
    let gt = |x: f64, y: f64| x - y > guard;
    let around = |m: usize, n: &[usize]| {
        n.iter()
            .flat_map(|&k| [a(m - k), a(m + k)])
            .fold(0.0, f64::max)
    };
    // rule 1 at node i-1 (window 4) labels I_{i-1}, I_i; at node i (window 5)
    // it labels I_i, I_{i+1}
    let rule1 = gt(a(4), around(4, &[1, 2, 3])) || gt(a(5), around(5, &[1, 2, 3]));
    let rule2 = gt(a(5), a(6).max(a(7))) && gt(a(4), a(3).max(a(2)));
    rule1 || rule2
}

/// Labels every interval of a grid; the first and last four stay good.
pub fn label_intervals(samples: &[f64], guard: f64) -> Result<IntervalLabels> {
    if samples.len() < 9 {
        return invalid("ENO-SR labelling needs at least 9 samples");
    }
    let n = samples.len() - 1;
    let labels = (1..=n)
        .map(|i| {
            if interior(i, n) && window_is_bad(&samples[i - 5..i + 5], guard) {
                Label::Bad
            } else {
                Label::Good
            }
        })
        .collect();
    Ok(IntervalLabels { labels })
}

fn interior(i: usize, n: usize) -> bool {
    i > BOUNDARY_INTERVALS && i + BOUNDARY_INTERVALS <= n
}

/// Per-interval indicators over a whole grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SrIndicators {
    pub m: Vec<f64>,
    pub n_plus: Vec<f64>,
    pub n_minus: Vec<f64>,
    pub x2: Vec<f64>,
    pub x3: Vec<[f64; 4]>,
    pub class: Vec<u8>,
}

/// Indicators for `I_1..I_N`; boundary intervals get zeros and class 1.
pub fn sr_indicators(samples: &[f64], guard: f64) -> Result<SrIndicators> {
    if samples.len() < 2 {
        return invalid("need at least two samples");
    }
    let n = samples.len() - 1;
    let mut out = SrIndicators {
        m: vec![0.0; n],
        n_plus: vec![0.0; n],
        n_minus: vec![0.0; n],
        x2: vec![0.0; n],
        x3: vec![[0.0; 4]; n],
        class: vec![1; n],
    };
    for i in 1..=n {
        if !interior(i, n) {
            continue;
        }
        let w = window_indicators(&samples[i - 5..i + 5], guard);
        out.m[i - 1] = w.m_right;
        out.n_plus[i - 1] = w.n_plus;
        out.n_minus[i - 1] = w.n_minus;
        out.x2[i - 1] = w.x2;
        out.x3[i - 1] = w.x3;
        out.class[i - 1] = w.class;
    }
    Ok(out)
}

/// How the prediction for a window is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SrRoute {
    /// Class from the indicator pipeline.
    Classes,
    /// Labelling rules followed by the line intersection.
    Rules,
    /// Single formula with Heaviside weights.
    Heaviside,
}

/// Prediction at window point 4.5 via the labelling rules.
pub fn window_predict_rules(s: &[f64], guard: f64) -> f64 {
    let l = left_piece(s);
    let r = right_piece(s);
    let mid = 0.5 * (s[4] + s[5]);
    if !window_is_bad(s, guard) {
        return mid;
    }
    match intersect_with_guard(l, r, guard) {
        None => mid,
        Some(y) if X_STAR >= y => r.eval(X_STAR),
        Some(_) => l.eval(X_STAR),
    }
}

/// Heaviside step, `H_0(x) = 1` iff `x > 0`.
pub fn heaviside(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// `(1-α) p_i + α((1-β) p_{i+2} + β p_{i-2})` with Heaviside weights.
pub fn window_predict_heaviside(s: &[f64], guard: f64) -> f64 {
    let w = window_indicators(s, guard);
    let alpha = heaviside(w.x3[0].min(w.x3[1]));
    let beta = heaviside(w.x3[2]);
    (1.0 - alpha) * w.p_mid + alpha * ((1.0 - beta) * w.p_right + beta * w.p_left)
}

pub fn window_predict(s: &[f64], guard: f64, route: SrRoute) -> f64 {
    match route {
        SrRoute::Classes => window_indicators(s, guard).prediction(),
        SrRoute::Rules => window_predict_rules(s, guard),
        SrRoute::Heaviside => window_predict_heaviside(s, guard),
    }
}

/// ENO-SR refinement of node values. Four ghost values per side give every
/// interval a full window; the ghost intervals themselves play the role of
/// the always-good boundary intervals.
pub fn enosr_predict(samples: &[f64], ghost: GhostPolicy, guard: f64) -> Result<Vec<f64>> {
    enosr_predict_route(samples, ghost, guard, SrRoute::Classes)
}

pub fn enosr_predict_route(
    samples: &[f64],
    ghost: GhostPolicy,
    guard: f64,
    route: SrRoute,
) -> Result<Vec<f64>> {
    enosr_predict_with(samples, ghost, |w| window_predict(w, guard, route))
}

/// Refinement with a custom per-window midpoint predictor.
pub fn enosr_predict_with(
    samples: &[f64],
    ghost: GhostPolicy,
    mut predict: impl FnMut(&[f64]) -> f64,
) -> Result<Vec<f64>> {
    if samples.len() < 2 {
        return invalid("need at least two samples");
    }
    let n = samples.len() - 1;
    let g = BOUNDARY_INTERVALS;
    let padded = ghost.pad(samples, g, g, Layout::Nodes);
    let mut out = vec![0.0; 2 * n + 1];
    for (i, &v) in samples.iter().enumerate() {
        out[2 * i] = v;
    }
    for i in 1..=n {
        // window f_{i-5}..f_{i+4}; f_j sits at padded index j + g
        let start = i + g - 5;
        out[2 * i - 1] = predict(&padded[start..start + WINDOW]);
    }
    Ok(out)
}
