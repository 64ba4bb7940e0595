//! ENO-SR networks: the exact classifier and the approximate regression net.

use super::circuit::{Circuit, Expr};
use super::{MlpNetwork, OutputRule};
use crate::eno_sr::{window_indicators, WINDOW, X_STAR};
use crate::error::{invalid, Result};

/// Bound on the second argument of `⋆` for samples in [-1, 1].
pub const STAR_LAMBDA: f64 = 16.0;

/// Ramp approximation of the Heaviside function.
pub fn h_eps(x: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return invalid("H_eps needs eps > 0");
    }
    Ok(relu(x) / eps - relu(x - eps) / eps)
}

#[inline]
fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// `x ⋆ y = (y + λx - λ)+ - (-y + λx - λ)+`.
pub fn star(x: f64, y: f64, lambda: f64) -> f64 {
    relu(y + lambda * x - lambda) - relu(-y + lambda * x - lambda)
}

/// The `⋆` operation with a fixed `λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarOp {
    pub lambda: f64,
}

impl StarOp {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return invalid("lambda must be positive");
        }
        Ok(StarOp { lambda })
    }

    pub fn apply(&self, x: f64, y: f64) -> f64 {
        star(x, y, self.lambda)
    }
}

impl Default for StarOp {
    fn default() -> Self {
        StarOp {
            lambda: STAR_LAMBDA,
        }
    }
}

/// Approximate ENO-SR midpoint value of a ten-sample window, evaluated
/// directly: `p_i + α⋆(p_{i+2} - p_i + β⋆(p_{i-2} - p_{i+2}))`.
pub fn approx_enosr_scalar(window: &[f64], eps: f64, guard: f64) -> Result<f64> {
    if window.len() != WINDOW {
        return invalid(format!("window must hold {WINDOW} samples"));
    }
    let w = window_indicators(window, guard);
    let alpha = h_eps(w.x3[0].min(w.x3[1]), eps)?;
    let beta = h_eps(w.x3[2], eps)?;
    let inner = w.p_right - w.p_mid + star(beta, w.p_left - w.p_right, STAR_LAMBDA);
    Ok(w.p_mid + star(alpha, inner, STAR_LAMBDA))
}

struct SrExprs {
    x3: [Expr; 4],
    p_left: Expr,
    p_mid: Expr,
    p_right: Expr,
}

fn window_weights(pairs: &[(usize, f64)]) -> Vec<f64> {
    let mut w = vec![0.0; WINDOW];
    for &(j, v) in pairs {
        w[j] += v;
    }
    w
}

fn sr_exprs(c: &mut Circuit, guard: f64) -> SrExprs {
    let mut a = vec![Expr::default()];
    for m in 1..=8 {
        let x1 = Expr::inputs(&window_weights(&[(m - 1, 1.0), (m, -2.0), (m + 1, 1.0)]));
        a.push(c.abs(x1));
    }
    let pick = |idx: &[usize]| idx.iter().map(|&m| a[m].clone()).collect::<Vec<_>>();
    let m_right = c.max_tree_nonneg(pick(&[2, 3, 4, 6, 7, 8]));
    let m_left = c.max_tree_nonneg(pick(&[1, 2, 3, 5, 6, 7]));
    let n_plus = c.max_tree_nonneg(pick(&[6, 7]));
    let n_minus = c.max_tree_nonneg(pick(&[2, 3]));
    let (c5, c4) = (a[5].clone(), a[4].clone());
    let t = c.min(c5.clone() - n_plus, c4.clone() - n_minus);
    let x2 = c.relu(t.plus_const(-guard))
        + c.relu((c5 - m_right).plus_const(-guard))
        + c.relu((c4 - m_left).plus_const(-guard));

    let a_left = Expr::inputs(&window_weights(&[(2, -1.0), (3, 1.0)]));
    let b_left = Expr::inputs(&window_weights(&[(2, 3.0), (3, -2.0)]));
    let a_right = Expr::inputs(&window_weights(&[(6, -1.0), (7, 1.0)]));
    let b_right = Expr::inputs(&window_weights(&[(6, 7.0), (7, -6.0)]));
    let da = c.abs(a_left.clone() - a_right.clone());
    let db = c.abs(b_left - b_right);
    let abs_l = c.abs(a_left);
    let abs_r = c.abs(a_right);
    let one_or_l = c.max_nonneg(Expr::constant(1.0), abs_l);
    let slope_scale = c.max_nonneg(one_or_l, abs_r);
    let x3_2 = c.relu(da.clone() - slope_scale * guard);
    let x3_3 = c.relu(db.clone() - da.clone() * X_STAR);
    let x3_4 = c.relu(da * X_STAR - db);

    let p_left = Expr::inputs(&window_weights(&[(2, 1.0 - X_STAR + 2.0), (3, X_STAR - 2.0)]));
    let p_right = Expr::inputs(&window_weights(&[(6, 1.0 - X_STAR + 6.0), (7, X_STAR - 6.0)]));
    let p_mid = Expr::inputs(&window_weights(&[(4, 0.5), (5, 0.5)]));
    SrExprs {
        x3: [x2, x3_2, x3_3, x3_4],
        p_left,
        p_mid,
        p_right,
    }
}

/// Ten-sample window in, four scores out; class = min-argmin + 1.
pub fn build_enosr_class_net(guard: f64) -> Result<MlpNetwork> {
    let mut c = Circuit::new(WINDOW);
    let e = sr_exprs(&mut c, guard);
    c.compile(&e.x3, OutputRule::MinArgMin)
}

fn h_eps_expr(c: &mut Circuit, x: Expr, eps: f64) -> Expr {
    let a = c.relu(x.clone());
    let b = c.relu(x.plus_const(-eps));
    (a - b) * (1.0 / eps)
}

fn star_expr(c: &mut Circuit, x: Expr, y: Expr, lambda: f64) -> Expr {
    let a = c.relu((y.clone() + x.clone() * lambda).plus_const(-lambda));
    let b = c.relu((x * lambda - y).plus_const(-lambda));
    a - b
}

/// Pure ReLU network for the approximate ENO-SR midpoint value.
pub fn build_enosr_regression_net(eps: f64, guard: f64) -> Result<MlpNetwork> {
    if !(eps > 0.0) {
        return invalid("regression network needs eps > 0");
    }
    let mut c = Circuit::new(WINDOW);
    let e = sr_exprs(&mut c, guard);
    let [x2, x3_2, x3_3, _] = e.x3;
    let m = c.min(x2, x3_2);
    let alpha = h_eps_expr(&mut c, m, eps);
    let beta = h_eps_expr(&mut c, x3_3, eps);
    let inner_star = star_expr(&mut c, beta, e.p_left - e.p_right.clone(), STAR_LAMBDA);
    let inner = e.p_right - e.p_mid.clone() + inner_star;
    let outer = star_expr(&mut c, alpha, inner, STAR_LAMBDA);
    c.compile(&[e.p_mid + outer], OutputRule::None)
}
