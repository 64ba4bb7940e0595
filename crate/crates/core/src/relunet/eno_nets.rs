//! Networks that reproduce ENO stencil selection exactly.

use super::circuit::{Circuit, Expr};
use super::{Activation, DenseLayer, MlpNetwork, OutputRule};
use crate::error::{invalid, Error, Result};

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `p + ceil(log2 C(p-2, floor((p-2)/2)))`.
pub fn expected_hidden_layers(p: usize) -> usize {
    assert!(p >= 3);
    let c = binomial(p - 2, (p - 2) / 2);
    p + (128 - (c - 1).leading_zeros() as usize) * usize::from(c > 1)
}

/// Integer coefficients of `Δ^j_m` in terms of the inputs.
fn difference_rows(width: usize, depth: usize) -> Vec<Vec<Vec<f64>>> {
    let mut levels: Vec<Vec<Vec<f64>>> = vec![(0..width)
        .map(|m| {
            let mut r = vec![0.0; width];
            r[m] = 1.0;
            r
        })
        .collect()];
    for j in 1..=depth {
        let prev = &levels[j - 1];
        let next = (0..prev.len() - 1)
            .map(|m| prev[m + 1].iter().zip(&prev[m]).map(|(a, b)| a - b).collect())
            .collect();
        levels.push(next);
    }
    levels
}

/// Power-of-two gain on the compared differences. Selection is scale
/// invariant, so this only moves the band of |Δ| where the unit offsets of the
/// Heaviside rows resolve in floating point (about 1e-24 to 1e8).
pub const DIFF_SCALE: f64 = (1u64 << 26) as f64;

/// General construction for interpolation stencil selection, `p >= 3`.
///
/// Layer 1 holds `(±Δ)+` for every compared difference, layer 2 the triples
/// `(X+1)+, (X)+, (X-1)+` for every comparison `X = |Δ_left| - |Δ_right|`,
/// then each of the `2^{2p-4}` path rows feeds a max tree over its bin.
/// Output `j` peaks at `2p - 4` exactly when shift `j` is reachable, and
/// min-argmax returns the ENO interpolation shift.
pub fn build_eno_interp_net(p: usize) -> Result<MlpNetwork> {
    if p < 3 {
        return invalid("interpolation networks need p >= 3; p = 2 has a single stencil");
    }
    if p > 10 {
        return Err(Error::Unsupported(format!("p = {p} gives an impractically large network")));
    }
    let width = 2 * p - 2;
    let diffs = difference_rows(width, p - 1);
    let mut c = Circuit::new(width);

    // |Δ^j_m| for every compared entry, shared between comparisons
    let mut abs_cache: Vec<Vec<Option<Expr>>> = diffs.iter().map(|l| vec![None; l.len()]).collect();
    let mut abs_of = |c: &mut Circuit, j: usize, m: usize| -> Expr {
        if abs_cache[j][m].is_none() {
            let row: Vec<f64> = diffs[j][m].iter().map(|w| w * DIFF_SCALE).collect();
            abs_cache[j][m] = Some(c.abs(Expr::inputs(&row)));
        }
        abs_cache[j][m].clone().unwrap()
    };
    // h[j][r] = (H1, H2) of the comparison at level j with current shift r
    let levels = p - 2;
    let mut h: Vec<Vec<(Expr, Expr)>> = Vec::with_capacity(levels);
    for j in 2..p {
        let mut row = Vec::new();
        for r in 0..=j - 2 {
            let left = abs_of(&mut c, j, p - 3 - r);
            let right = abs_of(&mut c, j, p - 2 - r);
            let x = left - right;
            let a = c.relu(x.clone().plus_const(1.0));
            let b = c.relu(x.clone());
            let cc = c.relu(x.plus_const(-1.0));
            let h1 = a - b.clone();
            let h2 = b - cc - Expr::constant(1.0);
            row.push((h1, h2));
        }
        h.push(row);
    }

    let mut bins: Vec<Vec<Expr>> = vec![Vec::new(); p - 1];
    for path in 0..1usize << levels {
        for variant in 0..1usize << levels {
            let mut leaf = Expr::constant((p - 2) as f64);
            let mut r = 0;
            for s in 0..levels {
                let shift = path >> s & 1 == 1;
                let swap = variant >> s & 1 == 1;
                let (h1, h2) = &h[s][r];
                // stay needs H1 = +1, shift needs H2 = -1; swapped variants
                // read the other entry and can never reach the peak
                let term = match (shift, swap) {
                    (false, false) => h1.clone(),
                    (false, true) => h2.clone(),
                    (true, false) => -h2.clone(),
                    (true, true) => -h1.clone(),
                };
                leaf = leaf + term;
                r += usize::from(shift);
            }
            bins[r].push(leaf);
        }
    }
    let outputs: Vec<Expr> = bins.into_iter().map(|b| c.max_tree_nonneg(b)).collect();
    c.compile(&outputs, OutputRule::MinArgMax)
}

fn rows(v: &[&[f64]]) -> Vec<Vec<f64>> {
    v.iter().map(|r| r.to_vec()).collect()
}

fn stacked_neg(w: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let neg: Vec<Vec<f64>> = w.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    w.into_iter().chain(neg).collect()
}

/// Literal one-hidden-layer network for `p = 3`.
pub fn build_eno3_explicit() -> MlpNetwork {
    let w1 = rows(&[
        &[0.0, 1.0, -2.0, 1.0],
        &[1.0, -2.0, 1.0, 0.0],
        &[0.0, -1.0, 2.0, -1.0],
        &[-1.0, 2.0, -1.0, 0.0],
    ]);
    let w2 = rows(&[&[-1.0, 1.0, -1.0, 1.0], &[1.0, -1.0, 1.0, -1.0]]);
    MlpNetwork::new(
        4,
        vec![
            DenseLayer::unbiased(w1, Activation::Relu),
            DenseLayer::unbiased(w2, Activation::Identity),
        ],
        OutputRule::MinArgMax,
    )
    .expect("literal p=3 network is well formed")
}

fn eno4_w1_half() -> Vec<Vec<f64>> {
    rows(&[
        &[0.0, 0.0, 1.0, -2.0, 1.0, 0.0],
        &[0.0, 1.0, -2.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, -1.0, 3.0, -3.0, 1.0],
        &[0.0, -1.0, 3.0, -3.0, 1.0, 0.0],
        &[-1.0, 3.0, -3.0, 1.0, 0.0, 0.0],
    ])
}

fn eno4_tail() -> Vec<DenseLayer> {
    let a = [
        [-1.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, -1.0, 1.0],
    ];
    let w2_half: Vec<Vec<f64>> = a.iter().map(|r| r.iter().chain(r.iter()).copied().collect()).collect();
    let w3 = rows(&[
        &[1.0, 1.0, 1.0, 0.0, 0.0, 1.0],
        &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0],
        &[-1.0, 1.0, 0.0, 1.0, 0.0, -1.0],
        &[0.0, 1.0, 0.0, 1.0, 1.0, 1.0],
    ]);
    let w4 = rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 1.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
    ]);
    vec![
        DenseLayer::unbiased(stacked_neg(w2_half), Activation::Relu),
        DenseLayer::unbiased(w3, Activation::Relu),
        DenseLayer::unbiased(w4, Activation::Identity),
    ]
}

/// Literal three-hidden-layer network for `p = 4` (widths 10, 6, 4).
pub fn build_eno4_explicit() -> MlpNetwork {
    let mut layers = vec![DenseLayer::unbiased(stacked_neg(eno4_w1_half()), Activation::Relu)];
    layers.extend(eno4_tail());
    MlpNetwork::new(6, layers, OutputRule::MinArgMax).expect("literal p=4 network is well formed")
}

/// Networks for reconstruction stencil selection, `p` in {2, 3}.
///
/// For `p = 3` the differences `Δ^j` of the cell averages are the
/// differences `Δ^{j+1}` of their primitive, so the first layer of the
/// explicit `p = 4` interpolation network is composed with the primitive map.
pub fn build_eno_rec_net(p: usize) -> Result<MlpNetwork> {
    match p {
        2 => {
            let w1 = rows(&[
                &[-1.0, 1.0, 0.0],
                &[0.0, -1.0, 1.0],
                &[1.0, -1.0, 0.0],
                &[0.0, 1.0, -1.0],
            ]);
            let w2 = rows(&[&[1.0, -1.0, 1.0, -1.0], &[-1.0, 1.0, -1.0, 1.0]]);
            MlpNetwork::new(
                3,
                vec![
                    DenseLayer::unbiased(w1, Activation::Relu),
                    DenseLayer::unbiased(w2, Activation::Identity),
                ],
                OutputRule::MinArgMax,
            )
        }
        3 => {
            // primitive F_m = sum_{q<m} V_q for m = 0..5
            let prim: Vec<Vec<f64>> = (0..6)
                .map(|m| (0..5).map(|q| if q < m { 1.0 } else { 0.0 }).collect())
                .collect();
            let half: Vec<Vec<f64>> = eno4_w1_half()
                .iter()
                .map(|row| {
                    (0..5)
                        .map(|q| row.iter().zip(&prim).map(|(w, pr)| w * pr[q]).sum())
                        .collect()
                })
                .collect();
            let mut layers = vec![DenseLayer::unbiased(stacked_neg(half), Activation::Relu)];
            layers.extend(eno4_tail());
            MlpNetwork::new(5, layers, OutputRule::MinArgMax)
        }
        _ => Err(Error::Unsupported(format!(
            "reconstruction networks exist for p = 2, 3 only, not p = {p}"
        ))),
    }
}
