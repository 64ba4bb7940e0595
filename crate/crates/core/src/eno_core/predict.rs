use super::coeffs::{interp_table, rec_table};
use super::ghost::{GhostPolicy, Layout};
use super::stencil::{interp_shift_unchecked, rec_shift_unchecked};
use crate::error::{invalid, Result};

/// Chooses an interpolation stencil shift from a window `f_{i-p+1}..f_{i+p-2}`.
pub trait ShiftSelector {
    fn select(&self, window: &[f64]) -> usize;
}

/// Classic ENO interpolation stencil selection.
#[derive(Clone, Copy, Debug, Default)]
pub struct EnoSelector;

impl ShiftSelector for EnoSelector {
    fn select(&self, window: &[f64]) -> usize {
        let p = window.len() / 2 + 1;
        interp_shift_unchecked(window, p)
    }
}

impl<F: Fn(&[f64]) -> usize> ShiftSelector for F {
    fn select(&self, window: &[f64]) -> usize {
        self(window)
    }
}

/// Refines node values `f^k_0..f^k_N` to `f^{k+1}_0..f^{k+1}_{2N}` with ENO-p.
pub fn predict_fine_level(coarse: &[f64], p: usize, ghost: GhostPolicy) -> Result<Vec<f64>> {
    predict_fine_level_with(coarse, p, ghost, &EnoSelector)
}

/// Same as [`predict_fine_level`] with a pluggable shift selector.
///
/// Selectors returning a shift outside `0..=p-2` are an error.
pub fn predict_fine_level_with<S: ShiftSelector + ?Sized>(
    coarse: &[f64],
    p: usize,
    ghost: GhostPolicy,
    selector: &S,
) -> Result<Vec<f64>> {
    if coarse.len() < 2 {
        return invalid("coarse level needs at least two nodes");
    }
    let table = interp_table(p)?;
    let n = coarse.len() - 1;
    let left = p - 1;
    let padded = ghost.pad(coarse, left, p.saturating_sub(2), Layout::Nodes);
    let mut out = vec![0.0; 2 * n + 1];
    for (i, &v) in coarse.iter().enumerate() {
        out[2 * i] = v;
    }
    let width = 2 * p - 2;
    for i in 1..=n {
        // padded index of f_{i+m} is i + m + left
        let start = i + left + 1 - p;
        let window = &padded[start..start + width];
        let r = if p == 2 { 0 } else { selector.select(window) };
        if r > p - 2 {
            return invalid(format!("selector returned shift {r} for order {p}"));
        }
        // f_{i-1-r+j} sits at window offset p-2-r+j
        let coeffs = &table[r];
        let base = p - 2 - r;
        let mut acc = 0.0;
        for (j, c) in coeffs.iter().enumerate() {
            acc += c * window[base + j];
        }
        out[2 * i - 1] = acc;
    }
    Ok(out)
}

/// Face values `(left, right)` per cell from cell averages with ENO-p.
pub fn reconstruct_interfaces(
    averages: &[f64],
    p: usize,
    ghost: GhostPolicy,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if averages.is_empty() {
        return invalid("no cell averages");
    }
    let padded = ghost.pad(averages, p - 1, p - 1, Layout::Cells);
    reconstruct_padded(&padded, p)
}

/// Reconstruction on data already carrying `p - 1` ghost cells per side.
pub fn reconstruct_padded(padded: &[f64], p: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let table = rec_table(p)?;
    let g = p - 1;
    if padded.len() < 2 * g + 1 {
        return invalid("padded averages too short");
    }
    let n = padded.len() - 2 * g;
    let width = 2 * p - 1;
    let mut left = vec![0.0; n];
    let mut right = vec![0.0; n];
    for i in 0..n {
        let window = &padded[i..i + width];
        let r = rec_shift_unchecked(window, p);
        // V_{i-r+j} at window offset p-1-r+j; rows indexed by s + 1
        let base = g - r;
        let cr = &table[r + 1];
        let cl = &table[r];
        let (mut a, mut b) = (0.0, 0.0);
        for j in 0..p {
            let v = window[base + j];
            b += cr[j] * v;
            a += cl[j] * v;
        }
        left[i] = a;
        right[i] = b;
    }
    Ok((left, right))
}

/// Maps data affinely onto [-1, 1]; constant data maps to all ones.
pub fn scale_input(x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    scale_input_into(x, &mut out);
    out
}

/// Allocation-free form of [`scale_input`].
pub fn scale_input_into(x: &[f64], out: &mut [f64]) {
    let (a, b) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if x.is_empty() || a == b {
        out.iter_mut().for_each(|o| *o = 1.0);
        return;
    }
    for (o, &v) in out.iter_mut().zip(x) {
        *o = (2.0 * v - (b + a)) / (b - a);
    }
}
