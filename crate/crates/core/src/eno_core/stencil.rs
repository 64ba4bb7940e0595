use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// Iterated adjacent differences; `rows[s]` holds all `Δ^s_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceTable {
    pub rows: Vec<Vec<f64>>,
}

impl DifferenceTable {
    pub fn row(&self, s: usize) -> &[f64] {
        &self.rows[s]
    }

    pub fn depth(&self) -> usize {
        self.rows.len() - 1
    }
}

/// Builds rows `0..=depth` of undivided differences.
pub fn undivided_differences(values: &[f64], depth: usize) -> Result<DifferenceTable> {
    if depth >= values.len() {
        return invalid(format!(
            "difference depth {depth} needs more than {} values",
            values.len()
        ));
    }
    let mut rows = Vec::with_capacity(depth + 1);
    rows.push(values.to_vec());
    for s in 1..=depth {
        let prev: &Vec<f64> = &rows[s - 1];
        let next: Vec<f64> = prev.windows(2).map(|w| w[1] - w[0]).collect();
        rows.push(next);
    }
    Ok(DifferenceTable { rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StencilKind {
    Interpolation,
    Reconstruction,
}

impl StencilKind {
    /// Number of samples a decision of order `p` consumes.
    pub fn width(self, p: usize) -> usize {
        match self {
            StencilKind::Interpolation => 2 * p - 2,
            StencilKind::Reconstruction => 2 * p - 1,
        }
    }
}

/// Left stencil shift `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StencilShift(pub usize);

impl StencilShift {
    pub fn r(self) -> usize {
        self.0
    }
}

/// Samples feeding a single stencil-selection decision.
#[derive(Clone, Debug, PartialEq)]
pub struct StencilInput {
    values: Vec<f64>,
    order: usize,
    kind: StencilKind,
}

impl StencilInput {
    pub fn new(values: Vec<f64>, order: usize, kind: StencilKind) -> Result<Self> {
        check_len(values.len(), order, kind)?;
        Ok(StencilInput {
            values,
            order,
            kind,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> StencilKind {
        self.kind
    }

    pub fn shift(&self) -> StencilShift {
        let r = match self.kind {
            StencilKind::Interpolation => interp_shift_unchecked(&self.values, self.order),
            StencilKind::Reconstruction => rec_shift_unchecked(&self.values, self.order),
        };
        StencilShift(r)
    }
}

fn check_len(len: usize, p: usize, kind: StencilKind) -> Result<()> {
    if p < 2 {
        return invalid(format!("order p = {p} must be at least 2"));
    }
    if len != kind.width(p) {
        return invalid(format!(
            "{kind:?} stencil of order {p} needs {} values, got {len}",
            kind.width(p)
        ));
    }
    Ok(())
}

/// ENO interpolation stencil shift, input `f_{i-p+1}..f_{i+p-2}`.
pub fn eno_interp_shift(values: &[f64], p: usize) -> Result<StencilShift> {
    check_len(values.len(), p, StencilKind::Interpolation)?;
    Ok(StencilShift(interp_shift_unchecked(values, p)))
}

/// ENO reconstruction stencil shift, input `V_{i-p+1}..V_{i+p-1}`.
pub fn eno_rec_shift(values: &[f64], p: usize) -> Result<StencilShift> {
    check_len(values.len(), p, StencilKind::Reconstruction)?;
    Ok(StencilShift(rec_shift_unchecked(values, p)))
}

const STACK: usize = 32;

/// Runs the shared selection loop; `first` is the first difference level
/// compared and `base` the 0-based left index compared at shift 0.
#[inline]
fn select(values: &[f64], p: usize, first: usize, base: usize) -> usize {
    let n = values.len();
    let mut buf = [0.0f64; STACK];
    let mut heap;
    let d: &mut [f64] = if n <= STACK {
        &mut buf[..n]
    } else {
        heap = vec![0.0; n];
        &mut heap[..]
    };
    d.copy_from_slice(values);
    let mut len = n;
    let mut r = 0usize;
    for j in 1..p {
        for m in 0..len - 1 {
            d[m] = d[m + 1] - d[m];
        }
        len -= 1;
        if j >= first {
            let k = base - r;
            if d[k].abs() < d[k + 1].abs() {
                r += 1;
            }
        }
    }
    r
}

/// [`eno_interp_shift`] without length validation. Panics on short input.
#[inline]
pub fn interp_shift_unchecked(values: &[f64], p: usize) -> usize {
    // 1-based comparison |Δ^j[p-2-r]| < |Δ^j[p-1-r]| for j = 2..p-1.
    if p <= 2 {
        return 0;
    }
    // Differences are formed as binomial dot products in ascending input
    // order, the same arithmetic as the first layer of the selection
    // networks, so near-ties resolve identically in both.
    let mut binom = [0.0f64; STACK];
    binom[0] = 1.0;
    let mut r = 0usize;
    for j in 1..p {
        for q in (1..=j).rev() {
            binom[q] += binom[q - 1];
        }
        if j >= 2 {
            let k = p - 3 - r;
            if expanded_difference(&values[k..], &binom[..=j]).abs()
                < expanded_difference(&values[k + 1..], &binom[..=j]).abs()
            {
                r += 1;
            }
        }
    }
    r
}

#[inline]
fn expanded_difference(values: &[f64], binom: &[f64]) -> f64 {
    let j = binom.len() - 1;
    let mut acc = 0.0;
    for (q, &c) in binom.iter().enumerate() {
        let w = if (j - q).is_multiple_of(2) { c } else { -c };
        acc += w * values[q];
    }
    acc
}

/// [`eno_rec_shift`] without length validation. Panics on short input.
#[inline]
pub fn rec_shift_unchecked(values: &[f64], p: usize) -> usize {
    // 1-based comparison |Δ^j[p-1-r]| < |Δ^j[p-r]| for j = 1..p-1.
    select(values, p, 1, p - 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_examples() {
        let t = undivided_differences(&[0.0; 4], 2).unwrap();
        assert_eq!(t.rows[1..], [vec![0.0; 3], vec![0.0; 2]]);
        let t = undivided_differences(&[1.0, 2.0, 3.0, 4.0], 2).unwrap();
        assert_eq!(t.row(1), &[1.0, 1.0, 1.0]);
        assert_eq!(t.row(2), &[0.0, 0.0]);
        let t = undivided_differences(&[1.0, 2.0, 4.0, 8.0], 3).unwrap();
        assert_eq!(t.row(1), &[1.0, 2.0, 4.0]);
        assert_eq!(t.row(2), &[1.0, 2.0]);
        assert_eq!(t.row(3), &[1.0]);
        assert_eq!(t.depth(), 3);
        assert!(undivided_differences(&[1.0, 2.0], 2).is_err());
    }

    #[test]
    fn interp_examples() {
        let s = |v: &[f64]| eno_interp_shift(v, 3).unwrap().r();
        assert_eq!(s(&[0.0, 1.0, 2.0, 3.0]), 0);
        assert_eq!(s(&[0.0, 0.0, 0.0, 1.0]), 1);
        assert_eq!(s(&[1.0, 0.0, 0.0, 0.0]), 0);
        assert!(eno_interp_shift(&[0.0; 5], 3).is_err());
        assert_eq!(eno_interp_shift(&[3.0, 4.0], 2).unwrap().r(), 0);
    }

    #[test]
    fn rec_examples() {
        assert_eq!(eno_rec_shift(&[0.0, 0.0, 1.0], 2).unwrap().r(), 1);
        assert_eq!(eno_rec_shift(&[1.0, 0.0, 0.0], 2).unwrap().r(), 0);
        assert_eq!(eno_rec_shift(&[2.5; 5], 3).unwrap().r(), 0);
        assert!(eno_rec_shift(&[0.0; 4], 3).is_err());
    }

    #[test]
    fn stencil_input_dispatch() {
        let s = StencilInput::new(vec![0.0, 0.0, 0.0, 1.0], 3, StencilKind::Interpolation).unwrap();
        assert_eq!(s.shift(), StencilShift(1));
        assert!(StencilInput::new(vec![0.0; 3], 3, StencilKind::Interpolation).is_err());
        assert!(StencilInput::new(vec![0.0; 1], 1, StencilKind::Reconstruction).is_err());
    }

    #[test]
    fn step_right_of_interval_shifts_fully_left() {
        // f_{i+1}, f_{i+2}, ... jump: the only smooth stencil ends at x_i.
        for p in 3..=8 {
            let v: Vec<f64> = (0..2 * p - 2).map(|m| if m >= p { 1.0 } else { 0.0 }).collect();
            assert_eq!(eno_interp_shift(&v, p).unwrap().r(), p - 2, "p={p}");
            // jump left of x_{i-1}: stencil starts at x_{i-1}
            let w: Vec<f64> = (0..2 * p - 2).map(|m| if m + 2 < p { 1.0 } else { 0.0 }).collect();
            assert_eq!(eno_interp_shift(&w, p).unwrap().r(), 0, "p={p}");
        }
    }
}
