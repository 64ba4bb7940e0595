//! Multi-resolution representation with threshold compression.

pub mod container;
pub mod image;
pub mod metrics;
pub mod twod;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eno_core::{predict_fine_level, predict_fine_level_with, scale_input, GhostPolicy};
use crate::error::{invalid, Result};
use crate::relunet::MlpNetwork;

pub use container::{read_container, write_container, Container};
pub use image::{fit_to_levels, read_pgm, write_pgm, GrayImage};
pub use metrics::{error_norms, ErrorNorms, Norms};
pub use twod::{decode2d, encode2d, Grid2D, MultiResRep2D};

/// `ε^k = ε t^{K-k}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSchedule {
    pub eps: f64,
    pub t: f64,
    pub k: usize,
}

impl ThresholdSchedule {
    pub fn new(eps: f64, t: f64, k: usize) -> Result<Self> {
        if !(eps >= 0.0) || !eps.is_finite() {
            return invalid("eps must be a finite value >= 0");
        }
        if !(t > 0.0 && t <= 1.0) {
            return invalid("t must lie in (0, 1]");
        }
        if k == 0 {
            return invalid("at least one level is needed");
        }
        Ok(ThresholdSchedule { eps, t, k })
    }

    /// Threshold for level `level` in `1..=K`.
    pub fn level(&self, level: usize) -> f64 {
        self.eps * self.t.powi((self.k - level) as i32)
    }
}

/// Zero out `d` when `|d| <= eps`.
#[inline]
pub fn threshold(d: f64, eps: f64) -> f64 {
    if d.abs() <= eps {
        0.0
    } else {
        d
    }
}

/// `exact - pred`, nudged by a few ulps when needed so that
/// `pred + d == exact` holds bitwise (which makes the codec lossless at
/// `ε = 0` whenever such a `d` exists).
pub fn residual(exact: f64, pred: f64) -> f64 {
    let d = exact - pred;
    if pred + d == exact {
        return d;
    }
    let (mut up, mut down) = (d, d);
    for _ in 0..4 {
        up = up.next_up();
        down = down.next_down();
        if pred + up == exact {
            return up;
        }
        if pred + down == exact {
            return down;
        }
    }
    d
}

/// Thresholded detail for one node.
#[inline]
pub fn detail(exact: f64, pred: f64, eps: f64) -> f64 {
    let d = exact - pred;
    if d.abs() <= eps {
        0.0
    } else {
        residual(exact, pred)
    }
}

/// One-level refinement `f^{k-1} -> prediction of f^k`.
pub trait Refiner: Sync {
    fn refine(&self, coarse: &[f64]) -> Result<Vec<f64>>;
}

/// ENO-p interpolation.
#[derive(Clone, Copy, Debug)]
pub struct EnoRefiner {
    pub p: usize,
    pub ghost: GhostPolicy,
}

impl Refiner for EnoRefiner {
    fn refine(&self, coarse: &[f64]) -> Result<Vec<f64>> {
        predict_fine_level(coarse, self.p, self.ghost)
    }
}

/// Interpolation with stencils chosen by a classification network.
#[derive(Clone, Debug)]
pub struct NetRefiner {
    pub net: MlpNetwork,
    pub p: usize,
    pub ghost: GhostPolicy,
    /// Rescale every window to [-1, 1] first (needed by the trained nets).
    pub scale: bool,
}

impl Refiner for NetRefiner {
    fn refine(&self, coarse: &[f64]) -> Result<Vec<f64>> {
        let select = |w: &[f64]| {
            let x = if self.scale { scale_input(w) } else { w.to_vec() };
            self.net.classify(&x).unwrap_or(usize::MAX)
        };
        predict_fine_level_with(coarse, self.p, self.ghost, &select)
    }
}

/// `{q^0, d^1, ..., d^K}` plus what is needed to decode it.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiResRep {
    pub p: usize,
    pub n0: usize,
    pub ghost: GhostPolicy,
    pub schedule: ThresholdSchedule,
    pub q0: Vec<f64>,
    /// `details[k - 1]` holds `d^k_1..d^k_{N_{k-1}}`.
    pub details: Vec<Vec<f64>>,
}

impl MultiResRep {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    pub fn detail_count(&self) -> usize {
        self.details.iter().map(Vec::len).sum()
    }

    pub fn surviving(&self) -> usize {
        self.details.iter().flatten().filter(|d| **d != 0.0).count()
    }

    /// Fraction of detail coefficients set to zero.
    pub fn compression_rate(&self) -> f64 {
        compression_rate(self.surviving(), self.detail_count())
    }

    pub fn refiner(&self) -> EnoRefiner {
        EnoRefiner {
            p: self.p,
            ghost: self.ghost,
        }
    }
}

pub fn compression_rate(surviving: usize, total: usize) -> f64 {
    if total == 0 {
        return 1.0;
    }
    1.0 - surviving as f64 / total as f64
}

/// `N0` for data of length `N0 2^K + 1`.
pub fn coarse_cells(len: usize, k: usize) -> Result<usize> {
    let step = 1usize << k;
    if len < step + 1 || !(len - 1).is_multiple_of(step) {
        let n = (len.saturating_sub(1) / step).max(1);
        return invalid(format!(
            "length {len} is not of the form N0*2^{k}+1 (nearest valid: {} or {})",
            n * step + 1,
            (n + 1) * step + 1
        ));
    }
    Ok((len - 1) / step)
}

/// `q^{k-1}_i = q^k_{2i}`.
pub fn decimate(fine: &[f64]) -> Vec<f64> {
    fine.iter().step_by(2).copied().collect()
}

/// Compressed encoding with ENO-p prediction.
pub fn encode(fine: &[f64], p: usize, schedule: ThresholdSchedule, ghost: GhostPolicy) -> Result<MultiResRep> {
    let r = EnoRefiner { p, ghost };
    let (q0, details) = encode_with(fine, schedule, &r)?;
    Ok(MultiResRep {
        p,
        n0: q0.len() - 1,
        ghost,
        schedule,
        q0,
        details,
    })
}

/// Compressed encoding: predictions are made from the already thresholded
/// coarser level, so thresholding errors do not accumulate.
pub fn encode_with(fine: &[f64], schedule: ThresholdSchedule, refiner: &dyn Refiner) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let k = schedule.k;
    coarse_cells(fine.len(), k)?;
    let mut levels = vec![fine.to_vec()];
    for _ in 0..k {
        let next = decimate(levels.last().unwrap());
        levels.push(next);
    }
    levels.reverse();
    let q0 = levels[0].clone();
    let mut current = q0.clone();
    let mut details = Vec::with_capacity(k);
    for (lvl, exact) in levels.iter().enumerate().skip(1) {
        let mut pred = refiner.refine(&current)?;
        let eps = schedule.level(lvl);
        let mut d = Vec::with_capacity(exact.len() / 2);
        for i in (1..exact.len()).step_by(2) {
            let di = detail(exact[i], pred[i], eps);
            pred[i] += di;
            d.push(di);
        }
        details.push(d);
        current = pred;
    }
    Ok((q0, details))
}

/// Decoding: `f^k = P f^{k-1} + d^k`.
pub fn decode(rep: &MultiResRep) -> Result<Vec<f64>> {
    decode_with(&rep.q0, &rep.details, &rep.refiner())
}

pub fn decode_with(q0: &[f64], details: &[Vec<f64>], refiner: &dyn Refiner) -> Result<Vec<f64>> {
    let mut current = q0.to_vec();
    for (lvl, d) in details.iter().enumerate() {
        if d.len() != current.len() - 1 {
            return invalid(format!(
                "level {} has {} details, expected {}",
                lvl + 1,
                d.len(),
                current.len() - 1
            ));
        }
        let mut pred = refiner.refine(&current)?;
        for (i, di) in d.iter().enumerate() {
            pred[2 * i + 1] += di;
        }
        current = pred;
    }
    Ok(current)
}

/// Interpolation errors of every level without thresholding or feedback.
pub fn raw_details(fine: &[f64], k: usize, refiner: &dyn Refiner) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    coarse_cells(fine.len(), k)?;
    let mut levels = vec![fine.to_vec()];
    for _ in 0..k {
        let next = decimate(levels.last().unwrap());
        levels.push(next);
    }
    levels.reverse();
    let details = levels
        .par_windows(2)
        .map(|w| {
            let pred = refiner.refine(&w[0])?;
            Ok((1..w[1].len()).step_by(2).map(|i| w[1][i] - pred[i]).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok((levels[0].clone(), details))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sched(eps: f64) -> ThresholdSchedule {
        ThresholdSchedule::new(eps, 0.5, 3).unwrap()
    }

    #[test]
    fn lossless_at_zero() {
        // dyadic data: every residual is representable
        let f: Vec<f64> = (0..=40).map(|i| ((i * i) % 7) as f64 - 0.25 * i as f64).collect();
        for p in 2..=5 {
            let rep = encode(&f, p, sched(0.0), GhostPolicy::default()).unwrap();
            assert_eq!(rep.n0, 5);
            assert_eq!(decode(&rep).unwrap(), f);
        }
        // general reals: at most a few ulps from the one rounding per node
        let f: Vec<f64> = (0..=40).map(|i| ((i * i) % 7) as f64 - 0.3 * i as f64).collect();
        let g = decode(&encode(&f, 3, sched(0.0), GhostPolicy::default()).unwrap()).unwrap();
        for (a, b) in f.iter().zip(&g) {
            assert!((a - b).abs() <= 4.0 * f64::EPSILON * a.abs().max(4.0));
        }
    }

    #[test]
    fn residual_reconstructs_when_possible() {
        assert_eq!(residual(1.3, 0.7) + 0.7, 1.3);
        let d = residual(0.1, 0.2);
        assert_eq!(0.2 + d, 0.1);
    }

    #[test]
    fn polynomial_has_no_details() {
        let f: Vec<f64> = (0..=32).map(|i| {
            let x = i as f64 / 32.0;
            1.0 + x - 2.0 * x * x
        }).collect();
        let rep = encode(&f, 3, sched(1e-9), GhostPolicy::Reflect).unwrap();
        assert_eq!(rep.compression_rate(), 1.0);
    }

    #[test]
    fn bound_and_shapes() {
        let f: Vec<f64> = (0..=72).map(|i| if i < 30 { 0.0 } else { 5.0 } + (i as f64 * 0.7).sin()).collect();
        let rep = encode(&f, 3, sched(0.5), GhostPolicy::default()).unwrap();
        assert_eq!(rep.details.iter().map(Vec::len).collect::<Vec<_>>(), vec![9, 18, 36]);
        let g = decode(&rep).unwrap();
        let err = f.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err <= 0.5 / (1.0 - 0.5));
        assert!(encode(&f[..72], 3, sched(0.5), GhostPolicy::default()).is_err());
    }

    #[test]
    fn schedule() {
        let s = ThresholdSchedule::new(1.0, 0.2, 5).unwrap();
        assert_eq!(s.level(5), 1.0);
        assert!((s.level(1) - 0.0016).abs() < 1e-15);
        assert!(ThresholdSchedule::new(-1.0, 0.5, 2).is_err());
        assert!(ThresholdSchedule::new(1.0, 0.0, 2).is_err());
        assert_eq!(threshold(0.5, 0.5), 0.0);
        assert_eq!(threshold(-0.6, 0.5), -0.6);
    }
}
