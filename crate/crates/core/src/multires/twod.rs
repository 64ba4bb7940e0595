//! Tensor-product extension: refine along x, then along y.

use rayon::prelude::*;

use super::{coarse_cells, compression_rate, detail, Refiner, ThresholdSchedule};
use crate::eno_core::GhostPolicy;
use crate::error::{invalid, Result};

/// Row-major node values, `ny + 1` rows of `nx + 1` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != (nx + 1) * (ny + 1) {
            return invalid(format!(
                "grid {}x{} needs {} values, got {}",
                nx + 1,
                ny + 1,
                (nx + 1) * (ny + 1),
                values.len()
            ));
        }
        Ok(Grid2D { nx, ny, values })
    }

    /// Samples `f(x, y)` on `[x0, x1] x [y0, y1]`.
    pub fn sample(nx: usize, ny: usize, (x0, x1): (f64, f64), (y0, y1): (f64, f64), f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            let y = y0 + (y1 - y0) * j as f64 / ny as f64;
            for i in 0..=nx {
                let x = x0 + (x1 - x0) * i as f64 / nx as f64;
                values.push(f(x, y));
            }
        }
        Grid2D { nx, ny, values }
    }

    pub fn width(&self) -> usize {
        self.nx + 1
    }

    pub fn height(&self) -> usize {
        self.ny + 1
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.nx + 1) + i]
    }

    /// Every other node in both directions.
    pub fn decimate(&self) -> Grid2D {
        let (nx, ny) = (self.nx / 2, self.ny / 2);
        let mut values = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                values.push(self.at(2 * i, 2 * j));
            }
        }
        Grid2D { nx, ny, values }
    }
}

/// Prediction of the next finer grid: rows first, then columns.
pub fn refine2d(coarse: &Grid2D, refiner: &dyn Refiner) -> Result<Grid2D> {
    let w = coarse.width();
    let rows: Vec<Vec<f64>> = coarse
        .values
        .par_chunks(w)
        .map(|row| refiner.refine(row))
        .collect::<Result<_>>()?;
    let fw = 2 * coarse.nx + 1;
    let fh = 2 * coarse.ny + 1;
    let cols: Vec<Vec<f64>> = (0..fw)
        .into_par_iter()
        .map(|i| {
            let col: Vec<f64> = rows.iter().map(|r| r[i]).collect();
            refiner.refine(&col)
        })
        .collect::<Result<_>>()?;
    let mut values = vec![0.0; fw * fh];
    for (i, col) in cols.iter().enumerate() {
        for (j, v) in col.iter().enumerate() {
            values[j * fw + i] = *v;
        }
    }
    Ok(Grid2D {
        nx: 2 * coarse.nx,
        ny: 2 * coarse.ny,
        values,
    })
}

/// Coarse grid plus one full-size detail tensor per level; entries at nodes
/// already present on the coarser level are always zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiResRep2D {
    pub p: usize,
    pub ghost: GhostPolicy,
    pub schedule: ThresholdSchedule,
    pub q0: Grid2D,
    pub details: Vec<Grid2D>,
}

impl MultiResRep2D {
    pub fn surviving(&self) -> usize {
        self.details.iter().map(|d| d.values.iter().filter(|v| **v != 0.0).count()).sum()
    }

    /// Nodes of the finest grid that are not on the coarsest one.
    pub fn detail_count(&self) -> usize {
        let fine = self.details.last().map_or(0, |d| d.values.len());
        fine - self.q0.values.len()
    }

    pub fn compression_rate(&self) -> f64 {
        compression_rate(self.surviving(), self.detail_count())
    }
}

fn is_new(i: usize, j: usize) -> bool {
    i % 2 == 1 || j % 2 == 1
}

pub fn encode2d(fine: &Grid2D, schedule: ThresholdSchedule, refiner: &dyn Refiner) -> Result<(Grid2D, Vec<Grid2D>)> {
    let k = schedule.k;
    coarse_cells(fine.width(), k)?;
    coarse_cells(fine.height(), k)?;
    let mut levels = vec![fine.clone()];
    for _ in 0..k {
        let next = levels.last().unwrap().decimate();
        levels.push(next);
    }
    levels.reverse();
    let q0 = levels[0].clone();
    let mut current = q0.clone();
    let mut details = Vec::with_capacity(k);
    for (lvl, exact) in levels.iter().enumerate().skip(1) {
        let mut pred = refine2d(&current, refiner)?;
        let eps = schedule.level(lvl);
        let w = exact.width();
        let mut d = vec![0.0; exact.values.len()];
        for (idx, di) in d.iter_mut().enumerate() {
            let (i, j) = (idx % w, idx / w);
            if is_new(i, j) {
                *di = detail(exact.values[idx], pred.values[idx], eps);
                pred.values[idx] += *di;
            }
        }
        details.push(Grid2D {
            nx: exact.nx,
            ny: exact.ny,
            values: d,
        });
        current = pred;
    }
    Ok((q0, details))
}

pub fn decode2d(q0: &Grid2D, details: &[Grid2D], refiner: &dyn Refiner) -> Result<Grid2D> {
    let mut current = q0.clone();
    for (lvl, d) in details.iter().enumerate() {
        if d.nx != 2 * current.nx || d.ny != 2 * current.ny {
            return invalid(format!("level {} detail grid has the wrong shape", lvl + 1));
        }
        let mut pred = refine2d(&current, refiner)?;
        pred.values.iter_mut().zip(&d.values).for_each(|(v, di)| *v += di);
        current = pred;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multires::EnoRefiner;

    fn eno(p: usize) -> EnoRefiner {
        EnoRefiner {
            p,
            ghost: GhostPolicy::default(),
        }
    }

    #[test]
    fn lossless_and_bilinear() {
        let g = Grid2D::sample(16, 8, (0.0, 1.0), (0.0, 1.0), |x, y| if x + y > 0.7 { 3.0 } else { x * y });
        let s = ThresholdSchedule::new(0.0, 0.5, 2).unwrap();
        let (q0, d) = encode2d(&g, s, &eno(3)).unwrap();
        assert_eq!((q0.nx, q0.ny), (4, 2));
        assert_eq!(decode2d(&q0, &d, &eno(3)).unwrap(), g);

        let b = Grid2D::sample(16, 16, (0.0, 1.0), (0.0, 1.0), |x, y| 1.0 + 2.0 * x - y + 3.0 * x * y);
        let s = ThresholdSchedule::new(1e-9, 0.5, 2).unwrap();
        let (q0, d) = encode2d(&b, s, &eno(3)).unwrap();
        let rep = MultiResRep2D {
            p: 3,
            ghost: GhostPolicy::default(),
            schedule: s,
            q0,
            details: d,
        };
        assert_eq!(rep.compression_rate(), 1.0);
        assert_eq!(rep.detail_count(), 17 * 17 - 25);
    }

    #[test]
    fn shape_errors() {
        let g = Grid2D::sample(10, 8, (0.0, 1.0), (0.0, 1.0), |x, _| x);
        let s = ThresholdSchedule::new(0.0, 0.5, 2).unwrap();
        assert!(encode2d(&g, s, &eno(3)).is_err());
        assert!(Grid2D::new(2, 2, vec![0.0; 8]).is_err());
    }
}
