//! Linear advection `u_t + a u_x = 0` as a one-component system.

use std::f64::consts::PI;

use super::{l1_distance, solve, Boundary, FluxSystem, SolverConfig};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Advection {
    pub a: f64,
}

impl FluxSystem for Advection {
    fn components(&self) -> usize {
        1
    }

    fn flux(&self, u: &[f64], out: &mut [f64]) {
        out[0] = self.a * u[0];
    }

    fn max_speed(&self, _u: &[f64]) -> f64 {
        self.a.abs()
    }

    fn check(&self, u: &[f64]) -> std::result::Result<(), String> {
        if u[0].is_finite() {
            Ok(())
        } else {
            Err("non-finite state".into())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub error: f64,
    /// `log2(e_{prev} / e)`; `None` on the first row.
    pub slope: Option<f64>,
}

/// L1 errors of `sin(2π x)` advected once around the periodic unit interval.
pub fn advection_convergence(p: usize, ns: &[usize], cfl: f64) -> Result<Vec<ConvergenceRow>> {
    let sys = Advection { a: 1.0 };
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in ns {
        let config = SolverConfig {
            n,
            cfl,
            t_final: 1.0,
            p,
            boundary: Boundary::Periodic,
            domain: (0.0, 1.0),
        };
        let x = config.centers();
        let u0: Vec<f64> = x.iter().map(|x| (2.0 * PI * x).sin()).collect();
        let u = solve(&sys, config, vec![u0.clone()])?;
        let error = l1_distance(&u[0], &u0, config.h());
        let slope = rows.last().map(|r| (r.error / error).log2() * (r.n as f64 / n as f64).log2().abs().recip());
        rows.push(ConvergenceRow {
            n,
            h: config.h(),
            error,
            slope,
        });
    }
    Ok(rows)
}
