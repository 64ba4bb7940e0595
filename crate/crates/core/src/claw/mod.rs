//! Finite-difference ENO schemes for 1D conservation laws: global
//! Lax-Friedrichs flux splitting, componentwise ENO-p reconstruction of the
//! split fluxes and classical RK4 time stepping.

pub mod advection;
pub mod euler;

use serde::{Deserialize, Serialize};

use crate::eno_core::{reconstruct_padded, GhostPolicy, Layout};
use crate::error::{invalid, Error, Result};

pub use advection::{advection_convergence, Advection, ConvergenceRow};
pub use euler::{init_shock_entropy, init_sod, Euler, EulerState, Problem, GAMMA};

/// Component-major conserved variables: `u[c][i]`.
pub type Fields = Vec<Vec<f64>>;

/// A hyperbolic system `u_t + f(u)_x = 0`.
pub trait FluxSystem: Sync {
    fn components(&self) -> usize;
    /// Flux of the point state `u` (one entry per component).
    fn flux(&self, u: &[f64], out: &mut [f64]);
    /// Largest characteristic speed magnitude at `u`.
    fn max_speed(&self, u: &[f64]) -> f64;
    /// Rejects unphysical states.
    fn check(&self, _u: &[f64]) -> std::result::Result<(), String> {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Constant-extrapolation ghost cells.
    #[default]
    Outflow,
    Periodic,
}

impl Boundary {
    fn ghost(self) -> GhostPolicy {
        match self {
            Boundary::Outflow => GhostPolicy::ConstantExtrapolate,
            Boundary::Periodic => GhostPolicy::Periodic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub n: usize,
    pub cfl: f64,
    pub t_final: f64,
    pub p: usize,
    pub boundary: Boundary,
    /// Domain `[x0, x1]`.
    pub domain: (f64, f64),
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return invalid("need at least two cells");
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return invalid("cfl must lie in (0, 1]");
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return invalid("t_final must be finite and >= 0");
        }
        if self.p == 0 || self.p > 8 {
            return invalid("order p must lie in 1..=8");
        }
        if !(self.domain.1 > self.domain.0) {
            return invalid("empty domain");
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        (self.domain.1 - self.domain.0) / self.n as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        let h = self.h();
        (0..self.n).map(|i| self.domain.0 + (i as f64 + 0.5) * h).collect()
    }
}

/// `F^± = (F ± αU) / 2`, componentwise.
pub fn split_flux_lf(u: &[f64], f: &[f64], alpha: f64) -> (Vec<f64>, Vec<f64>) {
    let plus = u.iter().zip(f).map(|(u, f)| 0.5 * (f + alpha * u)).collect();
    let minus = u.iter().zip(f).map(|(u, f)| 0.5 * (f - alpha * u)).collect();
    (plus, minus)
}

fn point(u: &Fields, i: usize, buf: &mut [f64]) {
    for (c, b) in buf.iter_mut().enumerate() {
        *b = u[c][i];
    }
}

/// Rejects the first unphysical cell.
pub fn check_state<S: FluxSystem + ?Sized>(sys: &S, u: &Fields, time: f64) -> Result<()> {
    let n = u[0].len();
    let mut buf = vec![0.0; sys.components()];
    for i in 0..n {
        point(u, i, &mut buf);
        if let Err(message) = sys.check(&buf) {
            return Err(Error::StateInvalid {
                cell: i,
                time,
                message,
            });
        }
    }
    Ok(())
}

/// Global maximum wave speed.
pub fn max_wavespeed<S: FluxSystem + ?Sized>(sys: &S, u: &Fields) -> f64 {
    let mut buf = vec![0.0; sys.components()];
    (0..u[0].len())
        .map(|i| {
            point(u, i, &mut buf);
            sys.max_speed(&buf)
        })
        .fold(0.0, f64::max)
}

/// Semi-discrete right-hand side `-(F_{i+1/2} - F_{i-1/2}) / h`.
pub fn eno_fd_rhs<S: FluxSystem + ?Sized>(sys: &S, u: &Fields, p: usize, boundary: Boundary, h: f64) -> Result<Fields> {
    let nc = sys.components();
    let n = u[0].len();
    let alpha = max_wavespeed(sys, u);
    let g = p;
    let ghost = boundary.ghost();
    let padded: Fields = u.iter().map(|c| ghost.pad(c, g, g, Layout::Cells)).collect();
    let m = n + 2 * g;
    let mut flux: Fields = vec![vec![0.0; m]; nc];
    let (mut ub, mut fb) = (vec![0.0; nc], vec![0.0; nc]);
    for i in 0..m {
        point(&padded, i, &mut ub);
        sys.flux(&ub, &mut fb);
        for c in 0..nc {
            flux[c][i] = fb[c];
        }
    }
    let mut rhs = vec![vec![0.0; n]; nc];
    for c in 0..nc {
        let (fp, fm) = split_flux_lf(&padded[c], &flux[c], alpha);
        // cells -1..=n, i.e. index j is cell j - 1
        let (_, fp_right) = reconstruct_padded(&fp, p)?;
        let (fm_left, _) = reconstruct_padded(&fm, p)?;
        // face f sits between cells f - 1 and f
        let face: Vec<f64> = (0..=n).map(|f| fp_right[f] + fm_left[f + 1]).collect();
        for i in 0..n {
            rhs[c][i] = -(face[i + 1] - face[i]) / h;
        }
    }
    Ok(rhs)
}

fn axpy(u: &Fields, k: &Fields, a: f64) -> Fields {
    u.iter()
        .zip(k)
        .map(|(u, k)| u.iter().zip(k).map(|(u, k)| u + a * k).collect())
        .collect()
}

/// Time integrator state for one run.
pub struct Solver<'a, S: FluxSystem + ?Sized> {
    sys: &'a S,
    config: SolverConfig,
    u: Fields,
    t: f64,
    steps: usize,
}

impl<'a, S: FluxSystem + ?Sized> Solver<'a, S> {
    pub fn new(sys: &'a S, config: SolverConfig, u0: Fields) -> Result<Self> {
        config.validate()?;
        if u0.len() != sys.components() || u0.iter().any(|c| c.len() != config.n) {
            return invalid(format!(
                "initial data must have {} components of {} cells",
                sys.components(),
                config.n
            ));
        }
        check_state(sys, &u0, 0.0)?;
        Ok(Solver {
            sys,
            config,
            u: u0,
            t: 0.0,
            steps: 0,
        })
    }

    pub fn state(&self) -> &Fields {
        &self.u
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn done(&self) -> bool {
        self.t >= self.config.t_final
    }

    fn rhs(&self, u: &Fields, t: f64) -> Result<Fields> {
        check_state(self.sys, u, t)?;
        let c = &self.config;
        eno_fd_rhs(self.sys, u, c.p, c.boundary, c.h())
    }

    /// One classical RK4 step of size `dt`.
    pub fn rk4_step(&mut self, dt: f64) -> Result<()> {
        let t = self.t;
        let k1 = self.rhs(&self.u, t)?;
        let k2 = self.rhs(&axpy(&self.u, &k1, 0.5 * dt), t + 0.5 * dt)?;
        let k3 = self.rhs(&axpy(&self.u, &k2, 0.5 * dt), t + 0.5 * dt)?;
        let k4 = self.rhs(&axpy(&self.u, &k3, dt), t + dt)?;
        let next: Fields = (0..self.u.len())
            .map(|c| {
                (0..self.u[c].len())
                    .map(|i| self.u[c][i] + dt / 6.0 * (k1[c][i] + 2.0 * k2[c][i] + 2.0 * k3[c][i] + k4[c][i]))
                    .collect()
            })
            .collect();
        check_state(self.sys, &next, t + dt)?;
        self.u = next;
        self.t += dt;
        self.steps += 1;
        Ok(())
    }

    /// CFL step, clipped so the run lands on `t_final`.
    pub fn next_dt(&self) -> f64 {
        let c = &self.config;
        let speed = max_wavespeed(self.sys, &self.u);
        let dt = if speed > 0.0 {
            c.cfl * c.h() / speed
        } else {
            c.t_final - self.t
        };
        dt.min(c.t_final - self.t)
    }

    pub fn step(&mut self) -> Result<()> {
        let dt = self.next_dt();
        if dt <= 0.0 {
            return Ok(());
        }
        self.rk4_step(dt)?;
        if self.config.t_final - self.t <= 1e-12 * self.config.t_final.max(1.0) {
            self.t = self.config.t_final;
        }
        Ok(())
    }

    pub fn run(&mut self) -> Result<()> {
        while !self.done() {
            self.step()?;
        }
        Ok(())
    }

    pub fn into_state(self) -> Fields {
        self.u
    }
}

/// Runs `sys` from `u0` to `config.t_final`.
pub fn solve<S: FluxSystem + ?Sized>(sys: &S, config: SolverConfig, u0: Fields) -> Result<Fields> {
    let mut s = Solver::new(sys, config, u0)?;
    s.run()?;
    Ok(s.into_state())
}

/// Averages a fine solution onto `n` coarse cells (`n` must divide its length).
pub fn restrict(fine: &[f64], n: usize) -> Result<Vec<f64>> {
    if n == 0 || !fine.len().is_multiple_of(n) {
        return invalid(format!("{} cells cannot be averaged onto {n}", fine.len()));
    }
    let r = fine.len() / n;
    Ok(fine.chunks(r).map(|c| c.iter().sum::<f64>() / r as f64).collect())
}

/// `h Σ |a - b|`.
pub fn l1_distance(a: &[f64], b: &[f64], h: f64) -> f64 {
    h * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}
