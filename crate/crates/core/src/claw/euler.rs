//! Compressible Euler equations and the two shock-tube problems.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Boundary, Fields, FluxSystem, SolverConfig};
use crate::error::{Error, Result};

pub const GAMMA: f64 = 1.4;

/// Ideal gas with ratio of specific heats `gamma`; components `(ρ, ρv, E)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Euler {
    pub gamma: f64,
}

impl Default for Euler {
    fn default() -> Self {
        Euler { gamma: GAMMA }
    }
}

impl Euler {
    pub fn pressure(&self, u: &[f64]) -> f64 {
        let v = u[1] / u[0];
        (self.gamma - 1.0) * (u[2] - 0.5 * u[0] * v * v)
    }

    /// `(ρ, v, p)` from conserved variables.
    pub fn primitive(&self, u: &[f64]) -> [f64; 3] {
        [u[0], u[1] / u[0], self.pressure(u)]
    }

    /// Conserved variables from `(ρ, v, p)`.
    pub fn conserved(&self, rho: f64, v: f64, p: f64) -> [f64; 3] {
        [rho, rho * v, 0.5 * rho * v * v + p / (self.gamma - 1.0)]
    }
}

impl FluxSystem for Euler {
    fn components(&self) -> usize {
        3
    }

    fn flux(&self, u: &[f64], out: &mut [f64]) {
        let v = u[1] / u[0];
        let p = self.pressure(u);
        out[0] = u[1];
        out[1] = u[1] * v + p;
        out[2] = (u[2] + p) * v;
    }

    fn max_speed(&self, u: &[f64]) -> f64 {
        let [rho, v, p] = self.primitive(u);
        v.abs() + (self.gamma * p / rho).sqrt()
    }

    fn check(&self, u: &[f64]) -> std::result::Result<(), String> {
        if !u.iter().all(|x| x.is_finite()) {
            return Err("non-finite state".into());
        }
        if !(u[0] > 0.0) {
            return Err(format!("density {} is not positive", u[0]));
        }
        let p = self.pressure(u);
        if !(p > 0.0) {
            return Err(format!("pressure {p} is not positive"));
        }
        Ok(())
    }
}

/// Conserved fields on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerState {
    pub rho: Vec<f64>,
    pub mom: Vec<f64>,
    pub energy: Vec<f64>,
    pub gamma: f64,
}

impl EulerState {
    pub fn from_primitive(rho: &[f64], v: &[f64], p: &[f64], gamma: f64) -> Self {
        let e = Euler { gamma };
        let mut s = EulerState {
            rho: Vec::with_capacity(rho.len()),
            mom: Vec::with_capacity(rho.len()),
            energy: Vec::with_capacity(rho.len()),
            gamma,
        };
        for i in 0..rho.len() {
            let [a, b, c] = e.conserved(rho[i], v[i], p[i]);
            s.rho.push(a);
            s.mom.push(b);
            s.energy.push(c);
        }
        s
    }

    pub fn from_fields(u: &Fields, gamma: f64) -> Self {
        EulerState {
            rho: u[0].clone(),
            mom: u[1].clone(),
            energy: u[2].clone(),
            gamma,
        }
    }

    pub fn fields(&self) -> Fields {
        vec![self.rho.clone(), self.mom.clone(), self.energy.clone()]
    }

    pub fn velocity(&self) -> Vec<f64> {
        self.mom.iter().zip(&self.rho).map(|(m, r)| m / r).collect()
    }

    pub fn pressure(&self) -> Vec<f64> {
        let e = Euler { gamma: self.gamma };
        (0..self.rho.len())
            .map(|i| e.pressure(&[self.rho[i], self.mom[i], self.energy[i]]))
            .collect()
    }
}

/// Built-in test problems on `[-5, 5]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Sod,
    ShockEntropy,
}

impl Problem {
    pub const DOMAIN: (f64, f64) = (-5.0, 5.0);

    pub fn initial(self, centers: &[f64]) -> EulerState {
        match self {
            Problem::Sod => init_sod(centers),
            Problem::ShockEntropy => init_shock_entropy(centers),
        }
    }

    /// Standard grid and final time for this problem.
    pub fn default_config(self, p: usize) -> SolverConfig {
        let (n, t_final) = match self {
            Problem::Sod => (50, 2.0),
            Problem::ShockEntropy => (200, 1.8),
        };
        SolverConfig {
            n,
            cfl: 0.5,
            t_final,
            p,
            boundary: Boundary::Outflow,
            domain: Self::DOMAIN,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Problem::Sod => "sod",
            Problem::ShockEntropy => "shock-entropy",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sod" => Ok(Problem::Sod),
            "shock-entropy" => Ok(Problem::ShockEntropy),
            _ => Err(Error::InvalidArgument(format!(
                "unknown problem '{s}' (expected sod or shock-entropy)"
            ))),
        }
    }
}

fn from_fn(centers: &[f64], f: impl Fn(f64) -> (f64, f64, f64)) -> EulerState {
    let (mut r, mut v, mut p) = (vec![], vec![], vec![]);
    for &x in centers {
        let (a, b, c) = f(x);
        r.push(a);
        v.push(b);
        p.push(c);
    }
    EulerState::from_primitive(&r, &v, &p, GAMMA)
}

/// Sod shock tube: `(1, 0, 1)` left of 0, `(0.125, 0, 0.1)` right of it.
pub fn init_sod(centers: &[f64]) -> EulerState {
    from_fn(centers, |x| if x < 0.0 { (1.0, 0.0, 1.0) } else { (0.125, 0.0, 0.1) })
}

/// Shock moving into a density sine wave.
pub fn init_shock_entropy(centers: &[f64]) -> EulerState {
    from_fn(centers, |x| {
        if x < -4.0 {
            (3.857143, 2.629369, 10.33333)
        } else {
            (1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0)
        }
    })
}
