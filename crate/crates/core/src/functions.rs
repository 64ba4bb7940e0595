//! Built-in test functions.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Location of the derivative jump of [`f1`].
pub const F1_KINK: f64 = PI / 6.0;

/// Piecewise function on `[0, 3]` with jumps and a fast oscillation.
///
/// The breakpoints 0.5, 1.5 and 2.5 belong to the piece on their right.
pub fn q62(x: f64) -> f64 {
    if x < 0.5 {
        -x
    } else if x < 1.5 {
        3.0 * (10.0 * PI * x).sin()
    } else if x < 2.5 {
        -20.0 * (x - 2.0).powi(2)
    } else {
        3.0
    }
}

/// Disk inside a plateau on `[0, 1]^2`.
pub fn q64(x: f64, y: f64) -> f64 {
    if (x - 0.5).powi(2) + (y - 0.5).powi(2) < 0.0225 {
        -10.0
    } else if (x - 0.5).abs() > 0.8 || (y - 0.5).abs() > 0.8 {
        30.0
    } else {
        40.0
    }
}

/// Continuous on `[0, 1]` with a jump in the first derivative at `π/6`.
pub fn f1(x: f64) -> f64 {
    let d = x - F1_KINK;
    if x < F1_KINK {
        -2.0 * d
    } else {
        d * d
    }
}

pub fn f2(x: f64) -> f64 {
    x.sin()
}

/// `sin((q + 1) π l / n)`.
pub fn sine_family(q: u32, l: usize, n: usize) -> f64 {
    ((q + 1) as f64 * PI * l as f64 / n as f64).sin()
}

/// Named one-dimensional functions with their natural domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedFunction {
    Q62,
    F1,
    F2,
    /// `sin(2π x)` on `[0, 1]`, i.e. the family member with `q = 1`.
    Sine,
}

impl NamedFunction {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            NamedFunction::Q62 => q62(x),
            NamedFunction::F1 => f1(x),
            NamedFunction::F2 => f2(x),
            NamedFunction::Sine => (2.0 * PI * x).sin(),
        }
    }

    pub fn domain(self) -> (f64, f64) {
        match self {
            NamedFunction::Q62 => (0.0, 3.0),
            _ => (0.0, 1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedFunction::Q62 => "q62",
            NamedFunction::F1 => "f1",
            NamedFunction::F2 => "f2",
            NamedFunction::Sine => "sine",
        }
    }
}

impl fmt::Display for NamedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q62" => Ok(NamedFunction::Q62),
            "f1" => Ok(NamedFunction::F1),
            "f2" | "sin" => Ok(NamedFunction::F2),
            "sine" => Ok(NamedFunction::Sine),
            _ => Err(Error::InvalidArgument(format!(
                "unknown function '{s}' (expected q62, f1, f2 or sine)"
            ))),
        }
    }
}
