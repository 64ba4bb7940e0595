//! Discrete error norms.

use serde::Serialize;

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Norms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

impl Norms {
    /// `h Σ|v|`, `sqrt(h Σ v²)`, `max |v|`.
    pub fn of(v: impl Iterator<Item = f64>, h: f64) -> Norms {
        let (mut s1, mut s2, mut m) = (0.0, 0.0, 0.0f64);
        for x in v {
            let a = x.abs();
            s1 += a;
            s2 += a * a;
            m = m.max(a);
        }
        Norms {
            l1: h * s1,
            l2: (h * s2).sqrt(),
            linf: m,
        }
    }
}

/// Absolute errors and errors relative to the norms of the reference.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ErrorNorms {
    pub abs: Norms,
    pub rel: Norms,
}

fn ratio(e: f64, r: f64) -> f64 {
    if r > 0.0 {
        e / r
    } else {
        e
    }
}

/// Norms of `a - b` with cell size (or area) `h`; relative variants divide
/// by the same norm of `a`.
pub fn error_norms(a: &[f64], b: &[f64], h: f64) -> Result<ErrorNorms> {
    if a.len() != b.len() {
        return invalid(format!("shape mismatch: {} vs {}", a.len(), b.len()));
    }
    let abs = Norms::of(a.iter().zip(b).map(|(x, y)| x - y), h);
    let r = Norms::of(a.iter().copied(), h);
    Ok(ErrorNorms {
        abs,
        rel: Norms {
            l1: ratio(abs.l1, r.l1),
            l2: ratio(abs.l2, r.l2),
            linf: ratio(abs.linf, r.linf),
        },
    })
}
