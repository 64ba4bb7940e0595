use super::ghost::GhostPolicy;
use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// Nested uniform meshes on `[c, d]` with `N_k = 2^k N0` cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridHierarchy {
    pub c: f64,
    pub d: f64,
    pub n0: usize,
    pub k: usize,
    pub ghost_policy: GhostPolicy,
}

impl GridHierarchy {
    pub fn new(c: f64, d: f64, n0: usize, k: usize, ghost_policy: GhostPolicy) -> Result<Self> {
        if !(d > c) || !c.is_finite() || !d.is_finite() {
            return invalid(format!("domain [{c}, {d}] is empty or not finite"));
        }
        if n0 == 0 {
            return invalid("N0 must be positive");
        }
        if k > 40 {
            return invalid("too many levels");
        }
        Ok(GridHierarchy {
            c,
            d,
            n0,
            k,
            ghost_policy,
        })
    }

    pub fn cells(&self, level: usize) -> usize {
        self.n0 << level
    }

    pub fn h(&self, level: usize) -> f64 {
        (self.d - self.c) / self.cells(level) as f64
    }

    /// `x^k_i = c + i h_k`, computed from the finest level so that node `i`
    /// of level `k` and node `2i` of level `k + 1` are bitwise equal.
    pub fn node(&self, level: usize, i: usize) -> f64 {
        let top = self.k.max(level);
        let n = self.cells(top) as f64;
        let j = (i << (top - level)) as f64;
        self.c + (self.d - self.c) * (j / n)
    }

    pub fn nodes(&self, level: usize) -> Vec<f64> {
        (0..=self.cells(level)).map(|i| self.node(level, i)).collect()
    }

    pub fn sample(&self, level: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..=self.cells(level)).map(|i| f(self.node(level, i))).collect()
    }

    /// Cell centers of level `level`.
    pub fn centers(&self, level: usize) -> Vec<f64> {
        let h = self.h(level);
        (0..self.cells(level))
            .map(|i| self.c + (i as f64 + 0.5) * h)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_nodes_coincide() {
        let g = GridHierarchy::new(0.0, 3.0, 9, 5, GhostPolicy::default()).unwrap();
        for k in 0..5 {
            for i in 0..=g.cells(k) {
                assert_eq!(g.node(k, i).to_bits(), g.node(k + 1, 2 * i).to_bits());
            }
        }
        assert_eq!(g.node(5, g.cells(5)), 3.0);
        assert_eq!(g.h(1), 3.0 / 18.0);
    }

    #[test]
    fn rejects_bad_domain() {
        assert!(GridHierarchy::new(1.0, 1.0, 4, 2, GhostPolicy::default()).is_err());
        assert!(GridHierarchy::new(0.0, 1.0, 0, 2, GhostPolicy::default()).is_err());
    }
}
