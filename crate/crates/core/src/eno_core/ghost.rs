use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// How samples outside the computational range are filled in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GhostPolicy {
    /// Repeat the boundary value.
    #[default]
    ConstantExtrapolate,
    /// Mirror the data about the boundary (node or face, depending on layout).
    Reflect,
    /// Wrap around.
    Periodic,
}

/// Whether a data vector holds point values at nodes `x_0..x_N` (inclusive of
/// both endpoints) or averages over cells `I_1..I_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Nodes,
    Cells,
}

impl GhostPolicy {
    /// Index into `values` used for the (possibly out-of-range) position `i`.
    pub fn source_index(self, i: isize, len: usize, layout: Layout) -> usize {
        let n = len as isize;
        if (0..n).contains(&i) {
            return i as usize;
        }
        match self {
            GhostPolicy::ConstantExtrapolate => i.clamp(0, n - 1) as usize,
            GhostPolicy::Periodic => {
                // For nodes the last value duplicates the first one.
                let period = match layout {
                    Layout::Nodes => (n - 1).max(1),
                    Layout::Cells => n,
                };
                i.rem_euclid(period) as usize
            }
            GhostPolicy::Reflect => {
                if n == 1 {
                    return 0;
                }
                let mut j = i;
                loop {
                    match layout {
                        Layout::Nodes => {
                            if j < 0 {
                                j = -j;
                            } else if j > n - 1 {
                                j = 2 * (n - 1) - j;
                            } else {
                                break;
                            }
                        }
                        Layout::Cells => {
                            if j < 0 {
                                j = -j - 1;
                            } else if j > n - 1 {
                                j = 2 * n - 1 - j;
                            } else {
                                break;
                            }
                        }
                    }
                }
                j as usize
            }
        }
    }

    /// Returns `values` extended by `left` ghost entries in front and `right`
    /// ghost entries at the back.
    pub fn pad(self, values: &[f64], left: usize, right: usize, layout: Layout) -> Vec<f64> {
        assert!(!values.is_empty(), "cannot pad an empty vector");
        let len = values.len();
        (-(left as isize)..(len + right) as isize)
            .map(|i| values[self.source_index(i, len, layout)])
            .collect()
    }
}

impl fmt::Display for GhostPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GhostPolicy::ConstantExtrapolate => "constant_extrapolate",
            GhostPolicy::Reflect => "reflect",
            GhostPolicy::Periodic => "periodic",
        };
        f.write_str(s)
    }
}

impl FromStr for GhostPolicy {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "constant_extrapolate" | "constant" => Ok(GhostPolicy::ConstantExtrapolate),
            "reflect" => Ok(GhostPolicy::Reflect),
            "periodic" => Ok(GhostPolicy::Periodic),
            other => Err(crate::Error::InvalidArgument(format!(
                "unknown ghost policy '{other}'"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_repeats_boundary() {
        let v = [1.0, 2.0, 3.0];
        let p = GhostPolicy::ConstantExtrapolate.pad(&v, 2, 1, Layout::Nodes);
        assert_eq!(p, vec![1.0, 1.0, 1.0, 2.0, 3.0, 3.0]);
    }

    #[test]
    fn reflect_nodes_and_cells() {
        let v = [1.0, 2.0, 3.0, 4.0];
        let nodes = GhostPolicy::Reflect.pad(&v, 2, 2, Layout::Nodes);
        assert_eq!(nodes, vec![3.0, 2.0, 1.0, 2.0, 3.0, 4.0, 3.0, 2.0]);
        let cells = GhostPolicy::Reflect.pad(&v, 2, 2, Layout::Cells);
        assert_eq!(cells, vec![2.0, 1.0, 1.0, 2.0, 3.0, 4.0, 4.0, 3.0]);
    }

    #[test]
    fn periodic_nodes_skip_duplicate_endpoint() {
        // x_0 .. x_4 with f(x_4) == f(x_0)
        let v = [0.0, 1.0, 2.0, 3.0, 0.0];
        let p = GhostPolicy::Periodic.pad(&v, 2, 2, Layout::Nodes);
        assert_eq!(p, vec![2.0, 3.0, 0.0, 1.0, 2.0, 3.0, 0.0, 1.0, 2.0]);
        let c = GhostPolicy::Periodic.pad(&[1.0, 2.0, 3.0], 2, 2, Layout::Cells);
        assert_eq!(c, vec![2.0, 3.0, 1.0, 2.0, 3.0, 1.0, 2.0]);
    }

    #[test]
    fn parse_round_trip() {
        for g in [
            GhostPolicy::ConstantExtrapolate,
            GhostPolicy::Reflect,
            GhostPolicy::Periodic,
        ] {
            assert_eq!(g.to_string().parse::<GhostPolicy>().unwrap(), g);
        }
        assert!("mirror".parse::<GhostPolicy>().is_err());
    }
}
