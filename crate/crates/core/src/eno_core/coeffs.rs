//! Interpolation and reconstruction coefficient tables.
//!
//! Rows for `p <= 4` are stored literally; higher orders are generated from
//! Lagrange interpolation in exact rational arithmetic.

use crate::error::{invalid, Result};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest order supported by the generator (keeps i128 products exact).
pub const MAX_ORDER: usize = 12;

/// Exact rational number with a positive denominator in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Rational {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub fn int(n: i128) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn numer(self) -> i128 {
        self.num
    }

    pub fn denom(self) -> i128 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, o: Rational) -> Rational {
        Rational::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, o: Rational) -> Rational {
        self + (-o)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, o: Rational) -> Rational {
        Rational::new(self.num * o.num, self.den * o.den)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, o: Rational) -> Rational {
        Rational::new(self.num * o.den, self.den * o.num)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

const fn q(num: i128, den: i128) -> Rational {
    Rational { num, den }
}

const INTERP_2: [[Rational; 2]; 1] = [[q(1, 2), q(1, 2)]];
const INTERP_3: [[Rational; 3]; 2] = [
    [q(3, 8), q(3, 4), q(-1, 8)],
    [q(-1, 8), q(3, 4), q(3, 8)],
];
const INTERP_4: [[Rational; 4]; 3] = [
    [q(5, 16), q(15, 16), q(-5, 16), q(1, 16)],
    [q(-1, 16), q(9, 16), q(9, 16), q(-1, 16)],
    [q(1, 16), q(-5, 16), q(15, 16), q(5, 16)],
];

// Rows indexed by s + 1 for s = -1..p-1.
const REC_2: [[Rational; 2]; 3] = [
    [q(3, 2), q(-1, 2)],
    [q(1, 2), q(1, 2)],
    [q(-1, 2), q(3, 2)],
];
const REC_3: [[Rational; 3]; 4] = [
    [q(11, 6), q(-7, 6), q(1, 3)],
    [q(1, 3), q(5, 6), q(-1, 6)],
    [q(-1, 6), q(5, 6), q(1, 3)],
    [q(1, 3), q(-7, 6), q(11, 6)],
];
const REC_4: [[Rational; 4]; 5] = [
    [q(25, 12), q(-23, 12), q(13, 12), q(-1, 4)],
    [q(1, 4), q(13, 12), q(-5, 12), q(1, 12)],
    [q(-1, 12), q(7, 12), q(7, 12), q(-1, 12)],
    [q(1, 12), q(-5, 12), q(13, 12), q(1, 4)],
    [q(-1, 4), q(13, 12), q(-23, 12), q(25, 12)],
];

fn check_order(p: usize) -> Result<()> {
    if !(2..=MAX_ORDER).contains(&p) {
        return invalid(format!("order p = {p} outside 2..={MAX_ORDER}"));
    }
    Ok(())
}

/// Lagrange weights of the nodes `t_j = j - r` (j = 0..p-1) evaluated at 1/2.
///
/// With `x_{i-1}` at 0 and `x_i` at 1 the stencil `x_{i-1-r}..x_{i-2-r+p}`
/// sits at these positions, so the weights multiply `f_{i-1-r+j}`.
pub fn lagrange_interp_row(p: usize, r: usize) -> Vec<Rational> {
    let t: Vec<Rational> = (0..p).map(|j| Rational::int(j as i128 - r as i128)).collect();
    let x = Rational::new(1, 2);
    (0..p)
        .map(|j| {
            (0..p).filter(|&m| m != j).fold(Rational::ONE, |acc, m| {
                acc * (x - t[m]) / (t[j] - t[m])
            })
        })
        .collect()
}

/// Face value weights from differentiating the interpolant of the primitive.
///
/// Cells `i-s..i-s+p-1` have interfaces at `0..p`; the right face of cell `i`
/// is interface `s + 1`. Weight of cell `q` is the sum over interfaces
/// `m > q` of the derivative of the `m`-th Lagrange basis polynomial there.
pub fn lagrange_rec_row(p: usize, s: isize) -> Vec<Rational> {
    let x = Rational::int(s as i128 + 1);
    let nodes = p + 1;
    let t: Vec<Rational> = (0..nodes).map(|m| Rational::int(m as i128)).collect();
    let dbasis = |m: usize| -> Rational {
        let mut sum = Rational::ZERO;
        for l in (0..nodes).filter(|&l| l != m) {
            let mut prod = Rational::ONE / (t[m] - t[l]);
            for n in (0..nodes).filter(|&n| n != m && n != l) {
                prod = prod * (x - t[n]) / (t[m] - t[n]);
            }
            sum = sum + prod;
        }
        sum
    };
    let d: Vec<Rational> = (0..nodes).map(dbasis).collect();
    (0..p)
        .map(|qi| d[qi + 1..].iter().fold(Rational::ZERO, |a, &b| a + b))
        .collect()
}

/// Exact interpolation row `C^p_{r,.}`.
pub fn interp_coeffs_exact(p: usize, r: usize) -> Result<Vec<Rational>> {
    check_order(p)?;
    if r > p - 2 {
        return invalid(format!("interpolation shift {r} outside 0..={}", p - 2));
    }
    Ok(match p {
        2 => INTERP_2[r].to_vec(),
        3 => INTERP_3[r].to_vec(),
        4 => INTERP_4[r].to_vec(),
        _ => lagrange_interp_row(p, r),
    })
}

/// Exact reconstruction row `C~^p_{s,.}` for `s` in `-1..=p-1`.
pub fn rec_coeffs_exact(p: usize, s: isize) -> Result<Vec<Rational>> {
    check_order(p)?;
    if s < -1 || s > p as isize - 1 {
        return invalid(format!("reconstruction row {s} outside -1..={}", p - 1));
    }
    let k = (s + 1) as usize;
    Ok(match p {
        2 => REC_2[k].to_vec(),
        3 => REC_3[k].to_vec(),
        4 => REC_4[k].to_vec(),
        _ => lagrange_rec_row(p, s),
    })
}

/// Interpolation row as floating point numbers.
pub fn interp_coeffs(p: usize, r: usize) -> Result<Vec<f64>> {
    Ok(interp_coeffs_exact(p, r)?.into_iter().map(Rational::to_f64).collect())
}

/// Reconstruction row as floating point numbers.
pub fn rec_coeffs(p: usize, s: isize) -> Result<Vec<f64>> {
    Ok(rec_coeffs_exact(p, s)?.into_iter().map(Rational::to_f64).collect())
}

/// All interpolation rows of order `p`, indexed by shift.
pub fn interp_table(p: usize) -> Result<Vec<Vec<f64>>> {
    check_order(p)?;
    (0..=p - 2).map(|r| interp_coeffs(p, r)).collect()
}

/// All reconstruction rows of order `p`, indexed by `s + 1`.
pub fn rec_table(p: usize) -> Result<Vec<Vec<f64>>> {
    check_order(p)?;
    (-1..p as isize).map(|s| rec_coeffs(p, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_matches_tables() {
        for p in 2..=4 {
            for r in 0..=p - 2 {
                assert_eq!(interp_coeffs_exact(p, r).unwrap(), lagrange_interp_row(p, r), "p={p} r={r}");
            }
            for s in -1..p as isize {
                assert_eq!(rec_coeffs_exact(p, s).unwrap(), lagrange_rec_row(p, s), "p={p} s={s}");
            }
        }
    }

    #[test]
    fn rows_sum_to_one() {
        for p in 2..=MAX_ORDER {
            for r in 0..=p - 2 {
                let s = interp_coeffs_exact(p, r).unwrap().into_iter().fold(Rational::ZERO, |a, b| a + b);
                assert_eq!(s, Rational::ONE);
            }
            for s in -1..p as isize {
                let t = rec_coeffs_exact(p, s).unwrap().into_iter().fold(Rational::ZERO, |a, b| a + b);
                assert_eq!(t, Rational::ONE);
            }
        }
    }

    #[test]
    fn table_examples() {
        assert_eq!(interp_coeffs(3, 0).unwrap(), vec![0.375, 0.75, -0.125]);
        let r = rec_coeffs_exact(3, -1).unwrap();
        assert_eq!(r, vec![Rational::new(11, 6), Rational::new(-7, 6), Rational::new(1, 3)]);
        assert_eq!(rec_coeffs(2, 0).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(interp_coeffs(1, 0).is_err());
        assert!(interp_coeffs(3, 2).is_err());
        assert!(rec_coeffs(3, -2).is_err());
        assert!(rec_coeffs(3, 3).is_err());
        assert!(rec_coeffs(MAX_ORDER + 1, 0).is_err());
    }

    #[test]
    fn rational_display() {
        assert_eq!(Rational::new(6, -4).to_string(), "-3/2");
        assert_eq!(Rational::new(4, 2).to_string(), "2");
    }
}
