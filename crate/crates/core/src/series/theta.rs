//! Constructors for the unary theta and false theta series and the
//! four-fold products built from them.

use std::fmt;
use std::str::FromStr;

use num_rational::{BigRational, Rational64};
use serde::{Deserialize, Serialize};

use super::{int, QSeries};
use crate::arith::isqrt;
use crate::error::{invalid, Error, Result};

fn order_index(order: Rational64, denom: u64) -> i64 {
    (order * Rational64::from_integer(denom as i64)).ceil().to_integer()
}

fn check_modulus(m: u64) -> Result<()> {
    if m == 0 {
        return Err(invalid("modulus must be positive"));
    }
    if m > 1 << 20 {
        return Err(invalid("modulus too large for exact series"));
    }
    Ok(())
}

/// `sum_{nu = r (mod step)} w(nu) q^{nu^2 / denom}` for `nu^2 < order * denom`.
fn unary(step: u64, r: i64, denom: u64, order: Rational64, weight: impl Fn(i64) -> i64) -> Result<QSeries> {
    let ord = order_index(order, denom);
    let mut entries = Vec::new();
    if ord > 0 {
        let s = isqrt((ord - 1) as u64) as i64;
        let step = step as i64;
        let first = -s + (r + s).rem_euclid(step);
        let mut nu = first;
        while nu <= s {
            let w = weight(nu);
            if w != 0 {
                entries.push((nu * nu, int(w)));
            }
            nu += step;
        }
    }
    QSeries::from_entries(denom, 0, ord.max(0), entries)
}

/// `theta(r, M; tau) = sum_{nu = r (mod M)} q^{nu^2 / (2M)}`, truncated at exponent `order`.
pub fn theta_series(r: i64, m: u64, order: Rational64) -> Result<QSeries> {
    check_modulus(m)?;
    unary(m, r, 2 * m, order, |_| 1)
}

/// `F_{r,M}(tau) = sum_{nu = r (mod 2M)} sgn(nu) q^{nu^2 / (4M)}`.
pub fn false_theta_series(r: i64, m: u64, order: Rational64) -> Result<QSeries> {
    check_modulus(m)?;
    unary(2 * m, r, 4 * m, order, i64::signum)
}

/// `sum_{x >= c, x = r (mod M)} q^{a x^2 / M}`.
pub fn one_sided_series(r: i64, m: u64, a: u64, c: i64, order: Rational64) -> Result<QSeries> {
    check_modulus(m)?;
    if a == 0 {
        return Err(invalid("alpha entries must be positive"));
    }
    let ord = order_index(order, m);
    let mut entries = Vec::new();
    if ord > 0 {
        let s = isqrt(((ord - 1) as u64) / a) as i64;
        let lo = c.max(-s);
        let mut x = lo + (r - lo).rem_euclid(m as i64);
        while x <= s {
            entries.push((a as i64 * x * x, int(1)));
            x += m as i64;
        }
    }
    QSeries::from_entries(m, 0, ord.max(0), entries)
}

/// Evaluates a unary series at `2 a tau`, keeping exponents below `order`.
fn at_scaled(build: impl Fn(Rational64) -> Result<QSeries>, a: u64, order: Rational64) -> Result<QSeries> {
    let inner = order / Rational64::from_integer(2 * a as i64);
    build(inner)?.substitute(2 * a, 1)
}

/// `Theta^+_{r,M,alpha}(tau) = sum_n s_{r,M,alpha}(n) q^{n/M}`, as a product of
/// one-sided unary sums.
pub fn partial_theta_series(r: i64, m: u64, alpha: [u64; 4], order: Rational64) -> Result<QSeries> {
    let factors = alpha
        .iter()
        .map(|&a| one_sided_series(r, m, a, 1, order))
        .collect::<Result<Vec<_>>>()?;
    QSeries::product(&factors)
}

/// `Theta*_{r,M,alpha}(tau) = prod_j theta(r, M; 2 alpha_j tau)`.
pub fn star_theta_series(r: i64, m: u64, alpha: [u64; 4], order: Rational64) -> Result<QSeries> {
    let factors = alpha
        .iter()
        .map(|&a| at_scaled(|o| theta_series(r, m, o), a, order))
        .collect::<Result<Vec<_>>>()?;
    QSeries::product(&factors)
}

/// A subset `J` of `{1, 2, 3, 4}`, stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subset(u8);

impl Subset {
    pub const FULL: Subset = Subset(0b1111);
    pub const EMPTY: Subset = Subset(0);

    pub fn from_mask(mask: u8) -> Result<Self> {
        if mask > 0b1111 {
            return Err(invalid("subset mask must fit in four bits"));
        }
        Ok(Subset(mask))
    }

    /// From 1-based indices.
    pub fn from_indices(idx: &[usize]) -> Result<Self> {
        let mut mask = 0u8;
        for &j in idx {
            if !(1..=4).contains(&j) {
                return Err(invalid(format!("subset index {j} outside 1..=4")));
            }
            mask |= 1 << (j - 1);
        }
        Ok(Subset(mask))
    }

    /// Whether the 0-based position `j` lies in the subset.
    pub fn contains(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn all() -> impl Iterator<Item = Subset> {
        (0..16u8).map(Subset)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = (0..4).filter(|&j| self.contains(j)).map(|j| (j + 1).to_string()).collect();
        write!(f, "{{{}}}", idx.join(","))
    }
}

impl FromStr for Subset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        if s.is_empty() {
            return Ok(Subset::EMPTY);
        }
        let idx = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| invalid(format!("bad subset entry {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Subset::from_indices(&idx)
    }
}

/// `F_{r,M,alpha,J}(q) = q^{-r^2 sum(alpha) / (2M)} prod_{j in J} theta(r, 2M; 2 alpha_j tau)
/// prod_{l not in J} F_{r,M}(2 alpha_l tau)`, on the integer lattice, for `q^n` with `n < order`.
///
/// The prefactor always lands the product on integral exponents; that is
/// asserted. Exponents may be negative when `r > M`.
pub fn f_j_series(r: i64, m: u64, alpha: [u64; 4], j: Subset, order: i64) -> Result<QSeries> {
    check_modulus(m)?;
    let a_sum: u64 = alpha.iter().sum();
    let shift = Rational64::new(r * r * a_sum as i64, 2 * m as i64);
    let bound = Rational64::from_integer(order) + shift;
    let factors = (0..4)
        .map(|idx| {
            let a = alpha[idx];
            if a == 0 {
                return Err(invalid("alpha entries must be positive"));
            }
            if j.contains(idx) {
                at_scaled(|o| theta_series(r, 2 * m, o), a, bound)
            } else {
                at_scaled(|o| false_theta_series(r, m, o), a, bound)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let prod = QSeries::product(&factors)?;
    let shifted = prod.shift(-*shift.numer(), *shift.denom() as u64)?;
    shifted.to_integral_lattice()
}

/// `c_{r,M,alpha,J}(n)`.
pub fn c_coefficient(r: i64, m: u64, alpha: [u64; 4], j: Subset, n: i64) -> Result<BigRational> {
    f_j_series(r, m, alpha, j, n + 1)?.coeff(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r64(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn theta_examples() {
        let t = theta_series(0, 1, r64(10, 1)).unwrap();
        assert_eq!(t.denom(), 2);
        assert_eq!(t.coeff(0).unwrap(), int(1));
        assert_eq!(t.coeff_at(1, 2).unwrap(), int(2));
        assert_eq!(t.coeff_at(2, 1).unwrap(), int(2));
        assert_eq!(t.coeff_at(1, 1).unwrap(), int(0));
        let t = theta_series(1, 2, r64(20, 1)).unwrap();
        assert_eq!(t.coeff_at(1, 4).unwrap(), int(2));
        assert_eq!(t.coeff_at(9, 4).unwrap(), int(2));
        assert_eq!(t.coeff_at(4, 4).unwrap(), int(0));
    }

    #[test]
    fn false_theta_examples() {
        assert_eq!(false_theta_series(0, 3, r64(50, 1)).unwrap().nonzero_count(), 0);
        // F_{1,1}: nu = 1 (mod 2) pairs +nu with -nu, so the series vanishes.
        assert_eq!(false_theta_series(1, 1, r64(120, 1)).unwrap().nonzero_count(), 0);
        // F_{1,2}: nu in {.., -7, -3, 1, 5, 9, ..}.
        let f = false_theta_series(1, 2, r64(30, 1)).unwrap();
        let expect = [(1, 1), (9, -1), (25, 1), (49, -1), (81, 1), (121, -1), (169, 1), (225, -1)];
        assert_eq!(f.nonzero_count(), expect.len());
        for (e, c) in expect {
            assert_eq!(f.coeff_at(e, 8).unwrap(), int(c), "q^{e}/8");
        }
    }

    #[test]
    fn false_theta_symmetries() {
        for m in 1..=12u64 {
            let order = r64(40, 1);
            assert_eq!(false_theta_series(0, m, order).unwrap().nonzero_count(), 0);
            assert_eq!(false_theta_series(m as i64, m, order).unwrap().nonzero_count(), 0);
            for r in 0..=2 * m as i64 {
                let a = false_theta_series(r, m, order).unwrap();
                let b = false_theta_series(2 * m as i64 - r, m, order).unwrap();
                assert_eq!(a, b.neg(), "r={r} M={m}");
            }
        }
    }

    #[test]
    fn subset_parsing() {
        let j: Subset = "1,2,3".parse().unwrap();
        assert_eq!(j.mask(), 0b0111);
        assert_eq!(j.to_string(), "{1,2,3}");
        assert_eq!("{}".parse::<Subset>().unwrap(), Subset::EMPTY);
        assert!("0,5".parse::<Subset>().is_err());
        assert_eq!(Subset::all().count(), 16);
    }

    #[test]
    fn four_square_product_matches_divisor_sums() {
        let star = star_theta_series(1, 2, [1; 4], r64(170, 1)).unwrap();
        for n in 0..=20u64 {
            let c = star.coeff_at(8 * n as i64 + 4, 2).unwrap();
            assert_eq!(c, int(16 * crate::arith::divisor_sigma(2 * n + 1).unwrap() as i64));
        }
    }

    #[test]
    fn negative_exponents_for_large_residue() {
        let f = f_j_series(6, 4, [1; 4], Subset::FULL, 5).unwrap();
        assert!(f.floor() < 0);
        assert_eq!(f.coeff(-16).unwrap(), int(1));
    }
}
