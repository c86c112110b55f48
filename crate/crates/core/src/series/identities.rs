//! Exact coefficientwise checks of the structural q-series identities.

use num_rational::{BigRational, Rational64};
use serde::{Deserialize, Serialize};

use super::theta::{f_j_series, false_theta_series, partial_theta_series, theta_series, Subset};
use super::{int, QSeries};
use crate::error::{invalid, Result};
use crate::polygonal::{count_polygonal_range, count_squares, CongruenceInstance, CountDomain, PolygonalInstance};

/// Location and values of the first disagreement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    /// Exponent `num/den` of `q`.
    pub num: i64,
    pub den: u64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub passed: bool,
    /// Number of lattice points (or coefficients) compared.
    pub compared: u64,
    pub first_mismatch: Option<Mismatch>,
}

impl CheckReport {
    fn from_series(lhs: &QSeries, rhs: &QSeries) -> Result<Self> {
        let d = num_integer::Integer::lcm(&lhs.denom(), &rhs.denom());
        let order = lhs.rescale(d)?.order().min(rhs.rescale(d)?.order());
        let floor = lhs.rescale(d)?.floor().min(rhs.rescale(d)?.floor());
        let first_mismatch = match lhs.first_difference(rhs)? {
            Some((i, den)) => Some(Mismatch {
                num: i,
                den,
                lhs: lhs.coeff_at(i, den)?.to_string(),
                rhs: rhs.coeff_at(i, den)?.to_string(),
            }),
            None => None,
        };
        Ok(Self {
            passed: first_mismatch.is_none(),
            compared: (order - floor).max(0) as u64,
            first_mismatch,
        })
    }

    fn merge(mut self, other: Self) -> Self {
        self.compared += other.compared;
        if self.first_mismatch.is_none() {
            self.first_mismatch = other.first_mismatch;
        }
        self.passed = self.first_mismatch.is_none();
        self
    }
}

fn decomposition_sides(r: i64, m: u64, alpha: [u64; 4], n_max: u64) -> Result<(QSeries, QSeries)> {
    if r <= 0 || r >= 2 * m as i64 {
        return Err(invalid(format!("the theta/false theta decomposition needs 0 < r < 2M, got r={r}, M={m}")));
    }
    let order = Rational64::new(n_max as i64 + 1, 2 * m as i64);
    let lhs = partial_theta_series(r, 2 * m, alpha, order)?;
    let scaled = |a: u64, theta: bool| -> Result<QSeries> {
        let inner = order / Rational64::from_integer(2 * a as i64);
        let s = if theta {
            theta_series(r, 2 * m, inner)?
        } else {
            false_theta_series(r, m, inner)?
        };
        s.substitute(2 * a, 1)
    };
    let thetas = alpha.iter().map(|&a| scaled(a, true)).collect::<Result<Vec<_>>>()?;
    let falses = alpha.iter().map(|&a| scaled(a, false)).collect::<Result<Vec<_>>>()?;
    let mut rhs = QSeries::zero(lhs.denom(), 0)?;
    let mut first = true;
    for j in Subset::all() {
        let factors: Vec<&QSeries> = (0..4).map(|i| if j.contains(i) { &thetas[i] } else { &falses[i] }).collect();
        let term = QSeries::product(factors)?;
        rhs = if first { term } else { rhs.add(&term)? };
        first = false;
    }
    let rhs = rhs.scale(&BigRational::new(1.into(), 16.into()));
    Ok((lhs, rhs))
}

/// `Theta^+_{r,2M,alpha}(tau) = (1/16) sum_J prod_{j in J} theta(r, 2M; 2 alpha_j tau)
/// prod_{l not in J} F_{r,M}(2 alpha_l tau)`, for every `s(n)` with `n <= n_max`.
pub fn decomposition_check(r: i64, m: u64, alpha: [u64; 4], n_max: u64) -> Result<CheckReport> {
    let (lhs, rhs) = decomposition_sides(r, m, alpha, n_max)?;
    CheckReport::from_series(&lhs, &rhs)
}

/// The same check with `delta` added to the left side at `q^{n/(2M)}`; must fail there.
pub fn perturbed_decomposition_check(r: i64, m: u64, alpha: [u64; 4], n_max: u64, n: u64, delta: i64) -> Result<CheckReport> {
    let (mut lhs, rhs) = decomposition_sides(r, m, alpha, n_max)?;
    let idx = n as i64 * (lhs.denom() / (2 * m)) as i64;
    lhs.perturb(idx, int(delta))?;
    CheckReport::from_series(&lhs, &rhs)
}

/// `sum r^+_{m,alpha}(n) q^n = q^{-sum(alpha)(m-4)^2 / (8(m-2))} Theta^+_{m,2(m-2),alpha}(tau/4)`
/// for `n <= n_max`, against literal `r^+` counts.
pub fn rplus_generating_check(m: u32, alpha: [u64; 4], n_max: u64) -> Result<CheckReport> {
    if m < 5 {
        return Err(invalid("the r+ generating function identity needs m >= 5"));
    }
    let inst = PolygonalInstance::new(m, alpha)?;
    let counts = count_polygonal_range(&inst, n_max, CountDomain::Positive)?;
    let lhs = QSeries::from_entries(1, 0, n_max as i64 + 1, counts.iter().enumerate().map(|(n, &c)| (n as i64, int(c as i64))))?;
    let mm = m as i64;
    let modulus = 2 * (m as u64 - 2);
    let a_sum: i64 = alpha.iter().sum::<u64>() as i64;
    let shift = Rational64::new(a_sum * (mm - 4).pow(2), 8 * (mm - 2));
    // Exponent bound for Theta^+(tau/4) is n_max + 1 + shift, so for Theta^+(tau) it is four times that.
    let inner = (Rational64::from_integer(n_max as i64 + 1) + shift) * Rational64::from_integer(4);
    let theta = partial_theta_series(mm, modulus, alpha, inner)?;
    let rhs = theta
        .substitute(1, 4)?
        .shift(-*shift.numer(), *shift.denom() as u64)?
        .to_integral_lattice()?;
    CheckReport::from_series(&lhs, &rhs)
}

/// `c_{r,M,alpha}(n) = s*_{r,2M,alpha}(2Mn + r^2 sum(alpha))` for `0 <= n <= n_max`.
pub fn full_coefficient_star_check(r: i64, m: u64, alpha: [u64; 4], n_max: u64) -> Result<CheckReport> {
    let series = f_j_series(r, m, alpha, Subset::FULL, n_max as i64 + 1)?;
    let inst = CongruenceInstance::all_integers(r, 2 * m, alpha)?;
    let a_sum: u64 = alpha.iter().sum();
    let shift = (r * r) as u64 * a_sum;
    let mut report = CheckReport {
        passed: true,
        compared: 0,
        first_mismatch: None,
    };
    for n in 0..=n_max {
        let lhs = series.coeff(n as i64)?;
        let rhs = int(count_squares(&inst, 2 * m * n + shift)? as i64);
        report = report.merge(single(n as i64, lhs, rhs));
    }
    Ok(report)
}

/// `c_{m,m-2,alpha}(4(n - sum(alpha))) = r*_{m,alpha}(n)` for `0 <= n <= n_max`.
pub fn full_coefficient_polygonal_check(m: u32, alpha: [u64; 4], n_max: u64) -> Result<CheckReport> {
    if m < 5 {
        return Err(invalid("the polygonal coefficient identity needs m >= 5"));
    }
    let a_sum: i64 = alpha.iter().sum::<u64>() as i64;
    let top = 4 * (n_max as i64 - a_sum);
    let series = f_j_series(m as i64, m as u64 - 2, alpha, Subset::FULL, top.max(0) + 1)?;
    let counts = count_polygonal_range(&PolygonalInstance::new(m, alpha)?, n_max, CountDomain::AllIntegers)?;
    let mut report = CheckReport {
        passed: true,
        compared: 0,
        first_mismatch: None,
    };
    for n in 0..=n_max as i64 {
        let idx = 4 * (n - a_sum);
        let lhs = if idx < series.floor() { int(0) } else { series.coeff(idx)? };
        report = report.merge(single(idx, lhs, int(counts[n as usize] as i64)));
    }
    Ok(report)
}

/// For odd `M`: `Theta^+_{r,M,alpha}(tau) = Theta^+_{2r,2M,alpha}(tau/2)`.
pub fn odd_modulus_check(r: i64, m: u64, alpha: [u64; 4], n_max: u64) -> Result<CheckReport> {
    if m % 2 == 0 {
        return Err(invalid("the odd-modulus identity needs M odd"));
    }
    let order = Rational64::new(n_max as i64 + 1, m as i64);
    let lhs = partial_theta_series(r, m, alpha, order)?;
    let rhs = partial_theta_series(2 * r, 2 * m, alpha, order * 2)?.substitute(1, 2)?;
    CheckReport::from_series(&lhs, &rhs)
}

fn single(idx: i64, lhs: BigRational, rhs: BigRational) -> CheckReport {
    let first_mismatch = (lhs != rhs).then(|| Mismatch {
        num: idx,
        den: 1,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    });
    CheckReport {
        passed: first_mismatch.is_none(),
        compared: 1,
        first_mismatch,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_small_cases() {
        assert!(decomposition_check(1, 2, [1; 4], 120).unwrap().passed);
        assert!(decomposition_check(5, 6, [1; 4], 120).unwrap().passed);
        assert!(decomposition_check(0, 2, [1; 4], 10).is_err());
        assert!(decomposition_check(4, 2, [1; 4], 10).is_err());
    }

    #[test]
    fn perturbation_is_located() {
        let rep = perturbed_decomposition_check(1, 2, [1; 4], 60, 20, 1).unwrap();
        assert!(!rep.passed);
        let mm = rep.first_mismatch.unwrap();
        assert_eq!(Rational64::new(mm.num, mm.den as i64), Rational64::new(20, 4));
    }

    #[test]
    fn rplus_small() {
        assert!(rplus_generating_check(6, [1; 4], 60).unwrap().passed);
    }

    #[test]
    fn full_coefficient_small() {
        assert!(full_coefficient_star_check(1, 2, [1; 4], 30).unwrap().passed);
        assert!(full_coefficient_polygonal_check(6, [1; 4], 30).unwrap().passed);
    }

    #[test]
    fn odd_modulus_identity() {
        assert!(odd_modulus_check(1, 3, [1; 4], 80).unwrap().passed);
        assert!(odd_modulus_check(2, 5, [2, 1, 1, 1], 80).unwrap().passed);
        // With tau/4 in place of tau/2 the exponents come out halved.
        let order = Rational64::new(81, 3);
        let lhs = partial_theta_series(1, 3, [1; 4], order).unwrap();
        let quarter = partial_theta_series(2, 6, [1; 4], order * 4).unwrap().substitute(1, 4).unwrap();
        assert!(lhs.first_difference(&quarter).unwrap().is_some());
    }
}
