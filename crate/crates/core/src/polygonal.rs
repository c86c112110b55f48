//! Exact representation counts for sums of four polygonal numbers and for
//! congruence-constrained sums of four squares.
//!
//! Everything funnels through the completed square
//! `x = 2(m-2) l - (m-4)`, which turns `sum a_j p_m(l_j) = n` into
//! `sum a_j x_j^2 = 8(m-2) n + (m-4)^2 sum a_j` with `x_j` in a fixed residue
//! class modulo `2(m-2)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::isqrt;
use crate::error::{invalid, overflow, Result};

/// `p_m(l) = ((m-2) l^2 - (m-4) l) / 2`.
pub fn polygonal_number(m: u32, l: i64) -> Result<i64> {
    if m < 3 {
        return Err(invalid(format!("polygon order must be at least 3, got {m}")));
    }
    let m = m as i128;
    let l = l as i128;
    let twice = (m - 2) * l * l - (m - 4) * l;
    i64::try_from(twice / 2).map_err(|_| overflow("evaluating a polygonal number"))
}

/// Which integers each summation variable ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CountDomain {
    AllIntegers,
    NonNegative,
    Positive,
    AtLeast(i64),
}

impl CountDomain {
    pub fn normalized(self) -> Self {
        match self {
            CountDomain::AtLeast(0) => CountDomain::NonNegative,
            CountDomain::AtLeast(1) => CountDomain::Positive,
            d => d,
        }
    }

    pub fn lower_bound(self) -> Option<i64> {
        match self {
            CountDomain::AllIntegers => None,
            CountDomain::NonNegative => Some(0),
            CountDomain::Positive => Some(1),
            CountDomain::AtLeast(c) => Some(c),
        }
    }
}

fn sort_alpha(alpha: [u64; 4]) -> Result<[u64; 4]> {
    if alpha.iter().any(|&a| a == 0) {
        return Err(invalid("alpha entries must be positive"));
    }
    let mut sorted = alpha;
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    Ok(sorted)
}

/// A sum `sum_j alpha_j p_m(l_j)` of four weighted m-gonal numbers.
///
/// `alpha` is kept sorted non-increasing; the order it was given in is
/// retained for reporting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonalInstance {
    m: u32,
    alpha: [u64; 4],
    original_alpha: [u64; 4],
}

impl PolygonalInstance {
    pub fn new(m: u32, alpha: [u64; 4]) -> Result<Self> {
        if m < 3 {
            return Err(invalid(format!("polygon order must be at least 3, got {m}")));
        }
        Ok(Self {
            m,
            alpha: sort_alpha(alpha)?,
            original_alpha: alpha,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn alpha(&self) -> [u64; 4] {
        self.alpha
    }

    pub fn original_alpha(&self) -> [u64; 4] {
        self.original_alpha
    }

    pub fn alpha_sum(&self) -> u64 {
        self.alpha.iter().sum()
    }

    /// Modulus `2(m-2)` of the completed-square residue class.
    fn square_modulus(&self) -> u64 {
        2 * (self.m as u64 - 2)
    }

    /// The residue `-(m-4)`, unreduced.
    fn square_residue(&self) -> i64 {
        4 - self.m as i64
    }

    /// Lower bound on `x` induced by `l >= c`.
    fn square_bound(&self, c: i64) -> Result<i64> {
        let v = self.square_modulus() as i128 * c as i128 + self.square_residue() as i128;
        i64::try_from(v).map_err(|_| overflow("mapping a lower bound to the square lattice"))
    }

    /// `8(m-2) n + (m-4)^2 sum alpha_j`.
    fn square_target(&self, n: u64) -> Result<u64> {
        let m = self.m as u128;
        let shift = (m as i128 - 4).pow(2) as u128 * self.alpha_sum() as u128;
        let t = 8 * (m - 2) * n as u128 + shift;
        u64::try_from(t).map_err(|_| overflow("shifting n to the square lattice"))
    }
}

/// Constrained sums of squares `sum alpha_j x_j^2` with `x_j = r (mod M)` and,
/// optionally, `x_j >= C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceInstance {
    r: i64,
    modulus: u64,
    alpha: [u64; 4],
    original_alpha: [u64; 4],
    lower_bound: Option<i64>,
}

impl CongruenceInstance {
    pub fn new(r: i64, modulus: u64, alpha: [u64; 4], lower_bound: Option<i64>) -> Result<Self> {
        if modulus == 0 {
            return Err(invalid("modulus must be positive"));
        }
        Ok(Self {
            r,
            modulus,
            alpha: sort_alpha(alpha)?,
            original_alpha: alpha,
            lower_bound,
        })
    }

    /// The unconstrained-sign family `s*`.
    pub fn all_integers(r: i64, modulus: u64, alpha: [u64; 4]) -> Result<Self> {
        Self::new(r, modulus, alpha, None)
    }

    /// The `x_j >= 1` family `s`.
    pub fn positive(r: i64, modulus: u64, alpha: [u64; 4]) -> Result<Self> {
        Self::new(r, modulus, alpha, Some(1))
    }

    /// The residue as given, possibly negative or unreduced.
    pub fn r(&self) -> i64 {
        self.r
    }

    /// `r mod M` in `[0, M)`.
    pub fn residue(&self) -> u64 {
        self.r.rem_euclid(self.modulus as i64) as u64
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn alpha(&self) -> [u64; 4] {
        self.alpha
    }

    pub fn original_alpha(&self) -> [u64; 4] {
        self.original_alpha
    }

    pub fn lower_bound(&self) -> Option<i64> {
        self.lower_bound
    }
}

/// Enumerates `x = residue (mod modulus)` with `x >= lower` and `a x^2 <= budget`.
fn class_members(
    modulus: u64,
    residue: u64,
    lower: Option<i64>,
    a: u64,
    budget: u64,
) -> impl Iterator<Item = i64> {
    let s = isqrt(budget / a) as i64;
    let lo = lower.map_or(-s, |c| c.max(-s));
    let first = lo + (residue as i64 - lo).rem_euclid(modulus as i64);
    (first..=s).step_by(modulus as usize)
}

/// Single-target count: loops over three coordinates and solves for the last.
fn count_core(alpha: [u64; 4], modulus: u64, residue: u64, lower: Option<i64>, target: u64) -> Result<u64> {
    let [a1, a2, a3, a4] = alpha;
    let m = modulus as i64;
    let in_class = |x: i64| x.rem_euclid(m) as u64 == residue && lower.map_or(true, |c| x >= c);
    let sq = |a: u64, x: i64| a as u128 * (x as i128 * x as i128) as u128;
    let mut total: u64 = 0;
    for x1 in class_members(modulus, residue, lower, a1, target) {
        let rem1 = target - sq(a1, x1) as u64;
        for x2 in class_members(modulus, residue, lower, a2, rem1) {
            let rem2 = rem1 - sq(a2, x2) as u64;
            for x3 in class_members(modulus, residue, lower, a3, rem2) {
                let rem3 = rem2 - sq(a3, x3) as u64;
                if rem3 % a4 != 0 {
                    continue;
                }
                let q = rem3 / a4;
                let s = isqrt(q);
                if s * s != q {
                    continue;
                }
                let s = s as i64;
                let mut hits = in_class(s) as u64;
                if s != 0 {
                    hits += in_class(-s) as u64;
                }
                total = total
                    .checked_add(hits)
                    .ok_or_else(|| overflow("accumulating a representation count"))?;
            }
        }
    }
    Ok(total)
}

/// `s_{r,M,alpha,C}(n)`, or `s*` when the instance has no lower bound.
pub fn count_squares(inst: &CongruenceInstance, n: u64) -> Result<u64> {
    count_core(inst.alpha, inst.modulus, inst.residue(), inst.lower_bound, n)
}

/// Number of `l` in `domain^4` with `sum alpha_j p_m(l_j) = n`.
pub fn count_polygonal(inst: &PolygonalInstance, n: u64, domain: CountDomain) -> Result<u64> {
    let lower = match domain.lower_bound() {
        Some(c) => Some(inst.square_bound(c)?),
        None => None,
    };
    let residue = inst.square_residue().rem_euclid(inst.square_modulus() as i64) as u64;
    count_core(inst.alpha, inst.square_modulus(), residue, lower, inst.square_target(n)?)
}

/// The completed-square image of `r_{m,alpha}(n)`:
/// `s_{-(m-4), 2(m-2), alpha, -(m-4)}(8(m-2)n + (m-4)^2 sum alpha_j)`.
pub fn polygonal_to_squares(inst: &PolygonalInstance, n: u64) -> Result<(CongruenceInstance, u64)> {
    if inst.m < 5 {
        return Err(invalid("the completed-square map is only used for m >= 5"));
    }
    let r = inst.square_residue();
    let image = CongruenceInstance::new(r, inst.square_modulus(), inst.original_alpha, Some(r))?;
    Ok((image, inst.square_target(n)?))
}

/// Dense convolution of sparse one-variable generating functions.
///
/// `parts[j]` lists `(exponent, multiplicity)` pairs for variable `j`; the
/// result holds the coefficient of every exponent `0..=t_max`.
fn convolve_parts(parts: &[Vec<(usize, u64)>; 4], t_max: usize) -> Result<Vec<u64>> {
    let mut acc = vec![0u64; t_max + 1];
    for &(e, c) in &parts[0] {
        acc[e] += c;
    }
    for part in &parts[1..] {
        let prev = acc;
        let next: Result<Vec<u64>> = (0..=t_max)
            .into_par_iter()
            .map(|t| {
                let mut s: u64 = 0;
                for &(e, c) in part {
                    if e > t {
                        continue;
                    }
                    let v = prev[t - e];
                    if v == 0 {
                        continue;
                    }
                    s = v
                        .checked_mul(c)
                        .and_then(|p| s.checked_add(p))
                        .ok_or_else(|| overflow("convolving representation counts"))?;
                }
                Ok(s)
            })
            .collect();
        acc = next?;
    }
    Ok(acc)
}

fn to_usize(v: u64, what: &str) -> Result<usize> {
    usize::try_from(v).map_err(|_| overflow(what.to_string()))
}

/// `count_squares(inst, t)` for every `t` in `0..=t_max`.
pub fn count_squares_range(inst: &CongruenceInstance, t_max: u64) -> Result<Vec<u64>> {
    let t_max_us = to_usize(t_max, "sizing a count table")?;
    let mut parts: [Vec<(usize, u64)>; 4] = Default::default();
    for (j, &a) in inst.alpha.iter().enumerate() {
        for x in class_members(inst.modulus, inst.residue(), inst.lower_bound, a, t_max) {
            let e = a as u128 * (x as i128 * x as i128) as u128;
            parts[j].push((e as usize, 1));
        }
    }
    convolve_parts(&parts, t_max_us)
}

/// `count_polygonal(inst, n, domain)` for every `n` in `0..=n_max`.
pub fn count_polygonal_range(inst: &PolygonalInstance, n_max: u64, domain: CountDomain) -> Result<Vec<u64>> {
    let n_max_us = to_usize(n_max, "sizing a count table")?;
    let lower = domain.lower_bound();
    let mut parts: [Vec<(usize, u64)>; 4] = Default::default();
    for (j, &a) in inst.alpha.iter().enumerate() {
        let budget = n_max / a;
        let mut push = |l: i64| -> Result<bool> {
            let p = polygonal_number(inst.m, l)? as u64;
            if p > budget {
                return Ok(false);
            }
            parts[j].push(((p * a) as usize, 1));
            Ok(true)
        };
        // p_m increases strictly on l >= 0 and as l decreases from -1, so
        // each direction stops at the first value over budget.
        let mut l = lower.map_or(0, |c| c.max(0));
        while push(l)? {
            l += 1;
        }
        let floor = lower.unwrap_or(i64::MIN);
        let mut l = -1;
        while l >= floor && push(l)? {
            l -= 1;
        }
    }
    convolve_parts(&parts, n_max_us)
}

/// Literal enumeration oracles; independent of the square map and the
/// solve-for-the-last-variable shortcut. Only practical for small `n`.
pub mod oracle {
    use super::*;

    fn search_bounds(m: u32, a: u64, n: u64, lower: Option<i64>) -> Result<(i64, i64)> {
        let mut hi = 0i64;
        while (polygonal_number(m, hi + 1)? as u64) * a <= n {
            hi += 1;
        }
        let mut lo = 0i64;
        while (polygonal_number(m, lo - 1)? as u64) * a <= n {
            lo -= 1;
        }
        Ok((lower.map_or(lo, |c| c.max(lo)), hi))
    }

    pub fn brute_polygonal(inst: &PolygonalInstance, n: u64, domain: CountDomain) -> Result<u64> {
        let m = inst.m();
        let a = inst.original_alpha();
        let lower = domain.lower_bound();
        let b: Vec<(i64, i64)> = a
            .iter()
            .map(|&aj| search_bounds(m, aj, n, lower))
            .collect::<Result<_>>()?;
        let p = |l: i64| polygonal_number(m, l).map(|v| v as u64);
        let mut count = 0;
        for l1 in b[0].0..=b[0].1 {
            for l2 in b[1].0..=b[1].1 {
                for l3 in b[2].0..=b[2].1 {
                    for l4 in b[3].0..=b[3].1 {
                        let s = a[0] * p(l1)? + a[1] * p(l2)? + a[2] * p(l3)? + a[3] * p(l4)?;
                        count += (s == n) as u64;
                    }
                }
            }
        }
        Ok(count)
    }

    pub fn brute_squares(inst: &CongruenceInstance, n: u64) -> Result<u64> {
        let a = inst.original_alpha();
        let modulus = inst.modulus() as i64;
        let ok = |x: i64| (x - inst.r()).rem_euclid(modulus) == 0 && inst.lower_bound().map_or(true, |c| x >= c);
        let ranges: Vec<Vec<i64>> = a
            .iter()
            .map(|&aj| {
                let s = isqrt(n / aj) as i64;
                (-s..=s).filter(|&x| ok(x)).collect()
            })
            .collect();
        let mut count = 0;
        for &x1 in &ranges[0] {
            for &x2 in &ranges[1] {
                for &x3 in &ranges[2] {
                    for &x4 in &ranges[3] {
                        let s = a[0] as i64 * x1 * x1 + a[1] as i64 * x2 * x2 + a[2] as i64 * x3 * x3 + a[3] as i64 * x4 * x4;
                        count += (s == n as i64) as u64;
                    }
                }
            }
        }
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::oracle::*;
    use super::*;

    #[test]
    fn polygonal_number_values() {
        assert_eq!(polygonal_number(6, 0).unwrap(), 0);
        assert_eq!(polygonal_number(3, 3).unwrap(), 6);
        assert_eq!(polygonal_number(4, 5).unwrap(), 25);
        assert_eq!(polygonal_number(3, -4).unwrap(), 6);
        assert!(polygonal_number(2, 1).is_err());
        for l in -50..=50 {
            assert_eq!(polygonal_number(3, -l - 1).unwrap(), polygonal_number(3, l).unwrap());
        }
    }

    #[test]
    fn domain_normalization() {
        assert_eq!(CountDomain::AtLeast(1).normalized(), CountDomain::Positive);
        assert_eq!(CountDomain::AtLeast(0).normalized(), CountDomain::NonNegative);
        assert_eq!(CountDomain::AtLeast(2).normalized(), CountDomain::AtLeast(2));
    }

    #[test]
    fn instance_ordering() {
        let inst = PolygonalInstance::new(6, [1, 2, 1, 3]).unwrap();
        assert_eq!(inst.alpha(), [3, 2, 1, 1]);
        assert_eq!(inst.original_alpha(), [1, 2, 1, 3]);
        assert!(PolygonalInstance::new(6, [0, 1, 1, 1]).is_err());
        assert!(CongruenceInstance::new(1, 0, [1; 4], None).is_err());
        assert_eq!(CongruenceInstance::new(-2, 8, [1; 4], None).unwrap().residue(), 6);
    }

    #[test]
    fn documented_counts() {
        let sq = PolygonalInstance::new(4, [1; 4]).unwrap();
        assert_eq!(count_polygonal(&sq, 1, CountDomain::AllIntegers).unwrap(), 8);
        for m in 3..9 {
            let inst = PolygonalInstance::new(m, [3, 1, 2, 1]).unwrap();
            assert_eq!(count_polygonal(&inst, 0, CountDomain::NonNegative).unwrap(), 1);
        }
        let hex = PolygonalInstance::new(6, [1; 4]).unwrap();
        assert_eq!(count_polygonal(&hex, 6, CountDomain::NonNegative).unwrap(), 4);
        let cho = CongruenceInstance::all_integers(1, 2, [1; 4]).unwrap();
        assert_eq!(count_squares(&cho, 4).unwrap(), 16);
        let c34 = CongruenceInstance::all_integers(3, 4, [1; 4]).unwrap();
        assert_eq!(count_squares(&c34, 4).unwrap(), 1);
        assert_eq!(count_squares(&cho, 5).unwrap(), 0);
    }

    #[test]
    fn square_map_examples() {
        let hex = PolygonalInstance::new(6, [1; 4]).unwrap();
        let (img, t) = polygonal_to_squares(&hex, 3).unwrap();
        assert_eq!((img.r(), img.modulus(), img.lower_bound(), t), (-2, 8, Some(-2), 32 * 3 + 16));
        let pent = PolygonalInstance::new(5, [1; 4]).unwrap();
        let (img, t) = polygonal_to_squares(&pent, 2).unwrap();
        assert_eq!((img.r(), img.modulus(), img.lower_bound(), t), (-1, 6, Some(-1), 24 * 2 + 4));
        assert!(polygonal_to_squares(&PolygonalInstance::new(4, [1; 4]).unwrap(), 1).is_err());
    }

    #[test]
    fn counts_match_brute_force() {
        let domains = [
            CountDomain::AllIntegers,
            CountDomain::NonNegative,
            CountDomain::Positive,
            CountDomain::AtLeast(2),
            CountDomain::AtLeast(-1),
        ];
        for m in [3, 4, 5, 6, 8] {
            let inst = PolygonalInstance::new(m, [2, 1, 3, 1]).unwrap();
            for domain in domains {
                for n in 0..40 {
                    assert_eq!(
                        count_polygonal(&inst, n, domain).unwrap(),
                        brute_polygonal(&inst, n, domain).unwrap(),
                        "m={m} {domain:?} n={n}"
                    );
                }
            }
        }
        for (r, modulus, lb) in [(1, 2, None), (3, 4, Some(-5)), (-2, 8, Some(-2)), (0, 3, Some(1))] {
            let inst = CongruenceInstance::new(r, modulus, [1, 2, 1, 1], lb).unwrap();
            for n in 0..120 {
                assert_eq!(count_squares(&inst, n).unwrap(), brute_squares(&inst, n).unwrap());
            }
        }
    }

    #[test]
    fn ranges_match_single_counts() {
        let inst = PolygonalInstance::new(7, [2, 1, 1, 1]).unwrap();
        for domain in [CountDomain::AllIntegers, CountDomain::NonNegative, CountDomain::Positive] {
            let table = count_polygonal_range(&inst, 300, domain).unwrap();
            for (n, &c) in table.iter().enumerate() {
                assert_eq!(c, count_polygonal(&inst, n as u64, domain).unwrap());
            }
        }
        let tri = PolygonalInstance::new(3, [1; 4]).unwrap();
        let table = count_polygonal_range(&tri, 60, CountDomain::AllIntegers).unwrap();
        for (n, &c) in table.iter().enumerate() {
            assert_eq!(c, count_polygonal(&tri, n as u64, CountDomain::AllIntegers).unwrap());
        }
        let sq = CongruenceInstance::new(5, 6, [1, 1, 2, 1], Some(-7)).unwrap();
        let table = count_squares_range(&sq, 500).unwrap();
        for (n, &c) in table.iter().enumerate() {
            assert_eq!(c, count_squares(&sq, n as u64).unwrap());
        }
    }

    #[test]
    fn round_trip_hexagonal() {
        let hex = PolygonalInstance::new(6, [1; 4]).unwrap();
        for n in 0..=200 {
            let (img, t) = polygonal_to_squares(&hex, n).unwrap();
            assert_eq!(
                count_squares(&img, t).unwrap(),
                count_polygonal(&hex, n, CountDomain::NonNegative).unwrap()
            );
        }
    }
}
