//! Exact q-expansions on the integral lattice: eta powers, `E_2`, quadratic
//! twists, the `U` and `V` operators, the Eisenstein series
//! `E = sum_{n = 1 (6)} sigma(n) q^n`, and the split of the pentagonal theta
//! product into `(2/3) E(4 tau) + (1/3) eta^4(24 tau)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{divisor_sigma, euler_phi, kronecker, twisted_divisor_sum_8};
use crate::error::{invalid, overflow, Error, Result};
use crate::polygonal::{count_polygonal_range, count_squares_range, CongruenceInstance, CountDomain, PolygonalInstance};
use crate::series::{QSeries, EXACT};

/// A [`QSeries`] on the lattice `D = 1`. The functions here check the
/// lattice on input and always return `D = 1`.
pub type IntegerQSeries = QSeries;

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn require_integral(f: &QSeries, what: &str) -> Result<()> {
    if f.denom() != 1 {
        return Err(invalid(format!("{what} needs a series on q^n (D = 1), got D = {}", f.denom())));
    }
    Ok(())
}

fn require_finite_order(order: i64) -> Result<usize> {
    if order < 0 || order == EXACT {
        return Err(invalid(format!("order must be a finite non-negative index, got {order}")));
    }
    usize::try_from(order).map_err(|_| overflow("sizing a q-expansion"))
}

/// `prod_{n >= 1} (1 - x^n)` below `x^len`, from Euler's pentagonal theorem.
fn euler_product(len: usize) -> Vec<(usize, i128)> {
    let mut out = Vec::new();
    for k in 0i64.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let a = (k * (3 * k - 1) / 2) as usize;
        if a >= len {
            break;
        }
        out.push((a, sign));
        if k > 0 {
            let b = (k * (3 * k + 1) / 2) as usize;
            if b < len {
                out.push((b, sign));
            }
        }
    }
    out
}

/// `eta(a tau)^p = q^{ap/24} prod_{n >= 1} (1 - q^{an})^p`, below `q^order`.
pub fn eta_power(argument_multiplier: u64, power: u32, order: i64) -> Result<IntegerQSeries> {
    if argument_multiplier == 0 || power == 0 {
        return Err(invalid("eta_power needs a positive multiplier and power"));
    }
    let ap = argument_multiplier as u128 * power as u128;
    if ap % 24 != 0 {
        return Err(invalid(format!(
            "eta({argument_multiplier} tau)^{power} has exponents in {ap}/24 + Z, not integral"
        )));
    }
    let lead = i64::try_from(ap / 24).map_err(|_| overflow("eta leading exponent"))?;
    let n = require_finite_order(order)?;
    let a = argument_multiplier as usize;
    let lead_us = lead as usize;
    // Coefficients of prod (1 - x^n)^p in x = q^a, below q^{order - lead}.
    let len = if n > lead_us { (n - lead_us).div_ceil(a) } else { 0 };
    let euler = euler_product(len);
    let mut acc = vec![0i128; len];
    if len > 0 {
        acc[0] = 1;
    }
    for _ in 0..power {
        let mut next = vec![0i128; len];
        for (i, &c) in acc.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(e, s) in &euler {
                if i + e >= len {
                    break;
                }
                next[i + e] = c
                    .checked_mul(s)
                    .and_then(|t| next[i + e].checked_add(t))
                    .ok_or_else(|| overflow("expanding an eta power"))?;
            }
        }
        acc = next;
    }
    let entries = acc
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c != 0)
        .map(|(i, c)| (lead + (i * a) as i64, BigRational::from_integer(BigInt::from(c))));
    QSeries::from_entries(1, 0, order, entries)
}

/// `E_2 = 1 - 24 sum_{n >= 1} sigma(n) q^n`, below `q^order`.
pub fn eisenstein_e2(order: i64) -> Result<IntegerQSeries> {
    let n = require_finite_order(order)?;
    let mut entries = Vec::with_capacity(n);
    if n > 0 {
        entries.push((0, BigRational::one()));
    }
    for i in 1..n as u64 {
        entries.push((i as i64, int(BigInt::from(divisor_sigma(i)?) * -24)));
    }
    QSeries::from_entries(1, 0, order, entries)
}

/// `(f ⊗ chi_D)(n) = (D/n) c_f(n)`, with `(D/n)` the Kronecker symbol.
/// `D = 9` gives the square of `chi_{-3}`.
pub fn twist(f: &QSeries, d: i64) -> Result<IntegerQSeries> {
    require_integral(f, "twist")?;
    let entries = f.iter().map(|(i, c)| (i, c * int(kronecker(d, i) as i64)));
    QSeries::from_entries(1, f.floor(), f.order(), entries)
}

/// `f | U_delta = sum c_f(delta n) q^n`.
pub fn u_op(f: &QSeries, delta: u64) -> Result<IntegerQSeries> {
    require_integral(f, "U operator")?;
    if delta == 0 {
        return Err(invalid("U_delta needs delta >= 1"));
    }
    let d = i64::try_from(delta).map_err(|_| overflow("U_delta"))?;
    let order = if f.order() == EXACT { EXACT } else { Integer::div_ceil(&f.order(), &d) };
    let entries = f.iter().filter(|&(i, _)| i % d == 0).map(|(i, c)| (i / d, c.clone()));
    QSeries::from_entries(1, Integer::div_ceil(&f.floor(), &d), order, entries)
}

/// `f | V_delta = sum c_f(n) q^{delta n}`.
pub fn v_op(f: &QSeries, delta: u64) -> Result<IntegerQSeries> {
    require_integral(f, "V operator")?;
    if delta == 0 {
        return Err(invalid("V_delta needs delta >= 1"));
    }
    f.substitute(delta, 1)?.to_integral_lattice()
}

/// `E = sum_{n = 1 (mod 6)} sigma(n) q^n`, below `q^order`.
pub fn eisenstein_e(order: i64) -> Result<IntegerQSeries> {
    let n = require_finite_order(order)?;
    let entries = (1..n as u64)
        .step_by(6)
        .map(|i| Ok((i as i64, int(divisor_sigma(i)?))))
        .collect::<Result<Vec<_>>>()?;
    QSeries::from_entries(1, 0, order, entries)
}

/// `-(1/48) (E_2 ⊗ chi_{-3} + E_2 ⊗ chi_{-3}^2) | (1 - U_2 V_2)`, which
/// should equal [`eisenstein_e`].
pub fn eisenstein_e_from_twists(order: i64) -> Result<IntegerQSeries> {
    let e2 = eisenstein_e2(order)?;
    let sum = twist(&e2, -3)?.add(&twist(&e2, 9)?)?;
    let even = v_op(&u_op(&sum, 2)?, 2)?;
    Ok(sum.sub(&even)?.scale(&BigRational::new((-1).into(), 48.into())))
}

/// `s*_{5,6,(1,1,1,1)}(n)` placed at `q^n`, from the brute-force counter.
pub fn pentagonal_star_series(order: i64) -> Result<IntegerQSeries> {
    let n = require_finite_order(order)?;
    if n == 0 {
        return QSeries::zero(1, 0);
    }
    let inst = CongruenceInstance::all_integers(5, 6, [1; 4])?;
    let counts = count_squares_range(&inst, n as u64 - 1)?;
    let entries = counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c != 0)
        .map(|(i, c)| (i as i64, BigRational::from_integer(BigInt::from(c))));
    QSeries::from_entries(1, 0, order, entries)
}

/// `(2/3) E(4 tau) + (1/3) eta^4(24 tau)`, below `q^order`.
pub fn theta_split_rhs(order: i64) -> Result<IntegerQSeries> {
    let e4 = v_op(&eisenstein_e(Integer::div_ceil(&order, &4))?, 4)?.truncate(order);
    let eta = eta_power(24, 4, order)?;
    e4.scale(&BigRational::new(2.into(), 3.into()))
        .add(&eta.scale(&BigRational::new(1.into(), 3.into())))
}

/// First disagreeing coefficient of the theta split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitMismatch {
    pub n: i64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaSplitReport {
    pub order: i64,
    /// Indices `0..order` compared.
    pub compared: i64,
    pub holds: bool,
    pub mismatch: Option<SplitMismatch>,
}

/// Compares `sum s*_{5,6,(1,1,1,1)}(n) q^n` with
/// `(2/3) E(4 tau) + (1/3) eta^4(24 tau)` exactly below `q^order`.
pub fn verify_theta_split(order: i64) -> Result<ThetaSplitReport> {
    if order < 1 {
        return Err(invalid("verify_theta_split needs order >= 1"));
    }
    let lhs = pentagonal_star_series(order)?;
    let rhs = theta_split_rhs(order)?;
    compare(order, &lhs, &rhs)
}

fn compare(order: i64, lhs: &QSeries, rhs: &QSeries) -> Result<ThetaSplitReport> {
    let mismatch = match lhs.first_difference(rhs)? {
        None => None,
        Some((n, _)) => Some(SplitMismatch {
            n,
            lhs: lhs.coeff(n)?.to_string(),
            rhs: rhs.coeff(n)?.to_string(),
        }),
    };
    Ok(ThetaSplitReport {
        order,
        compared: order,
        holds: mismatch.is_none(),
        mismatch,
    })
}

/// Which Eisenstein main term to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MainTermFamily {
    /// Four hexagonal numbers: `sigma(2n+1) / 16`.
    Hexagonal,
    /// Five hexagonal numbers, weights `(1,1,1,2)`:
    /// `-(1/64) sum_{d | 8n+5} (8/d) d`.
    Hexagonal2,
    /// Four pentagonal numbers: `sigma(6n+1) / 24`.
    Pentagonal,
}

impl MainTermFamily {
    pub const ALL: [MainTermFamily; 3] = [MainTermFamily::Hexagonal, MainTermFamily::Hexagonal2, MainTermFamily::Pentagonal];

    pub fn name(self) -> &'static str {
        match self {
            MainTermFamily::Hexagonal => "hexagonal",
            MainTermFamily::Hexagonal2 => "hexagonal2",
            MainTermFamily::Pentagonal => "pentagonal",
        }
    }
}

impl fmt::Display for MainTermFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MainTermFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MainTermFamily::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| invalid(format!("unknown main-term family {s:?}; expected hexagonal, hexagonal2 or pentagonal")))
    }
}

fn affine(a: u64, n: u64, b: u64) -> Result<u64> {
    a.checked_mul(n)
        .and_then(|t| t.checked_add(b))
        .ok_or_else(|| overflow("forming the divisor-sum argument"))
}

fn sigma_i64(n: u64) -> Result<i64> {
    i64::try_from(divisor_sigma(n)?).map_err(|_| overflow("sigma(n) exceeds i64"))
}

/// The exact Eisenstein main term of the chosen family at `n`.
pub fn corollary_main_terms(which: MainTermFamily, n: u64) -> Result<Rational64> {
    Ok(match which {
        MainTermFamily::Hexagonal => Rational64::new(sigma_i64(affine(2, n, 1)?)?, 16),
        MainTermFamily::Hexagonal2 => Rational64::new(-twisted_divisor_sum_8(affine(8, n, 5)?)?, 64),
        MainTermFamily::Pentagonal => Rational64::new(sigma_i64(affine(6, n, 1)?)?, 24),
    })
}

impl MainTermFamily {
    /// `(m, alpha)` of the polygonal count the main term approximates.
    pub fn instance(self) -> (u32, [u64; 4]) {
        match self {
            MainTermFamily::Hexagonal => (6, [1, 1, 1, 1]),
            MainTermFamily::Hexagonal2 => (6, [1, 1, 1, 2]),
            MainTermFamily::Pentagonal => (5, [1, 1, 1, 1]),
        }
    }
}

/// A polygonal count next to its Eisenstein main term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainTermRow {
    pub n: u64,
    pub exact: u64,
    pub main_term: f64,
    /// `exact - main_term`.
    pub residual: f64,
    /// `exact / main_term`.
    pub ratio: f64,
}

/// Rows for every `n` in `n_min..=n_max`. `CountDomain::NonNegative` gives
/// `r_{m,alpha}(n)`, `CountDomain::Positive` gives `r^+_{m,alpha}(n)`.
pub fn main_term_rows(which: MainTermFamily, domain: CountDomain, n_min: u64, n_max: u64) -> Result<Vec<MainTermRow>> {
    let (m, alpha) = which.instance();
    let counts = count_polygonal_range(&PolygonalInstance::new(m, alpha)?, n_max, domain)?;
    (n_min..=n_max)
        .map(|n| {
            let main = corollary_main_terms(which, n)?;
            let main = *main.numer() as f64 / *main.denom() as f64;
            let exact = counts[n as usize];
            Ok(MainTermRow {
                n,
                exact,
                main_term: main,
                residual: exact as f64 - main,
                ratio: exact as f64 / main,
            })
        })
        .collect()
}

/// First `n <= n_max` with `-sum_{d | 8n+5} (8/d) d < phi(8n+5)`, if any.
pub fn hexagonal2_positivity_failure(n_max: u64) -> Result<Option<u64>> {
    for n in 0..=n_max {
        let m = affine(8, n, 5)?;
        if -twisted_divisor_sum_8(m)? < euler_phi(m)? as i64 {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Empirical size of the coefficients `a(n)` of `eta^4(24 tau)` against
/// `n^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientGrowth {
    pub n_max: i64,
    pub exponent: f64,
    /// `max |a(n)| / n^exponent` over the nonzero coefficients.
    pub constant: f64,
    pub argmax: i64,
    pub nonzero: usize,
}

pub fn eta4_coefficient_growth(n_max: i64, exponent: f64) -> Result<CoefficientGrowth> {
    let f = eta_power(24, 4, n_max + 1)?;
    let mut out = CoefficientGrowth {
        n_max,
        exponent,
        constant: 0.0,
        argmax: 0,
        nonzero: 0,
    };
    for (n, c) in f.iter() {
        let ratio = c.abs().to_f64().unwrap_or(f64::INFINITY) / (n as f64).powf(exponent);
        out.nonzero += 1;
        if ratio > out.constant {
            out.constant = ratio;
            out.argmax = n;
        }
    }
    Ok(out)
}

/// Checks `s*_{5,6,(1,1,1,1)}(24n+4) = (2/3) sigma(6n+1) + (1/3) a(24n+4)`
/// for `n <= n_max`, with `a` the coefficients of `eta^4(24 tau)`. Returns the
/// first failing `n`.
pub fn pentagonal_progression_failure(n_max: u64) -> Result<Option<u64>> {
    let order = affine(24, n_max, 5)? as i64;
    let lhs = pentagonal_star_series(order)?;
    let eta = eta_power(24, 4, order)?;
    let third = BigRational::new(1.into(), 3.into());
    for n in 0..=n_max {
        let idx = 24 * n as i64 + 4;
        let sigma = divisor_sigma(affine(6, n, 1)?)?;
        let expect = (int(BigInt::from(sigma) * 2) + eta.coeff(idx)?) * &third;
        if lhs.coeff(idx)? != expect {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
