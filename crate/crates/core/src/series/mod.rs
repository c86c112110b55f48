//! Exact truncated q-series on a fractional exponent lattice.
//!
//! A [`QSeries`] with lattice denominator `D` stores coefficients of
//! `q^{i/D}` for integer indices `i`. Indices below `floor` are exactly zero;
//! indices at or beyond `order` are unknown. Every operation propagates both.

mod identities;
mod json;
mod theta;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};

pub use identities::{
    decomposition_check, full_coefficient_star_check, full_coefficient_polygonal_check, odd_modulus_check, perturbed_decomposition_check,
    rplus_generating_check, CheckReport, Mismatch,
};
pub use json::SeriesJson;
pub use theta::{
    c_coefficient, f_j_series, false_theta_series, one_sided_series, partial_theta_series, star_theta_series, theta_series,
    Subset,
};

/// Sentinel order for series known exactly (finite polynomials).
pub const EXACT: i64 = i64::MAX;

#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    denom: u64,
    floor: i64,
    order: i64,
    coeffs: BTreeMap<i64, BigRational>,
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries(D={}, floor={}, order={}, ", self.denom, self.floor, self.order)?;
        f.debug_map().entries(self.coeffs.iter().map(|(k, v)| (k, v.to_string()))).finish()?;
        write!(f, ")")
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

fn sat_mul(a: i64, b: i64) -> i64 {
    if a == EXACT {
        EXACT
    } else {
        a.saturating_mul(b)
    }
}

fn sat_add(a: i64, b: i64) -> i64 {
    if a == EXACT || b == EXACT {
        EXACT
    } else {
        a.saturating_add(b)
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    if a == EXACT {
        EXACT
    } else {
        Integer::div_ceil(&a, &b)
    }
}

impl QSeries {
    /// The zero series known up to (but excluding) lattice index `order`.
    pub fn zero(denom: u64, order: i64) -> Result<Self> {
        if denom == 0 {
            return Err(invalid("lattice denominator must be positive"));
        }
        Ok(Self {
            denom,
            floor: order.min(0),
            order,
            coeffs: BTreeMap::new(),
        })
    }

    /// The constant `c`, exact.
    pub fn constant(c: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        Self {
            denom: 1,
            floor: 0,
            order: EXACT,
            coeffs,
        }
    }

    /// A series with explicit coefficients. Entries must lie in `[floor, order)`.
    pub fn from_entries(
        denom: u64,
        floor: i64,
        order: i64,
        entries: impl IntoIterator<Item = (i64, BigRational)>,
    ) -> Result<Self> {
        if denom == 0 {
            return Err(invalid("lattice denominator must be positive"));
        }
        if floor > order {
            return Err(invalid("series floor exceeds its truncation order"));
        }
        let mut coeffs: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (i, c) in entries {
            if i < floor || i >= order {
                return Err(Error::OutOfRange {
                    index: i,
                    denominator: denom,
                    reason: format!("outside the known window [{floor}, {order})"),
                });
            }
            *coeffs.entry(i).or_insert_with(BigRational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Self {
            denom,
            floor,
            order,
            coeffs,
        })
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    /// Lattice index at which knowledge stops.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Lattice index below which every coefficient is exactly zero.
    pub fn floor(&self) -> i64 {
        self.floor
    }

    /// Truncation order as an exponent of `q`.
    pub fn order_exponent(&self) -> Option<Rational64> {
        (self.order != EXACT).then(|| Rational64::new(self.order, self.denom as i64))
    }

    /// Non-zero coefficients in index order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient at lattice index `i`; an error when `i` is beyond the order.
    pub fn coeff(&self, i: i64) -> Result<BigRational> {
        if i >= self.order {
            return Err(Error::OutOfRange {
                index: i,
                denominator: self.denom,
                reason: format!("at or beyond truncation order {}", self.order),
            });
        }
        Ok(self.coeffs.get(&i).cloned().unwrap_or_else(BigRational::zero))
    }

    /// Coefficient of `q^{num/den}`; zero when the exponent is off-lattice.
    pub fn coeff_at(&self, num: i64, den: u64) -> Result<BigRational> {
        if den == 0 {
            return Err(invalid("exponent denominator must be positive"));
        }
        let scaled = num as i128 * self.denom as i128;
        if scaled % den as i128 != 0 {
            let bound = Rational64::new(self.order, self.denom as i64);
            if self.order != EXACT && Rational64::new(num, den as i64) >= bound {
                return Err(Error::OutOfRange {
                    index: num,
                    denominator: den,
                    reason: "beyond truncation order".into(),
                });
            }
            return Ok(BigRational::zero());
        }
        let i = i64::try_from(scaled / den as i128).map_err(|_| invalid("exponent out of range"))?;
        self.coeff(i)
    }

    /// The same series on the finer lattice `new_denom`, a multiple of `D`.
    pub fn rescale(&self, new_denom: u64) -> Result<Self> {
        if new_denom == 0 || new_denom % self.denom != 0 {
            return Err(invalid(format!(
                "cannot move a D={} series to D={new_denom}",
                self.denom
            )));
        }
        let f = (new_denom / self.denom) as i64;
        if f == 1 {
            return Ok(self.clone());
        }
        Ok(Self {
            denom: new_denom,
            floor: sat_mul(self.floor, f),
            order: sat_mul(self.order, f),
            coeffs: self.coeffs.iter().map(|(&i, c)| (i * f, c.clone())).collect(),
        })
    }

    /// Drops to the coarsest lattice holding every non-zero index, the floor
    /// and the order, so no exponent changes between known and unknown.
    pub fn reduced(&self) -> Self {
        let mut g = (self.denom as i64).gcd(&self.floor);
        if self.order != EXACT {
            g = g.gcd(&self.order);
        }
        for &i in self.coeffs.keys() {
            g = g.gcd(&i);
            if g == 1 {
                return self.clone();
            }
        }
        if g <= 1 {
            return self.clone();
        }
        Self {
            denom: self.denom / g as u64,
            floor: self.floor / g,
            order: if self.order == EXACT { EXACT } else { self.order / g },
            coeffs: self.coeffs.iter().map(|(&i, c)| (i / g, c.clone())).collect(),
        }
    }

    /// Forgets every coefficient at index `>= order`.
    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        let mut coeffs = self.coeffs.clone();
        coeffs.retain(|&i, _| i < order);
        Self {
            denom: self.denom,
            floor: self.floor.min(order),
            order,
            coeffs,
        }
    }

    /// Truncates at the exponent `e`, i.e. keeps `q^x` for `x < e`.
    pub fn truncate_exponent(&self, e: Rational64) -> Self {
        let idx = (e * Rational64::from_integer(self.denom as i64)).ceil().to_integer();
        self.truncate(idx)
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        let d = lcm(self.denom, other.denom);
        Ok((self.rescale(d)?, other.rescale(d)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (mut a, b) = self.aligned(other)?;
        a.order = a.order.min(b.order);
        a.floor = a.floor.min(b.floor).min(a.order);
        for (i, c) in b.coeffs {
            *a.coeffs.entry(i).or_insert_with(BigRational::zero) += c;
        }
        let order = a.order;
        a.coeffs.retain(|&i, c| i < order && !c.is_zero());
        Ok(a)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        if c.is_zero() {
            out.coeffs.clear();
        } else {
            for v in out.coeffs.values_mut() {
                *v *= c;
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let order = sat_add(a.order, b.floor).min(sat_add(b.order, a.floor));
        let floor = sat_add(a.floor, b.floor).min(order);
        let mut coeffs: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (&i, x) in &a.coeffs {
            let limit = if order == EXACT { EXACT } else { order - i };
            for (&j, y) in b.coeffs.range(..limit) {
                *coeffs.entry(i + j).or_insert_with(BigRational::zero) += x * y;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Self {
            denom: a.denom,
            floor,
            order,
            coeffs,
        })
    }

    /// Product of a list of series; the empty product is the exact constant 1.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a QSeries>) -> Result<Self> {
        let mut acc = QSeries::constant(BigRational::one());
        for f in factors {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }

    /// `f(q) -> f(q^{p/s})` for a positive rational `p/s`.
    pub fn substitute(&self, p: u64, s: u64) -> Result<Self> {
        if p == 0 || s == 0 {
            return Err(invalid("substitution exponent must be a positive rational"));
        }
        let g = p.gcd(&s);
        let (p, s) = ((p / g) as i64, s / g);
        Ok(Self {
            denom: self.denom * s,
            floor: sat_mul(self.floor, p),
            order: sat_mul(self.order, p),
            coeffs: self.coeffs.iter().map(|(&i, c)| (i * p, c.clone())).collect(),
        }
        .reduced())
    }

    /// Multiplies by `q^{num/den}`.
    pub fn shift(&self, num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(invalid("shift denominator must be positive"));
        }
        let d = lcm(self.denom, den);
        let mut out = self.rescale(d)?;
        let s = num * (d / den) as i64;
        out.floor = sat_add(out.floor, s);
        out.order = sat_add(out.order, s);
        out.coeffs = out.coeffs.into_iter().map(|(i, c)| (i + s, c)).collect();
        Ok(out)
    }

    /// True when every non-zero index is a multiple of `D`, i.e. only integral
    /// powers of `q` occur.
    pub fn has_integral_exponents(&self) -> bool {
        self.coeffs.keys().all(|&i| i % self.denom as i64 == 0)
    }

    /// All non-zero coefficients are integers.
    pub fn has_integral_coeffs(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// Moves an integral-exponent series to `D = 1`. The caller asserts that
    /// no fractional exponents occur, so the order is read on the integers.
    pub fn to_integral_lattice(&self) -> Result<Self> {
        if !self.has_integral_exponents() {
            let bad = self.coeffs.keys().find(|&&i| i % self.denom as i64 != 0).copied().unwrap_or(0);
            return Err(Error::OutOfRange {
                index: bad,
                denominator: self.denom,
                reason: "non-integral exponent where q^n was required".into(),
            });
        }
        let g = self.denom as i64;
        Ok(Self {
            denom: 1,
            floor: ceil_div(self.floor, g),
            order: ceil_div(self.order, g),
            coeffs: self.coeffs.iter().map(|(&i, c)| (i / g, c.clone())).collect(),
        })
    }

    /// First index in the common known window where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Result<Option<(i64, u64)>> {
        let (a, b) = self.aligned(other)?;
        let order = a.order.min(b.order);
        let keys: std::collections::BTreeSet<i64> =
            a.coeffs.keys().chain(b.coeffs.keys()).copied().filter(|&i| i < order).collect();
        for i in keys {
            if a.coeffs.get(&i) != b.coeffs.get(&i) {
                return Ok(Some((i, a.denom)));
            }
        }
        Ok(None)
    }

    /// Adds `c` at index `i` (must be inside the known window).
    pub fn perturb(&mut self, i: i64, c: BigRational) -> Result<()> {
        if i >= self.order || i < self.floor {
            return Err(Error::OutOfRange {
                index: i,
                denominator: self.denom,
                reason: "perturbation outside the known window".into(),
            });
        }
        let e = self.coeffs.entry(i).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&i);
        }
        Ok(())
    }

    /// Coefficient at `q^n` as an integer, when integral.
    pub fn integer_coeff(&self, n: i64) -> Result<BigInt> {
        let c = self.coeff_at(n, 1)?;
        if !c.is_integer() {
            return Err(Error::Malformed(format!("coefficient at q^{n} is not an integer: {c}")));
        }
        Ok(c.to_integer())
    }

    /// Sum of absolute values of coefficients, as a float (diagnostics only).
    pub fn l1_norm(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs.values().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum()
    }
}

pub(crate) fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}
