//! Farey sequences in `[0, 1)`, their neighbour structure and the arcs of the
//! Farey dissection.
//!
//! The sequence wraps around: `(N-1)/N` is adjacent to `0/1`, so `0/1` has
//! left neighbour `-1/N` and `(N-1)/N` has right neighbour `1/1`.

use std::collections::HashMap;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// All reduced `h/k` in `[0, 1)` with `k <= N`, increasing.
pub fn farey_sequence(n: u64) -> Result<Vec<(u64, u64)>> {
    if n == 0 {
        return Err(invalid("Farey order must be at least 1"));
    }
    let mut out = vec![(0, 1)];
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, n);
    while c < d {
        out.push((c, d));
        let k = (n + b) / d;
        let (e, f) = (k * c - a, k * d - b);
        (a, b, c, d) = (c, d, e, f);
    }
    Ok(out)
}

/// One arc of the dissection of order `N`, centred at `h/k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FareyArc {
    pub h: u64,
    pub k: u64,
    /// Left neighbour `h1/k1`; `h1 = -1` for the arc at `0/1`.
    pub h1: i64,
    pub k1: u64,
    pub h2: u64,
    pub k2: u64,
    pub order: u64,
    /// `1/(k(k+k1))`.
    pub theta_left: Rational64,
    /// `1/(k(k+k2))`.
    pub theta_right: Rational64,
    /// `k + k1 - N`.
    pub rho1: u64,
    /// `k + k2 - N`.
    pub rho2: u64,
}

impl FareyArc {
    /// Total `Phi`-measure of the arc.
    pub fn measure(&self) -> Rational64 {
        self.theta_left + self.theta_right
    }

    /// `h k1 - h1 k` and `h2 k - h k2`; both are 1 for adjacent fractions.
    pub fn determinants(&self) -> (i64, i64) {
        (
            self.h as i64 * self.k1 as i64 - self.h1 * self.k as i64,
            self.h2 as i64 * self.k as i64 - self.h as i64 * self.k2 as i64,
        )
    }
}

/// The arcs of order `N`, in Farey order.
pub fn arcs(n: u64) -> Result<Vec<FareyArc>> {
    let seq = farey_sequence(n)?;
    let len = seq.len();
    let mut out = Vec::with_capacity(len);
    for (i, &(h, k)) in seq.iter().enumerate() {
        let (h1, k1) = if i == 0 {
            let (hl, kl) = seq[len - 1];
            (hl as i64 - kl as i64, kl)
        } else {
            let (hl, kl) = seq[i - 1];
            (hl as i64, kl)
        };
        let (h2, k2) = if i + 1 == len { (1, 1) } else { seq[i + 1] };
        let kk = k as i64;
        out.push(FareyArc {
            h,
            k,
            h1,
            k1,
            h2,
            k2,
            order: n,
            theta_left: Rational64::new(1, kk * (kk + k1 as i64)),
            theta_right: Rational64::new(1, kk * (kk + k2 as i64)),
            rho1: k + k1 - n,
            rho2: k + k2 - n,
        });
    }
    Ok(out)
}

/// Arcs sorted by `(k, h)`; the canonical summation order for contour sums.
pub fn arcs_by_denominator(n: u64) -> Result<Vec<FareyArc>> {
    let mut a = arcs(n)?;
    a.sort_by_key(|arc| (arc.k, arc.h));
    Ok(a)
}

/// The unique `rho` in `(0, k]` with `h (N + rho) = sign (mod k)`, `sign = +-1`.
pub fn rho_congruence_signed(h: u64, k: u64, n: u64, sign: i64) -> Result<u64> {
    if k == 0 || h >= k {
        return Err(invalid("need 0 <= h < k"));
    }
    if h.gcd(&k) != 1 {
        return Err(invalid(format!("gcd({h}, {k}) != 1")));
    }
    if sign != 1 && sign != -1 {
        return Err(invalid("sign must be +1 or -1"));
    }
    if k == 1 {
        return Ok(1);
    }
    let ki = k as i64;
    let inv = (h as i64).extended_gcd(&ki).x.rem_euclid(ki);
    let target = (sign * inv).rem_euclid(ki);
    let rho = (target - n as i64).rem_euclid(ki);
    Ok(if rho == 0 { k } else { rho as u64 })
}

/// `rho(h)`: the unique value in `(0, k]` with `h (N + rho(h)) = -1 (mod k)`.
pub fn rho_congruence(h: u64, k: u64, n: u64) -> Result<u64> {
    rho_congruence_signed(h, k, n, -1)
}

/// Outcome of the exhaustive comparison of `rho(h)` with the neighbour-based values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoComparison {
    pub arcs_checked: u64,
    /// Arcs where `rho(h) != rho_{k,1}(h)`.
    pub literal_failures: u64,
    /// First failing arc as `(N, h, k, rho, rho_{k,1})`.
    pub first_literal_failure: Option<(u64, u64, u64, u64, u64)>,
    /// Arcs where the `-1` congruence disagrees with `rho_{k,2}(h)`.
    pub minus_vs_rho2_failures: u64,
    /// Arcs where the `+1` congruence disagrees with `rho_{k,1}(h)`.
    pub plus_vs_rho1_failures: u64,
}

/// Compares the congruence-defined `rho(h)` against `rho_{k,1}` and `rho_{k,2}`
/// for every arc of every order up to `n_max`.
pub fn compare_rho(n_max: u64) -> Result<RhoComparison> {
    let mut out = RhoComparison {
        arcs_checked: 0,
        literal_failures: 0,
        first_literal_failure: None,
        minus_vs_rho2_failures: 0,
        plus_vs_rho1_failures: 0,
    };
    for n in 1..=n_max {
        for arc in arcs(n)? {
            out.arcs_checked += 1;
            let minus = rho_congruence(arc.h, arc.k, n)?;
            let plus = rho_congruence_signed(arc.h, arc.k, n, 1)?;
            if minus != arc.rho1 {
                out.literal_failures += 1;
                out.first_literal_failure.get_or_insert((n, arc.h, arc.k, minus, arc.rho1));
            }
            out.minus_vs_rho2_failures += (minus != arc.rho2) as u64;
            out.plus_vs_rho1_failures += (plus != arc.rho1) as u64;
        }
    }
    Ok(out)
}

/// First arc `(N, h, k)` with `N <= n_max` where the reflection
/// `rho_{k,2}(h) = rho_{k,1}(k - h)` fails, if any.
pub fn reflection_failure(n_max: u64) -> Result<Option<(u64, u64, u64)>> {
    for n in 1..=n_max {
        let a = arcs(n)?;
        let rho1: HashMap<(u64, u64), u64> = a.iter().map(|arc| ((arc.h, arc.k), arc.rho1)).collect();
        for arc in &a {
            let mirror = (arc.k - arc.h) % arc.k;
            if rho1.get(&(mirror, arc.k)) != Some(&arc.rho2) {
                return Ok(Some((n, arc.h, arc.k)));
            }
        }
    }
    Ok(None)
}
