//! Exact `h`-sums of Gauss-sum products, logged against the shape
//! `k^{2 + 7/8} gcd(n, k)^{1/4}` of Kloosterman's bound.

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{gauss_sum, unit_root, NeumaierComplex};
use crate::error::{invalid, Result};
use crate::farey::rho_congruence;

/// `sum_{0 <= h < k, gcd(h,k) = 1, rho(h) <= rho} e^{-2 pi i n h/k} prod_j G(2M alpha_j h, nu_j; k)`,
/// where `rho(h)` solves `h (N + rho(h)) = -1 (mod k)`.
pub fn kloosterman_h_sum(m: u64, alpha: [u64; 4], n: i64, order: u64, k: u64, rho: u64, nu: [i64; 4]) -> Result<Complex64> {
    if k == 0 || k > order {
        return Err(invalid("need 0 < k <= N"));
    }
    let mut acc = NeumaierComplex::default();
    for h in 0..k {
        if h.gcd(&k) != 1 || rho_congruence(h, k, order)? > rho {
            continue;
        }
        let t = (-(n as i128) * h as i128).rem_euclid(k as i128) as u64;
        let mut v = unit_root(t, k);
        for (a, b) in alpha.iter().zip(nu) {
            v *= gauss_sum(2 * (m * a * h) as i64, b, k)?;
        }
        acc.add(v);
    }
    Ok(acc.total())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KloostermanRecord {
    pub k: u64,
    pub rho: u64,
    pub nu: [i64; 4],
    pub magnitude: f64,
    /// `magnitude / (k^{23/8} gcd(n, k)^{1/4})`.
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KloostermanProfile {
    pub records: Vec<KloostermanRecord>,
    /// Largest normalised magnitude; the empirical constant of the bound.
    pub fitted_constant: f64,
}

/// Every `k <= N`, every `0 < rho < k` and every `nu` in `nus`.
pub fn kloosterman_profile(m: u64, alpha: [u64; 4], n: i64, order: u64, nus: &[[i64; 4]]) -> Result<KloostermanProfile> {
    let mut records = Vec::new();
    for k in 1..=order {
        let g = (n.unsigned_abs().gcd(&k)).max(1) as f64;
        let shape = (k as f64).powf(23.0 / 8.0) * g.powf(0.25);
        for rho in 1..k.max(2) {
            for &nu in nus {
                let magnitude = kloosterman_h_sum(m, alpha, n, order, k, rho, nu)?.norm();
                records.push(KloostermanRecord {
                    k,
                    rho,
                    nu,
                    magnitude,
                    normalized: magnitude / shape,
                });
            }
        }
    }
    let fitted_constant = records.iter().map(|r| r.normalized).fold(0.0, f64::max);
    Ok(KloostermanProfile { records, fitted_constant })
}
