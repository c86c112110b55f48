//! `sum*_{nu >= 0} sum_{+-} I(l +- 2Mk nu, k; z)` and its cotangent main term.
//!
//! The summand decays only like `1/nu^2` after pairing, so the terms with
//! `nu <= HEAD` are evaluated exactly and the rest through the large-`mu`
//! expansion of `I`, summed in closed form with the digamma and Hurwitz zeta
//! functions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::pv::pv_closed;
use crate::arith::NeumaierComplex;
use crate::error::{invalid, Result};

const HEAD: i64 = 8;
const TAIL_ORDERS: usize = 4;

/// Bernoulli numbers `B_2, B_4, ..., B_16`.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

const SHIFT_TO: f64 = 10.0;

/// The digamma function for real `a > 0`.
pub fn digamma(mut a: f64) -> f64 {
    assert!(a > 0.0, "digamma needs a positive argument");
    let mut acc = 0.0;
    while a < SHIFT_TO {
        acc -= 1.0 / a;
        a += 1.0;
    }
    let inv2 = 1.0 / (a * a);
    let mut p = inv2;
    let mut s = a.ln() - 0.5 / a;
    for (j, b) in BERNOULLI.iter().enumerate() {
        s -= b / (2 * (j + 1)) as f64 * p;
        p *= inv2;
    }
    acc + s
}

/// The Hurwitz zeta function `sum_{n >= 0} (n + a)^{-s}` for `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, mut a: f64) -> f64 {
    assert!(s > 1.0 && a > 0.0, "Hurwitz zeta needs s > 1 and a > 0");
    let mut acc = 0.0;
    while a < SHIFT_TO {
        acc += a.powf(-s);
        a += 1.0;
    }
    let mut total = a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // B_{2j} / (2j)! * s (s+1) ... (s+2j-2) * a^{-s-2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut pw = a.powf(-s - 1.0);
    for (j, b) in BERNOULLI.iter().enumerate() {
        total += b / fact * rising * pw;
        let m = 2 * j as u32 + 2;
        rising *= (s + m as f64 - 1.0) * (s + m as f64);
        fact *= ((m + 1) * (m + 2)) as f64;
        pw /= a * a;
    }
    acc + total
}

/// `1/x + sum_{n=1}^{terms} (1/(x+n) + 1/(x-n))`, which tends to `pi cot(pi x)`.
pub fn partial_fraction_cot(x: f64, terms: u64) -> f64 {
    let mut s = 1.0 / x;
    for n in 1..=terms {
        let n = n as f64;
        s += 1.0 / (x + n) + 1.0 / (x - n);
    }
    s
}

/// `-pi sqrt(alpha_j z / (M k)) cot(pi l / (2Mk))`.
pub fn cotangent_main_term(ell: i64, m: u64, alpha: u64, k: u64, z: Complex64) -> Complex64 {
    let p = (2 * m * k) as f64;
    let x = PI * ell as f64 / p;
    -PI * (z * alpha as f64 / (m * k) as f64).sqrt() * (x.cos() / x.sin())
}

/// Result of [`nu_sum`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuSum {
    pub ell: i64,
    pub value: Complex64,
    /// Contribution of `nu > 8`, from the asymptotic expansion.
    pub tail: Complex64,
    pub main_term: Complex64,
    /// `|value - main_term|`.
    pub distance: f64,
}

/// `sum*_{nu >= 0} sum_{+-} I(l +- 2Mk nu, k; z)` for `l` in `[1 - Mk, -1] u [1, Mk]`.
pub fn nu_sum(ell: i64, m: u64, alpha: u64, k: u64, z: Complex64) -> Result<NuSum> {
    if m == 0 || alpha == 0 || k == 0 {
        return Err(invalid("M, alpha_j and k must be positive"));
    }
    super::require_right_half_plane(z)?;
    let mk = (m * k) as i64;
    if ell == 0 || ell < 1 - mk || ell > mk {
        return Err(invalid(format!("l = {ell} lies outside [{}, -1] u [1, {mk}]", 1 - mk)));
    }
    let w = z * (4 * m * k * alpha) as f64;
    let p = 2 * mk;
    let mut acc = NeumaierComplex::default();
    acc.add(pv_closed(ell as f64, w));
    for nu in 1..=HEAD {
        acc.add(pv_closed((ell + p * nu) as f64, w));
        acc.add(pv_closed((ell - p * nu) as f64, w));
    }
    let tail = asymptotic_tail(ell as f64 / p as f64, p as f64, w);
    acc.add(tail);
    let value = acc.total();
    let main_term = cotangent_main_term(ell, m, alpha, k, z);
    Ok(NuSum {
        ell,
        value,
        tail,
        main_term,
        distance: (value - main_term).norm(),
    })
}

/// `sum_{nu > HEAD} sum_{+-} sum_n c_n / (l +- P nu)^{2n+1}` with
/// `c_n = -sqrt(w) (2n-1)!! (w / 2 pi)^n` and `x = l / P`.
fn asymptotic_tail(x: f64, p: f64, w: Complex64) -> Complex64 {
    let v1 = (HEAD + 1) as f64;
    let mut c = -w.sqrt();
    let mut total = Complex64::new(0.0, 0.0);
    for n in 0..TAIL_ORDERS {
        let s = (2 * n + 1) as f64;
        let lattice = if n == 0 {
            (digamma(v1 - x) - digamma(v1 + x)) / p
        } else {
            (hurwitz_zeta(s, v1 + x) - hurwitz_zeta(s, v1 - x)) / p.powf(s)
        };
        total += c * lattice;
        c *= w / (2.0 * PI) * s;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn special_functions() {
        assert!((digamma(1.0) + EULER_GAMMA).abs() < 1e-14);
        assert!((digamma(0.5) + EULER_GAMMA + 2.0 * 2f64.ln()).abs() < 1e-14);
        assert!((digamma(9.3) - digamma(8.3) - 1.0 / 8.3).abs() < 1e-14);
        assert!((hurwitz_zeta(2.0, 1.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((hurwitz_zeta(3.0, 1.0) - 1.202_056_903_159_594_2).abs() < 1e-14);
        let direct: f64 = (0..200_000).map(|n| (n as f64 + 8.7).powi(-5)).sum();
        assert!((hurwitz_zeta(5.0, 8.7) - direct).abs() < 1e-15);
    }

    #[test]
    fn partial_fractions_tend_to_cotangent() {
        for (m, k) in [(2u64, 3u64), (4, 5)] {
            let p = 2 * m * k;
            for ell in 1..=(m * k) as i64 {
                let x = ell as f64 / p as f64;
                let exact = PI / (PI * x).tan();
                let approx = partial_fraction_cot(x, 1_000_000);
                assert!((approx - exact).abs() < 1e-5, "x={x}");
            }
        }
    }

    #[test]
    fn cotangent_always_finite() {
        for (m, k) in [(1u64, 1u64), (2, 3), (4, 5), (7, 10)] {
            let mk = (m * k) as i64;
            for ell in (1 - mk)..=mk {
                if ell != 0 {
                    let c = cotangent_main_term(ell, m, 1, k, Complex64::new(0.1, 0.0));
                    assert!(c.re.is_finite() && c.im.is_finite());
                }
            }
        }
    }

    #[test]
    fn tail_matches_longer_head() {
        // Sum exactly to nu = 4000 and compare with the head + closed tail.
        let (m, alpha, k) = (2u64, 1u64, 3u64);
        let z = Complex64::new(0.05, -0.01);
        let w = z * (4 * m * k * alpha) as f64;
        let p = (2 * m * k) as i64;
        for ell in [1i64, -5, 6] {
            let s = nu_sum(ell, m, alpha, k, z).unwrap().value;
            let mut acc = NeumaierComplex::default();
            acc.add(pv_closed(ell as f64, w));
            let big = 4000;
            for nu in 1..=big {
                acc.add(pv_closed((ell + p * nu) as f64, w));
                acc.add(pv_closed((ell - p * nu) as f64, w));
            }
            // Leading remainder beyond `big`: -sqrt(w)/P (psi(big+1-x) - psi(big+1+x)) ~ 2x sqrt(w)/(P big).
            let x = ell as f64 / p as f64;
            acc.add(-w.sqrt() / p as f64 * (digamma(big as f64 + 1.0 - x) - digamma(big as f64 + 1.0 + x)));
            assert!((acc.total() - s).norm() < 1e-10, "l={ell}");
        }
    }

    #[test]
    fn distance_shrinks_with_ell() {
        let z = Complex64::new(0.05, -0.01);
        for (m, k) in [(2u64, 3u64), (4, 5)] {
            let mk = (m * k) as i64;
            let d: Vec<f64> = (1..=mk).map(|l| nu_sum(l, m, 1, k, z).unwrap().distance).collect();
            assert!(d[mk as usize - 1] < d[0]);
        }
    }

    #[test]
    fn rejects_outside_range() {
        let z = Complex64::new(0.1, 0.0);
        assert!(nu_sum(0, 2, 1, 3, z).is_err());
        assert!(nu_sum(7, 2, 1, 3, z).is_err());
        assert!(nu_sum(-6, 2, 1, 3, z).is_err());
        assert!(nu_sum(-5, 2, 1, 3, z).is_ok());
    }
}
