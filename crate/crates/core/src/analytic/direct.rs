//! Direct summation of the defining theta series, with a certified tail.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{unit_root, NeumaierComplex};
use crate::error::{invalid, Error, Result};

/// Tail target for every Gaussian lattice sum.
pub(crate) const TAIL_TOL: f64 = 1e-17;
const MAX_TERMS: usize = 20_000_000;

/// A summed series with a bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectSum {
    pub value: Complex64,
    /// Bound on the sum of absolute values of omitted terms, relative to the
    /// term scale passed in (see [`lattice_sum`]).
    pub tail_bound: f64,
    pub terms: usize,
}

/// `sum_{nu = r (mod step)} term(nu)` where `|term(nu)| <= scale * exp(-a nu^2)`.
///
/// Walks outward from the class representative nearest zero and stops on each
/// side once `exp(-a nu^2) / (1 - exp(-2 a |nu| step))`, which bounds the rest
/// of that side, drops below `TAIL_TOL`.
pub(crate) fn lattice_sum(step: u64, r: i64, a: f64, scale: f64, mut term: impl FnMut(i64) -> Complex64) -> Result<DirectSum> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(invalid(format!("lattice sum needs positive Gaussian decay, got {a}")));
    }
    if step == 0 {
        return Err(invalid("lattice step must be positive"));
    }
    let s = step as i64;
    let mut nu0 = r.rem_euclid(s);
    if 2 * nu0 > s {
        nu0 -= s;
    }
    let bound = |nu: i64| -> f64 {
        let x = nu.unsigned_abs() as f64;
        if x == 0.0 {
            return f64::INFINITY;
        }
        (-a * x * x).exp() / (1.0 - (-2.0 * a * x * step as f64).exp())
    };
    let mut acc = NeumaierComplex::default();
    let mut terms = 0usize;
    let mut tail = 0.0;
    for dir in [1i64, -1] {
        let mut nu = if dir == 1 { nu0 } else { nu0 - s };
        loop {
            let b = bound(nu);
            // Only stop once moving away from zero.
            if nu * dir > 0 && b < TAIL_TOL {
                tail += b;
                break;
            }
            acc.add(term(nu));
            terms += 1;
            if terms > MAX_TERMS {
                return Err(Error::Truncation {
                    what: "Gaussian lattice sum".into(),
                    tail: b * scale,
                });
            }
            nu += dir * s;
        }
    }
    Ok(DirectSum {
        value: acc.total(),
        tail_bound: tail * scale,
        terms,
    })
}

fn check(m: u64, scale: f64, tau: Complex64) -> Result<()> {
    if m == 0 {
        return Err(invalid("modulus must be positive"));
    }
    if !(scale > 0.0) || !(tau.im > 0.0) || !tau.re.is_finite() {
        return Err(invalid(format!("need Im(scale * tau) > 0, got scale {scale}, tau {tau}")));
    }
    Ok(())
}

/// `theta(r, M; scale * tau) = sum_{nu = r (mod M)} exp(pi i scale tau nu^2 / M)`.
pub fn theta_eval_direct(r: i64, m: u64, scale: f64, tau: Complex64) -> Result<DirectSum> {
    check(m, scale, tau)?;
    let c = Complex64::i() * PI * scale * tau / m as f64;
    lattice_sum(m, r, -c.re, 1.0, |nu| (c * (nu * nu) as f64).exp())
}

/// `F_{r,M}(scale * tau) = sum_{nu = r (mod 2M)} sgn(nu) exp(pi i scale tau nu^2 / (2M))`.
pub fn false_theta_eval_direct(r: i64, m: u64, scale: f64, tau: Complex64) -> Result<DirectSum> {
    check(m, scale, tau)?;
    let c = Complex64::i() * PI * scale * tau / (2 * m) as f64;
    lattice_sum(2 * m, r, -c.re, 1.0, |nu| (c * (nu * nu) as f64).exp() * nu.signum() as f64)
}

fn check_cusp(m: u64, scale: u64, h: u64, k: u64, z: Complex64) -> Result<()> {
    if m == 0 || scale == 0 || k == 0 {
        return Err(invalid("modulus, scale and k must be positive"));
    }
    if h >= k {
        return Err(invalid("need 0 <= h < k"));
    }
    super::require_right_half_plane(z)
}

/// Phase `exp(2 pi i t nu^2 / p)` with `t nu^2` reduced exactly.
fn cusp_phase(t: u64, nu: i64, p: u64) -> Complex64 {
    let p128 = p as i128;
    let nu2 = (nu as i128 * nu as i128) % p128;
    unit_root(((t as i128 % p128) * nu2 % p128) as u64, p)
}

/// `theta(r, M; scale (h/k + i z/k))`, with the rational part of each phase
/// reduced in integer arithmetic.
pub fn theta_near_cusp(r: i64, m: u64, scale: u64, h: u64, k: u64, z: Complex64) -> Result<DirectSum> {
    check_cusp(m, scale, h, k, z)?;
    // exp(pi i s h nu^2 / (M k)) exp(-pi s nu^2 z / (M k))
    let p = 2 * m * k;
    let c = -PI * scale as f64 * z / (m * k) as f64;
    lattice_sum(m, r, -c.re, 1.0, |nu| cusp_phase(scale * h, nu, p) * (c * (nu * nu) as f64).exp())
}

/// `F_{r,M}(scale (h/k + i z/k))` with exact rational phases.
pub fn false_theta_near_cusp(r: i64, m: u64, scale: u64, h: u64, k: u64, z: Complex64) -> Result<DirectSum> {
    check_cusp(m, scale, h, k, z)?;
    let p = 4 * m * k;
    let c = -PI * scale as f64 * z / (2 * m * k) as f64;
    lattice_sum(2 * m, r, -c.re, 1.0, |nu| {
        cusp_phase(scale * h, nu, p) * (c * (nu * nu) as f64).exp() * nu.signum() as f64
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn false_theta_zero_residue_vanishes() {
        for m in 1..6 {
            let v = false_theta_eval_direct(0, m, 1.0, c(0.3, 0.05)).unwrap();
            assert!(v.value.norm() < 1e-12);
        }
    }

    #[test]
    fn false_theta_reflection() {
        let tau = c(0.17, 0.02);
        for m in 1..6u64 {
            for r in 1..(2 * m as i64) {
                let a = false_theta_eval_direct(r, m, 1.0, tau).unwrap().value;
                let b = false_theta_eval_direct(2 * m as i64 - r, m, 1.0, tau).unwrap().value;
                assert!((a + b).norm() < 1e-12, "r={r} M={m}");
            }
        }
    }

    #[test]
    fn certified_tail_matches_longer_cutoff() {
        let tau = c(0.1, 0.01);
        let v = theta_eval_direct(1, 3, 1.0, tau).unwrap();
        let mut brute = NeumaierComplex::default();
        for nu in (-3000i64..=3000).filter(|n| (n - 1).rem_euclid(3) == 0) {
            brute.add((Complex64::i() * PI * tau * (nu * nu) as f64 / 3.0).exp());
        }
        assert!((v.value - brute.total()).norm() < 1e-12);
        assert!(v.tail_bound < 1e-16);
    }

    #[test]
    fn jacobi_theta_at_i() {
        // theta(0, 1; i) = sum exp(-pi nu^2) = pi^{1/4} / Gamma(3/4).
        let v = theta_eval_direct(0, 1, 1.0, c(0.0, 1.0)).unwrap().value;
        let expect = PI.powf(0.25) / 1.225_416_702_465_177_6;
        assert!((v.re - expect).abs() < 1e-14 && v.im.abs() < 1e-15);
    }

    #[test]
    fn cusp_form_matches_general() {
        let z = c(0.05, -0.01);
        for (h, k) in [(0u64, 1u64), (1, 3), (2, 5), (3, 7)] {
            let tau = c(h as f64 / k as f64, 0.0) + Complex64::i() * z / k as f64;
            for s in [2u64, 4] {
                let a = theta_near_cusp(1, 4, s, h, k, z).unwrap().value;
                let b = theta_eval_direct(1, 4, s as f64, tau).unwrap().value;
                assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()), "{h}/{k}");
                let a = false_theta_near_cusp(3, 2, s, h, k, z).unwrap().value;
                let b = false_theta_eval_direct(3, 2, s as f64, tau).unwrap().value;
                assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()), "{h}/{k}");
            }
        }
    }

    #[test]
    fn rejects_non_convergent() {
        assert!(theta_eval_direct(0, 1, 1.0, c(0.2, 0.0)).is_err());
        assert!(false_theta_eval_direct(0, 1, 1.0, c(0.2, -1.0)).is_err());
        assert!(theta_near_cusp(0, 1, 2, 0, 1, c(-0.1, 0.0)).is_err());
    }
}
