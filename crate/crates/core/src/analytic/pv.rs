//! The principal-value integral
//! `I(mu, k; z) = lim_{eps -> 0+} int_R exp(-pi x^2 / w) / (x - (1 + i eps) mu) dx`,
//! `w = 4 M k alpha_j z`.
//!
//! Writing `g(x) = exp(-pi x^2 / w)`, the limit is the principal value plus
//! `i pi sgn(mu) g(mu)`. In terms of the Faddeeva function this is
//! `sgn(mu) i pi w_F(|mu| sqrt(pi / w))`, which is the fast route used inside
//! the sums over `nu`; the quadrature routes exist to check it.

use std::f64::consts::PI;

use errorfunctions::ComplexErrorFunctions;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quad::{integrate, QuadConfig};

/// Parameters of a single `I(mu, k; z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PVIntegralParams {
    pub mu: i64,
    pub m: u64,
    pub alpha: u64,
    pub k: u64,
    pub z: Complex64,
    /// Splitting parameter of the decomposition route.
    pub delta: f64,
}

impl PVIntegralParams {
    /// Parameters with the default splitting `delta = |mu| / 4`.
    pub fn new(mu: i64, m: u64, alpha: u64, k: u64, z: Complex64) -> Self {
        Self {
            mu,
            m,
            alpha,
            k,
            z,
            delta: mu.unsigned_abs() as f64 / 4.0,
        }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        Self { delta, ..self }
    }

    /// `w = 4 M k alpha_j z`.
    pub fn w(&self) -> Complex64 {
        self.z * (4 * self.m * self.k * self.alpha) as f64
    }

    /// `A = pi mu^2 / (4 M k alpha_j |z|)`.
    pub fn a_param(&self) -> f64 {
        PI * (self.mu as f64).powi(2) / ((4 * self.m * self.k * self.alpha) as f64 * self.z.norm())
    }

    fn validate(&self) -> Result<()> {
        if self.mu == 0 {
            return Err(invalid("mu must be nonzero"));
        }
        if self.m == 0 || self.alpha == 0 || self.k == 0 {
            return Err(invalid("M, alpha_j and k must be positive"));
        }
        super::require_right_half_plane(self.z)
    }
}

/// Evaluation route for [`pv_integral_route`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PvRoute {
    /// Faddeeva closed form.
    ClosedForm,
    /// Residue plus symmetric middle integral plus two tails, split at `delta`.
    Decomposition,
    /// `int_0^R (g(mu + t) - g(mu - t)) / t dt` plus the residue term.
    DirectQuadrature,
    /// The first `terms` terms of the large-`mu` expansion.
    Asymptotic { terms: usize },
}

/// `I(mu, k; z)` by the decomposition route.
pub fn pv_integral(p: &PVIntegralParams) -> Result<Complex64> {
    pv_integral_route(p, PvRoute::Decomposition)
}

pub fn pv_integral_route(p: &PVIntegralParams, route: PvRoute) -> Result<Complex64> {
    p.validate()?;
    let w = p.w();
    let mu = p.mu as f64;
    match route {
        PvRoute::ClosedForm => Ok(pv_closed(mu, w)),
        PvRoute::Asymptotic { terms } => Ok(pv_asymptotic(mu, w, terms)),
        PvRoute::Decomposition => {
            if !(p.delta > 0.0 && p.delta < mu.abs() / 2.0) {
                return Err(invalid(format!("need 0 < delta < |mu|/2, got delta = {}", p.delta)));
            }
            decomposition(mu, w, p.delta)
        }
        PvRoute::DirectQuadrature => direct(mu, w),
    }
}

pub(crate) fn pv_closed(mu: f64, w: Complex64) -> Complex64 {
    let zeta = (Complex64::new(PI, 0.0) / w).sqrt() * mu.abs();
    Complex64::new(0.0, PI * mu.signum()) * zeta.w()
}

/// `-sqrt(w) sum_{n < terms} (2n-1)!! (w / 2 pi)^n / mu^{2n+1}`.
pub(crate) fn pv_asymptotic(mu: f64, w: Complex64, terms: usize) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    let mut t = -w.sqrt() / mu;
    let ratio = w / (2.0 * PI * mu * mu);
    for n in 0..terms {
        total += t;
        t *= ratio * (2 * n + 1) as f64;
    }
    total
}

fn cfg() -> QuadConfig {
    QuadConfig::with_tol(1e-15, 1e-12)
}

/// `exp(x) - 1` without cancellation for small `x`.
fn cexpm1(x: Complex64) -> Complex64 {
    let ea = x.re.exp();
    let s = (x.im / 2.0).sin();
    Complex64::new(x.re.exp_m1() - 2.0 * ea * s * s, ea * x.im.sin())
}

/// Beyond `|mu| + reach`, both shifted Gaussians are below `e^{-42}`.
fn reach(w: Complex64) -> f64 {
    (42.0 / (PI * w.inv().re)).sqrt()
}

fn residue(mu: f64, w: Complex64) -> Complex64 {
    Complex64::new(0.0, PI * mu.signum()) * (-PI * mu * mu / w).exp()
}

fn decomposition(mu: f64, w: Complex64, delta: f64) -> Result<Complex64> {
    let a = mu.abs();
    let inv_w = w.inv();
    let g_mu = (-PI * mu * mu * inv_w).exp();
    // (g(mu + t) - g(mu)) / t = g(mu) expm1(-pi (2 mu t + t^2) / w) / t
    let middle_f = |t: f64| {
        let e = -PI * (2.0 * mu * t + t * t) * inv_w;
        if e.norm() < 1.0 {
            g_mu * cexpm1(e) / t
        } else {
            ((-PI * (mu + t).powi(2) * inv_w).exp() - g_mu) / t
        }
    };
    let left = integrate(middle_f, -delta, 0.0, cfg(), "PV middle term")?;
    let right = integrate(middle_f, 0.0, delta, cfg(), "PV middle term")?;
    let tail_f = |x: f64| ((-PI * (x + a).powi(2) * inv_w).exp() - (-PI * (x - a).powi(2) * inv_w).exp()) / x;
    let upper = a + reach(w);
    let t1 = integrate(tail_f, delta, a, cfg(), "PV tail")?;
    let t2 = integrate(tail_f, a, upper, cfg(), "PV tail")?;
    Ok(residue(mu, w) + left.value + right.value + (t1.value + t2.value) * mu.signum())
}

fn direct(mu: f64, w: Complex64) -> Result<Complex64> {
    let a = mu.abs();
    let inv_w = w.inv();
    let g_mu = (-PI * mu * mu * inv_w).exp();
    let f = |t: f64| {
        let s = 2.0 * PI * mu * t * inv_w;
        if s.norm() < 1.0 {
            -2.0 * g_mu * (-PI * t * t * inv_w).exp() * s.sinh() / t
        } else {
            ((-PI * (mu + t).powi(2) * inv_w).exp() - (-PI * (mu - t).powi(2) * inv_w).exp()) / t
        }
    };
    let upper = a + reach(w);
    let mut total = residue(mu, w);
    for (lo, hi) in [(0.0, a / 2.0), (a / 2.0, a), (a, upper)] {
        total += integrate(f, lo, hi, cfg(), "direct PV quadrature")?.value;
    }
    Ok(total)
}
