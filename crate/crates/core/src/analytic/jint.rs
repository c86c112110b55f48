//! The auxiliary integrals
//! `J_{d,+-} = C_d (z / (2A|z|))^{d-1} int_{1/2}^inf x^{-d} exp(-A (|z|/z) (x +- 1)^2) dx`
//! with `C_0 = 1` and `C_d = (d-1)!`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quad::{integrate, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

fn c_d(d: u32) -> f64 {
    (1..d).map(f64::from).product()
}

fn check(a: f64, z: Complex64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(invalid(format!("A must be positive, got {a}")));
    }
    super::require_right_half_plane(z)
}

/// `B = A |z| / z`.
fn b_param(a: f64, z: Complex64) -> Complex64 {
    a * z.norm() / z
}

/// `kappa = A |z| Re(1/z) = Re B`.
fn kappa(a: f64, z: Complex64) -> f64 {
    a * z.norm() * z.inv().re
}

/// `J_{d,+-}` by adaptive quadrature.
pub fn j_integral(d: u32, sign: Sign, a: f64, z: Complex64) -> Result<Complex64> {
    check(a, z)?;
    if d > 40 {
        return Err(invalid("d above 40 is not supported"));
    }
    let b = b_param(a, z);
    let s = sign.value();
    let upper = 1.0 + (45.0 / kappa(a, z)).sqrt();
    let f = |x: f64| (-b * (x + s).powi(2)).exp() * x.powi(-(d as i32));
    let cfg = QuadConfig::with_tol(1e-300, 1e-13);
    let mut total = Complex64::new(0.0, 0.0);
    for (lo, hi) in [(0.5, 1.0), (1.0, upper)] {
        total += integrate(f, lo, hi, cfg, "J integral")?.value;
    }
    let pref = (2.0 * b).inv().powi(d as i32 - 1) * c_d(d);
    Ok(pref * total)
}

/// Trivial bound `2 sqrt(pi) C_d A^{1/2 - d} / sqrt(|z| Re(1/z))`.
pub fn j_trivial_bound(d: u32, a: f64, z: Complex64) -> f64 {
    2.0 * PI.sqrt() * c_d(d) * a.powf(0.5 - d as f64) / (z.norm() * z.inv().re).sqrt()
}

/// `|J_d - rhs| / scale` for the integration-by-parts recursion
/// `J_{d,+-} = -+( -(d-1)! (z/(A|z|))^d e^{-(A|z|/z)(1/2 +- 1)^2} + J_{d+1,+-}
/// + max(d-1, 1) (z/(2A|z|)) J_{d-1,+-} )`, `d >= 1`, where `scale` is the
/// largest magnitude among the four terms.
pub fn j_recursion_residual(d: u32, sign: Sign, a: f64, z: Complex64) -> Result<f64> {
    if d == 0 {
        return Err(invalid("the recursion needs d >= 1"));
    }
    check(a, z)?;
    let b = b_param(a, z);
    let s = sign.value();
    let boundary = -c_d(d) * b.inv().powi(d as i32) * (-b * (0.5 + s).powi(2)).exp();
    let up = j_integral(d + 1, sign, a, z)?;
    let down = (d - 1).max(1) as f64 * (2.0 * b).inv() * j_integral(d - 1, sign, a, z)?;
    let lhs = j_integral(d, sign, a, z)?;
    let rhs = -s * (boundary + up + down);
    let scale = [lhs.norm(), boundary.norm(), up.norm(), down.norm()]
        .into_iter()
        .fold(0.0, f64::max);
    Ok((lhs - rhs).norm() / scale)
}

/// A closed main term compared with the quadrature value of `J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainTermCheck {
    pub a: f64,
    pub value: Complex64,
    pub main: Complex64,
    pub remainder: f64,
    pub envelope: f64,
    /// Relative accuracy of the quadrature value, `|value| * 1e-12`. Once the
    /// envelope falls below it the comparison only sees rounding.
    pub numerical_floor: f64,
}

impl MainTermCheck {
    pub fn holds(&self) -> bool {
        self.remainder <= self.envelope + self.numerical_floor
    }
}

const QUAD_REL: f64 = 1e-12;

/// `J_{0,+-}` against `2 [- sign] sqrt(pi A |z| / z)`. The remainder is
/// `2B int_{1/2}^inf e^{-B x^2} dx` (shifted to `3/2` for the plus sign), so
/// `sqrt(pi) A e^{-kappa/4} / sqrt(kappa)` bounds it, `kappa = A |z| Re(1/z)`.
pub fn j0_main_term_check(sign: Sign, a: f64, z: Complex64) -> Result<MainTermCheck> {
    let value = j_integral(0, sign, a, z)?;
    let b = b_param(a, z);
    let main = match sign {
        Sign::Minus => 2.0 * (PI * b).sqrt(),
        Sign::Plus => Complex64::new(0.0, 0.0),
    };
    let k = kappa(a, z);
    Ok(MainTermCheck {
        a,
        value,
        main,
        remainder: (value - main).norm(),
        envelope: PI.sqrt() * a * (-k / 4.0).exp() / k.sqrt(),
        numerical_floor: QUAD_REL * value.norm(),
    })
}

/// `J_{1,+-}` against `[- sign] sqrt(pi z / (A |z|))`, with envelope
/// `2 (A^{-3/2} + e^{-kappa/4})`.
pub fn j1_main_term_check(sign: Sign, a: f64, z: Complex64) -> Result<MainTermCheck> {
    let value = j_integral(1, sign, a, z)?;
    let b = b_param(a, z);
    let main = match sign {
        Sign::Minus => (PI / b).sqrt(),
        Sign::Plus => Complex64::new(0.0, 0.0),
    };
    let k = kappa(a, z);
    Ok(MainTermCheck {
        a,
        value,
        main,
        remainder: (value - main).norm(),
        envelope: 2.0 * (a.powf(-1.5) + (-k / 4.0).exp()),
        numerical_floor: QUAD_REL * value.norm(),
    })
}
