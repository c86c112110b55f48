//! Numerical evaluation of theta and false theta functions near rational
//! points, the principal-value integral `I(mu, k; z)`, the auxiliary
//! integrals `J_{d,+-}` and the sum over `nu` of `I` that produces the
//! cotangent main term.

mod direct;
mod grid;
mod jint;
mod nusum;
mod pv;
mod transform;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use grid::{grid_points, transformation_grid, transformation_grid_points, GridConfig, GridPoint, GridReport, GridTarget};
pub use direct::{false_theta_eval_direct, false_theta_near_cusp, theta_eval_direct, theta_near_cusp, DirectSum};
pub use jint::{
    j_integral, j_recursion_residual, j_trivial_bound, j0_main_term_check, j1_main_term_check, MainTermCheck, Sign,
};
pub use nusum::{cotangent_main_term, digamma, hurwitz_zeta, nu_sum, partial_fraction_cot, NuSum};
pub use pv::{pv_integral, pv_integral_route, PVIntegralParams, PvRoute};
pub use transform::{false_theta_eval_transformed, theta_eval_transformed, FalseThetaParts, GaussTable};

/// A point `tau = h/k + i z / k` on the Farey arc at `h/k` of order `N`, with
/// `z = k (1/N^2 - i Phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcPoint {
    pub h: u64,
    pub k: u64,
    pub order: u64,
    pub phi: f64,
}

/// The three inequalities every arc point satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcInvariants {
    /// `k |z|`, at most `sqrt 2`.
    pub k_abs_z: f64,
    /// `k^2 / N^2`, at most `k |z|`.
    pub k2_over_n2: f64,
    /// `sqrt(Re(1/z) / k)`, at least `1/sqrt 2`.
    pub sqrt_re_inv_z_over_k: f64,
}

impl ArcInvariants {
    pub fn hold(&self) -> bool {
        let eps = 1e-12;
        self.k_abs_z <= 2f64.sqrt() + eps
            && self.k2_over_n2 <= self.k_abs_z + eps
            && self.sqrt_re_inv_z_over_k >= 1.0 / 2f64.sqrt() - eps
    }
}

impl ArcPoint {
    pub fn new(h: u64, k: u64, order: u64, phi: f64) -> Result<Self> {
        if k == 0 || h >= k || h.gcd(&k) != 1 {
            return Err(invalid(format!("{h}/{k} is not a reduced fraction in [0, 1)")));
        }
        if k > order {
            return Err(invalid(format!("denominator {k} exceeds the order {order}")));
        }
        if !phi.is_finite() || phi.abs() >= 1.0 / (k * order) as f64 {
            return Err(invalid(format!("|Phi| = {} is not below 1/(kN)", phi.abs())));
        }
        Ok(Self { h, k, order, phi })
    }

    pub fn z(&self) -> Complex64 {
        let n2 = (self.order * self.order) as f64;
        Complex64::new(1.0 / n2, -self.phi) * self.k as f64
    }

    pub fn tau(&self) -> Complex64 {
        let n2 = (self.order * self.order) as f64;
        Complex64::new(self.h as f64 / self.k as f64 + self.phi, 1.0 / n2)
    }

    pub fn invariants(&self) -> ArcInvariants {
        let z = self.z();
        let k = self.k as f64;
        let n = self.order as f64;
        ArcInvariants {
            k_abs_z: k * z.norm(),
            k2_over_n2: k * k / (n * n),
            sqrt_re_inv_z_over_k: (z.inv().re / k).sqrt(),
        }
    }
}

/// Principal square root; for `Re z > 0` the argument lies in `(-pi/4, pi/4)`.
pub(crate) fn principal_sqrt(z: Complex64) -> Complex64 {
    z.sqrt()
}

pub(crate) fn require_right_half_plane(z: Complex64) -> Result<()> {
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(invalid(format!("need Re z > 0, got z = {z}")));
    }
    Ok(())
}
