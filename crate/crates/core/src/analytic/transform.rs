//! Evaluation of `theta(r, 2M; 2 alpha_j (h/k + iz/k))` and
//! `F_{r,M}(2 alpha_j (h/k + iz/k))` through their modular transformations,
//! which converge fast when `z` is small.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::direct::{lattice_sum, DirectSum};
use super::nusum::nu_sum;
use super::principal_sqrt;
use crate::arith::{gauss_sum, unit_root, NeumaierComplex};
use crate::error::{invalid, Result};

/// `G(a, b; k)` for every residue `b` modulo `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussTable {
    k: u64,
    values: Vec<Complex64>,
}

impl GaussTable {
    pub fn new(a: i64, k: u64) -> Result<Self> {
        let values = (0..k as i64).map(|b| gauss_sum(a, b, k)).collect::<Result<Vec<_>>>()?;
        Ok(Self { k, values })
    }

    pub fn get(&self, b: i64) -> Complex64 {
        self.values[b.rem_euclid(self.k as i64) as usize]
    }
}

struct Setup {
    /// `2Mk`, the modulus of every rational phase.
    p: u64,
    prefactor: Complex64,
    /// `pi / (4 M k alpha_j z)`.
    decay: Complex64,
    gauss: GaussTable,
    /// `2 r alpha_j h`, the constant part of the Gauss sum argument.
    shift: i64,
}

fn setup(r: i64, m: u64, alpha: u64, h: u64, k: u64, z: Complex64) -> Result<Setup> {
    if m == 0 || alpha == 0 || k == 0 {
        return Err(invalid("M, alpha_j and k must be positive"));
    }
    if h >= k || h.gcd(&k) != 1 {
        return Err(invalid(format!("{h}/{k} is not reduced in [0, 1)")));
    }
    super::require_right_half_plane(z)?;
    let p = 2 * m * k;
    let pi = p as i128;
    let phase = ((alpha as i128 * h as i128 % pi) * ((r as i128 * r as i128).rem_euclid(pi))).rem_euclid(pi);
    let mka = (m * k * alpha) as f64;
    Ok(Setup {
        p,
        prefactor: unit_root(phase as u64, p) / (2.0 * principal_sqrt(z * mka)),
        decay: PI / (4.0 * mka * z),
        gauss: GaussTable::new(2 * (m * alpha * h) as i64, k)?,
        shift: 2 * r * (alpha * h) as i64,
    })
}

fn signed_theta_sum(s: &Setup, r: i64, signed: bool) -> Result<DirectSum> {
    let p = s.p as i64;
    lattice_sum(1, 0, s.decay.re, s.prefactor.norm() * s.gauss.get(0).norm().max(1.0) * 2.0, |nu| {
        let w = if signed { nu.signum() as f64 } else { 1.0 };
        let phase = unit_root((r * nu).rem_euclid(p) as u64, s.p);
        (-s.decay * (nu * nu) as f64).exp() * phase * s.gauss.get(s.shift + nu) * w
    })
    .map(|d| DirectSum {
        value: d.value * s.prefactor,
        ..d
    })
}

/// `theta(r, 2M; 2 alpha_j (h/k + iz/k))` from the transformed series
/// `e^{pi i alpha h r^2/(Mk)} / (2 sqrt(Mk alpha z)) sum_nu e^{-pi nu^2/(4Mk alpha z) + pi i r nu/(Mk)} G(2M alpha h, 2r alpha h + nu; k)`.
pub fn theta_eval_transformed(r: i64, m: u64, alpha: u64, h: u64, k: u64, z: Complex64) -> Result<DirectSum> {
    let s = setup(r, m, alpha, h, k, z)?;
    signed_theta_sum(&s, r, false)
}

/// The two parts of the transformed false theta function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FalseThetaParts {
    /// Signed Gauss-sum theta term.
    pub theta_part: Complex64,
    /// The principal-value integral term.
    pub integral_part: Complex64,
    /// The integral term with every `nu`-sum replaced by its cotangent main term.
    pub integral_main: Complex64,
    pub tail_bound: f64,
}

impl FalseThetaParts {
    pub fn value(&self) -> Complex64 {
        self.theta_part + self.integral_part
    }
}

/// `F_{r,M}(2 alpha_j (h/k + iz/k))` from the transformed expression: the
/// signed analogue of the theta transformation plus
/// `i e^{pi i alpha h r^2/(Mk)} / (2 pi sqrt(Mk alpha z)) sum_{l} e^{pi i r l/(Mk)}
/// G(2M alpha h, 2 alpha h r + l; k) sum*_{nu} sum_{+-} I(l +- 2Mk nu, k; z)`.
pub fn false_theta_eval_transformed(r: i64, m: u64, alpha: u64, h: u64, k: u64, z: Complex64) -> Result<FalseThetaParts> {
    transformed_false(r, m, alpha, h, k, z, true)
}

/// As [`false_theta_eval_transformed`], but with the Gauss sum argument
/// `2 alpha h + l` in the integral term, i.e. without the factor `r`.
#[cfg(test)]
pub(crate) fn false_theta_eval_transformed_without_r(
    r: i64,
    m: u64,
    alpha: u64,
    h: u64,
    k: u64,
    z: Complex64,
) -> Result<FalseThetaParts> {
    transformed_false(r, m, alpha, h, k, z, false)
}

fn transformed_false(r: i64, m: u64, alpha: u64, h: u64, k: u64, z: Complex64, with_r: bool) -> Result<FalseThetaParts> {
    let s = setup(r, m, alpha, h, k, z)?;
    let first = signed_theta_sum(&s, r, true)?;
    let mk = (m * k) as i64;
    let p = s.p as i64;
    let shift = if with_r { s.shift } else { 2 * (alpha * h) as i64 };
    let mut acc = NeumaierComplex::default();
    let mut acc_main = NeumaierComplex::default();
    for ell in (1 - mk)..=mk {
        if ell == 0 {
            continue;
        }
        let g = s.gauss.get(shift + ell);
        if g.norm() < 1e-12 {
            continue;
        }
        let weight = unit_root((r * ell).rem_euclid(p) as u64, s.p) * g;
        let ns = nu_sum(ell, m, alpha, k, z)?;
        acc.add(weight * ns.value);
        acc_main.add(weight * ns.main_term);
    }
    let outer = Complex64::i() * s.prefactor / PI;
    Ok(FalseThetaParts {
        theta_part: first.value,
        integral_part: outer * acc.total(),
        integral_main: outer * acc_main.total(),
        tail_bound: first.tail_bound,
    })
}
