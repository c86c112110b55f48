//! Coefficients of `F_{r,M,alpha,J}` recovered by integrating over the Farey
//! arcs of the circle of radius `e^{-2 pi / N^2}`, together with the
//! diagnostics of the `nu`-decomposition of that integral.

mod fit;
mod inu;
mod kloosterman;

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    false_theta_eval_transformed, false_theta_near_cusp, theta_eval_transformed, theta_near_cusp, ArcPoint,
};
use crate::arith::{isqrt, unit_root, NeumaierComplex};
use crate::error::{invalid, Error, Result};
use crate::farey::arcs_by_denominator;
use crate::quad::{integrate, QuadConfig};
use crate::series::{QSeries, Subset};

pub use fit::{error_exponent_fit, ExponentFit, FitOutcome};
pub use inu::{i_nu_diagnostic, i_nu_reconstruction, IFactorKind, INuReport, Reconstruction, TransformTerm};
pub use kloosterman::{kloosterman_h_sum, kloosterman_profile, KloostermanProfile, KloostermanRecord};

/// How the integrand is evaluated on each arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMode {
    /// Direct summation of the defining theta series.
    DirectSeries,
    /// The modular transformations of each factor.
    Transformed,
}

impl std::str::FromStr for EvalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" | "direct-series" => Ok(EvalMode::DirectSeries),
            "transformed" => Ok(EvalMode::Transformed),
            _ => Err(invalid(format!("unknown evaluation mode {s:?}"))),
        }
    }
}

impl std::fmt::Display for EvalMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EvalMode::DirectSeries => "direct-series",
            EvalMode::Transformed => "transformed",
        })
    }
}

/// `N = max(1, floor(sqrt n))`, so that `n = 0` still gets one arc.
pub fn contour_order(n: i64) -> u64 {
    if n <= 0 {
        1
    } else {
        isqrt(n as u64).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourConfig {
    pub n: i64,
    pub mode: EvalMode,
    /// Absolute error target for the whole arc sum.
    pub tolerance: f64,
}

impl ContourConfig {
    pub fn new(n: i64, mode: EvalMode) -> Self {
        Self { n, mode, tolerance: 1e-8 }
    }

    pub fn order(&self) -> u64 {
        contour_order(self.n)
    }

    /// `2 pi / N^2`.
    pub fn radius_exponent(&self) -> f64 {
        let n = self.order() as f64;
        2.0 * PI / (n * n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcContribution {
    pub h: u64,
    pub k: u64,
    pub value: Complex64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourReport {
    pub n: i64,
    pub order: u64,
    pub mode: Option<EvalMode>,
    pub value: Complex64,
    pub error_estimate: f64,
    pub arcs: Vec<ArcContribution>,
}

impl ContourReport {
    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }
}

/// `F_{r,M,alpha,J}` as a function on arc points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FjEvaluator {
    pub r: i64,
    pub m: u64,
    pub alpha: [u64; 4],
    pub j: Subset,
}

impl FjEvaluator {
    pub fn new(r: i64, m: u64, alpha: [u64; 4], j: Subset) -> Result<Self> {
        if m == 0 || alpha.contains(&0) {
            return Err(invalid("M and every alpha_j must be positive"));
        }
        Ok(Self { r, m, alpha, j })
    }

    fn alpha_sum(&self) -> u64 {
        self.alpha.iter().sum()
    }

    /// `q^{-r^2 sum(alpha) / (2M)}` at `q = e^{2 pi i (h + iz)/k}`.
    fn prefactor(&self, h: u64, k: u64, z: Complex64) -> Complex64 {
        let p = (2 * self.m * k) as i128;
        let e = (self.r as i128 * self.r as i128 % p) * self.alpha_sum() as i128 % p * h as i128 % p;
        let rr = (self.r * self.r) as f64 * self.alpha_sum() as f64;
        unit_root((-e).rem_euclid(p) as u64, p as u64) * (PI * z * rr / (self.m * k) as f64).exp()
    }

    /// `F(e^{2 pi i (h + iz) / k})`.
    pub fn eval(&self, mode: EvalMode, h: u64, k: u64, z: Complex64) -> Result<Complex64> {
        let mut prod = self.prefactor(h, k, z);
        for (idx, &a) in self.alpha.iter().enumerate() {
            let f = match (mode, self.j.contains(idx)) {
                (EvalMode::DirectSeries, true) => theta_near_cusp(self.r, 2 * self.m, 2 * a, h, k, z)?.value,
                (EvalMode::DirectSeries, false) => false_theta_near_cusp(self.r, self.m, 2 * a, h, k, z)?.value,
                (EvalMode::Transformed, true) => theta_eval_transformed(self.r, self.m, a, h, k, z)?.value,
                (EvalMode::Transformed, false) => false_theta_eval_transformed(self.r, self.m, a, h, k, z)?.value(),
            };
            prod *= f;
        }
        Ok(prod)
    }
}

/// A series with integral exponents, summed termwise at `q = e^{2 pi i (h + iz)/k}`.
///
/// Only exact (finite) series can be evaluated this way.
pub fn qseries_evaluator(f: &QSeries) -> Result<impl Fn(u64, u64, Complex64) -> Result<Complex64> + Sync> {
    if f.denom() != 1 {
        return Err(invalid("series must live on the integer lattice"));
    }
    if f.order() != crate::series::EXACT {
        return Err(invalid("only exact polynomials can be evaluated at a point"));
    }
    let terms: Vec<(i64, f64)> = f
        .iter()
        .map(|(i, c)| (i, c.to_f64().unwrap_or(f64::NAN)))
        .collect();
    Ok(move |h: u64, k: u64, z: Complex64| {
        let mut acc = NeumaierComplex::default();
        for &(i, c) in &terms {
            let t = (i as i128 * h as i128).rem_euclid(k as i128) as u64;
            acc.add(unit_root(t, k) * (-2.0 * PI * z * i as f64 / k as f64).exp() * c);
        }
        Ok(acc.total())
    })
}

fn label_arc(e: Error, h: u64, k: u64) -> Error {
    match e {
        Error::Quadrature { what, achieved } => Error::Quadrature {
            what: format!("{what} on the arc at {h}/{k}"),
            achieved,
        },
        e => e,
    }
}

/// `c(n) = sum_{h,k} e^{-2 pi i n h / k} int F(e^{2 pi i (h + iz)/k}) e^{2 pi n z / k} dPhi`
/// with `z = k (1/N^2 - i Phi)`, for any evaluator of `F` at `(h, k, z)`.
///
/// Arcs are integrated in parallel and summed in `(k, h)` order.
pub fn coefficient_by_contour<F>(f: F, n: i64, tolerance: f64) -> Result<ContourReport>
where
    F: Fn(u64, u64, Complex64) -> Result<Complex64> + Sync,
{
    if !(tolerance > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    let order = contour_order(n);
    let arcs = arcs_by_denominator(order)?;
    let per_arc_tol = tolerance / (4.0 * arcs.len() as f64);
    let cfg = QuadConfig {
        abs_tol: per_arc_tol,
        rel_tol: 1e-14,
        max_intervals: 20_000,
    };
    let n2 = (order * order) as f64;
    let growth = (2.0 * PI * n as f64 / n2).exp();
    let contributions = arcs
        .par_iter()
        .map(|arc| {
            let (h, k) = (arc.h, arc.k);
            let lo = -(*arc.theta_left.numer() as f64) / *arc.theta_left.denom() as f64;
            let hi = *arc.theta_right.numer() as f64 / *arc.theta_right.denom() as f64;
            let mut failure = None;
            let integrand = |phi: f64| {
                let z = ArcPoint { h, k, order, phi }.z();
                match f(h, k, z) {
                    Ok(v) => v * growth * Complex64::from_polar(1.0, -2.0 * PI * n as f64 * phi),
                    Err(e) => {
                        failure.get_or_insert(e);
                        Complex64::new(0.0, 0.0)
                    }
                }
            };
            let r = integrate(integrand, lo, hi, cfg, "contour arc integral").map_err(|e| label_arc(e, h, k))?;
            if let Some(e) = failure {
                return Err(label_arc(e, h, k));
            }
            let t = ((-(n as i128) * h as i128).rem_euclid(k as i128)) as u64;
            Ok(ArcContribution {
                h,
                k,
                value: unit_root(t, k) * r.value,
                error: r.error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = NeumaierComplex::default();
    let mut err = 0.0;
    for c in &contributions {
        acc.add(c.value);
        err += c.error;
    }
    Ok(ContourReport {
        n,
        order,
        mode: None,
        value: acc.total(),
        error_estimate: err,
        arcs: contributions,
    })
}

/// [`coefficient_by_contour`] for `F_{r,M,alpha,J}` in the chosen mode.
pub fn fj_coefficient_by_contour(ev: &FjEvaluator, cfg: &ContourConfig) -> Result<ContourReport> {
    let mode = cfg.mode;
    let mut rep = coefficient_by_contour(|h, k, z| ev.eval(mode, h, k, z), cfg.n, cfg.tolerance)?;
    rep.mode = Some(mode);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{c_coefficient, f_j_series};
    use num_rational::BigRational;

    fn to_f64(c: &BigRational) -> f64 {
        c.to_f64().unwrap()
    }

    #[test]
    fn order_and_radius() {
        assert_eq!(contour_order(0), 1);
        assert_eq!(contour_order(-3), 1);
        assert_eq!(contour_order(15), 3);
        assert_eq!(contour_order(16), 4);
        let c = ContourConfig::new(16, EvalMode::DirectSeries);
        assert!((c.radius_exponent() - 2.0 * PI / 16.0).abs() < 1e-15);
    }

    #[test]
    fn constant_series() {
        let one = QSeries::constant(BigRational::from_integer(1.into()));
        let ev = qseries_evaluator(&one).unwrap();
        let r = coefficient_by_contour(&ev, 0, 1e-10).unwrap();
        assert!((r.value - 1.0).norm() < 1e-10);
        for a in &r.arcs {
            assert!(a.value.norm() > 0.0, "{}/{}", a.h, a.k);
        }
        for n in 1..12 {
            let r = coefficient_by_contour(&ev, n, 1e-10).unwrap();
            let big_n = contour_order(n) as f64;
            let scale = (2.0 * PI * n as f64 / (big_n * big_n)).exp();
            assert!(r.value.norm() < 1e-13 * scale, "n={n}");
        }
    }

    #[test]
    fn polynomial_coefficients() {
        let p = QSeries::from_entries(
            1,
            0,
            crate::series::EXACT,
            vec![(0, BigRational::from_integer(2.into())), (3, BigRational::from_integer((-5).into())), (7, BigRational::from_integer(1.into()))],
        )
        .unwrap();
        let ev = qseries_evaluator(&p).unwrap();
        for (n, c) in [(0, 2.0), (3, -5.0), (5, 0.0), (7, 1.0)] {
            let r = coefficient_by_contour(&ev, n, 1e-10).unwrap();
            // Rounding scales with the size of the integrand, 8 e^{2 pi n / N^2}.
            let big_n = contour_order(n) as f64;
            let scale = 8.0 * (2.0 * PI * n as f64 / (big_n * big_n)).exp();
            assert!((r.value - c).norm() < 1e-13 * scale, "n={n} {}", r.value);
        }
    }

    #[test]
    fn direct_mode_reproduces_coefficients() {
        let ev = FjEvaluator::new(1, 2, [1; 4], Subset::FULL).unwrap();
        let exact = f_j_series(1, 2, [1; 4], Subset::FULL, 13).unwrap();
        for n in [0i64, 1, 4, 7, 12] {
            let r = fj_coefficient_by_contour(&ev, &ContourConfig::new(n, EvalMode::DirectSeries)).unwrap();
            let c = to_f64(&exact.coeff(n).unwrap());
            assert!((r.value - c).norm() < 1e-6 * (1.0 + c.abs()), "n={n}: {} vs {c}", r.value);
        }
    }

    #[test]
    fn transformed_mode_mixed_subset() {
        let j: Subset = "1,2,3".parse().unwrap();
        let ev = FjEvaluator::new(1, 2, [1; 4], j).unwrap();
        for n in [2i64, 5] {
            let c = to_f64(&c_coefficient(1, 2, [1; 4], j, n).unwrap());
            let d = fj_coefficient_by_contour(&ev, &ContourConfig::new(n, EvalMode::DirectSeries)).unwrap();
            let t = fj_coefficient_by_contour(&ev, &ContourConfig::new(n, EvalMode::Transformed)).unwrap();
            assert!((d.value - c).norm() < 1e-6, "direct n={n}: {} vs {c}", d.value);
            assert!((t.value - c).norm() < 1e-4, "transformed n={n}: {} vs {c}", t.value);
        }
    }

    #[test]
    fn modes_parse() {
        assert_eq!("direct".parse::<EvalMode>().unwrap(), EvalMode::DirectSeries);
        assert_eq!("transformed".parse::<EvalMode>().unwrap(), EvalMode::Transformed);
        assert!("other".parse::<EvalMode>().is_err());
        assert_eq!(EvalMode::DirectSeries.to_string(), "direct-series");
    }
}
