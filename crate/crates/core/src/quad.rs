//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex-valued
//! integrands on finite intervals.

use num_complex::Complex64;

use crate::arith::NeumaierComplex;
use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const ROUNDING_FLOOR: f64 = 16.0 * f64::EPSILON;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// Estimated absolute error.
    pub error: f64,
    pub evaluations: usize,
}

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_intervals: 4000,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    /// `int |f|` on the segment, by the Kronrod rule.
    l1: f64,
}

fn kronrod<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut l1 = fc.norm() * WGK[7];
    for i in 0..7 {
        let x = h * XGK[i];
        let (fl, fr) = (f(c - x), f(c + x));
        let s = fl + fr;
        l1 += (fl.norm() + fr.norm()) * WGK[i];
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    let value = k * h;
    let error = ((k - g) * h).norm();
    Segment {
        a,
        b,
        value,
        error,
        l1: l1 * h.abs(),
    }
}

/// Integrates `f` over `[a, b]` until the summed error estimate falls below
/// `max(abs_tol, rel_tol * |I|)`, or below the rounding level of `int |f|`.
pub fn integrate<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64, cfg: QuadConfig, what: &str) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
        });
    }
    let mut segs = vec![kronrod(&mut f, a, b)];
    let mut evals = 15;
    loop {
        let mut total = NeumaierComplex::default();
        let mut err = 0.0;
        let mut l1 = 0.0;
        let mut worst = 0;
        for (i, s) in segs.iter().enumerate() {
            total.add(s.value);
            err += s.error;
            l1 += s.l1;
            if s.error > segs[worst].error {
                worst = i;
            }
        }
        let value = total.total();
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::Quadrature {
                what: what.to_string(),
                achieved: f64::INFINITY,
            });
        }
        // Below ROUNDING_FLOOR * int |f| the estimate is rounding noise.
        let target = cfg.abs_tol.max(cfg.rel_tol * value.norm()).max(ROUNDING_FLOOR * l1);
        if err <= target {
            return Ok(QuadResult {
                value,
                error: err,
                evaluations: evals,
            });
        }
        let s = &segs[worst];
        let mid = 0.5 * (s.a + s.b);
        if segs.len() >= cfg.max_intervals || mid <= s.a || mid >= s.b {
            return Err(Error::Quadrature {
                what: what.to_string(),
                achieved: err,
            });
        }
        let (a0, b0) = (s.a, s.b);
        segs[worst] = kronrod(&mut f, a0, mid);
        segs.push(kronrod(&mut f, mid, b0));
        evals += 30;
    }
}

/// Integrates over `[a, inf)` by summing panels of width `width` until a panel
/// contributes less than `tail_tol`; `f` must decay monotonically in
/// magnitude beyond the panel where that happens.
pub fn integrate_to_infinity<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    width: f64,
    tail_tol: f64,
    cfg: QuadConfig,
    what: &str,
) -> Result<QuadResult> {
    let mut total = NeumaierComplex::default();
    let mut err = 0.0;
    let mut evals = 0;
    let mut lo = a;
    let mut w = width;
    for _ in 0..200 {
        let r = integrate(&mut f, lo, lo + w, cfg, what)?;
        total.add(r.value);
        err += r.error;
        evals += r.evaluations;
        lo += w;
        if r.value.norm() < tail_tol && f(lo).norm() * w < tail_tol {
            return Ok(QuadResult {
                value: total.total(),
                error: err + tail_tol,
                evaluations: evals,
            });
        }
        w *= 1.5;
    }
    Err(Error::Quadrature {
        what: what.to_string(),
        achieved: f64::INFINITY,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| Complex64::new(x * x, 3.0 * x), 0.0, 2.0, QuadConfig::default(), "poly").unwrap();
        assert!((r.value - Complex64::new(8.0 / 3.0, 6.0)).norm() < 1e-14);
    }

    #[test]
    fn oscillatory_and_peaked() {
        let r = integrate(|x| Complex64::new(0.0, 50.0 * x).exp(), 0.0, 1.0, QuadConfig::default(), "osc").unwrap();
        let exact = (Complex64::new(0.0, 50.0).exp() - 1.0) / Complex64::new(0.0, 50.0);
        assert!((r.value - exact).norm() < 1e-12);
        let r = integrate(|x| Complex64::new(1.0 / (1e-4 + x * x), 0.0), -1.0, 1.0, QuadConfig::default(), "peak").unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((r.value.re - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn half_line_gaussian() {
        let r = integrate_to_infinity(|x| Complex64::new((-x * x).exp(), 0.0), 0.0, 1.0, 1e-17, QuadConfig::default(), "gauss")
            .unwrap();
        assert!((r.value.re - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn non_convergence_reported() {
        let cfg = QuadConfig {
            max_intervals: 3,
            ..QuadConfig::default()
        };
        let e = integrate(|x| Complex64::new((1.0 / x).sin(), 0.0), 1e-9, 1.0, cfg, "wild").unwrap_err();
        assert!(matches!(e, Error::Quadrature { .. }));
    }
}
