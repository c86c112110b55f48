//! The `nu`-decomposition of the arc integrals for `J != {1,2,3,4}`.
//!
//! Expanding every factor of `F_{r,M,alpha,J}` through its transformation and
//! writing each sum over `nu in Z` as `sum*_{nu >= 0} sum_{eps = +-}` gives
//! `c(n) = (16 M^2 prod sqrt(alpha_j))^{-1} sum_{nu in N_0^4} 2^{-#{j : nu_j = 0}} I_nu(n)`
//! with
//! `I_nu(n) = sum_{h,k} e^{-2 pi i n h/k} k^{-2} sum_{lambda, eps} prod_j e^{eps_j pi i r nu_j/(Mk)}
//! G(2M alpha_j h, 2 r alpha_j h + d_j; k) int z^{-2} e^{(2 pi/k)(n + r^2 sum(alpha)/(2M)) z
//! - sum_j pi nu_j^2/(4Mk alpha_j z)} prod_j I_j(z) dPhi`.
//!
//! For `l not in J` and `nu_l = 0` the factor `I_l` is
//! `(i/pi) e^{pi i r lambda_l/(Mk)} sum*_{nu} sum_{+-} I(lambda_l +- 2Mk nu, k; z)`;
//! the `(i/pi) e^{pi i r lambda/(Mk)}` comes from the integral term of the
//! false theta transformation and must be kept for the decomposition to sum
//! back to `c(n)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::contour_order;
use crate::analytic::{nu_sum, ArcPoint, GaussTable};
use crate::arith::{unit_root, NeumaierComplex};
use crate::error::{invalid, Result};
use crate::farey::{arcs_by_denominator, FareyArc};
use crate::quad::{integrate, QuadConfig};
use crate::series::Subset;

/// Which of the three shapes the `l`-th factor takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IFactorKind {
    /// `l in J`: `1/(2Mk - 1)`.
    InJ,
    /// `l not in J`, `nu_l != 0`: `eps_l/(2Mk - 1)`.
    Signed,
    /// `l not in J`, `nu_l = 0`: the sum of principal-value integrals.
    NuSum,
}

/// One term `(nu, lambda, eps)` of the expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformTerm {
    pub nu: [u32; 4],
    pub lambda: [i64; 4],
    /// Each entry is `+1` or `-1`.
    pub eps: [i8; 4],
    pub j: Subset,
}

impl TransformTerm {
    /// `d_l = eps_l nu_l + [nu_l = 0][l not in J] lambda_l`.
    pub fn d(&self, l: usize) -> i64 {
        let mut d = self.eps[l] as i64 * self.nu[l] as i64;
        if self.nu[l] == 0 && !self.j.contains(l) {
            d += self.lambda[l];
        }
        d
    }

    pub fn kind(&self, l: usize) -> IFactorKind {
        if self.j.contains(l) {
            IFactorKind::InJ
        } else if self.nu[l] != 0 {
            IFactorKind::Signed
        } else {
            IFactorKind::NuSum
        }
    }
}

/// `I_nu(n)` and the contribution of each arc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct INuReport {
    pub nu: [u32; 4],
    pub n: i64,
    pub value: Complex64,
    pub per_arc: Vec<(u64, u64, Complex64)>,
}

struct Problem {
    r: i64,
    m: u64,
    alpha: [u64; 4],
    j: Subset,
    n: i64,
}

struct ArcData {
    arc: FareyArc,
    gauss: Vec<GaussTable>,
}

impl Problem {
    fn validate(&self) -> Result<()> {
        if self.m == 0 || self.alpha.contains(&0) {
            return Err(invalid("M and every alpha_j must be positive"));
        }
        if self.j == Subset::FULL {
            return Err(invalid("the decomposition needs J != {1,2,3,4}"));
        }
        Ok(())
    }

    fn arc_data(&self) -> Result<Vec<ArcData>> {
        arcs_by_denominator(contour_order(self.n))?
            .into_iter()
            .map(|arc| {
                let gauss = self
                    .alpha
                    .iter()
                    .map(|&a| GaussTable::new(2 * (self.m * a * arc.h) as i64, arc.k))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ArcData { arc, gauss })
            })
            .collect()
    }

    /// `sum_{lambda, eps}` of the `l`-th factor for `nu_l = nu`, times the Gaussian `e^{-pi nu^2/(4Mk alpha z)}`.
    fn factor(&self, d: &ArcData, l: usize, nu: u32, z: Complex64, nusum: &mut BTreeMap<u64, Vec<Complex64>>) -> Result<Complex64> {
        let (h, k) = (d.arc.h, d.arc.k);
        let a = self.alpha[l];
        let p = 2 * self.m * k;
        let s = 2 * self.r * (a * h) as i64;
        let g = &d.gauss[l];
        let nu_i = nu as i64;
        let e = |t: i64| unit_root(t.rem_euclid(p as i64) as u64, p);
        let q = match (self.j.contains(l), nu) {
            (true, 0) => g.get(s) * 2.0,
            (true, _) => e(self.r * nu_i) * g.get(s + nu_i) + e(-self.r * nu_i) * g.get(s - nu_i),
            (false, 0) => {
                let mk = (self.m * k) as i64;
                if !nusum.contains_key(&a) {
                    let vals = ((1 - mk)..=mk)
                        .filter(|&x| x != 0)
                        .map(|ell| nu_sum(ell, self.m, a, k, z).map(|v| v.value))
                        .collect::<Result<Vec<_>>>()?;
                    nusum.insert(a, vals);
                }
                let vals = &nusum[&a];
                let mut acc = NeumaierComplex::default();
                for (ell, v) in ((1 - mk)..=mk).filter(|&x| x != 0).zip(vals) {
                    acc.add(e(self.r * ell) * g.get(s + ell) * v);
                }
                acc.total() * Complex64::new(0.0, 2.0 / PI)
            }
            (false, _) => e(self.r * nu_i) * g.get(s + nu_i) - e(-self.r * nu_i) * g.get(s - nu_i),
        };
        let gauss_decay = (-PI * (nu_i * nu_i) as f64 / (4.0 * (self.m * k * a) as f64 * z)).exp();
        Ok(q * gauss_decay)
    }

    /// `z^{-2} e^{(2 pi/k)(n + r^2 sum(alpha)/(2M)) z}`.
    fn common(&self, k: u64, z: Complex64) -> Complex64 {
        let shift = (self.r * self.r) as f64 * self.alpha.iter().sum::<u64>() as f64 / (2 * self.m) as f64;
        (2.0 * PI / k as f64 * (self.n as f64 + shift) * z).exp() / (z * z)
    }

    fn arc_phase(&self, d: &ArcData) -> Complex64 {
        let k = d.arc.k;
        let t = (-(self.n as i128) * d.arc.h as i128).rem_euclid(k as i128) as u64;
        unit_root(t, k) / (k * k) as f64
    }

    fn normalization(&self) -> f64 {
        let root: f64 = self.alpha.iter().map(|&a| (a as f64).sqrt()).product();
        1.0 / (16.0 * (self.m * self.m) as f64 * root)
    }
}

fn bounds(arc: &FareyArc) -> (f64, f64) {
    let lo = -(*arc.theta_left.numer() as f64) / *arc.theta_left.denom() as f64;
    let hi = *arc.theta_right.numer() as f64 / *arc.theta_right.denom() as f64;
    (lo, hi)
}

/// `I_nu(n)` for `F_{r,M,alpha,J}`, with its per-arc breakdown.
pub fn i_nu_diagnostic(r: i64, m: u64, alpha: [u64; 4], j: Subset, nu: [u32; 4], n: i64) -> Result<INuReport> {
    let pb = Problem { r, m, alpha, j, n };
    pb.validate()?;
    let order = contour_order(n);
    let data = pb.arc_data()?;
    let cfg = QuadConfig::with_tol(1e-12, 1e-10);
    let per_arc = data
        .par_iter()
        .map(|d| {
            let (h, k) = (d.arc.h, d.arc.k);
            let (lo, hi) = bounds(&d.arc);
            let mut failure = None;
            let f = |phi: f64| {
                let z = ArcPoint { h, k, order, phi }.z();
                let mut cache = BTreeMap::new();
                let mut v = pb.common(k, z);
                for l in 0..4 {
                    match pb.factor(d, l, nu[l], z, &mut cache) {
                        Ok(q) => v *= q,
                        Err(e) => {
                            failure.get_or_insert(e);
                            return Complex64::new(0.0, 0.0);
                        }
                    }
                }
                v
            };
            let r = integrate(f, lo, hi, cfg, "I_nu arc integral")?;
            if let Some(e) = failure {
                return Err(e);
            }
            Ok((h, k, pb.arc_phase(d) * r.value))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = NeumaierComplex::default();
    for &(_, _, v) in &per_arc {
        acc.add(v);
    }
    Ok(INuReport {
        nu,
        n,
        value: acc.total(),
        per_arc,
    })
}

/// The weighted sum of `I_nu(n)` over a box, normalised to approximate `c(n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub n: i64,
    /// Box half-width: every `nu_j <= box_size`.
    pub box_size: u32,
    /// Contribution of `||nu|| <= radius`.
    pub within_radius: Complex64,
    /// Contribution of the rest of the box.
    pub outside_radius: Complex64,
    /// `within_radius + outside_radius`.
    pub total: Complex64,
    /// Embedded Gauss/Kronrod difference of the fixed arc rule.
    pub quadrature_error: f64,
    /// `|I_nu(n)|` for `nu = 0`, unnormalised.
    pub i_zero: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 8] = [
    0.0,
    0.129_484_966_168_869_7,
    0.0,
    0.279_705_391_489_276_7,
    0.0,
    0.381_830_050_505_118_9,
    0.0,
    0.417_959_183_673_469_4,
];

/// `(16 M^2 prod sqrt(alpha_j))^{-1} sum_nu 2^{-#zeros} I_nu(n)` over `nu in [0, box_size]^4`,
/// split at `||nu|| <= radius`. All `I_nu` share one composite Gauss-Kronrod
/// rule per arc with `panels` panels.
pub fn i_nu_reconstruction(
    r: i64,
    m: u64,
    alpha: [u64; 4],
    j: Subset,
    n: i64,
    box_size: u32,
    radius: f64,
    panels: usize,
) -> Result<Reconstruction> {
    let pb = Problem { r, m, alpha, j, n };
    pb.validate()?;
    if box_size > 24 || panels == 0 {
        return Err(invalid("box size must be at most 24 and panels positive"));
    }
    let order = contour_order(n);
    let data = pb.arc_data()?;
    let side = box_size as usize + 1;
    let count = side.pow(4);
    let results = data
        .par_iter()
        .map(|d| -> Result<(Vec<Complex64>, Vec<Complex64>)> {
            let (h, k) = (d.arc.h, d.arc.k);
            let (lo, hi) = bounds(&d.arc);
            let mut kron = vec![Complex64::new(0.0, 0.0); count];
            let mut gauss = vec![Complex64::new(0.0, 0.0); count];
            let width = (hi - lo) / panels as f64;
            for pnl in 0..panels {
                let c = lo + (pnl as f64 + 0.5) * width;
                let half = width / 2.0;
                for i in 0..15 {
                    let (x, wk, wg) = if i < 8 {
                        (-XGK[i], WGK[i], WG[i])
                    } else {
                        (XGK[14 - i], WGK[14 - i], WG[14 - i])
                    };
                    let phi = c + half * x;
                    let z = ArcPoint { h, k, order, phi }.z();
                    let mut cache = BTreeMap::new();
                    let mut a = [[Complex64::new(0.0, 0.0); 25]; 4];
                    for l in 0..4 {
                        for nu in 0..side {
                            a[l][nu] = pb.factor(d, l, nu as u32, z, &mut cache)?;
                        }
                    }
                    let base = pb.common(k, z) * half;
                    let mut idx = 0;
                    for n0 in 0..side {
                        let v0 = base * a[0][n0];
                        for n1 in 0..side {
                            let v1 = v0 * a[1][n1];
                            for n2 in 0..side {
                                let v2 = v1 * a[2][n2];
                                for n3 in 0..side {
                                    let v = v2 * a[3][n3];
                                    kron[idx] += v * wk;
                                    gauss[idx] += v * wg;
                                    idx += 1;
                                }
                            }
                        }
                    }
                }
            }
            let ph = pb.arc_phase(d);
            for v in kron.iter_mut().chain(gauss.iter_mut()) {
                *v *= ph;
            }
            Ok((kron, gauss))
        })
        .collect::<Result<Vec<_>>>()?;
    let norm = pb.normalization();
    let mut inside = NeumaierComplex::default();
    let mut outside = NeumaierComplex::default();
    let mut qerr = 0.0;
    let mut i_zero = Complex64::new(0.0, 0.0);
    for idx in 0..count {
        let nu = [idx / side.pow(3), idx / side.pow(2) % side, idx / side % side, idx % side];
        let mut k_sum = Complex64::new(0.0, 0.0);
        let mut g_sum = Complex64::new(0.0, 0.0);
        for (kv, gv) in &results {
            k_sum += kv[idx];
            g_sum += gv[idx];
        }
        if idx == 0 {
            i_zero = k_sum;
        }
        let zeros = nu.iter().filter(|&&v| v == 0).count() as i32;
        let w = norm * 0.5f64.powi(zeros);
        qerr += w * (k_sum - g_sum).norm();
        let r2: usize = nu.iter().map(|v| v * v).sum();
        if (r2 as f64) <= radius * radius {
            inside.add(k_sum * w);
        } else {
            outside.add(k_sum * w);
        }
    }
    let within_radius = inside.total();
    let outside_radius = outside.total();
    Ok(Reconstruction {
        n,
        box_size,
        within_radius,
        outside_radius,
        total: within_radius + outside_radius,
        quadrature_error: qerr,
        i_zero: i_zero.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::c_coefficient;
    use num_traits::ToPrimitive;

    #[test]
    fn term_selectors() {
        let j: Subset = "1,2".parse().unwrap();
        let t = TransformTerm {
            nu: [0, 3, 0, 2],
            lambda: [5, -4, 7, 1],
            eps: [1, -1, -1, 1],
            j,
        };
        assert_eq!(t.kind(0), IFactorKind::InJ);
        assert_eq!(t.kind(1), IFactorKind::InJ);
        assert_eq!(t.kind(2), IFactorKind::NuSum);
        assert_eq!(t.kind(3), IFactorKind::Signed);
        assert_eq!([t.d(0), t.d(1), t.d(2), t.d(3)], [0, -3, 7, 2]);
    }

    /// The per-factor sums used above agree with the literal sum over `lambda` and `eps`.
    #[test]
    fn factor_matches_literal_sum() {
        let (r, m, k, h) = (3i64, 2u64, 3u64, 1u64);
        let alpha = [1u64, 2, 1, 1];
        let j: Subset = "1".parse().unwrap();
        let pb = Problem { r, m, alpha, j, n: 9 };
        let data = pb.arc_data().unwrap();
        let d = data.iter().find(|d| d.arc.h == h && d.arc.k == k).unwrap();
        let z = Complex64::new(0.1, 0.02);
        let mk = (m * k) as i64;
        let p = 2 * m * k;
        let lam: Vec<i64> = ((1 - mk)..=mk).filter(|&x| x != 0).collect();
        for l in [0usize, 1] {
            for nu in 0..3u32 {
                let mut cache = BTreeMap::new();
                let got = pb.factor(d, l, nu, z, &mut cache).unwrap();
                let mut want = Complex64::new(0.0, 0.0);
                for &lm in &lam {
                    for eps in [1i8, -1] {
                        let mut t = TransformTerm {
                            nu: [0; 4],
                            lambda: [0; 4],
                            eps: [1; 4],
                            j,
                        };
                        t.nu[l] = nu;
                        t.lambda[l] = lm;
                        t.eps[l] = eps;
                        let phase = unit_root((eps as i64 * r * nu as i64).rem_euclid(p as i64) as u64, p);
                        let g = d.gauss[l].get(2 * r * (alpha[l] * h) as i64 + t.d(l));
                        let f = match t.kind(l) {
                            IFactorKind::InJ => Complex64::new(1.0 / (2 * mk - 1) as f64, 0.0),
                            IFactorKind::Signed => Complex64::new(eps as f64 / (2 * mk - 1) as f64, 0.0),
                            IFactorKind::NuSum => {
                                let e = unit_root((r * lm).rem_euclid(p as i64) as u64, p);
                                Complex64::new(0.0, 1.0 / PI) * e * nu_sum(lm, m, alpha[l], k, z).unwrap().value
                            }
                        };
                        want += phase * g * f;
                    }
                }
                let decay = (-PI * (nu * nu) as f64 / (4.0 * (m * k * alpha[l]) as f64 * z)).exp();
                want *= decay;
                assert!((got - want).norm() < 1e-10 * (1.0 + want.norm()), "l={l} nu={nu}");
            }
        }
    }

    #[test]
    fn reconstruction_matches_coefficient() {
        let j: Subset = "1,2,3".parse().unwrap();
        for n in [2i64, 6] {
            let rec = i_nu_reconstruction(1, 2, [1; 4], j, n, 12, 4.0, 12).unwrap();
            let exact = c_coefficient(1, 2, [1; 4], j, n).unwrap().to_f64().unwrap();
            assert!((rec.total - exact).norm() < 1e-4, "n={n}: {} vs {exact}", rec.total);
            assert!(rec.quadrature_error < 1e-6);
        }
    }

    #[test]
    fn single_nu_matches_box_entry() {
        let j: Subset = "1,2,3".parse().unwrap();
        let rep = i_nu_diagnostic(1, 2, [1; 4], j, [0; 4], 4).unwrap();
        let rec = i_nu_reconstruction(1, 2, [1; 4], j, 4, 1, 0.0, 16).unwrap();
        assert!((rep.value.norm() - rec.i_zero).abs() < 1e-7 * (1.0 + rec.i_zero));
        assert_eq!(rep.per_arc.len(), 2);
    }

    #[test]
    fn rejects_full_subset() {
        assert!(i_nu_diagnostic(1, 2, [1; 4], Subset::FULL, [0; 4], 4).is_err());
    }
}
