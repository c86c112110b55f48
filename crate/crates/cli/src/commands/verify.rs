use clap::{Args, ValueEnum};
use num_complex::Complex64;
use num_rational::Rational64;
use serde_json::Value;

use polysum::analytic::{
    j0_main_term_check, j1_main_term_check, j_recursion_residual, nu_sum, pv_integral, pv_integral_route,
    transformation_grid, GridConfig, GridTarget, PVIntegralParams, PvRoute, Sign,
};
use polysum::arith::divisor_sigma;
use polysum::farey::{arcs, compare_rho, reflection_failure};
use polysum::modforms::{hexagonal2_positivity_failure, pentagonal_progression_failure, verify_theta_split};
use polysum::polygonal::{count_squares_range, CongruenceInstance};
use polysum::series::{
    decomposition_check, full_coefficient_polygonal_check, full_coefficient_star_check, rplus_generating_check,
    CheckReport,
};

use crate::output::{num, Report};
use crate::params::parse_alpha;
use crate::{CliError, CliResult};

/// Identity names. They are part of the command-line interface and stay fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    /// Generating function of r+ as a shifted partial theta function.
    #[value(name = "lemma2_2")]
    Lemma2_2,
    /// Theta/false-theta decomposition of the partial theta function.
    #[value(name = "lemma2_3")]
    Lemma2_3,
    /// Coefficients of F_J for J = {1,2,3,4} as star counts and polygonal counts.
    #[value(name = "lemma2_4")]
    Lemma2_4,
    /// Farey arc structure and the neighbour reflection.
    #[value(name = "lemma3_1")]
    Lemma3_1,
    /// Theta transformation on the default grid.
    #[value(name = "lemma4_1")]
    Lemma4_1,
    /// False theta transformation on the default grid.
    #[value(name = "lemma4_2")]
    Lemma4_2,
    /// Principal-value integral: closed form against quadrature.
    #[value(name = "lemma5_1")]
    Lemma5_1,
    /// Integration-by-parts recursion of J_d.
    #[value(name = "lemma5_4")]
    Lemma5_4,
    /// Main terms of J_0 and J_1 inside their envelopes.
    #[value(name = "lemma5_5")]
    Lemma5_5,
    /// Distance of the nu-sum from its cotangent main term.
    #[value(name = "lemma5_8")]
    Lemma5_8,
    /// The congruence rho(h) against the neighbour value rho_(k,1)(h).
    #[value(name = "lemma6_2")]
    Lemma6_2,
    /// Theta*(6 tau) = (2/3) E(4 tau) + (1/3) eta^4(24 tau).
    #[value(name = "theta_split")]
    ThetaSplit,
    /// s*_{1,2,(1,1,1,1)}(8n+4) = 16 sigma(2n+1).
    #[value(name = "cor1_2")]
    Cor1_2,
    /// Positivity of the (1,1,1,2) hexagonal main term.
    #[value(name = "cor1_3")]
    Cor1_3,
    /// Four pentagonal numbers on the progression 24n+4.
    #[value(name = "cor1_4")]
    Cor1_4,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub identity: Identity,

    #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
    pub r: i64,

    #[arg(long = "M", default_value_t = 2)]
    pub modulus: u64,

    #[arg(long, value_parser = parse_alpha, default_value = "1,1,1,1")]
    pub alpha: [u64; 4],

    /// Polygon order for the polygonal identities.
    #[arg(long, default_value_t = 6)]
    pub m: u32,

    /// Series order, Farey order or largest n, depending on the identity.
    #[arg(long)]
    pub order: Option<u64>,

    /// Grid for the transformation checks; only `default` exists.
    #[arg(long, default_value = "default", value_parser = ["default"])]
    pub grid: String,

    /// Overrides the identity's tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

struct Outcome {
    passed: bool,
    worst_error: Option<f64>,
    compared: u64,
    detail: String,
}

impl Outcome {
    fn exact(passed: bool, compared: u64, detail: String) -> Self {
        Self {
            passed,
            worst_error: passed.then_some(0.0),
            compared,
            detail,
        }
    }

    fn numeric(err: f64, tol: f64, compared: u64, detail: String) -> Self {
        Self {
            passed: err <= tol,
            worst_error: Some(err),
            compared,
            detail,
        }
    }
}

fn describe(rep: &CheckReport) -> String {
    match &rep.first_mismatch {
        None => format!("{} coefficients agree", rep.compared),
        Some(m) => format!("first mismatch at q^({}/{}): {} vs {}", m.num, m.den, m.lhs, m.rhs),
    }
}

fn n_max(order: Option<u64>, default: u64) -> CliResult<u64> {
    match order.unwrap_or(default) {
        0 => Err(CliError::Usage("--order must be positive".into())),
        o => Ok(o),
    }
}

fn z_set() -> [Complex64; 4] {
    [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.05, -0.01),
        Complex64::new(0.5, 0.8),
        Complex64::new(0.3, -0.4),
    ]
}

fn check(a: &VerifyArgs) -> CliResult<Outcome> {
    let (r, m, alpha) = (a.r, a.modulus, a.alpha);
    Ok(match a.identity {
        Identity::Lemma2_2 => {
            let n = n_max(a.order, 200)? - 1;
            let rep = rplus_generating_check(a.m, alpha, n)?;
            Outcome::exact(rep.passed, rep.compared, format!("m={}: {}", a.m, describe(&rep)))
        }
        Identity::Lemma2_3 => {
            let n = n_max(a.order, 200)? - 1;
            let rep = decomposition_check(r, m, alpha, n)?;
            Outcome::exact(rep.passed, rep.compared, describe(&rep))
        }
        Identity::Lemma2_4 => {
            let n = n_max(a.order, 200)? - 1;
            let star = full_coefficient_star_check(r, m, alpha, n)?;
            let poly = full_coefficient_polygonal_check(a.m, alpha, n)?;
            Outcome::exact(
                star.passed && poly.passed,
                star.compared + poly.compared,
                format!("star counts (r={r}, M={m}): {}; polygonal (m={}): {}", describe(&star), a.m, describe(&poly)),
            )
        }
        Identity::Lemma3_1 => {
            let order = n_max(a.order, 100)?;
            let mut structural = None;
            let mut count = 0;
            for n in 1..=order {
                let arcs = arcs(n)?;
                count += arcs.len() as u64;
                let total: Rational64 = arcs.iter().map(|arc| arc.measure()).sum();
                let bad = total != Rational64::from_integer(1) || arcs.iter().any(|arc| arc.determinants() != (1, 1));
                if bad && structural.is_none() {
                    structural = Some(n);
                }
            }
            let refl = reflection_failure(order)?;
            let detail = match (structural, refl) {
                (None, None) => format!("measures, determinants and reflection hold for N <= {order}"),
                (Some(n), _) => format!("arc measures or determinants fail at N = {n}"),
                (None, Some((n, h, k))) => format!("reflection fails at N = {n}, h/k = {h}/{k}"),
            };
            Outcome::exact(structural.is_none() && refl.is_none(), count, detail)
        }
        Identity::Lemma4_1 | Identity::Lemma4_2 => {
            let (target, tol) = match a.identity {
                Identity::Lemma4_1 => (GridTarget::Theta, 1e-8),
                _ => (GridTarget::FalseTheta, 1e-6),
            };
            let rep = transformation_grid(target, &GridConfig::default())?;
            let detail = match rep.worst {
                Some(w) => format!(
                    "worst at r={}, M={}, alpha={}, h/k={}/{}, N={}, Phi={:.6e}",
                    w.r, w.m, w.alpha, w.point.h, w.point.k, w.point.order, w.point.phi
                ),
                None => "empty grid".into(),
            };
            Outcome::numeric(rep.max_rel_err, a.tol.unwrap_or(tol), rep.points as u64, detail)
        }
        Identity::Lemma5_1 => {
            let mut worst: f64 = 0.0;
            let mut count = 0;
            for mu in [1i64, -1, 2, 3, -5, 8, 17, -40] {
                for (m, alpha, k) in [(1u64, 1u64, 1u64), (2, 1, 3), (4, 2, 5)] {
                    for z in [Complex64::new(1.0, 0.0), Complex64::new(0.05, -0.01), Complex64::new(0.02, 0.3)] {
                        let p = PVIntegralParams::new(mu, m, alpha, k, z);
                        let closed = pv_integral(&p)?;
                        let direct = pv_integral_route(&p, PvRoute::DirectQuadrature)?;
                        worst = worst.max((closed - direct).norm() / direct.norm());
                        count += 1;
                    }
                }
            }
            Outcome::numeric(worst, a.tol.unwrap_or(1e-6), count, "relative error, closed form vs quadrature".into())
        }
        Identity::Lemma5_4 => {
            let mut worst: f64 = 0.0;
            let mut count = 0;
            for z in z_set() {
                for d in 1..=4 {
                    for aa in [1.0, 5.0, 20.0, 50.0] {
                        for s in [Sign::Plus, Sign::Minus] {
                            worst = worst.max(j_recursion_residual(d, s, aa, z)?);
                            count += 1;
                        }
                    }
                }
            }
            Outcome::numeric(worst, a.tol.unwrap_or(1e-8), count, "relative recursion residual, d = 1..4".into())
        }
        Identity::Lemma5_5 => {
            let mut ok = true;
            let mut worst: f64 = 0.0;
            let mut count = 0;
            for z in z_set() {
                for aa in [25.0, 50.0, 100.0, 200.0] {
                    for s in [Sign::Plus, Sign::Minus] {
                        for c in [j0_main_term_check(s, aa, z)?, j1_main_term_check(s, aa, z)?] {
                            ok &= c.holds();
                            worst = worst.max(c.remainder / (c.envelope + c.numerical_floor));
                            count += 1;
                        }
                    }
                }
            }
            Outcome {
                passed: ok,
                worst_error: Some(worst),
                compared: count,
                detail: "worst_error is the largest remainder / envelope ratio".into(),
            }
        }
        Identity::Lemma5_8 => {
            let z = Complex64::new(0.05, -0.01);
            let mut ok = true;
            let mut notes = Vec::new();
            let mut count = 0;
            for (m, k) in [(2u64, 3u64), (4, 5)] {
                let d = (1..=(m * k) as i64)
                    .map(|l| Ok(nu_sum(l, m, 1, k, z)?.distance))
                    .collect::<polysum::Result<Vec<f64>>>()?;
                count += d.len() as u64;
                let means: Vec<f64> = d.windows(3).map(|w| w.iter().sum::<f64>() / 3.0).collect();
                let mono = means.windows(2).all(|p| p[1] <= p[0]);
                ok &= mono;
                notes.push(format!(
                    "(M={m}, k={k}) {:.2e} -> {:.2e}{}",
                    d[0],
                    d[d.len() - 1],
                    if mono { "" } else { ", not decreasing" }
                ));
            }
            Outcome {
                passed: ok,
                worst_error: None,
                compared: count,
                detail: format!("windowed distance to the cotangent term: {}", notes.join(", ")),
            }
        }
        Identity::Lemma6_2 => {
            let order = n_max(a.order, 200)?;
            let rep = compare_rho(order)?;
            let detail = match rep.first_literal_failure {
                None => format!("rho(h) = rho_(k,1)(h) on all {} arcs", rep.arcs_checked),
                Some((n, h, k, got, want)) => format!(
                    "rho(h) = rho_(k,1)(h) fails on {} of {} arcs, first at N={n}, h/k={h}/{k} ({got} vs {want}); \
                     the congruence equals rho_(k,2)(h) on all but {} arcs",
                    rep.literal_failures, rep.arcs_checked, rep.minus_vs_rho2_failures
                ),
            };
            Outcome::exact(rep.literal_failures == 0, rep.arcs_checked, detail)
        }
        Identity::ThetaSplit => {
            let order = n_max(a.order, 200)?;
            let rep = verify_theta_split(order as i64)?;
            let detail = match &rep.mismatch {
                None => format!("exact through q^{}", order - 1),
                Some(mm) => format!("mismatch at q^{}: {} vs {}", mm.n, mm.lhs, mm.rhs),
            };
            Outcome::exact(rep.holds, rep.compared as u64, detail)
        }
        Identity::Cor1_2 => {
            let n_top = n_max(a.order, 5000)?;
            let inst = CongruenceInstance::all_integers(1, 2, [1; 4])?;
            let s = count_squares_range(&inst, 8 * n_top + 4)?;
            let mut bad = None;
            for n in 0..=n_top {
                if s[(8 * n + 4) as usize] != 16 * divisor_sigma(2 * n + 1)? {
                    bad = Some(n);
                    break;
                }
            }
            let detail = match bad {
                None => format!("s*(8n+4) = 16 sigma(2n+1) for n <= {n_top}"),
                Some(n) => format!("fails at n = {n}"),
            };
            Outcome::exact(bad.is_none(), n_top + 1, detail)
        }
        Identity::Cor1_3 => {
            let n_top = n_max(a.order, 10_000)?;
            let bad = hexagonal2_positivity_failure(n_top)?;
            let detail = match bad {
                None => format!("main term >= phi(8n+5) > 0 for n <= {n_top}"),
                Some(n) => format!("fails at n = {n}"),
            };
            Outcome::exact(bad.is_none(), n_top + 1, detail)
        }
        Identity::Cor1_4 => {
            let n_top = n_max(a.order, 50)?;
            let bad = pentagonal_progression_failure(n_top)?;
            let detail = match bad {
                None => format!("s*(24n+4) = (2/3) sigma(6n+1) + (1/3) a(24n+4) for n <= {n_top}"),
                Some(n) => format!("fails at n = {n}"),
            };
            Outcome::exact(bad.is_none(), n_top + 1, detail)
        }
    })
}

pub fn run(a: VerifyArgs) -> CliResult<Report> {
    let out = check(&a)?;
    let name = a.identity.to_possible_value().expect("no skipped variants").get_name().to_string();
    let mut report = Report::new("verify");
    report
        .set("identity", name)
        .set("worst_error", out.worst_error.map_or(Value::Null, num))
        .set("compared", out.compared)
        .set("detail", out.detail);
    report.passed = Some(out.passed);
    Ok(report)
}
