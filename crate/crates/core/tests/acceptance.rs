//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the libtest
//! harness so the lines are always printed; the process exits non-zero when any
//! criterion fails.

use std::time::Instant;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;

use polysum::analytic::{
    j0_main_term_check, j1_main_term_check, j_recursion_residual, nu_sum, pv_integral, pv_integral_route,
    transformation_grid, GridConfig, GridTarget, PVIntegralParams, PvRoute, Sign,
};
use polysum::arith::{divisor_sigma, divisors};
use polysum::circle::{error_exponent_fit, fj_coefficient_by_contour, ContourConfig, EvalMode, FitOutcome, FjEvaluator};
use polysum::farey::{arcs, compare_rho, reflection_failure};
use polysum::modforms::{
    eisenstein_e, eisenstein_e_from_twists, main_term_rows, verify_theta_split, MainTermFamily, MainTermRow,
};
use polysum::polygonal::{count_polygonal_range, count_squares_range, CongruenceInstance, CountDomain, PolygonalInstance};
use polysum::series::{
    decomposition_check, f_j_series, full_coefficient_polygonal_check, full_coefficient_star_check,
    rplus_generating_check, Subset,
};

type Outcome = polysum::Result<(bool, String)>;

fn jacobi() -> Outcome {
    let n_max = 10_000u64;
    let inst = PolygonalInstance::new(4, [1; 4])?;
    let counts = count_polygonal_range(&inst, n_max, CountDomain::AllIntegers)?;
    let oracle = |n: u64| -> u64 {
        if n == 0 {
            1
        } else {
            8 * divisors(n).into_iter().filter(|d| d % 4 != 0).sum::<u64>()
        }
    };
    let bad = (0..=n_max).find(|&n| counts[n as usize] != oracle(n));
    Ok(match bad {
        None => (true, format!("r_4(n) = 8 sum_(4 !| d | n) d for all n <= {n_max}")),
        Some(n) => (false, format!("mismatch at n = {n}: {} vs {}", counts[n as usize], oracle(n))),
    })
}

fn decomposition() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (r, m, alpha) in [(1i64, 2u64, [1u64; 4]), (5, 4, [1; 4]), (5, 3, [2, 1, 1, 1])] {
        let rep = decomposition_check(r, m, alpha, 500)?;
        ok &= rep.passed;
        notes.push(match rep.first_mismatch {
            None => format!("(r={r},M={m}) {} points", rep.compared),
            Some(mm) => format!("(r={r},M={m}) mismatch at {}/{}", mm.num, mm.den),
        });
    }
    Ok((ok, notes.join("; ")))
}

fn index_identities() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for m in [5u32, 6, 7] {
        let a = rplus_generating_check(m, [1; 4], 200)?;
        let b = full_coefficient_star_check(m as i64, m as u64 - 2, [1; 4], 200)?;
        let c = full_coefficient_polygonal_check(m, [1; 4], 200)?;
        let d = rplus_generating_check(m, [2, 1, 1, 1], 200)?;
        let pass = a.passed && b.passed && c.passed && d.passed;
        ok &= pass;
        notes.push(format!("m={m} {}", if pass { "ok" } else { "MISMATCH" }));
    }
    Ok((ok, format!("r+ generating function and c(n) index maps, n <= 200: {}", notes.join(", "))))
}

fn farey() -> Outcome {
    let n_max = 200;
    let mut structural = true;
    for n in 1..=n_max {
        let a = arcs(n)?;
        let total: Rational64 = a.iter().map(|arc| arc.measure()).sum();
        structural &= total == Rational64::from_integer(1);
        structural &= a.iter().all(|arc| arc.determinants() == (1, 1));
    }
    let reflection = reflection_failure(n_max)?;
    let rho = compare_rho(n_max)?;
    let literal = rho.literal_failures == 0;
    let mut detail = format!(
        "determinants and measure {}; reflection {}; rho(h) = rho_(k,1)(h) fails on {} of {} arcs",
        if structural { "ok" } else { "FAIL" },
        if reflection.is_none() { "ok" } else { "FAIL" },
        rho.literal_failures,
        rho.arcs_checked
    );
    if let Some((n, h, k, got, want)) = rho.first_literal_failure {
        detail += &format!(
            " (first: N={n}, h/k={h}/{k}, congruence gives {got}, rho_(k,1) = {want}); \
             the congruence matches rho_(k,2) on all but {} arcs",
            rho.minus_vs_rho2_failures
        );
    }
    Ok((structural && reflection.is_none() && literal, detail))
}

fn grids() -> Outcome {
    let cfg = GridConfig::default();
    let t = transformation_grid(GridTarget::Theta, &cfg)?;
    let f = transformation_grid(GridTarget::FalseTheta, &cfg)?;
    Ok((
        t.within(1e-8) && f.within(1e-6),
        format!(
            "{} points; theta max rel err {:.2e} (tol 1e-8), false theta {:.2e} (tol 1e-6)",
            t.points, t.max_rel_err, f.max_rel_err
        ),
    ))
}

fn z_set() -> [Complex64; 4] {
    [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.05, -0.01),
        Complex64::new(0.5, 0.8),
        Complex64::new(0.3, -0.4),
    ]
}

fn quadrature_oracles() -> Outcome {
    // Principal-value decomposition against direct quadrature.
    let mut pv_err: f64 = 0.0;
    for mu in [1i64, -1, 2, 3, -5, 8, 17, -40] {
        for (m, alpha, k) in [(1u64, 1u64, 1u64), (2, 1, 3), (4, 2, 5)] {
            for z in [Complex64::new(1.0, 0.0), Complex64::new(0.05, -0.01), Complex64::new(0.02, 0.3)] {
                let p = PVIntegralParams::new(mu, m, alpha, k, z);
                let a = pv_integral(&p)?;
                let b = pv_integral_route(&p, PvRoute::DirectQuadrature)?;
                pv_err = pv_err.max((a - b).norm() / b.norm());
            }
        }
    }
    // Integration-by-parts recursion.
    let mut rec: f64 = 0.0;
    for z in z_set() {
        for d in 1..=4 {
            for a in [1.0, 5.0, 20.0, 50.0] {
                for s in [Sign::Plus, Sign::Minus] {
                    rec = rec.max(j_recursion_residual(d, s, a, z)?);
                }
            }
        }
    }
    // Main terms of J_0 and J_1.
    let mut envelopes = true;
    for z in z_set() {
        for a in [25.0, 50.0, 100.0, 200.0] {
            for s in [Sign::Plus, Sign::Minus] {
                envelopes &= j0_main_term_check(s, a, z)?.holds() && j1_main_term_check(s, a, z)?.holds();
            }
        }
    }
    // Leading term -2 sqrt(M k alpha z) / mu of I(mu, k; z).
    let z = Complex64::new(0.05, -0.01);
    let mut errs = Vec::new();
    for mu in [4i64, 8, 16, 32, 64] {
        let p = PVIntegralParams::new(mu, 2, 1, 3, z);
        let exact = pv_integral_route(&p, PvRoute::ClosedForm)?;
        let lead = Complex64::new(-2.0, 0.0) * (z * 6.0).sqrt() / mu as f64;
        errs.push((lead - exact).norm() / exact.norm());
    }
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    let ok = pv_err <= 1e-6 && rec <= 1e-8 && envelopes && decreasing;
    Ok((
        ok,
        format!(
            "PV routes {pv_err:.2e} (tol 1e-6); recursion {rec:.2e} (tol 1e-8); envelopes {}; leading-term errors {}",
            if envelopes { "hold" } else { "VIOLATED" },
            errs.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>().join(" > ")
        ),
    ))
}

/// Means over a sliding window of three.
fn window_means(v: &[f64]) -> Vec<f64> {
    v.windows(3).map(|w| w.iter().sum::<f64>() / 3.0).collect()
}

fn cotangent() -> Outcome {
    let z = Complex64::new(0.05, -0.01);
    let mut ok = true;
    let mut notes = Vec::new();
    for (m, k) in [(2u64, 3u64), (4, 5)] {
        let mk = (m * k) as i64;
        let d = (1..=mk)
            .map(|l| Ok(nu_sum(l, m, 1, k, z)?.distance))
            .collect::<polysum::Result<Vec<f64>>>()?;
        let w = window_means(&d);
        let mono = w.windows(2).all(|p| p[1] <= p[0]);
        ok &= mono;
        notes.push(format!("(M={m},k={k}) distance {:.1e} -> {:.1e}{}", d[0], d[d.len() - 1], if mono { "" } else { " not monotone" }));
    }
    Ok((ok, notes.join("; ")))
}

fn contour() -> Outcome {
    let (r, m, alpha) = (1i64, 2u64, [1u64; 4]);
    let mut ok = true;
    let mut notes = Vec::new();
    for j in [Subset::FULL, "1,2,3".parse::<Subset>()?] {
        let ev = FjEvaluator::new(r, m, alpha, j)?;
        let exact = f_j_series(r, m, alpha, j, 31)?;
        for (mode, n_max, tol) in [(EvalMode::DirectSeries, 30i64, 1e-6), (EvalMode::Transformed, 20, 1e-4)] {
            let mut worst: f64 = 0.0;
            for n in 0..=n_max {
                let c = exact.coeff(n)?.to_f64().unwrap_or(f64::NAN);
                let rep = fj_coefficient_by_contour(&ev, &ContourConfig::new(n, mode))?;
                worst = worst.max((rep.value - c).norm());
            }
            ok &= worst <= tol;
            notes.push(format!("J={j} {mode} n<={n_max}: {worst:.1e} (tol {tol:.0e})"));
        }
    }
    Ok((ok, notes.join("; ")))
}

fn exact_identities() -> Outcome {
    let e_ok = eisenstein_e_from_twists(1000)? == eisenstein_e(1000)?;
    let split = verify_theta_split(200)?;
    let n_max = 5000u64;
    let inst = CongruenceInstance::all_integers(1, 2, [1; 4])?;
    let s = count_squares_range(&inst, 8 * n_max + 4)?;
    let mut cho_bad = None;
    for n in 0..=n_max {
        if s[(8 * n + 4) as usize] != 16 * divisor_sigma(2 * n + 1)? {
            cho_bad = Some(n);
            break;
        }
    }
    Ok((
        e_ok && split.holds && cho_bad.is_none(),
        format!(
            "E composite to order 1000 {}; theta split to order 200 {}; s*(8n+4) = 16 sigma(2n+1) for n <= {n_max} {}",
            if e_ok { "exact" } else { "MISMATCH" },
            match &split.mismatch {
                None => "exact".to_string(),
                Some(mm) => format!("MISMATCH at q^{}", mm.n),
            },
            match cho_bad {
                None => "exact".to_string(),
                Some(n) => format!("MISMATCH at n = {n}"),
            }
        ),
    ))
}

/// Mean ratio over `(10^d / 2, 10^d]`.
fn decade_means(rows: &[MainTermRow], first: u64) -> Vec<f64> {
    [100u64, 1_000, 10_000, 100_000]
        .iter()
        .map(|&top| {
            let sel: Vec<f64> = rows
                .iter()
                .filter(|r| r.n > top / 2 && r.n <= top && r.n >= first)
                .map(|r| r.ratio)
                .collect();
            sel.iter().sum::<f64>() / sel.len() as f64
        })
        .collect()
}

/// Range of `exact / main` over `n >= 5 * 10^4`.
fn ratio_band(rows: &[MainTermRow]) -> (f64, f64) {
    rows.iter()
        .filter(|r| r.n >= 50_000)
        .map(|r| r.ratio)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

fn asymptotics() -> Outcome {
    let n_max = 100_000u64;
    let mut ok = true;
    let mut notes = Vec::new();
    for family in MainTermFamily::ALL {
        let rows = main_term_rows(family, CountDomain::NonNegative, 1, n_max)?;
        let band = ratio_band(&rows);
        // Diagnostic only: the same band for r+ (all l_j >= 1).
        let plus = ratio_band(&main_term_rows(family, CountDomain::Positive, 50_000, n_max)?);
        let band_ok = band.0 >= 0.9 && band.1 <= 1.1;
        let means = decade_means(&rows, 1);
        let approach = means.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs());
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.residual)).collect();
        let slope = match error_exponent_fit(&pts)? {
            FitOutcome::ExactAgreement => f64::NEG_INFINITY,
            FitOutcome::Fit(f) => f.slope,
        };
        let positive = match family {
            MainTermFamily::Pentagonal => true,
            _ => rows.iter().filter(|r| r.n >= 1000).all(|r| r.exact > 0),
        };
        let pass = band_ok && approach && slope < 1.0 && positive;
        ok &= pass;
        notes.push(format!(
            "{family}: ratio on [5e4,1e5] in [{:.3},{:.3}] (r+ in [{:.3},{:.3}]), decade means {}, residual exponent {slope:.3}{}",
            band.0,
            band.1,
            plus.0,
            plus.1,
            means.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>().join("/"),
            if positive { "" } else { ", NOT positive on [1e3,1e5]" }
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Jacobi four-square counts", jacobi),
        ("theta/false-theta decomposition", decomposition),
        ("index identities", index_identities),
        ("Farey structure and rho congruence", farey),
        ("transformation grids", grids),
        ("quadrature oracles", quadrature_oracles),
        ("cotangent approximation", cotangent),
        ("contour reconstruction", contour),
        ("exact q-series identities", exact_identities),
        ("main-term asymptotics", asymptotics),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        failures += !pass as usize;
        println!(
            "criterion {:>2} {}: {name}: {detail} [{:.1}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criterion(s) failed");
        std::process::exit(1);
    }
}
