use clap::{Args, ValueEnum};
use num_rational::Rational64;
use serde_json::Value;

use polysum::analytic::{transformation_grid_points, GridConfig, GridTarget};
use polysum::farey::arcs;
use polysum::modforms::{eisenstein_e, eisenstein_e2, eta_power};
use polysum::series::{f_j_series, star_theta_series, QSeries, SeriesJson, Subset};

use crate::output::{num, Report, Table};
use crate::params::parse_alpha;
use crate::{CliError, CliResult};

fn ratio(q: Rational64) -> String {
    q.to_string()
}

#[derive(Debug, Args)]
pub struct FareyArgs {
    #[arg(long)]
    pub order: u64,
}

pub fn farey(a: FareyArgs) -> CliResult<Report> {
    let arcs = arcs(a.order)?;
    let mut report = Report::new("farey");
    report.set("order", a.order).set("arc_count", arcs.len() as u64);
    let mut t = Table::new(&["h", "k", "h1", "k1", "h2", "k2", "theta_left", "theta_right", "rho1", "rho2"]);
    for arc in arcs {
        t.push(vec![
            arc.h.into(),
            arc.k.into(),
            arc.h1.into(),
            arc.k1.into(),
            arc.h2.into(),
            arc.k2.into(),
            ratio(arc.theta_left).into(),
            ratio(arc.theta_right).into(),
            arc.rho1.into(),
            arc.rho2.into(),
        ]);
    }
    report.table = Some(t);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    /// F_{r,M,alpha,J}(tau) below q^order.
    Fj,
    /// Theta*_{r,M,alpha}(tau) below q^order.
    Star,
    /// eta^power(multiplier * tau).
    Eta,
    /// The weight-two Eisenstein series E_2.
    E2,
    /// sum over n = 1 (mod 6) of sigma(n) q^n.
    E,
}

fn parse_subset(s: &str) -> Result<Subset, String> {
    s.parse::<Subset>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, value_enum)]
    pub kind: SeriesKind,

    /// Exponent bound: coefficients below q^order are exact.
    #[arg(long, default_value_t = 50)]
    pub order: i64,

    #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
    pub r: i64,

    #[arg(long = "M", default_value_t = 2)]
    pub modulus: u64,

    #[arg(long, value_parser = parse_alpha, default_value = "1,1,1,1")]
    pub alpha: [u64; 4],

    #[arg(long = "J", value_parser = parse_subset, default_value = "1,2,3,4")]
    pub j: Subset,

    /// Argument multiplier of eta.
    #[arg(long, default_value_t = 24)]
    pub multiplier: u64,

    #[arg(long, default_value_t = 4)]
    pub power: u32,
}

pub fn series(a: SeriesArgs) -> CliResult<Report> {
    if a.order < 0 {
        return Err(CliError::Usage("--order must be non-negative".into()));
    }
    let s: QSeries = match a.kind {
        SeriesKind::Fj => f_j_series(a.r, a.modulus, a.alpha, a.j, a.order)?,
        SeriesKind::Star => star_theta_series(a.r, a.modulus, a.alpha, Rational64::from_integer(a.order))?,
        SeriesKind::Eta => eta_power(a.multiplier, a.power, a.order)?,
        SeriesKind::E2 => eisenstein_e2(a.order)?,
        SeriesKind::E => eisenstein_e(a.order)?,
    };
    let wire = SeriesJson::from(&s);
    let mut report = Report::new("series");
    report
        .set("kind", format!("{:?}", a.kind).to_lowercase())
        .set("D", wire.denom)
        .set("order", wire.order.map_or(Value::Null, Value::from))
        .set("floor", wire.floor.map_or(Value::Null, Value::from));
    // With these four fields the JSON output reads back as a series.
    report.set("entries", serde_json::to_value(&wire.entries).expect("plain data serializes"));
    let mut t = Table::new(&["index", "exponent", "coefficient"]);
    for (i, c) in s.iter() {
        t.push(vec![i.into(), ratio(Rational64::new(i, s.denom() as i64)).into(), c.to_string().into()]);
    }
    report.table = Some(t);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Theta,
    FalseTheta,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, value_enum)]
    pub target: TargetArg,

    /// Farey orders.
    #[arg(long, value_delimiter = ',', default_value = "10,20")]
    pub orders: Vec<u64>,

    #[arg(long, default_value_t = 10)]
    pub k_max: u64,

    /// Pass threshold on the largest relative error; 1e-8 for theta and
    /// 1e-6 for false theta when omitted.
    #[arg(long)]
    pub tol: Option<f64>,

    /// Include one row per grid point.
    #[arg(long)]
    pub points: bool,
}

pub fn grid(a: GridArgs) -> CliResult<Report> {
    let (target, tol) = match a.target {
        TargetArg::Theta => (GridTarget::Theta, 1e-8),
        TargetArg::FalseTheta => (GridTarget::FalseTheta, 1e-6),
    };
    let tol = a.tol.unwrap_or(tol);
    let cfg = GridConfig {
        orders: a.orders.clone(),
        k_max: a.k_max,
        ..GridConfig::default()
    };
    let pts = transformation_grid_points(target, &cfg)?;
    let max = pts.iter().map(|p| p.rel_err).fold(0.0, f64::max);
    let mut report = Report::new("grid");
    report
        .set("target", format!("{:?}", a.target).to_lowercase())
        .set("points", pts.len() as u64)
        .set("max_rel_err", num(max))
        .set("tol", num(tol));
    report.passed = Some(max <= tol);
    if a.points {
        let mut t = Table::new(&["r", "M", "alpha", "h", "k", "N", "phi", "rel_err"]);
        for p in &pts {
            let q = p.point;
            t.push(vec![p.r.into(), p.m.into(), p.alpha.into(), q.h.into(), q.k.into(), q.order.into(), num(q.phi), num(p.rel_err)]);
        }
        report.table = Some(t);
    }
    Ok(report)
}
