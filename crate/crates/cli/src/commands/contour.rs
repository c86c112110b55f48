use clap::{Args, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use polysum::circle::{coefficient_by_contour, fj_coefficient_by_contour, qseries_evaluator, ContourConfig, EvalMode, FjEvaluator};
use polysum::series::{c_coefficient, QSeries, Subset};

use crate::output::{num, Report, Table};
use crate::params::parse_alpha;
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Direct,
    Transformed,
}

impl From<ModeArg> for EvalMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Direct => EvalMode::DirectSeries,
            ModeArg::Transformed => EvalMode::Transformed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesArg {
    /// The constant series 1.
    Const,
}

fn parse_subset(s: &str) -> Result<Subset, String> {
    s.parse::<Subset>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct ContourArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
    pub r: i64,

    #[arg(long = "M", default_value_t = 2)]
    pub modulus: u64,

    #[arg(long, value_parser = parse_alpha, default_value = "1,1,1,1")]
    pub alpha: [u64; 4],

    /// Indices carrying a theta factor; the rest carry false theta factors.
    #[arg(long = "J", value_parser = parse_subset, default_value = "1,2,3,4")]
    pub j: Subset,

    #[arg(long, allow_negative_numbers = true)]
    pub n: i64,

    #[arg(long, value_enum, default_value_t = ModeArg::Direct)]
    pub mode: ModeArg,

    /// Integrate a fixed test series instead of F_J.
    #[arg(long, value_enum, conflicts_with = "mode")]
    pub series: Option<SeriesArg>,

    /// Absolute error target for the arc sum.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,

    /// Include one row per arc.
    #[arg(long)]
    pub arcs: bool,
}

pub fn run(a: ContourArgs) -> CliResult<Report> {
    if !(a.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let mut report = Report::new("contour");
    let (rep, exact) = match a.series {
        Some(SeriesArg::Const) => {
            let one = QSeries::constant(BigRational::from_integer(1.into()));
            let ev = qseries_evaluator(&one)?;
            report.set("series", "const");
            (coefficient_by_contour(&ev, a.n, a.tol)?, if a.n == 0 { 1.0 } else { 0.0 })
        }
        None => {
            let ev = FjEvaluator::new(a.r, a.modulus, a.alpha, a.j)?;
            let cfg = ContourConfig {
                n: a.n,
                mode: a.mode.into(),
                tolerance: a.tol,
            };
            let exact = c_coefficient(a.r, a.modulus, a.alpha, a.j, a.n)?
                .to_f64()
                .ok_or_else(|| CliError::Runtime("exact coefficient does not fit in f64".into()))?;
            report
                .set("r", a.r)
                .set("M", a.modulus)
                .set("alpha", a.alpha.to_vec())
                .set("J", a.j.to_string())
                .set("mode", cfg.mode.to_string());
            (fj_coefficient_by_contour(&ev, &cfg)?, exact)
        }
    };
    report
        .set("n", rep.n)
        .set("order", rep.order)
        .set("arc_count", rep.arcs.len() as u64)
        .set("value_re", num(rep.value.re))
        .set("value_im", num(rep.value.im))
        .set("exact", num(exact))
        .set("abs_err", num((rep.value - exact).norm()))
        .set("error_estimate", num(rep.error_estimate));
    if a.arcs {
        let mut t = Table::new(&["h", "k", "re", "im", "quad_error"]);
        for c in &rep.arcs {
            t.push(vec![c.h.into(), c.k.into(), num(c.value.re), num(c.value.im), num(c.error)]);
        }
        report.table = Some(t);
    }
    Ok(report)
}
