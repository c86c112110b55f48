use std::ops::RangeInclusive;

use clap::Args;
use serde_json::Value;

use polysum::polygonal::{
    count_polygonal, count_polygonal_range, count_squares, count_squares_range, CongruenceInstance, CountDomain,
    PolygonalInstance,
};

use crate::output::{Report, Table};
use crate::params::{parse_alpha, parse_range, DomainArg};
use crate::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Polygon order, m >= 3.
    #[arg(long, required_unless_present = "squares")]
    pub m: Option<u32>,

    /// Weights alpha_1..alpha_4.
    #[arg(long, value_parser = parse_alpha, default_value = "1,1,1,1")]
    pub alpha: [u64; 4],

    /// `n`, `a..b` or `a..=b`.
    #[arg(long, value_parser = parse_range)]
    pub n: RangeInclusive<u64>,

    /// Print a single count over this domain instead of r, r+ and r*.
    #[arg(long, value_enum)]
    pub domain: Option<DomainArg>,

    /// Count sum alpha_j x_j^2 = n with x_j = r (mod M) instead.
    #[arg(long, requires_all = ["r", "modulus"], conflicts_with_all = ["m", "domain"])]
    pub squares: bool,

    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<i64>,

    #[arg(long = "M")]
    pub modulus: Option<u64>,
}

/// Counts for every `n` in the range, one table per call so that large
/// ranges use the convolution routines.
fn over_range(
    range: &RangeInclusive<u64>,
    single: impl Fn(u64) -> polysum::Result<u64>,
    table: impl Fn(u64) -> polysum::Result<Vec<u64>>,
) -> polysum::Result<Vec<u64>> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo == hi {
        return Ok(vec![single(lo)?]);
    }
    Ok(table(hi)?[lo as usize..=hi as usize].to_vec())
}

pub fn run(a: CountArgs) -> CliResult<Report> {
    let mut report = Report::new("count");
    report.set("alpha", a.alpha.iter().map(|&x| Value::from(x)).collect::<Vec<_>>());
    let ns: Vec<u64> = a.n.clone().collect();
    let table = if a.squares {
        let (r, m) = (a.r.expect("required by clap"), a.modulus.expect("required by clap"));
        report.set("r", r).set("M", m);
        let star = CongruenceInstance::all_integers(r, m, a.alpha)?;
        let pos = CongruenceInstance::positive(r, m, a.alpha)?;
        let s_star = over_range(&a.n, |n| count_squares(&star, n), |t| count_squares_range(&star, t))?;
        let s = over_range(&a.n, |n| count_squares(&pos, n), |t| count_squares_range(&pos, t))?;
        let mut t = Table::new(&["n", "s_star", "s"]);
        for (i, &n) in ns.iter().enumerate() {
            t.push(vec![n.into(), s_star[i].into(), s[i].into()]);
        }
        t
    } else {
        let m = a.m.ok_or_else(|| CliError::Usage("--m is required".into()))?;
        report.set("m", m);
        let inst = PolygonalInstance::new(m, a.alpha)?;
        let count = |d: CountDomain| {
            over_range(&a.n, |n| count_polygonal(&inst, n, d), |t| count_polygonal_range(&inst, t, d))
        };
        match a.domain {
            Some(d) => {
                report.set("domain", format!("{d:?}").to_lowercase());
                let c = count(d.into())?;
                let mut t = Table::new(&["n", "count"]);
                for (i, &n) in ns.iter().enumerate() {
                    t.push(vec![n.into(), c[i].into()]);
                }
                t
            }
            None => {
                let r = count(CountDomain::NonNegative)?;
                let plus = count(CountDomain::Positive)?;
                let star = count(CountDomain::AllIntegers)?;
                let mut t = Table::new(&["n", "r", "r_plus", "r_star"]);
                for (i, &n) in ns.iter().enumerate() {
                    t.push(vec![n.into(), r[i].into(), plus[i].into(), star[i].into()]);
                }
                t
            }
        }
    };
    report.table = Some(table);
    Ok(report)
}
