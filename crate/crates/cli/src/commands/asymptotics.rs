use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use num_rational::Rational64;
use rayon::prelude::*;
use serde_json::Value;

use polysum::circle::{error_exponent_fit, FitOutcome};
use polysum::modforms::{corollary_main_terms, MainTermFamily};
use polysum::polygonal::{
    count_polygonal, count_polygonal_range, count_squares, count_squares_range, CongruenceInstance, CountDomain,
    PolygonalInstance,
};

use crate::output::{num, Report, Table};
use crate::params::{parse_alpha, parse_range};
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// r_{6,(1,1,1,1)}(n) against sigma(2n+1)/16.
    Hexagonal,
    /// r_{6,(1,1,1,2)}(n) against the twisted divisor sum.
    Hexagonal2,
    /// r_{5,(1,1,1,1)}(n) against sigma(6n+1)/24.
    Pentagonal,
    /// s_{r,M,alpha}(n) against s*_{r,M,alpha}(n)/16.
    Star,
}

#[derive(Debug, Args)]
pub struct AsymptoticsArgs {
    #[arg(value_enum)]
    pub target: Target,

    #[arg(long, value_parser = parse_range, default_value = "1..=10000")]
    pub n: RangeInclusive<u64>,

    #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
    pub r: i64,

    #[arg(long = "M", default_value_t = 2)]
    pub modulus: u64,

    #[arg(long, value_parser = parse_alpha, default_value = "1,1,1,1")]
    pub alpha: [u64; 4],

    /// Append exact counts to this CSV as they are computed and reuse the
    /// ones already there.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,

    /// Counts computed between checkpoint writes.
    #[arg(long, default_value_t = 1000)]
    pub chunk: u64,
}

/// What is being counted, with its main term.
enum Problem {
    Family(MainTermFamily, PolygonalInstance),
    Star(CongruenceInstance, CongruenceInstance),
}

impl Problem {
    fn new(a: &AsymptoticsArgs) -> CliResult<Self> {
        let family = match a.target {
            Target::Hexagonal => MainTermFamily::Hexagonal,
            Target::Hexagonal2 => MainTermFamily::Hexagonal2,
            Target::Pentagonal => MainTermFamily::Pentagonal,
            Target::Star => {
                return Ok(Problem::Star(
                    CongruenceInstance::positive(a.r, a.modulus, a.alpha)?,
                    CongruenceInstance::all_integers(a.r, a.modulus, a.alpha)?,
                ))
            }
        };
        let (m, alpha) = family.instance();
        Ok(Problem::Family(family, PolygonalInstance::new(m, alpha)?))
    }

    /// Identifies the counted quantity inside a checkpoint file.
    fn label(&self) -> String {
        match self {
            Problem::Family(f, _) => f.name().to_string(),
            Problem::Star(p, _) => {
                let a = p.original_alpha();
                format!("star:r={},M={},alpha={},{},{},{}", p.r(), p.modulus(), a[0], a[1], a[2], a[3])
            }
        }
    }

    fn exact(&self, n: u64) -> polysum::Result<u64> {
        match self {
            Problem::Family(_, inst) => count_polygonal(inst, n, CountDomain::NonNegative),
            Problem::Star(pos, _) => count_squares(pos, n),
        }
    }

    fn exact_table(&self, n_max: u64) -> polysum::Result<Vec<u64>> {
        match self {
            Problem::Family(_, inst) => count_polygonal_range(inst, n_max, CountDomain::NonNegative),
            Problem::Star(pos, _) => count_squares_range(pos, n_max),
        }
    }

    /// Main terms for `ns`, which is ascending.
    fn main_terms(&self, ns: &[u64]) -> polysum::Result<Vec<f64>> {
        let to_f = |q: Rational64| *q.numer() as f64 / *q.denom() as f64;
        match self {
            Problem::Family(f, _) => ns.iter().map(|&n| Ok(to_f(corollary_main_terms(*f, n)?))).collect(),
            Problem::Star(_, star) => {
                let top = *ns.last().unwrap_or(&0);
                let table = if ns.len() == 1 {
                    vec![count_squares(star, top)?]
                } else {
                    count_squares_range(star, top)?
                };
                let base = if ns.len() == 1 { top } else { 0 };
                Ok(ns.iter().map(|&n| table[(n - base) as usize] as f64 / 16.0).collect())
            }
        }
    }
}

const CHECKPOINT_HEADER: [&str; 3] = ["instance", "n", "exact_count"];

fn read_checkpoint(path: &Path, label: &str) -> CliResult<BTreeMap<u64, u64>> {
    let mut out = BTreeMap::new();
    if !path.exists() || std::fs::metadata(path)?.len() == 0 {
        return Ok(out);
    }
    let mut rd = csv::Reader::from_path(path)?;
    if rd.headers()?.iter().ne(CHECKPOINT_HEADER) {
        return Err(CliError::Usage(format!("{} is not a polysum checkpoint", path.display())));
    }
    for rec in rd.records() {
        let rec = rec?;
        let bad = || CliError::Runtime(format!("malformed checkpoint row {:?} in {}", rec, path.display()));
        if rec.len() != 3 {
            return Err(bad());
        }
        if &rec[0] != label {
            return Err(CliError::Usage(format!(
                "checkpoint {} holds {:?}, not {label:?}",
                path.display(),
                &rec[0]
            )));
        }
        let n: u64 = rec[1].parse().map_err(|_| bad())?;
        let c: u64 = rec[2].parse().map_err(|_| bad())?;
        out.insert(n, c);
    }
    Ok(out)
}

/// Exact counts for every `n` in `ns`, reusing and extending the checkpoint.
fn checkpointed(problem: &Problem, ns: &[u64], path: &Path, chunk: u64) -> CliResult<(Vec<u64>, usize)> {
    let label = problem.label();
    let mut known = read_checkpoint(path, &label)?;
    let reused = ns.iter().filter(|n| known.contains_key(n)).count();
    let missing: Vec<u64> = ns.iter().copied().filter(|n| !known.contains_key(n)).collect();
    if !missing.is_empty() {
        let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
        if fresh {
            w.write_record(CHECKPOINT_HEADER)?;
        }
        for block in missing.chunks(chunk.max(1) as usize) {
            let counts = block
                .par_iter()
                .map(|&n| problem.exact(n))
                .collect::<polysum::Result<Vec<_>>>()?;
            for (&n, &c) in block.iter().zip(&counts) {
                w.write_record([label.as_str(), &n.to_string(), &c.to_string()])?;
                known.insert(n, c);
            }
            w.flush()?;
        }
    }
    Ok((ns.iter().map(|n| known[n]).collect(), reused))
}

pub fn run(a: AsymptoticsArgs) -> CliResult<Report> {
    let problem = Problem::new(&a)?;
    let ns: Vec<u64> = a.n.clone().collect();
    let mut report = Report::new("asymptotics");
    report.set("instance", problem.label());
    let exact = match &a.checkpoint {
        Some(path) => {
            let (v, reused) = checkpointed(&problem, &ns, path, a.chunk)?;
            report.set("checkpoint_reused", reused as u64);
            v
        }
        None => {
            let table = problem.exact_table(*a.n.end())?;
            ns.iter().map(|&n| table[n as usize]).collect()
        }
    };
    let main = problem.main_terms(&ns)?;
    let mut table = Table::new(&["n", "exact_count", "main_term", "residual", "normalized_residual"]);
    let mut pts = Vec::with_capacity(ns.len());
    for ((&n, &e), &m) in ns.iter().zip(&exact).zip(&main) {
        let residual = e as f64 - m;
        let normalized = if m != 0.0 { num(residual / m) } else { Value::Null };
        if n > 0 {
            pts.push((n as f64, residual));
        }
        table.push(vec![n.into(), e.into(), num(m), num(residual), normalized]);
    }
    // A slope read off less than two octaves of n says nothing.
    let span_ok = *a.n.end() >= 4 * (*a.n.start()).max(1);
    let fit = if span_ok { error_exponent_fit(&pts).ok() } else { None };
    match fit {
        Some(FitOutcome::Fit(f)) => {
            report.set("residual_exponent", num(f.slope)).set("residual_exponent_band", num(f.band()));
        }
        Some(FitOutcome::ExactAgreement) => {
            report.set("residual_exponent", Value::Null).set("exact_agreement", true);
        }
        None => {
            report.set("residual_exponent", Value::Null);
        }
    }
    report.table = Some(table);
    Ok(report)
}
