//! Parsers for the shared flag formats.

use std::ops::RangeInclusive;

use clap::ValueEnum;
use polysum::polygonal::CountDomain;

/// `1,1,1,1`.
pub fn parse_alpha(s: &str) -> Result<[u64; 4], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated weights, got {s:?}"));
    }
    let mut out = [0u64; 4];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| format!("{p:?} is not a non-negative integer"))?;
        if *o == 0 {
            return Err("weights must be positive".into());
        }
    }
    Ok(out)
}

/// `a..b` (exclusive), `a..=b` or a single `n`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("{t:?} is not a non-negative integer"));
    let r = if let Some((a, b)) = s.split_once("..=") {
        num(a)?..=num(b)?
    } else if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        if b == 0 {
            return Err(format!("empty range {s:?}"));
        }
        a..=b - 1
    } else {
        let n = num(s)?;
        n..=n
    };
    if r.is_empty() {
        return Err(format!("empty range {s:?}"));
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    /// Every variable in Z.
    All,
    /// Every variable >= 0.
    Nonneg,
    /// Every variable >= 1.
    Pos,
}

impl From<DomainArg> for CountDomain {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::All => CountDomain::AllIntegers,
            DomainArg::Nonneg => CountDomain::NonNegative,
            DomainArg::Pos => CountDomain::Positive,
        }
    }
}
