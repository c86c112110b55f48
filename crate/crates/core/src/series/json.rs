use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{QSeries, EXACT};
use crate::error::{Error, Result};

/// Wire form: `{"D": .., "order": .., "floor": .., "entries": [[index, "num", "den"], ..]}`.
///
/// Numerators and denominators are decimal strings so arbitrary precision
/// survives JSON. An `order` of `null` marks an exact (finite) series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    #[serde(rename = "D")]
    pub denom: u64,
    pub order: Option<i64>,
    #[serde(default)]
    pub floor: Option<i64>,
    pub entries: Vec<(i64, String, String)>,
}

impl From<&QSeries> for SeriesJson {
    fn from(s: &QSeries) -> Self {
        SeriesJson {
            denom: s.denom(),
            order: (s.order() != EXACT).then_some(s.order()),
            floor: Some(s.floor()),
            entries: s
                .iter()
                .map(|(i, c)| (i, c.numer().to_string(), c.denom().to_string()))
                .collect(),
        }
    }
}

impl TryFrom<SeriesJson> for QSeries {
    type Error = Error;

    fn try_from(j: SeriesJson) -> Result<Self> {
        let order = j.order.unwrap_or(EXACT);
        let entries = j
            .entries
            .into_iter()
            .map(|(i, n, d)| {
                let n: BigInt = n.parse().map_err(|_| Error::Malformed(format!("bad numerator {n:?}")))?;
                let d: BigInt = d.parse().map_err(|_| Error::Malformed(format!("bad denominator {d:?}")))?;
                if d == BigInt::from(0) {
                    return Err(Error::Malformed("zero denominator".into()));
                }
                Ok((i, BigRational::new(n, d)))
            })
            .collect::<Result<Vec<_>>>()?;
        let floor = j
            .floor
            .unwrap_or_else(|| entries.iter().map(|e| e.0).min().unwrap_or(0).min(0));
        QSeries::from_entries(j.denom, floor, order, entries)
    }
}

impl QSeries {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SeriesJson::from(self)).expect("series serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: SeriesJson = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        j.try_into()
    }
}
