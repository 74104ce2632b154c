use std::io::Read;
use std::path::Path;

use chrono::NaiveDateTime;

use crate::error::HscError;

/// Summary statistics of a temperature series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesSummary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Population standard deviation.
    pub sd: f64,
}

/// Outdoor temperature readings in strictly increasing time order.
#[derive(Clone, Debug, PartialEq)]
pub struct TempSeries {
    records: Vec<(NaiveDateTime, f64)>,
}

impl TempSeries {
    /// Errors name the CSV row of the offending record, counting the header.
    pub fn new(records: Vec<(NaiveDateTime, f64)>) -> Result<Self, HscError> {
        if records.is_empty() {
            return Err(HscError::EmptySeries);
        }
        for (i, w) in records.windows(2).enumerate() {
            if w[1].0 <= w[0].0 {
                return Err(HscError::Parse {
                    row: i + 3,
                    message: format!("timestamp {} does not follow {}", w[1].0, w[0].0),
                });
            }
        }
        if let Some(i) = records.iter().position(|(_, v)| !v.is_finite()) {
            return Err(HscError::Parse { row: i + 2, message: "temperature is not finite".into() });
        }
        Ok(TempSeries { records })
    }

    pub fn records(&self) -> &[(NaiveDateTime, f64)] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn start(&self) -> NaiveDateTime {
        self.records[0].0
    }

    pub fn end(&self) -> NaiveDateTime {
        self.records[self.records.len() - 1].0
    }

    /// Temperature at `t`, linearly interpolated and held flat outside the
    /// recorded span.
    pub fn at(&self, t: NaiveDateTime) -> f64 {
        let i = self.records.partition_point(|(ts, _)| *ts <= t);
        if i == 0 {
            return self.records[0].1;
        }
        if i == self.records.len() {
            return self.records[i - 1].1;
        }
        let (t0, v0) = self.records[i - 1];
        let (t1, v1) = self.records[i];
        let span = (t1 - t0).num_seconds() as f64;
        let frac = (t - t0).num_seconds() as f64 / span;
        v0 + (v1 - v0) * frac
    }

    pub fn summary(&self) -> SeriesSummary {
        let n = self.records.len() as f64;
        let values = self.records.iter().map(|(_, v)| *v);
        let mean = values.clone().sum::<f64>() / n;
        let var = values.clone().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        SeriesSummary {
            count: self.records.len(),
            min: values.clone().fold(f64::INFINITY, f64::min),
            max: values.fold(f64::NEG_INFINITY, f64::max),
            mean,
            sd: var.sqrt(),
        }
    }
}

/// Parses a two-column CSV of `timestamp,temperature` with a header row.
/// Timestamps are ISO 8601 without offset, with `T` or a space separator.
pub fn parse_temperature_csv<R: Read>(reader: R) -> Result<TempSeries, HscError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut records = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row_no = i + 2;
        let err = |message: String| HscError::Parse { row: row_no, message };
        let row = row.map_err(|e| err(e.to_string()))?;
        if row.len() != 2 {
            return Err(err(format!("expected 2 columns, found {}", row.len())));
        }
        let ts = parse_timestamp(&row[0]).ok_or_else(|| err(format!("bad timestamp {:?}", &row[0])))?;
        let v: f64 = row[1].parse().map_err(|_| err(format!("bad temperature {:?}", &row[1])))?;
        records.push((ts, v));
    }
    TempSeries::new(records)
}

pub fn load_temperature_csv(path: impl AsRef<Path>) -> Result<TempSeries, HscError> {
    parse_temperature_csv(std::fs::File::open(path)?)
}

fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M"]
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_interpolates() {
        let s =
            parse_temperature_csv("timestamp,temperature\n2019-01-07T00:00:00,2.0\n2019-01-07 01:00,4.0\n".as_bytes())
                .unwrap();
        assert_eq!(s.len(), 2);
        let mid = s.start() + chrono::Duration::minutes(15);
        assert!((s.at(mid) - 2.5).abs() < 1e-12);
        assert_eq!(s.at(s.end() + chrono::Duration::hours(3)), 4.0);
        let sum = s.summary();
        assert_eq!((sum.min, sum.max, sum.mean, sum.sd), (2.0, 4.0, 3.0, 1.0));
    }

    #[test]
    fn rejects_empty_unsorted_and_malformed() {
        assert!(matches!(parse_temperature_csv("timestamp,temperature\n".as_bytes()), Err(HscError::EmptySeries)));
        let unsorted = "timestamp,temperature\n2019-01-07T02:00:00,1\n2019-01-07T01:00:00,2\n";
        assert!(matches!(parse_temperature_csv(unsorted.as_bytes()), Err(HscError::Parse { row: 3, .. })));
        let bad = "timestamp,temperature\n2019-01-07T02:00:00,warm\n";
        assert!(matches!(parse_temperature_csv(bad.as_bytes()), Err(HscError::Parse { row: 2, .. })));
    }
}
