//! Occupancy CSV (`timestamp,occupancy`) reading and writing.

use std::io::{BufRead, Write};

use chrono::{DateTime, Utc};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{align_and_validate, HourlySeries};

pub const OCCUPANCY_HEADER: &str = "timestamp,occupancy";

pub fn format_timestamp(ts: DateTime<Utc>) -> String {
    ts.format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

pub fn parse_timestamp(s: &str, line: usize) -> Result<DateTime<Utc>> {
    DateTime::parse_from_rfc3339(s.trim())
        .map(|t| t.with_timezone(&Utc))
        .map_err(|e| Error::Parse {
            line,
            msg: format!("bad timestamp {s:?}: {e}"),
        })
}

/// Reads an occupancy CSV. Empty occupancy fields are missing values.
pub fn read_occupancy<T: Scalar>(r: impl BufRead) -> Result<HourlySeries<T>> {
    let mut records = Vec::new();
    let mut lines = r.lines().enumerate();
    match lines.next() {
        Some((_, Ok(h))) if h.trim().trim_start_matches('\u{feff}') == OCCUPANCY_HEADER => {}
        Some((_, Ok(h))) => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header {OCCUPANCY_HEADER:?}, found {h:?}"),
            })
        }
        Some((_, Err(e))) => return Err(e.into()),
        None => return Err(Error::Empty),
    }
    for (i, line) in lines {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (ts, val) = line.split_once(',').ok_or_else(|| Error::Parse {
            line: line_no,
            msg: "expected two fields".into(),
        })?;
        let ts = parse_timestamp(ts, line_no)?;
        let val = val.trim();
        let value = if val.is_empty() {
            None
        } else {
            let v: f64 = val.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad occupancy {val:?}"),
            })?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("occupancy must be a non-negative number, got {val:?}"),
                });
            }
            Some(T::lit(v))
        };
        records.push((ts, value));
    }
    align_and_validate(records)
}

/// Writes an occupancy CSV; missing entries become empty fields.
pub fn write_occupancy<T: Scalar>(s: &HourlySeries<T>, mut w: impl Write) -> Result<()> {
    writeln!(w, "{OCCUPANCY_HEADER}")?;
    for i in 0..s.len() {
        match s.get(i) {
            Some(v) => writeln!(w, "{},{}", format_timestamp(s.timestamp(i)), v)?,
            None => writeln!(w, "{},", format_timestamp(s.timestamp(i)))?,
        }
    }
    Ok(())
}
