use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::SampledTrace;

const TIME_COLUMN: &str = "time";

/// Row-by-row reader for trace CSV files, usable on unbounded streams.
pub struct TraceReader<R: Read> {
    rows: csv::StringRecordsIntoIter<R>,
    names: Vec<String>,
    time_col: Option<usize>,
    dt: f64,
    next_row: usize,
}

impl<R: Read> TraceReader<R> {
    pub fn new(reader: R, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidTimeStep(dt.to_string()));
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let header = rdr
            .headers()
            .map_err(|e| Error::Csv(e.to_string()))?
            .clone();
        let mut names = Vec::new();
        let mut time_col = None;
        for (i, h) in header.iter().enumerate() {
            if h == TIME_COLUMN && time_col.is_none() {
                time_col = Some(i);
            } else {
                names.push(h.to_string());
            }
        }
        if names.is_empty() {
            return Err(Error::Csv("header lists no variables".into()));
        }
        Ok(Self {
            rows: rdr.into_records(),
            names,
            time_col,
            dt,
            next_row: 0,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn next_row<S: Scalar>(&mut self) -> Option<Result<Vec<S>>> {
        let record = match self.rows.next()? {
            Ok(r) => r,
            Err(e) => {
                return Some(Err(match e.kind() {
                    csv::ErrorKind::UnequalLengths {
                        expected_len, len, ..
                    } => Error::RaggedRow {
                        row: self.next_row,
                        expected: *expected_len as usize,
                        found: *len as usize,
                    },
                    _ => Error::Csv(e.to_string()),
                }))
            }
        };
        let row = self.next_row;
        self.next_row += 1;
        let mut out = Vec::with_capacity(self.names.len());
        let mut name_idx = 0;
        for (i, cell) in record.iter().enumerate() {
            let column = if Some(i) == self.time_col {
                TIME_COLUMN.to_string()
            } else {
                let c = self.names[name_idx].clone();
                name_idx += 1;
                c
            };
            let value: f64 = match cell.parse() {
                Ok(v) => v,
                Err(_) => {
                    return Some(Err(Error::NonNumeric {
                        row,
                        column,
                        value: cell.to_string(),
                    }))
                }
            };
            if Some(i) == self.time_col {
                let expected = row as f64 * self.dt;
                if (value - expected).abs() > 1e-9 {
                    return Some(Err(Error::InconsistentTimeGrid {
                        row,
                        expected: expected.to_string(),
                        found: value.to_string(),
                    }));
                }
                continue;
            }
            let Some(v) = S::from_f64(value).filter(|v| v.is_finite()) else {
                return Some(Err(Error::NonFinite { row, column }));
            };
            out.push(v);
        }
        Some(Ok(out))
    }
}

/// Reads a whole trace from any reader.
pub fn read_csv<S: Scalar, R: Read>(reader: R, dt: S) -> Result<SampledTrace<S>> {
    let mut rows = TraceReader::new(reader, dt.to_f64().unwrap_or(f64::NAN))?;
    let mut trace = SampledTrace::empty(dt, rows.names().to_vec())?;
    while let Some(row) = rows.next_row::<S>() {
        trace.push(row?)?;
    }
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(trace)
}

/// Loads a trace file; columns keep header order, an optional `time` column is validated
/// against the grid and dropped.
pub fn load_csv<S: Scalar>(path: impl AsRef<Path>, dt: S) -> Result<SampledTrace<S>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file, dt)
}

/// Canonical writer: header of variable names, values with 17 significant digits.
pub fn write_csv<S: Scalar, W: Write>(mut w: W, trace: &SampledTrace<S>) -> std::io::Result<()> {
    writeln!(w, "{}", trace.names().join(","))?;
    for row in trace.samples() {
        let cells: Vec<String> = row
            .iter()
            .map(|v| format!("{:.16e}", v.to_f64().unwrap_or(f64::NAN)))
            .collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}
