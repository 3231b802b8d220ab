//! Minute-bar CSV ingestion.
//!
//! Three layouts are accepted:
//!
//! * per-instrument: `timestamp,close` (extra columns ignored), one file per instrument
//! * wide: `timestamp,<name1>,<name2>,...`, one close column per instrument; an
//!   empty cell marks a missing minute for that instrument
//! * long: `timestamp,symbol,close`, instruments in order of first appearance
//!
//! Timestamps are ISO-8601 at minute resolution (`2010-05-06T14:32`,
//! `2010-05-06 14:32:00`) or integer minutes since the Unix epoch.

use std::fs::File;
use std::path::Path;

use csv::{ReaderBuilder, StringRecord};

use super::time::{parse_timestamp, Minute, TimeStyle};
use crate::error::{Error, Result};

/// One closing price at one minute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarRecord {
    pub timestamp: Minute,
    pub close: f64,
}

/// Column names and delimiter for bar files.
#[derive(Debug, Clone, PartialEq)]
pub struct FormatSpec {
    pub timestamp_column: String,
    pub close_column: String,
    pub symbol_column: String,
    pub delimiter: u8,
}

impl Default for FormatSpec {
    fn default() -> Self {
        Self {
            timestamp_column: "timestamp".into(),
            close_column: "close".into(),
            symbol_column: "symbol".into(),
            delimiter: b',',
        }
    }
}

/// Bars for several instruments, as read from disk and not yet aligned.
#[derive(Debug, Clone, PartialEq)]
pub struct InstrumentBars {
    pub name: String,
    pub bars: Vec<BarRecord>,
}

struct Table {
    path: String,
    headers: StringRecord,
    rows: Vec<(u64, StringRecord)>,
}

fn open_table(path: &Path, spec: &FormatSpec) -> Result<Table> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut rdr = ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .trim(csv::Trim::All)
        .from_reader(file);
    let display = path.display().to_string();
    let headers = rdr.headers()?.clone();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Input {
            path: display.clone(),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        rows.push((line, rec));
    }
    Ok(Table {
        path: display,
        headers,
        rows,
    })
}

impl Table {
    fn column(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Input {
                path: self.path.clone(),
                line: 1,
                message: format!("missing column {name:?}"),
            })
    }

    fn err(&self, line: u64, message: impl Into<String>) -> Error {
        Error::Input {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }

    fn timestamp(&self, line: u64, raw: &str, style: &mut Option<TimeStyle>) -> Result<Minute> {
        let (m, s) = parse_timestamp(raw).map_err(|msg| self.err(line, msg))?;
        match style {
            Some(prev) if *prev != s => Err(self.err(line, "mixed timestamp formats")),
            _ => {
                *style = Some(s);
                Ok(m)
            }
        }
    }

    fn price(&self, line: u64, raw: &str) -> Result<f64> {
        let v: f64 = raw
            .parse()
            .map_err(|_| self.err(line, format!("cannot parse price {raw:?}")))?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(self.err(line, format!("price must be positive, got {raw}")));
        }
        Ok(v)
    }
}

fn push_increasing(t: &Table, line: u64, bars: &mut Vec<BarRecord>, bar: BarRecord) -> Result<()> {
    if let Some(prev) = bars.last() {
        if bar.timestamp <= prev.timestamp {
            return Err(t.err(
                line,
                if bar.timestamp == prev.timestamp {
                    "duplicated timestamp"
                } else {
                    "timestamps not increasing"
                },
            ));
        }
    }
    bars.push(bar);
    Ok(())
}

/// Reads one instrument's `timestamp,close` file.
pub fn read_bars(path: impl AsRef<Path>, spec: &FormatSpec) -> Result<Vec<BarRecord>> {
    Ok(read_bars_styled(path.as_ref(), spec)?.0)
}

pub(crate) fn read_bars_styled(path: &Path, spec: &FormatSpec) -> Result<(Vec<BarRecord>, TimeStyle)> {
    let t = open_table(path, spec)?;
    let ts = t.column(&spec.timestamp_column)?;
    let cl = t.column(&spec.close_column)?;
    let mut style = None;
    let mut bars = Vec::with_capacity(t.rows.len());
    for (line, rec) in &t.rows {
        let get = |i: usize| rec.get(i).ok_or_else(|| t.err(*line, "short row"));
        let timestamp = t.timestamp(*line, get(ts)?, &mut style)?;
        let close = t.price(*line, get(cl)?)?;
        push_increasing(&t, *line, &mut bars, BarRecord { timestamp, close })?;
    }
    Ok((bars, style.unwrap_or_default()))
}

/// Reads a wide file: a timestamp column followed by one close column per instrument.
pub fn read_wide(path: impl AsRef<Path>, spec: &FormatSpec) -> Result<(Vec<InstrumentBars>, TimeStyle)> {
    let t = open_table(path.as_ref(), spec)?;
    let ts = t.column(&spec.timestamp_column)?;
    let mut out: Vec<InstrumentBars> = t
        .headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != ts)
        .map(|(_, h)| InstrumentBars {
            name: h.to_string(),
            bars: Vec::new(),
        })
        .collect();
    if out.is_empty() {
        return Err(t.err(1, "no instrument columns"));
    }
    let cols: Vec<usize> = (0..t.headers.len()).filter(|&i| i != ts).collect();
    let mut style = None;
    for (line, rec) in &t.rows {
        if rec.len() != t.headers.len() {
            return Err(t.err(*line, format!("expected {} fields, got {}", t.headers.len(), rec.len())));
        }
        let timestamp = t.timestamp(*line, &rec[ts], &mut style)?;
        for (inst, &c) in out.iter_mut().zip(&cols) {
            let raw = &rec[c];
            if raw.is_empty() {
                continue;
            }
            let close = t.price(*line, raw)?;
            push_increasing(&t, *line, &mut inst.bars, BarRecord { timestamp, close })?;
        }
    }
    Ok((out, style.unwrap_or_default()))
}

/// Reads a long file with `timestamp,symbol,close` rows.
pub fn read_long(path: impl AsRef<Path>, spec: &FormatSpec) -> Result<(Vec<InstrumentBars>, TimeStyle)> {
    let t = open_table(path.as_ref(), spec)?;
    let ts = t.column(&spec.timestamp_column)?;
    let sy = t.column(&spec.symbol_column)?;
    let cl = t.column(&spec.close_column)?;
    let mut out: Vec<InstrumentBars> = Vec::new();
    let mut style = None;
    for (line, rec) in &t.rows {
        let get = |i: usize| rec.get(i).ok_or_else(|| t.err(*line, "short row"));
        let timestamp = t.timestamp(*line, get(ts)?, &mut style)?;
        let symbol = get(sy)?;
        let close = t.price(*line, get(cl)?)?;
        let idx = match out.iter().position(|i| i.name == symbol) {
            Some(i) => i,
            None => {
                out.push(InstrumentBars {
                    name: symbol.to_string(),
                    bars: Vec::new(),
                });
                out.len() - 1
            }
        };
        push_increasing(&t, *line, &mut out[idx].bars, BarRecord { timestamp, close })?;
    }
    if out.is_empty() {
        return Err(t.err(1, "no rows"));
    }
    Ok((out, style.unwrap_or_default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn three_rows() {
        let f = file("timestamp,close\n2010-05-06T09:30,100\n2010-05-06T09:31,101.5\n2010-05-06T09:32,99\n");
        let bars = read_bars(f.path(), &FormatSpec::default()).unwrap();
        assert_eq!(bars.len(), 3);
        assert_eq!(bars[1].close, 101.5);
    }

    #[test]
    fn zero_close_names_the_line() {
        let f = file("timestamp,close\n1,100\n2,0\n");
        match read_bars(f.path(), &FormatSpec::default()) {
            Err(Error::Input { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("positive"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_timestamp_rejected() {
        let f = file("timestamp,close\n1,100\n1,101\n");
        let err = read_bars(f.path(), &FormatSpec::default()).unwrap_err();
        assert!(err.to_string().contains("duplicated"), "{err}");
    }

    #[test]
    fn malformed_row_reports_line() {
        let f = file("timestamp,close\n1,100\n2,abc\n");
        let err = read_bars(f.path(), &FormatSpec::default()).unwrap_err();
        assert!(matches!(err, Error::Input { line: 3, .. }), "{err}");
    }

    #[test]
    fn custom_columns_and_delimiter() {
        let f = file("Date;Open;Close\n2010-05-06 09:30:00;1;100\n2010-05-06 09:31:00;1;100.5\n");
        let spec = FormatSpec {
            timestamp_column: "date".into(),
            delimiter: b';',
            ..FormatSpec::default()
        };
        assert_eq!(read_bars(f.path(), &spec).unwrap().len(), 2);
    }

    #[test]
    fn wide_with_gap() {
        let f = file("timestamp,es,ym\n10,100,200\n11,,201\n12,101,202\n");
        let (inst, style) = read_wide(f.path(), &FormatSpec::default()).unwrap();
        assert_eq!(style, TimeStyle::EpochMinutes);
        assert_eq!(inst.len(), 2);
        assert_eq!(inst[0].name, "es");
        assert_eq!(inst[0].bars.len(), 2);
        assert_eq!(inst[1].bars.len(), 3);
    }

    #[test]
    fn long_groups_by_symbol() {
        let f = file("timestamp,symbol,close\n10,a,1\n10,b,2\n11,a,1.1\n11,b,2.1\n");
        let (inst, _) = read_long(f.path(), &FormatSpec::default()).unwrap();
        assert_eq!(inst.iter().map(|i| i.name.as_str()).collect::<Vec<_>>(), ["a", "b"]);
        assert_eq!(inst[1].bars[1].close, 2.1);
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = read_bars("/nonexistent/bars.csv", &FormatSpec::default()).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
