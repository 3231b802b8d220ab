//! CSV writers (and the matching anomaly reader).
//!
//! Every real number is printed with 12 significant digits. Infinite deaths
//! are written as `inf`; an undefined score is an empty field.

use std::io::{Read, Write};

use csv::{ReaderBuilder, WriterBuilder};

use super::align::AlignedSeries;
use super::time::{parse_timestamp, TimeStyle};
use crate::anomaly::{AnomalyRecord, SweepRow};
use crate::error::{Error, Result};
use crate::homology::PersistenceDiagram;
use crate::landscape::Landscape;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`-style formatting: shortest of fixed or scientific, trailing zeros trimmed.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= SIGNIFICANT_DIGITS as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn parse_num(raw: &str) -> Option<f64> {
    match raw {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => raw.parse().ok(),
    }
}

/// `dim,birth,death`
pub fn write_diagram<W: Write>(out: W, diag: &PersistenceDiagram) -> Result<()> {
    let mut w = WriterBuilder::new().from_writer(out);
    w.write_record(["dim", "birth", "death"])?;
    for i in diag.intervals() {
        w.write_record([i.dim.to_string(), fmt_num(i.birth), fmt_num(i.death)])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `level,x,y` with 1-based levels.
pub fn write_landscape<W: Write>(out: W, l: &Landscape) -> Result<()> {
    let mut w = WriterBuilder::new().from_writer(out);
    w.write_record(["level", "x", "y"])?;
    for (k, level) in l.levels().iter().enumerate() {
        for &(x, y) in level.breakpoints() {
            w.write_record([(k + 1).to_string(), fmt_num(x), fmt_num(y)])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `timestamp,y,ema,emvar,z`
pub fn write_anomaly<W: Write>(out: W, records: &[AnomalyRecord], style: TimeStyle) -> Result<()> {
    let mut w = WriterBuilder::new().from_writer(out);
    w.write_record(["timestamp", "y", "ema", "emvar", "z"])?;
    for r in records {
        w.write_record([
            style.format(r.timestamp),
            fmt_num(r.y),
            fmt_num(r.ema),
            fmt_num(r.emvar),
            r.z.map(fmt_num).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Parses the output of [`write_anomaly`].
pub fn read_anomaly<R: Read>(input: R) -> Result<(Vec<AnomalyRecord>, TimeStyle)> {
    let mut rdr = ReaderBuilder::new().from_reader(input);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["timestamp", "y", "ema", "emvar", "z"] {
        return Err(Error::Input {
            path: "<anomaly csv>".into(),
            line: 1,
            message: format!("unexpected header {headers:?}"),
        });
    }
    let mut style = TimeStyle::default();
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let bad = |m: String| Error::Input {
            path: "<anomaly csv>".into(),
            line,
            message: m,
        };
        let (timestamp, s) = parse_timestamp(&rec[0]).map_err(bad)?;
        style = s;
        let num = |i: usize| parse_num(&rec[i]).ok_or_else(|| bad(format!("bad number {:?}", &rec[i])));
        out.push(AnomalyRecord {
            timestamp,
            y: num(1)?,
            ema: num(2)?,
            emvar: num(3)?,
            z: if rec[4].is_empty() { None } else { Some(num(4)?) },
        });
    }
    Ok((out, style))
}

/// Wide bar file: `timestamp,<name>...`
pub fn write_bars<W: Write>(out: W, series: &AlignedSeries) -> Result<()> {
    let mut w = WriterBuilder::new().from_writer(out);
    let mut header = vec!["timestamp".to_string()];
    header.extend(series.names().iter().cloned());
    w.write_record(&header)?;
    for (i, &t) in series.timestamps().iter().enumerate() {
        let mut row = vec![series.style().format(t)];
        row.extend(series.closes().iter().map(|c| fmt_num(c[i])));
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `timestamp,price,z` rows for overlay plots; `price` is the first instrument's close.
pub fn write_plot_data<W: Write>(out: W, series: &AlignedSeries, records: &[AnomalyRecord]) -> Result<()> {
    let mut w = WriterBuilder::new().from_writer(out);
    w.write_record(["timestamp", "price", "z"])?;
    let ts = series.timestamps();
    for r in records {
        let price = ts
            .binary_search(&r.timestamp)
            .map(|i| fmt_num(series.closes()[0][i]))
            .unwrap_or_default();
        w.write_record([
            series.style().format(r.timestamp),
            price,
            r.z.map(fmt_num).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `alpha,max_abs_z,argmax_timestamp`
pub fn write_sweep<W: Write>(out: W, rows: &[SweepRow], style: TimeStyle) -> Result<()> {
    let mut w = WriterBuilder::new().from_writer(out);
    w.write_record(["alpha", "max_abs_z", "argmax_timestamp"])?;
    for r in rows {
        w.write_record([
            fmt_num(r.alpha),
            r.max_abs_z.map(fmt_num).unwrap_or_default(),
            r.argmax.map(|t| style.format(t)).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
