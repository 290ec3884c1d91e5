//! Curve and signature file formats.
//!
//! Curves are CSV with header `t,x0,…,x{n−1}` or JSON
//! `{"dim", "label", "samples": [{"t", "x"}]}`. Floats are written in the
//! shortest form that parses back to the same value, so save/load is
//! bit-exact.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::frenet::ShapeSignature;
use crate::minkowski::LorentzVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Guess from a file extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonCurve {
    dim: usize,
    #[serde(default)]
    label: String,
    samples: Vec<JsonSample>,
}

#[derive(Serialize, Deserialize)]
struct JsonSample {
    t: f64,
    x: Vec<f64>,
}

pub fn load_curve<R: Read>(source: R, format: Format) -> Result<SampledCurve> {
    match format {
        Format::Csv => load_csv(source),
        Format::Json => load_json(source),
    }
}

pub fn load_curve_file(path: &Path) -> Result<SampledCurve> {
    let file = std::fs::File::open(path)?;
    let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
    let c = load_curve(std::io::BufReader::new(file), Format::from_path(path))?;
    if c.label().is_empty() {
        Ok(c.with_label(label))
    } else {
        Ok(c)
    }
}

fn load_csv<R: Read>(source: R) -> Result<SampledCurve> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let header = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if header.len() < 3 || &header[0] != "t" {
        return Err(Error::Parse("expected header t,x0,x1,...".into()));
    }
    for (k, h) in header.iter().skip(1).enumerate() {
        if h != format!("x{k}") {
            return Err(Error::Parse(format!("unexpected column name {h:?}, expected x{k}")));
        }
    }
    let n = header.len() - 1;
    let mut params = Vec::new();
    let mut points = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.len() != n + 1 {
            return Err(Error::DimensionMismatch { expected: n + 1, found: rec.len() });
        }
        let mut vals = Vec::with_capacity(n + 1);
        for field in rec.iter() {
            vals.push(field.parse::<f64>().map_err(|e| Error::Parse(format!("row {}: {field:?}: {e}", row + 2)))?);
        }
        params.push(vals[0]);
        points.push(LorentzVector::new(vals[1..].to_vec())?);
    }
    SampledCurve::new(params, points, "")
}

fn load_json<R: Read>(source: R) -> Result<SampledCurve> {
    let jc: JsonCurve = serde_json::from_reader(source).map_err(|e| Error::Parse(e.to_string()))?;
    let mut params = Vec::with_capacity(jc.samples.len());
    let mut points = Vec::with_capacity(jc.samples.len());
    for s in jc.samples {
        if s.x.len() != jc.dim {
            return Err(Error::DimensionMismatch { expected: jc.dim, found: s.x.len() });
        }
        params.push(s.t);
        points.push(LorentzVector::new(s.x)?);
    }
    SampledCurve::new(params, points, jc.label)
}

pub fn write_curve<W: Write>(sink: W, c: &SampledCurve, format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let mut header = vec!["t".to_string()];
            header.extend((0..c.dim()).map(|k| format!("x{k}")));
            let rows = c
                .params()
                .iter()
                .zip(c.points())
                .map(|(t, p)| std::iter::once(*t).chain(p.as_slice().iter().copied()).collect::<Vec<_>>());
            write_table(sink, &header, rows)
        }
        Format::Json => {
            let jc = JsonCurve {
                dim: c.dim(),
                label: c.label().to_string(),
                samples: c
                    .params()
                    .iter()
                    .zip(c.points())
                    .map(|(t, p)| JsonSample { t: *t, x: p.as_slice().to_vec() })
                    .collect(),
            };
            let mut sink = sink;
            serde_json::to_writer_pretty(&mut sink, &jc).map_err(|e| Error::Parse(e.to_string()))?;
            writeln!(sink)?;
            Ok(())
        }
    }
}

pub fn write_curve_file(path: &Path, c: &SampledCurve) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_curve(std::io::BufWriter::new(file), c, Format::from_path(path))
}

/// Signature table with header `sigma,ktilde1,…,ktilde{n−1}`.
pub fn write_signature<W: Write>(sink: W, sig: &ShapeSignature) -> Result<()> {
    let mut header = vec!["sigma".to_string()];
    header.extend((1..sig.dim()).map(|i| format!("ktilde{i}")));
    let rows = (0..sig.len())
        .map(|j| std::iter::once(sig.sigma()[j]).chain(sig.components().iter().map(|c| c[j])).collect::<Vec<_>>());
    write_table(sink, &header, rows)
}

/// Plain numeric CSV table.
pub fn write_table<W: Write, I: IntoIterator<Item = Vec<f64>>>(sink: W, header: &[String], rows: I) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string())).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Numeric CSV with a header row; returns the header and the columns.
pub fn read_table<R: Read>(source: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let header: Vec<String> =
        rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.iter().map(str::to_string).collect();
    let mut cols = vec![Vec::new(); header.len()];
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.len() != header.len() {
            return Err(Error::DimensionMismatch { expected: header.len(), found: rec.len() });
        }
        for (k, field) in rec.iter().enumerate() {
            cols[k].push(field.parse::<f64>().map_err(|e| Error::Parse(format!("row {}: {field:?}: {e}", row + 2)))?);
        }
    }
    Ok((header, cols))
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse(format!("{other:?}")),
    }
}
