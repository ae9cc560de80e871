//! Labeled datasets as CSV with a header row.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::Label;
use crate::trainer::{normalize_to_unit_box, Dataset, Scaler};

#[derive(Clone, Debug)]
pub struct CsvOptions {
    pub label_column: String,
    /// Rescale features onto `[−1, 1]` and keep the scaler.
    pub normalize: bool,
    /// Label cell text to class. When absent, numeric `1`/`+1` and `-1`
    /// are accepted.
    pub label_map: Option<HashMap<String, Label>>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            label_column: "label".into(),
            normalize: true,
            label_map: None,
        }
    }
}

pub fn load_csv_dataset(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<(Dataset, Option<Scaler>)> {
    read_csv_dataset(File::open(path)?, opts)
}

/// Rows and columns in errors are 1-based; row 1 is the header.
pub fn read_csv_dataset<R: Read>(input: R, opts: &CsvOptions) -> Result<(Dataset, Option<Scaler>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = rdr.headers().map_err(|e| csv_error(1, 0, e))?.clone();
    let label_col = header
        .iter()
        .position(|h| h == opts.label_column)
        .ok_or_else(|| Error::MissingFeature(opts.label_column.clone()))?;
    let names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_col)
        .map(|(_, h)| h.to_string())
        .collect();

    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let row = r + 2;
        let record = record.map_err(|e| csv_error(row, 0, e))?;
        let mut p = Vec::with_capacity(names.len());
        for (c, cell) in record.iter().enumerate() {
            if c == label_col {
                labels.push(parse_label(cell, opts.label_map.as_ref())?);
                continue;
            }
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::Csv {
                    row,
                    column: c + 1,
                    message: format!("`{cell}` in column `{}` is not a finite number", &header[c]),
                })?;
            p.push(v);
        }
        points.push(p);
    }

    let ds = Dataset::new(points, labels, Some(names))?;
    if opts.normalize {
        let (ds, scaler) = normalize_to_unit_box(&ds)?;
        Ok((ds, Some(scaler)))
    } else {
        Ok((ds, None))
    }
}

fn parse_label(cell: &str, map: Option<&HashMap<String, Label>>) -> Result<Label> {
    match map {
        Some(m) => m.get(cell).copied(),
        None => match cell {
            "1" | "+1" | "1.0" => Some(Label::Positive),
            "-1" | "-1.0" => Some(Label::Negative),
            _ => None,
        },
    }
    .ok_or_else(|| Error::UnknownLabel(cell.to_string()))
}

fn csv_error(row: usize, column: usize, e: csv::Error) -> Error {
    Error::Csv {
        row,
        column,
        message: e.to_string(),
    }
}

/// Write features then a `label` column with `1`/`-1`.
pub fn write_csv_dataset<W: Write>(dataset: &Dataset, out: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(out);
    let mut header = dataset.feature_names.clone();
    header.push("label".into());
    wr.write_record(&header).map_err(|e| csv_error(1, 0, e))?;
    for (i, (p, l)) in dataset.points.iter().zip(&dataset.labels).enumerate() {
        let mut rec: Vec<String> = p.iter().map(f64::to_string).collect();
        rec.push(format!("{}", l.value() as i64));
        wr.write_record(&rec).map_err(|e| csv_error(i + 2, 0, e))?;
    }
    wr.flush()?;
    Ok(())
}

pub fn save_csv_dataset(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    write_csv_dataset(dataset, File::create(path)?)
}
