//! Turning delimited text files into labeled point sets.
//!
//! Values are taken from the file verbatim — there is no normalization or
//! rescaling step anywhere in the pipeline. Any deliberate rescaling (the
//! `--scale` flag) happens later and uniformly, never per-feature.

use std::collections::BTreeSet;
use std::path::Path;

use sdrn::{ChannelSpec, MultiChannelPoint};

use crate::datasets::{DatasetSpec, LabelRule, BALANCE_CLASSES};
use crate::error::{BenchError, Result};

/// A dataset in memory: one point per row plus its ground-truth class id.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedDataset {
    pub name: String,
    pub points: Vec<MultiChannelPoint>,
    pub labels: Vec<usize>,
    /// Total feature dimension across all channels.
    pub feature_dim: usize,
    /// Number of distinct ground-truth class ids present.
    pub class_count: usize,
    pub channel_spec: ChannelSpec,
}

fn read_rows(path: &Path, delimiter: u8, has_header: bool) -> Result<Vec<Vec<String>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| BenchError::Input(format!("opening {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| BenchError::Input(format!("reading {}: {e}", path.display())))?;
        let row: Vec<String> = record.iter().map(str::to_string).collect();
        // Tolerate blank lines (some UCI files end with one) but nothing else.
        if row.iter().all(|f| f.is_empty()) {
            continue;
        }
        let _ = i;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(BenchError::Input(format!(
            "{} contains no data rows",
            path.display()
        )));
    }
    let width = rows[0].len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(BenchError::Input(format!(
                "{} row {}: expected {} fields, found {}",
                path.display(),
                i + 1,
                width,
                row.len()
            )));
        }
    }
    Ok(rows)
}

fn parse_f64(path: &Path, row: usize, col: usize, raw: &str) -> Result<f64> {
    raw.parse::<f64>().map_err(|_| {
        BenchError::Input(format!(
            "{} row {} column {}: {raw:?} is not a number",
            path.display(),
            row + 1,
            col + 1
        ))
    })
}

fn parse_small_int(path: &Path, row: usize, col: usize, raw: &str) -> Result<usize> {
    let v = parse_f64(path, row, col, raw)?;
    if v.fract() != 0.0 || !(0.0..=u32::MAX as f64).contains(&v) {
        return Err(BenchError::Input(format!(
            "{} row {} column {}: {raw:?} is not a small non-negative integer",
            path.display(),
            row + 1,
            col + 1
        )));
    }
    Ok(v as usize)
}

fn label_for(path: &Path, row: usize, fields: &[String], rule: LabelRule) -> Result<usize> {
    let field = |col: usize| -> Result<&str> {
        fields.get(col).map(String::as_str).ok_or_else(|| {
            BenchError::Input(format!(
                "{} row {}: label column {} is out of range",
                path.display(),
                row + 1,
                col + 1
            ))
        })
    };
    match rule {
        LabelRule::Categorical { col } => {
            let raw = field(col)?;
            BALANCE_CLASSES
                .iter()
                .find(|(name, _)| *name == raw)
                .map(|&(_, id)| id)
                .ok_or_else(|| {
                    BenchError::Input(format!(
                        "{} row {} column {}: unknown class {raw:?}",
                        path.display(),
                        row + 1,
                        col + 1
                    ))
                })
        }
        LabelRule::TruncatedFloat { col } => {
            let v = parse_f64(path, row, col, field(col)?)?;
            if !(0.0..=u32::MAX as f64).contains(&v.trunc()) {
                return Err(BenchError::Input(format!(
                    "{} row {} column {}: class value {v} out of range",
                    path.display(),
                    row + 1,
                    col + 1
                )));
            }
            Ok(v.trunc() as usize)
        }
        LabelRule::Integer { col } => parse_small_int(path, row, col, field(col)?),
        LabelRule::Combined { col_a, col_b, stride } => {
            let a = parse_small_int(path, row, col_a, field(col_a)?)?;
            let b = parse_small_int(path, row, col_b, field(col_b)?)?;
            Ok(stride * a + b)
        }
    }
}

fn build_spec(feature_dim: usize, channels: Option<&[usize]>) -> Result<ChannelSpec> {
    let spec = match channels {
        Some(dims) => {
            let total: usize = dims.iter().sum();
            if total != feature_dim {
                return Err(BenchError::Input(format!(
                    "channel layout {dims:?} sums to {total}, but rows have {feature_dim} features"
                )));
            }
            ChannelSpec::new(dims.to_vec())?
        }
        None => ChannelSpec::single(feature_dim)?,
    };
    Ok(spec)
}

fn assemble(
    name: &str,
    flats: Vec<Vec<f64>>,
    labels: Vec<usize>,
    channels: Option<&[usize]>,
) -> Result<LoadedDataset> {
    let feature_dim = flats[0].len();
    let channel_spec = build_spec(feature_dim, channels)?;
    let mut points = Vec::with_capacity(flats.len());
    for flat in &flats {
        points.push(channel_spec.split(flat)?);
    }
    let class_count = labels.iter().collect::<BTreeSet<_>>().len();
    Ok(LoadedDataset {
        name: name.to_string(),
        points,
        labels,
        feature_dim,
        class_count,
        channel_spec,
    })
}

/// Loads one of the built-in datasets from a verified local file, applying
/// its fixed column mapping and optional channel layout.
pub fn load_dataset(
    path: &Path,
    spec: &DatasetSpec,
    channels: Option<&[usize]>,
) -> Result<LoadedDataset> {
    let rows = read_rows(path, b',', false)?;
    let (start, end) = spec.feature_cols;
    let mut flats = Vec::with_capacity(rows.len());
    let mut labels = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() < end {
            return Err(BenchError::Input(format!(
                "{} row {}: expected at least {} fields, found {}",
                path.display(),
                i + 1,
                end,
                row.len()
            )));
        }
        let mut flat = Vec::with_capacity(end - start);
        for (off, value) in row[start..end].iter().enumerate() {
            flat.push(parse_f64(path, i, start + off, value)?);
        }
        flats.push(flat);
        labels.push(label_for(path, i, row, spec.label)?);
    }
    assemble(spec.name, flats, labels, channels)
}

/// Loads an arbitrary delimited file: every column except the label column
/// is a feature. The label column defaults to the last one. Labels that
/// all parse as small non-negative integers are used as-is; otherwise each
/// distinct string is assigned an id in order of first appearance.
pub fn load_delimited(
    path: &Path,
    delimiter: u8,
    has_header: bool,
    label_col: Option<usize>,
    channels: Option<&[usize]>,
) -> Result<LoadedDataset> {
    let rows = read_rows(path, delimiter, has_header)?;
    let width = rows[0].len();
    if width < 2 {
        return Err(BenchError::Input(format!(
            "{}: rows need at least one feature column plus a label column",
            path.display()
        )));
    }
    let label_col = label_col.unwrap_or(width - 1);
    if label_col >= width {
        return Err(BenchError::Input(format!(
            "label column {} is out of range for rows with {} fields",
            label_col + 1,
            width
        )));
    }

    let mut flats = Vec::with_capacity(rows.len());
    let mut raw_labels = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let mut flat = Vec::with_capacity(width - 1);
        for (col, value) in row.iter().enumerate() {
            if col == label_col {
                continue;
            }
            flat.push(parse_f64(path, i, col, value)?);
        }
        flats.push(flat);
        raw_labels.push(row[label_col].clone());
    }

    let all_integer = raw_labels
        .iter()
        .all(|raw| matches!(raw.parse::<f64>(), Ok(v) if v.fract() == 0.0 && (0.0..=u32::MAX as f64).contains(&v)));
    let labels: Vec<usize> = if all_integer {
        raw_labels
            .iter()
            .map(|raw| raw.parse::<f64>().expect("checked above") as usize)
            .collect()
    } else {
        let mut ids: Vec<String> = Vec::new();
        let mut out = Vec::with_capacity(raw_labels.len());
        for raw in &raw_labels {
            let id = match ids.iter().position(|name| name == raw) {
                Some(id) => id,
                None => {
                    ids.push(raw.clone());
                    ids.len() - 1
                }
            };
            out.push(id);
        }
        out
    };

    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "custom".to_string());
    assemble(&stem, flats, labels, channels)
}
