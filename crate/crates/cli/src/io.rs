//! Reading series and datasets, writing CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use ots_core::mining::FeatureMatrix;
use ots_core::{DistanceKind, NumericSeries, OrdinalSeries, OtsDataset, StateSpace};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SeriesFormat {
    /// One integer code per line, optional header.
    Column,
    /// CSV with columns `series_id,t,value`.
    Long,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_code(path: &Path, line: usize, token: &str, states: &StateSpace) -> Result<usize> {
    let code: i64 = token.trim().parse().map_err(|_| {
        parse_error(
            path,
            line,
            format!("'{}' is not an integer code", token.trim()),
        )
    })?;
    if code < 0 || code as u64 > states.n() as u64 {
        return Err(parse_error(
            path,
            line,
            format!("code {code} outside 0..={}", states.n()),
        ));
    }
    Ok(code as usize)
}

/// Reads a column file: one code per line, blank lines ignored, and a
/// non-numeric first line treated as a header.
pub fn load_column(path: &Path, states: &Arc<StateSpace>) -> Result<OrdinalSeries> {
    let text = read(path)?;
    let mut codes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if idx == 0 && line.parse::<i64>().is_err() {
            continue;
        }
        codes.push(parse_code(path, idx + 1, line, states)?);
    }
    if codes.is_empty() {
        return Err(parse_error(path, 1, "no observations"));
    }
    Ok(OrdinalSeries::new(codes, Arc::clone(states))?)
}

/// Reads a long CSV, returning `(series_id, series)` pairs sorted by id
/// (numerically when every id is an integer).
pub fn load_long(path: &Path, states: &Arc<StateSpace>) -> Result<Vec<(String, OrdinalSeries)>> {
    let text = read(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse_error(path, 1, format!("missing column '{name}'")))
    };
    let (id_col, t_col, value_col) = (column("series_id")?, column("t")?, column("value")?);

    let mut groups: BTreeMap<String, Vec<(i64, usize, usize)>> = BTreeMap::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 2;
        let record = record.map_err(|e| parse_error(path, line, e.to_string()))?;
        let field = |c: usize| record.get(c).unwrap_or("");
        let t: i64 = field(t_col).parse().map_err(|_| {
            parse_error(
                path,
                line,
                format!("'{}' is not an integer time index", field(t_col)),
            )
        })?;
        let code = parse_code(path, line, field(value_col), states)?;
        groups
            .entry(field(id_col).to_string())
            .or_default()
            .push((t, code, line));
    }
    if groups.is_empty() {
        return Err(parse_error(path, 1, "no observations"));
    }

    let mut ids: Vec<String> = groups.keys().cloned().collect();
    if ids.iter().all(|id| id.parse::<i64>().is_ok()) {
        ids.sort_by_key(|id| id.parse::<i64>().unwrap_or_default());
    }
    let mut out = Vec::with_capacity(ids.len());
    for id in ids {
        let mut rows = groups.remove(&id).unwrap_or_default();
        rows.sort_by_key(|r| r.0);
        for w in rows.windows(2) {
            if w[1].0 != w[0].0 + 1 {
                return Err(parse_error(
                    path,
                    w[1].2,
                    format!("series '{id}' jumps from t = {} to t = {}", w[0].0, w[1].0),
                ));
            }
        }
        let codes = rows.into_iter().map(|r| r.1).collect();
        out.push((id, OrdinalSeries::new(codes, Arc::clone(states))?));
    }
    Ok(out)
}

pub fn load_series(
    path: &Path,
    format: SeriesFormat,
    states: &Arc<StateSpace>,
) -> Result<Vec<OrdinalSeries>> {
    match format {
        SeriesFormat::Column => Ok(vec![load_column(path, states)?]),
        SeriesFormat::Long => Ok(load_long(path, states)?
            .into_iter()
            .map(|(_, s)| s)
            .collect()),
    }
}

/// One real value per line, optional header.
pub fn load_numeric(path: &Path) -> Result<NumericSeries> {
    let text = read(path)?;
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            _ if idx == 0 => continue,
            _ => {
                return Err(parse_error(
                    path,
                    idx + 1,
                    format!("'{line}' is not a finite number"),
                ))
            }
        }
    }
    Ok(NumericSeries::new(values))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeriesSource {
    Files(Vec<PathBuf>),
    Long { long_csv: PathBuf },
}

/// Dataset description; relative paths resolve against the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub name: String,
    pub states: Vec<String>,
    pub series: SeriesSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<DistanceKind>,
}

impl DatasetManifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = read(path)?;
        serde_json::from_str(&text).map_err(|e| parse_error(path, e.line(), e.to_string()))
    }

    pub fn state_space(&self) -> Result<Arc<StateSpace>> {
        Ok(Arc::new(StateSpace::new(self.states.iter().cloned())?))
    }

    pub fn load(&self, base: &Path) -> Result<OtsDataset> {
        let states = self.state_space()?;
        let series = match &self.series {
            SeriesSource::Files(files) => files
                .iter()
                .map(|f| load_column(&base.join(f), &states))
                .collect::<Result<Vec<_>>>()?,
            SeriesSource::Long { long_csv } => {
                load_series(&base.join(long_csv), SeriesFormat::Long, &states)?
            }
        };
        Ok(OtsDataset::new(
            self.name.clone(),
            states,
            series,
            self.labels.clone(),
        )?)
    }
}

pub fn load_manifest(path: &Path) -> Result<(DatasetManifest, OtsDataset)> {
    let manifest = DatasetManifest::read(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let dataset = manifest.load(base)?;
    Ok((manifest, dataset))
}

/// Long CSV text for every series of `dataset`, ids starting at 1.
pub fn long_csv(dataset: &OtsDataset) -> String {
    let mut out = String::from("series_id,t,value\n");
    for (i, s) in dataset.series().iter().enumerate() {
        for (t, c) in s.codes().iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", i + 1, t + 1, c);
        }
    }
    out
}

/// Writes `manifest.json` and `series.csv` into `dir`; returns the manifest path.
pub fn write_dataset(
    dir: &Path,
    dataset: &OtsDataset,
    distance: Option<DistanceKind>,
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("series.csv"), long_csv(dataset))?;
    let manifest = DatasetManifest {
        name: dataset.name.clone(),
        states: dataset.state_space().labels().to_vec(),
        series: SeriesSource::Long {
            long_csv: PathBuf::from("series.csv"),
        },
        labels: dataset.class_labels().map(<[i64]>::to_vec),
        distance,
    };
    let path = dir.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(path)
}

/// Shortest representation that parses back to the same value.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn matrix_csv(
    header: Option<&[String]>,
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    if let Some(h) = header {
        writer.write_record(h)?;
    }
    for row in rows {
        writer.write_record(row.iter().map(|v| fmt_f64(*v)))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Write(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Feature matrix as CSV, with a trailing `Class` column when labels exist.
pub fn export_feature_matrix(features: &FeatureMatrix, labels: Option<&[i64]>) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = features.column_names();
    if labels.is_some() {
        header.push("Class".into());
    }
    writer.write_record(&header)?;
    for (i, row) in features.rows().iter().enumerate() {
        let mut record: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        if let Some(l) = labels {
            record.push(l[i].to_string());
        }
        writer.write_record(&record)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Write(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
