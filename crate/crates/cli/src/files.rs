//! Readers and writers for the series, feature and JSON files.

use std::fs;
use std::path::Path;

use emofractal::audio_io::{normalize_peak, read_wav, EmotionLabel};
use emofractal::classify::FeatureVector;
use emofractal::TimeSeries;
use serde::Serialize;

use crate::error::{io_err, CliError};

pub const FEATURES_HEADER: &str = "# emofractal features v1";
pub const SCHEMA_VERSION: u32 = 1;
const CSV_RATE: f64 = 1.0;

fn is_wav(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("wav"))
}

/// Loads a WAV clip (peak-normalized) or a single-column CSV series.
pub fn read_series(path: &Path) -> Result<TimeSeries, CliError> {
    if is_wav(path) {
        return Ok(normalize_peak(&read_wav(path)?)?);
    }
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = line.split(',').next().unwrap_or(line).trim();
        match field.parse::<f64>() {
            Ok(v) => samples.push(v),
            Err(_) if samples.is_empty() && i == 0 => continue,
            Err(_) => {
                return Err(CliError::Input(format!(
                    "{}: line {} is not a number: {field:?}",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(TimeSeries::new(samples, CSV_RATE)?)
}

/// Writes a series as one value per line, or as a 32-bit float WAV when
/// the path ends in `.wav`.
pub fn write_series(path: &Path, samples: &[f64], wav_rate: u32) -> Result<(), CliError> {
    let bytes = if is_wav(path) {
        emofractal::audio_io::encode_wav_f32(samples, wav_rate)
    } else {
        let mut s = String::with_capacity(samples.len() * 20);
        for v in samples {
            s.push_str(&v.to_string());
            s.push('\n');
        }
        s.into_bytes()
    };
    write_bytes(path, &bytes)
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| io_err(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("serializing {}: {e}", path.display())))?;
    text.push('\n');
    write_bytes(path, text.as_bytes())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| io_err(path, e))
}

pub fn features_csv(rows: &[FeatureVector]) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    out.extend_from_slice(FEATURES_HEADER.as_bytes());
    out.push(b'\n');
    let mut w = csv::Writer::from_writer(&mut out);
    let fail = |e: csv::Error| CliError::Input(format!("writing features: {e}"));
    w.write_record(["path", "label", "S", "alpha1", "alpha2"])
        .map_err(fail)?;
    for fv in rows {
        w.write_record([
            fv.path.clone(),
            fv.label.map(|l| l.to_string()).unwrap_or_default(),
            fv.s.to_string(),
            fv.alpha1.to_string(),
            fv.alpha2.to_string(),
        ])
        .map_err(fail)?;
    }
    w.flush()
        .map_err(|e| CliError::Input(format!("writing features: {e}")))?;
    drop(w);
    Ok(out)
}

/// True when the first non-comment line is the feature CSV header.
pub fn is_features_file(path: &Path) -> bool {
    fs::read_to_string(path).is_ok_and(|t| {
        t.lines()
            .find(|l| !l.starts_with('#'))
            .is_some_and(|l| l.trim() == "path,label,S,alpha1,alpha2")
    })
}

pub fn read_features(path: &Path) -> Result<Vec<FeatureVector>, CliError> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    let header = r.headers().map_err(|e| io_err(path, e))?.clone();
    let expected = ["path", "label", "S", "alpha1", "alpha2"];
    if header.iter().collect::<Vec<_>>() != expected {
        return Err(io_err(
            path,
            format!("expected header {}", expected.join(",")),
        ));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let num = |k: usize| {
            rec[k].trim().parse::<f64>().map_err(|_| {
                io_err(
                    path,
                    format!("row {}: {:?} is not a number", i + 1, &rec[k]),
                )
            })
        };
        let label = match rec[1].trim() {
            "" => None,
            l => Some(l.parse::<EmotionLabel>().map_err(|e| io_err(path, e))?),
        };
        out.push(FeatureVector::new(num(2)?, num(3)?, num(4)?).labeled(&rec[0], label));
    }
    Ok(out)
}
