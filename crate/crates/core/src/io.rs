//! CSV formats for traces and spectra, and atomic file output.
//!
//! A camera trace is `pixel_index,intensity`; an angular trace is
//! `theta,intensity` with θ in radians. A spectrum is `wavenumber,power`,
//! optionally followed by a `log10_power` column.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::spectral::PowerSpectrum;
use crate::synthesis::{SampleAxis, Trace};

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Writes `bytes` to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_error = |e: std::io::Error| Error::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::File {
            path: path.to_path_buf(),
            message: "not a file path".into(),
        })?
        .to_string_lossy();
    let tmp: PathBuf = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(file_error)
}

pub fn trace_to_csv(trace: &Trace) -> String {
    let mut out = String::with_capacity(trace.len() * 24);
    match trace.axis() {
        SampleAxis::Camera { .. } => {
            out.push_str("pixel_index,intensity\n");
            for (i, v) in trace.samples().iter().enumerate() {
                out.push_str(&format!("{i},{v}\n"));
            }
        }
        SampleAxis::Angle { step } => {
            out.push_str("theta,intensity\n");
            let zero = trace.center_pixel();
            for (i, v) in trace.samples().iter().enumerate() {
                out.push_str(&format!("{},{v}\n", (i as f64 - zero) * step));
            }
        }
    }
    out
}

/// Parses a trace CSV. Camera traces take `pixel_pitch`; angular traces
/// recover their step from the θ column.
pub fn trace_from_csv(text: &str, path: &Path, pixel_pitch: f64) -> Result<Trace> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse_error(path, 1, e.to_string()))?
        .clone();
    let angular = match (headers.get(0), headers.get(1), headers.len()) {
        (Some("pixel_index"), Some("intensity"), 2) => false,
        (Some("theta"), Some("intensity"), 2) => true,
        _ => {
            return Err(parse_error(
                path,
                1,
                format!("expected header pixel_index,intensity or theta,intensity, found {:?}", headers.iter().collect::<Vec<_>>()),
            ))
        }
    };
    let mut coords = Vec::new();
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize, name: &str| -> Result<f64> {
            let raw = record.get(i).unwrap_or("");
            raw.parse::<f64>()
                .map_err(|_| parse_error(path, line, format!("{name} {raw:?} is not a number")))
        };
        let coord = field(0, headers.get(0).unwrap_or("coordinate"))?;
        let value = field(1, "intensity")?;
        if !(value.is_finite() && value >= 0.0) {
            return Err(parse_error(path, line, format!("intensity {value} must be finite and non-negative")));
        }
        if !angular && coord != samples.len() as f64 {
            return Err(parse_error(
                path,
                line,
                format!("pixel_index {coord} out of sequence, expected {}", samples.len()),
            ));
        }
        coords.push(coord);
        samples.push(value);
    }
    if samples.is_empty() {
        return Err(parse_error(path, 1, "no data rows"));
    }
    if angular {
        if coords.len() < 2 {
            return Err(parse_error(path, 2, "an angular trace needs at least two rows"));
        }
        let step = (coords[coords.len() - 1] - coords[0]) / (coords.len() - 1) as f64;
        if !(step > 0.0) {
            return Err(parse_error(path, 2, "theta must increase"));
        }
        let zero = (-coords[0] / step).round();
        Trace::new(samples, SampleAxis::Angle { step }, zero)
    } else {
        Trace::camera(samples, pixel_pitch)
    }
}

pub fn read_trace(path: &Path, pixel_pitch: f64) -> Result<Trace> {
    let text = fs::read_to_string(path).map_err(|e| Error::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    trace_from_csv(&text, path, pixel_pitch)
}

pub fn spectrum_to_csv(spectrum: &PowerSpectrum, with_log10: bool) -> String {
    let mut out = String::new();
    out.push_str(if with_log10 {
        "wavenumber,power,log10_power\n"
    } else {
        "wavenumber,power\n"
    });
    for (k, p) in spectrum.powers().iter().enumerate() {
        let w = spectrum.wavenumber(k);
        if with_log10 {
            out.push_str(&format!("{w},{p},{}\n", p.max(f64::MIN_POSITIVE).log10()));
        } else {
            out.push_str(&format!("{w},{p}\n"));
        }
    }
    out
}

/// `(wavenumber, power)` rows of a spectrum CSV.
pub fn spectrum_rows_from_csv(text: &str, path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse_error(path, 1, e.to_string()))?
        .clone();
    if headers.get(0) != Some("wavenumber") || headers.get(1) != Some("power") {
        return Err(parse_error(path, 1, "expected header wavenumber,power"));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(path, e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let parse = |i: usize| {
            record
                .get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| parse_error(path, line, format!("column {} is not a number", i + 1)))
        };
        rows.push((parse(0)?, parse(1)?));
    }
    Ok(rows)
}
