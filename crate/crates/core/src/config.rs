//! Apparatus configuration files.
//!
//! A config is a flat TOML table. Every length and power carries an explicit
//! unit and unknown keys are rejected:
//!
//! ```toml
//! wavelength      = "632.8 nm"
//! slit_width      = "10 um"
//! slit_separation = "200 um"
//! screen_distance = "10.4 cm"
//! pixel_pitch     = "7 um"
//! pixel_count     = 3000
//! beam_power      = "0.5 mW"
//! beam_diameter   = "0.8 mm"
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::ApparatusConfig;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    wavelength: String,
    slit_width: String,
    slit_separation: String,
    screen_distance: String,
    pixel_pitch: String,
    pixel_count: i64,
    beam_power: String,
    beam_diameter: String,
    longitudinal_modes: Option<u32>,
    coherence_length: Option<String>,
}

fn split_quantity(text: &str) -> Option<(f64, &str)> {
    let text = text.trim();
    let split = text
        .char_indices()
        .find(|&(_, c)| !(c.is_ascii_digit() || matches!(c, '.' | '+' | '-' | 'e' | 'E')))
        .map(|(i, _)| i)
        .unwrap_or(text.len());
    let value: f64 = text[..split].trim().parse().ok()?;
    Some((value, text[split..].trim()))
}

/// Parses a length such as `"632.8 nm"` or `"10 μm"` into metres.
pub fn parse_length(text: &str) -> Result<f64> {
    let (value, unit) = split_quantity(text)
        .ok_or_else(|| Error::InvalidConfig(format!("cannot parse length {text:?}")))?;
    let scale = match unit {
        "nm" => 1e-9,
        // ASCII, micro sign and Greek mu
        "um" | "µm" | "μm" => 1e-6,
        "mm" => 1e-3,
        "cm" => 1e-2,
        "m" => 1.0,
        "" => {
            return Err(Error::InvalidConfig(format!(
                "length {text:?} has no unit (use nm, um, mm, cm or m)"
            )))
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown length unit {other:?} in {text:?}"
            )))
        }
    };
    Ok(value * scale)
}

/// Parses a power such as `"0.5 mW"` into watts.
pub fn parse_power(text: &str) -> Result<f64> {
    let (value, unit) = split_quantity(text)
        .ok_or_else(|| Error::InvalidConfig(format!("cannot parse power {text:?}")))?;
    let scale = match unit {
        "mW" => 1e-3,
        "W" => 1.0,
        "" => {
            return Err(Error::InvalidConfig(format!(
                "power {text:?} has no unit (use mW or W)"
            )))
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown power unit {other:?} in {text:?}"
            )))
        }
    };
    Ok(value * scale)
}

impl ApparatusConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: ConfigFile =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))?;
        if raw.pixel_count < 0 {
            return Err(Error::InvalidConfig("pixel_count must be positive".into()));
        }
        let config = ApparatusConfig {
            wavelength: parse_length(&raw.wavelength)?,
            slit_width: parse_length(&raw.slit_width)?,
            slit_separation: parse_length(&raw.slit_separation)?,
            screen_distance: parse_length(&raw.screen_distance)?,
            pixel_pitch: parse_length(&raw.pixel_pitch)?,
            pixel_count: raw.pixel_count as usize,
            beam_power: parse_power(&raw.beam_power)?,
            beam_diameter: parse_length(&raw.beam_diameter)?,
            longitudinal_modes: raw.longitudinal_modes,
            coherence_length: raw.coherence_length.as_deref().map(parse_length).transpose()?,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::File {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text).map_err(|e| Error::File {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Renders the config in the file format, lengths in SI base units.
    pub fn to_toml_string(&self) -> String {
        let mut out = format!(
            "wavelength = \"{} m\"\nslit_width = \"{} m\"\nslit_separation = \"{} m\"\n\
             screen_distance = \"{} m\"\npixel_pitch = \"{} m\"\npixel_count = {}\n\
             beam_power = \"{} W\"\nbeam_diameter = \"{} m\"\n",
            self.wavelength,
            self.slit_width,
            self.slit_separation,
            self.screen_distance,
            self.pixel_pitch,
            self.pixel_count,
            self.beam_power,
            self.beam_diameter
        );
        if let Some(modes) = self.longitudinal_modes {
            out.push_str(&format!("longitudinal_modes = {modes}\n"));
        }
        if let Some(len) = self.coherence_length {
            out.push_str(&format!("coherence_length = \"{len} m\"\n"));
        }
        out
    }
}
