//! Closed-form predictions of the far-field double-slit pattern on a flat
//! line camera.
//!
//! Angles are measured from the slit normal; positions on the camera are
//! `D·tan θ`. Pixel quantities divide by the pixel pitch, and absolute pixel
//! indices are offsets from the camera centre (`pixel_count / 2`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// `sin θ₂ = 1.45 λ/a` locates the first secondary maximum.
pub const SECONDARY_MAX_SINE_FACTOR: f64 = 1.45;
/// Height of the first secondary maximum relative to the central peak.
pub const SECONDARY_MAX_REL_HEIGHT: f64 = 0.047;
/// First non-trivial root of `tan β = β`, in units of π.
pub const SECONDARY_MAX_SINE_FACTOR_EXACT: f64 = 1.430_297;
/// `(sin β / β)²` at that root.
pub const SECONDARY_MAX_REL_HEIGHT_EXACT: f64 = 0.047_190;

/// `a²/(Dλ)` below this counts as far field.
pub const FRAUNHOFER_THRESHOLD: f64 = 0.01;
/// Tolerance for deciding that `d/a` is an integer.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-9;
/// Long dimension of each slit, used for the photon-flux estimate.
pub const DEFAULT_SLIT_LENGTH: f64 = 200e-6;

/// Physical description of laser, double slit and line camera. SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApparatusConfig {
    pub wavelength: f64,
    pub slit_width: f64,
    /// Centre-to-centre slit separation.
    pub slit_separation: f64,
    /// Slit-to-camera distance.
    pub screen_distance: f64,
    pub pixel_pitch: f64,
    pub pixel_count: usize,
    pub beam_power: f64,
    pub beam_diameter: f64,
    /// Laser metadata; recorded, never used in a computation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub longitudinal_modes: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coherence_length: Option<f64>,
}

impl ApparatusConfig {
    /// The apparatus reported for the HeNe double-slit recording:
    /// 632.8 nm, 10 μm slits 200 μm apart, camera 10.4 cm away with
    /// 3000 pixels of 7 μm, 0.5 mW beam of 0.8 mm diameter.
    pub fn reported() -> Self {
        ApparatusConfig {
            wavelength: 632.8e-9,
            slit_width: 10e-6,
            slit_separation: 200e-6,
            screen_distance: 0.104,
            pixel_pitch: 7e-6,
            pixel_count: 3000,
            beam_power: 0.5e-3,
            beam_diameter: 0.8e-3,
            longitudinal_modes: None,
            coherence_length: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("wavelength", self.wavelength),
            ("slit_width", self.slit_width),
            ("slit_separation", self.slit_separation),
            ("screen_distance", self.screen_distance),
            ("pixel_pitch", self.pixel_pitch),
            ("beam_power", self.beam_power),
            ("beam_diameter", self.beam_diameter),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite and strictly positive, got {value}"
                )));
            }
        }
        if self.slit_separation <= self.slit_width {
            return Err(Error::InvalidConfig(format!(
                "slit_separation ({}) must exceed slit_width ({})",
                self.slit_separation, self.slit_width
            )));
        }
        if self.pixel_count < 16 {
            return Err(Error::InvalidConfig(format!(
                "pixel_count must be at least 16, got {}",
                self.pixel_count
            )));
        }
        if let Some(len) = self.coherence_length {
            if !(len.is_finite() && len > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "coherence_length must be strictly positive, got {len}"
                )));
            }
        }
        Ok(())
    }

    /// Pixel index of the zero-order fringe on a centred camera.
    pub fn center_pixel(&self) -> f64 {
        self.pixel_count as f64 / 2.0
    }

    pub fn with_screen_distance(&self, screen_distance: f64) -> Self {
        ApparatusConfig {
            screen_distance,
            ..self.clone()
        }
    }
}

/// A distance on the camera plane, in metres and in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraLength {
    pub meters: f64,
    pub pixels: f64,
}

impl CameraLength {
    fn new(meters: f64, pitch: f64) -> Self {
        CameraLength {
            meters,
            pixels: meters / pitch,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfWidth {
    /// Half-angle θ with `sin θ = λ/a`.
    pub theta: f64,
    /// Distance X from the zero-order fringe to the missing-order fringe.
    pub half_width: CameraLength,
}

impl HalfWidth {
    pub fn full_width(&self) -> CameraLength {
        CameraLength {
            meters: 2.0 * self.half_width.meters,
            pixels: 2.0 * self.half_width.pixels,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondaryMax {
    pub sin_theta: f64,
    pub theta: f64,
    pub offset: CameraLength,
    /// Pixel index of the right-hand secondary maximum.
    pub absolute_pixel: f64,
    /// Whether both secondary maxima fall on the camera.
    pub in_view: bool,
    /// Height relative to the central peak.
    pub rel_height: f64,
}

impl SecondaryMax {
    /// Expected height on an intensity scale with central peak `i0` above
    /// an offset `i_dc`.
    pub fn height(&self, i0: f64, i_dc: f64) -> f64 {
        i_dc + self.rel_height * i0
    }
}

/// Everything the apparatus description predicts about the pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FringePrediction {
    pub missing_order: f64,
    pub missing_order_integral: bool,
    /// Fringes inside the principal maximum, from `round(d/a)`.
    pub fringe_count: u64,
    pub fringe_spacing: CameraLength,
    pub half_angle_theta: f64,
    pub principal_half_width: CameraLength,
    pub principal_width: CameraLength,
    pub secondary_max: SecondaryMax,
    /// Same geometry with the exact side-lobe constants, for comparison.
    pub secondary_max_exact: SecondaryMax,
    pub fraunhofer_number: f64,
    pub fraunhofer_satisfied: bool,
    pub center_pixel: f64,
}

/// Order `d/a` of the interference fringe that falls on the first zero of
/// the single-slit envelope.
pub fn missing_order(slit_separation: f64, slit_width: f64) -> Result<f64> {
    if !(slit_width > 0.0 && slit_separation > 0.0) {
        return Err(Error::domain(format!(
            "slit dimensions must be positive (d = {slit_separation}, a = {slit_width})"
        )));
    }
    if slit_separation <= slit_width {
        return Err(Error::domain(format!(
            "slit separation {slit_separation} must exceed slit width {slit_width}"
        )));
    }
    Ok(slit_separation / slit_width)
}

pub fn is_integral(order: f64) -> bool {
    (order - order.round()).abs() <= INTEGRALITY_TOLERANCE
}

/// Fringes inside the principal maximum: `missing_order − 1` on each side
/// plus the zero-order fringe.
pub fn fringe_count(missing_order: u64) -> Result<u64> {
    if missing_order < 1 {
        return Err(Error::domain("missing order must be at least 1"));
    }
    Ok(2 * (missing_order - 1) + 1)
}

/// Fringe count when the two sides show their missing fringe at different
/// orders.
pub fn fringe_count_asymmetric(missing_left: u64, missing_right: u64) -> Result<u64> {
    if missing_left < 1 || missing_right < 1 {
        return Err(Error::domain("missing orders must be at least 1"));
    }
    Ok((missing_left - 1) + (missing_right - 1) + 1)
}

/// Fringe spacing `w = D·λ/d` on the camera.
pub fn fringe_spacing(config: &ApparatusConfig) -> CameraLength {
    let w = config.screen_distance * config.wavelength / config.slit_separation;
    CameraLength::new(w, config.pixel_pitch)
}

fn envelope_zero_angle(wavelength: f64, slit_width: f64) -> Result<f64> {
    if !(wavelength > 0.0 && slit_width > 0.0) {
        return Err(Error::domain("wavelength and slit width must be positive"));
    }
    let s = wavelength / slit_width;
    if s >= 1.0 {
        return Err(Error::domain(format!(
            "λ/a = {s} ≥ 1: no central diffraction lobe reaches the camera"
        )));
    }
    Ok(s.asin())
}

/// Half-angle `θ = asin(λ/a)` and half width `X = D·tan θ` of the principal
/// maximum.
pub fn principal_half_width(config: &ApparatusConfig) -> Result<HalfWidth> {
    let theta = envelope_zero_angle(config.wavelength, config.slit_width)?;
    let x = config.screen_distance * theta.tan();
    Ok(HalfWidth {
        theta,
        half_width: CameraLength::new(x, config.pixel_pitch),
    })
}

fn secondary_max_with(config: &ApparatusConfig, factor: f64, rel_height: f64) -> Result<SecondaryMax> {
    let sin_theta = factor * config.wavelength / config.slit_width;
    if !(sin_theta < 1.0) {
        return Err(Error::domain(format!(
            "sin θ₂ = {sin_theta} ≥ 1: first secondary maximum does not exist"
        )));
    }
    let theta = sin_theta.asin();
    let offset = CameraLength::new(config.screen_distance * theta.tan(), config.pixel_pitch);
    let center = config.center_pixel();
    let absolute_pixel = center + offset.pixels;
    let in_view = absolute_pixel <= (config.pixel_count - 1) as f64 && center - offset.pixels >= 0.0;
    Ok(SecondaryMax {
        sin_theta,
        theta,
        offset,
        absolute_pixel,
        in_view,
        rel_height,
    })
}

/// First secondary maximum at `sin θ₂ = 1.45 λ/a`, height 0.047 of the
/// central peak.
pub fn secondary_max_geometry(config: &ApparatusConfig) -> Result<SecondaryMax> {
    secondary_max_with(config, SECONDARY_MAX_SINE_FACTOR, SECONDARY_MAX_REL_HEIGHT)
}

/// Variant using the exact sinc² side-lobe root (β ≈ 1.4303π).
pub fn secondary_max_geometry_exact(config: &ApparatusConfig) -> Result<SecondaryMax> {
    secondary_max_with(
        config,
        SECONDARY_MAX_SINE_FACTOR_EXACT,
        SECONDARY_MAX_REL_HEIGHT_EXACT,
    )
}

/// `a²/(D·λ)`; far-field formulas hold when this is well below 1.
pub fn fraunhofer_number(config: &ApparatusConfig) -> f64 {
    config.slit_width.powi(2) / (config.screen_distance * config.wavelength)
}

pub fn fraunhofer_satisfied(config: &ApparatusConfig) -> bool {
    fraunhofer_number(config) < FRAUNHOFER_THRESHOLD
}

/// Screen distance implied by an observed principal-maximum half width.
pub fn infer_distance_from_width(observed_half_width: f64, slit_width: f64, wavelength: f64) -> Result<f64> {
    if !(observed_half_width > 0.0) {
        return Err(Error::domain("observed half width must be positive"));
    }
    let theta = envelope_zero_angle(wavelength, slit_width)?;
    Ok(observed_half_width / theta.tan())
}

/// Screen distance implied by an observed fringe spacing in pixels.
pub fn infer_distance_from_spacing(
    observed_spacing_px: f64,
    pixel_pitch: f64,
    slit_separation: f64,
    wavelength: f64,
) -> Result<f64> {
    if !(observed_spacing_px > 0.0) {
        return Err(Error::domain("observed spacing must be positive"));
    }
    Ok(observed_spacing_px * pixel_pitch * slit_separation / wavelength)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonFlux {
    /// `h·c/λ`, J.
    pub photon_energy: f64,
    /// Photons per second in the whole beam.
    pub total_rate: f64,
    /// Photons per second through one slit.
    pub per_slit_rate: f64,
    /// Slit-to-camera flight time `D/c`, s.
    pub transit_time: f64,
}

/// Photon budget with the beam modelled as a uniform disk and each slit as
/// an `a × DEFAULT_SLIT_LENGTH` rectangle inside it.
pub fn photon_flux_per_slit(config: &ApparatusConfig) -> PhotonFlux {
    let photon_energy = PLANCK * SPEED_OF_LIGHT / config.wavelength;
    let total_rate = config.beam_power / photon_energy;
    let beam_area = std::f64::consts::PI * (config.beam_diameter / 2.0).powi(2);
    let slit_area = config.slit_width * DEFAULT_SLIT_LENGTH;
    PhotonFlux {
        photon_energy,
        total_rate,
        per_slit_rate: total_rate * (slit_area / beam_area).min(1.0),
        transit_time: config.screen_distance / SPEED_OF_LIGHT,
    }
}

/// All closed-form features of the pattern the configuration describes.
pub fn predict(config: &ApparatusConfig) -> Result<FringePrediction> {
    config.validate()?;
    let order = missing_order(config.slit_separation, config.slit_width)?;
    let half = principal_half_width(config)?;
    let fraunhofer = fraunhofer_number(config);
    Ok(FringePrediction {
        missing_order: order,
        missing_order_integral: is_integral(order),
        fringe_count: fringe_count(order.round().max(1.0) as u64)?,
        fringe_spacing: fringe_spacing(config),
        half_angle_theta: half.theta,
        principal_half_width: half.half_width,
        principal_width: half.full_width(),
        secondary_max: secondary_max_geometry(config)?,
        secondary_max_exact: secondary_max_geometry_exact(config)?,
        fraunhofer_number: fraunhofer,
        fraunhofer_satisfied: fraunhofer < FRAUNHOFER_THRESHOLD,
        center_pixel: config.center_pixel(),
    })
}
