//! Intensity traces on a pixel line: the exact two-slit model sampled on a
//! flat camera, the Fourier-envelope model on a window-normalised
//! coordinate, and the angular reference pattern.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ApparatusConfig;

pub const MIN_TRACE_LEN: usize = 16;
pub const DEFAULT_PIXEL_COUNT: usize = 3000;
pub const DEFAULT_PIXEL_PITCH: f64 = 7e-6;
pub const REFERENCE_POINTS: usize = 10_004;
pub const REFERENCE_STEP: f64 = 2e-4;

/// What one step between consecutive samples means physically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SampleAxis {
    /// Camera pixels of the given pitch (m). Spectral bins are wavenumbers
    /// in cycles per window.
    Camera { pixel_pitch: f64 },
    /// Angular samples of the given step (rad). Spectral bins convert to
    /// cycles per radian.
    Angle { step: f64 },
}

/// Non-negative intensity samples on a line, with axis metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    samples: Vec<f64>,
    axis: SampleAxis,
    /// Index of the zero-order fringe.
    center_pixel: f64,
}

impl Trace {
    pub fn new(samples: Vec<f64>, axis: SampleAxis, center_pixel: f64) -> Result<Self> {
        if samples.len() < MIN_TRACE_LEN {
            return Err(Error::TraceTooShort {
                len: samples.len(),
                min: MIN_TRACE_LEN,
            });
        }
        if let Some((i, v)) = samples
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidTrace(format!(
                "sample {i} is {v}; intensities must be finite and non-negative"
            )));
        }
        if !center_pixel.is_finite() {
            return Err(Error::InvalidTrace("center pixel must be finite".into()));
        }
        Ok(Trace {
            samples,
            axis,
            center_pixel,
        })
    }

    /// Camera trace with the zero order at the middle of the line.
    pub fn camera(samples: Vec<f64>, pixel_pitch: f64) -> Result<Self> {
        let center = samples.len() as f64 / 2.0;
        Trace::new(samples, SampleAxis::Camera { pixel_pitch }, center)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn axis(&self) -> SampleAxis {
        self.axis
    }

    pub fn pixel_pitch(&self) -> Option<f64> {
        match self.axis {
            SampleAxis::Camera { pixel_pitch } => Some(pixel_pitch),
            SampleAxis::Angle { .. } => None,
        }
    }

    pub fn center_pixel(&self) -> f64 {
        self.center_pixel
    }

    pub fn with_center_pixel(mut self, center_pixel: f64) -> Self {
        self.center_pixel = center_pixel;
        self
    }

    pub fn scaled(&self, factor: f64) -> Result<Trace> {
        Trace::new(
            self.samples.iter().map(|v| v * factor).collect(),
            self.axis,
            self.center_pixel,
        )
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::MAX, f64::min)
    }
}

/// Window-normalised coordinate of pixel `i`: one envelope period spans the
/// window, zero at `center`.
pub fn window_coordinate(i: usize, center: f64, n: usize) -> f64 {
    2.0 * PI * (i as f64 - center) / n as f64
}

/// Diffraction envelope `F` on the window coordinate `x ∈ [−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum EnvelopeModel {
    /// `F ≡ 1`: no diffraction envelope.
    Uniform,
    /// `(sin x / x)²`, zeros at the window edges.
    ExactSinc2,
    /// `(1 + cos x)/2`.
    RaisedCosine,
    /// `(1 − A)/2 + cos x/2 + A·cos 2x/2`.
    Extended { a: f64 },
}

impl EnvelopeModel {
    pub fn extended(a: f64) -> Result<Self> {
        let model = EnvelopeModel::Extended { a };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if let EnvelopeModel::Extended { a } = *self {
            if !(0.0..1.0).contains(&a) {
                return Err(Error::domain(format!(
                    "extended envelope needs 0 ≤ A < 1, got {a}"
                )));
            }
        }
        Ok(())
    }

    pub fn value(&self, x: f64) -> f64 {
        match *self {
            EnvelopeModel::Uniform => 1.0,
            EnvelopeModel::ExactSinc2 => {
                if x == 0.0 {
                    1.0
                } else {
                    let s = x.sin() / x;
                    s * s
                }
            }
            EnvelopeModel::RaisedCosine => (1.0 + x.cos()) / 2.0,
            EnvelopeModel::Extended { a } => (1.0 - a) / 2.0 + x.cos() / 2.0 + a * (2.0 * x).cos() / 2.0,
        }
    }

    /// Cosine-series coefficients `(a₀, a₁, a₂)` for the truncated models.
    pub fn fourier_coefficients(&self) -> Option<(f64, f64, f64)> {
        match *self {
            EnvelopeModel::Uniform => Some((1.0, 0.0, 0.0)),
            EnvelopeModel::ExactSinc2 => None,
            EnvelopeModel::RaisedCosine => Some((0.5, 0.5, 0.0)),
            EnvelopeModel::Extended { a } => Some(((1.0 - a) / 2.0, 0.5, a / 2.0)),
        }
    }
}

/// Validated envelope value; errors for an extended envelope with A ≥ 1.
pub fn envelope(model: EnvelopeModel, x: f64) -> Result<f64> {
    model.validate()?;
    Ok(model.value(x))
}

/// Parameters of `I = F(x)·I₀·[1 + V cos(K x)] + I_DC`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisParams {
    /// `I₁ + I₂`.
    pub i0: f64,
    pub visibility: f64,
    /// Detector offset.
    pub i_dc: f64,
    /// Fringe wavenumber, cycles per window.
    pub k: f64,
    pub envelope: EnvelopeModel,
    /// Standard deviation of additive Gaussian noise.
    pub noise_sigma: Option<f64>,
    pub rng_seed: u64,
    pub pixel_pitch: f64,
}

impl Default for SynthesisParams {
    fn default() -> Self {
        SynthesisParams {
            i0: 787.0,
            visibility: 1.0,
            i_dc: 0.0,
            k: 44.0,
            envelope: EnvelopeModel::RaisedCosine,
            noise_sigma: None,
            rng_seed: 0,
            pixel_pitch: DEFAULT_PIXEL_PITCH,
        }
    }
}

impl SynthesisParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(0.0..=1.0).contains(&self.visibility) {
            return bad(format!("visibility must lie in [0, 1], got {}", self.visibility));
        }
        if !(self.i0.is_finite() && self.i0 > 0.0) {
            return bad(format!("I0 must be positive, got {}", self.i0));
        }
        if !(self.i_dc.is_finite() && self.i_dc >= 0.0) {
            return bad(format!("I_DC must be non-negative, got {}", self.i_dc));
        }
        if !(self.k.is_finite() && self.k > 1.0) {
            return bad(format!("K must exceed 1, got {}", self.k));
        }
        if let Some(sigma) = self.noise_sigma {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return bad(format!("noise sigma must be non-negative, got {sigma}"));
            }
        }
        if !(self.pixel_pitch.is_finite() && self.pixel_pitch > 0.0) {
            return bad(format!("pixel pitch must be positive, got {}", self.pixel_pitch));
        }
        self.envelope
            .validate()
            .map_err(|e| Error::InvalidParams(e.to_string()))
    }
}

fn add_noise(samples: &mut [f64], sigma: Option<f64>, seed: u64) {
    let Some(sigma) = sigma.filter(|s| *s > 0.0) else {
        return;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("sigma validated");
    for v in samples.iter_mut() {
        *v = (*v + normal.sample(&mut rng)).max(0.0);
    }
}

/// Samples the Fourier-envelope model on `n_pixels` pixels centred at
/// `n_pixels / 2`.
pub fn synthesize_trace(params: &SynthesisParams, n_pixels: usize) -> Result<Trace> {
    params.validate()?;
    if n_pixels < MIN_TRACE_LEN {
        return Err(Error::TraceTooShort {
            len: n_pixels,
            min: MIN_TRACE_LEN,
        });
    }
    let center = n_pixels as f64 / 2.0;
    let mut samples: Vec<f64> = (0..n_pixels)
        .map(|i| {
            let x = window_coordinate(i, center, n_pixels);
            let f = params.envelope.value(x);
            // rounding can leave the envelope a hair below zero at the edge
            (f * params.i0 * (1.0 + params.visibility * (params.k * x).cos()) + params.i_dc).max(0.0)
        })
        .collect();
    add_noise(&mut samples, params.noise_sigma, params.rng_seed);
    Trace::new(
        samples,
        SampleAxis::Camera {
            pixel_pitch: params.pixel_pitch,
        },
        center,
    )
}

/// Uniformly illuminated double slit,
/// `sinc²(π a sin θ/λ)·cos²(π d sin θ/λ)`, equal to 1 at θ = 0.
pub fn intensity_exact(config: &ApparatusConfig, theta: f64) -> f64 {
    intensity_exact_with_visibility(config, theta, 1.0)
}

/// Double-slit intensity with partial fringe visibility:
/// `sinc²(β)·[1 + V cos(2π d sin θ/λ)]/2`.
pub fn intensity_exact_with_visibility(config: &ApparatusConfig, theta: f64, visibility: f64) -> f64 {
    let s = theta.sin() / config.wavelength;
    let beta = PI * config.slit_width * s;
    let envelope = if beta == 0.0 {
        1.0
    } else {
        let r = beta.sin() / beta;
        r * r
    };
    let phase = PI * config.slit_separation * s;
    let interference = if visibility == 1.0 {
        phase.cos().powi(2)
    } else {
        (1.0 + visibility * (2.0 * phase).cos()) / 2.0
    };
    envelope * interference
}

/// Scale, offset and noise for sampling the exact model on a camera.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CameraExposure {
    /// Intensity of the zero-order peak above the offset.
    pub i0: f64,
    pub visibility: f64,
    pub i_dc: f64,
    pub noise_sigma: Option<f64>,
    pub rng_seed: u64,
}

impl Default for CameraExposure {
    fn default() -> Self {
        CameraExposure {
            i0: 787.0,
            visibility: 1.0,
            i_dc: 245.0,
            noise_sigma: None,
            rng_seed: 0,
        }
    }
}

/// Samples the exact two-slit pattern of `config` on its flat line camera.
/// Pixel `i` sits at `(i − N/2)·pitch` from the optical axis.
pub fn sample_apparatus(config: &ApparatusConfig, exposure: &CameraExposure) -> Result<Trace> {
    config.validate()?;
    if !(0.0..=1.0).contains(&exposure.visibility) || !(exposure.i0 > 0.0) || !(exposure.i_dc >= 0.0) {
        return Err(Error::InvalidParams(format!("invalid exposure {exposure:?}")));
    }
    let n = config.pixel_count;
    let center = config.center_pixel();
    let mut samples: Vec<f64> = (0..n)
        .map(|i| {
            let x = (i as f64 - center) * config.pixel_pitch;
            let theta = (x / config.screen_distance).atan();
            exposure.i_dc + exposure.i0 * intensity_exact_with_visibility(config, theta, exposure.visibility)
        })
        .collect();
    add_noise(&mut samples, exposure.noise_sigma, exposure.rng_seed);
    Trace::new(
        samples,
        SampleAxis::Camera {
            pixel_pitch: config.pixel_pitch,
        },
        center,
    )
}

/// Angular reference pattern `[sin(10θ)/(10θ)]²·cos²(200θ)` on `n_points`
/// samples of width `step`, with θ = 0 at index `n_points / 2`.
pub fn simulate_reference(n_points: usize, step: f64) -> Result<Trace> {
    if n_points < 2 {
        return Err(Error::TraceTooShort {
            len: n_points,
            min: 2,
        });
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::domain(format!("step must be positive, got {step}")));
    }
    let zero = n_points / 2;
    let samples: Vec<f64> = (0..n_points)
        .map(|i| {
            let theta = (i as f64 - zero as f64) * step;
            let u = 10.0 * theta;
            let f = if u == 0.0 { 1.0 } else { (u.sin() / u).powi(2) };
            f * (200.0 * theta).cos().powi(2)
        })
        .collect();
    Trace::new(samples, SampleAxis::Angle { step }, zero as f64)
}

/// Acquisition faults layered onto a clean trace.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Defects {
    /// Left-to-right linear gain change; gain is `1 + tilt_skew·u` with `u`
    /// running from −1 at the left edge to +1 at the right. `|tilt_skew| ≤ 1`.
    pub tilt_skew: f64,
    /// Pixels clamped to the trace floor.
    pub dead_pixels: Vec<usize>,
    /// Gaussian taper `exp(−s·u²)` on the signal above the floor.
    pub apodization_strength: f64,
}

/// Applies skew, apodizing taper and dead pixels, in that order, to the
/// part of the signal above the trace minimum.
pub fn apply_defects(trace: &Trace, defects: &Defects) -> Result<Trace> {
    let n = trace.len();
    if let Some(&index) = defects.dead_pixels.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index, len: n });
    }
    if !(defects.tilt_skew.abs() <= 1.0) {
        return Err(Error::domain(format!(
            "tilt skew must lie in [−1, 1], got {}",
            defects.tilt_skew
        )));
    }
    if !(defects.apodization_strength >= 0.0 && defects.apodization_strength.is_finite()) {
        return Err(Error::domain(format!(
            "apodization strength must be non-negative, got {}",
            defects.apodization_strength
        )));
    }
    let floor = trace.min();
    let center = trace.center_pixel();
    let half = n as f64 / 2.0;
    let mut samples: Vec<f64> = trace
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let u = (i as f64 - center) / half;
            let gain = 1.0 + defects.tilt_skew * u;
            let taper = (-defects.apodization_strength * u * u).exp();
            floor + (v - floor) * gain * taper
        })
        .collect();
    for &i in &defects.dead_pixels {
        samples[i] = floor;
    }
    Trace::new(samples, trace.axis(), center)
}
