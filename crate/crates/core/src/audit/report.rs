//! Apparatus-versus-pattern consistency checks.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fringe_metrics::{self, VisibilityEstimate};
use crate::geometry::{self, ApparatusConfig, FringePrediction, PhotonFlux};
use crate::spectral;

use super::features::ObservedFeatures;

/// Spacing agreement required for a pass, pixels.
pub const SPACING_TOLERANCE_PX: f64 = 1.0;
/// Principal-width agreement required for a pass, pixels.
pub const WIDTH_TOLERANCE_PX: f64 = 2.0;
/// Secondary-maximum position tolerance, in fringe spacings.
pub const SECONDARY_TOLERANCE_SPACINGS: f64 = 1.5;
/// Relative agreement of inferred and configured distance for a pass.
pub const DISTANCE_TOLERANCE: f64 = 0.05;
/// Largest visibility difference counted as compatible.
pub const VISIBILITY_TOLERANCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Warn => "warn",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub units: String,
}

impl Quantity {
    fn new(value: f64, units: &str) -> Self {
        Quantity {
            value,
            units: units.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Formula the expected value comes from.
    pub formula: String,
    pub expected: Quantity,
    pub observed: Option<Quantity>,
    /// `observed − expected`, when both exist.
    pub discrepancy: Option<f64>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn new(name: &str, formula: &str, expected: Quantity, observed: Option<Quantity>, verdict: Verdict) -> Self {
        let discrepancy = observed.as_ref().map(|o| o.value - expected.value);
        Check {
            name: name.to_string(),
            formula: formula.to_string(),
            expected,
            observed,
            discrepancy,
            verdict,
            note: None,
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InferredDistance {
    /// From the observed principal half width, m.
    pub from_width: f64,
    /// From the observed fringe spacing, m.
    pub from_spacing: f64,
    pub mean: f64,
    pub configured: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityReconciliation {
    /// Contrast of the pattern above its elevation.
    pub v_pattern: f64,
    /// Visibility implied by `R` under the extended envelope.
    pub v_from_r: f64,
    /// Visibility implied by `R` under the raised-cosine envelope.
    pub v_from_r_raised_cosine: f64,
    /// Envelope coefficient used for `v_from_r`.
    pub envelope_a: f64,
    pub delta: f64,
    pub compatible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRegistration {
    pub declared_peak_k: usize,
    /// `N / w` from the observed spacing.
    pub expected_wavenumber: f64,
    pub corrected_peak_k: usize,
    pub shift: i64,
    /// `R` with the spectrum correctly registered.
    pub r_post_shift: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_pre_shift: Option<f64>,
    /// The alternative form `P_K / (P_K + P_1)`.
    pub r_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub config: ApparatusConfig,
    pub prediction: FringePrediction,
    pub features: ObservedFeatures,
    pub checks: Vec<Check>,
    pub inferred_distance: InferredDistance,
    pub spectrum: SpectrumRegistration,
    pub visibility_reconciliation: VisibilityReconciliation,
    pub visibility_estimates: Vec<VisibilityEstimate>,
    pub photon_flux: PhotonFlux,
    pub notes: Vec<String>,
}

impl AuditReport {
    pub fn failing(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn passed(&self) -> bool {
        self.failing().next().is_none()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Human-readable table of the checks followed by the derived sections.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<20} {:>14} {:>14} {:>12}  {:<7} formula",
            "check", "expected", "observed", "discrepancy", "verdict"
        );
        for c in &self.checks {
            let observed = c
                .observed
                .as_ref()
                .map_or("-".to_string(), |q| format!("{:.3}", q.value));
            let discrepancy = c.discrepancy.map_or("-".to_string(), |d| format!("{d:+.3}"));
            let _ = writeln!(
                out,
                "{:<20} {:>14} {:>14} {:>12}  {:<7} {}",
                c.name,
                format!("{:.3}", c.expected.value),
                observed,
                discrepancy,
                c.verdict,
                c.formula
            );
            if let Some(note) = &c.note {
                let _ = writeln!(out, "{:<20} ({})", "", note);
            }
        }
        let d = &self.inferred_distance;
        let _ = writeln!(
            out,
            "\ninferred distance: from width {:.4} m, from spacing {:.4} m, mean {:.4} m (configured {:.4} m)",
            d.from_width, d.from_spacing, d.mean, d.configured
        );
        let s = &self.spectrum;
        let _ = writeln!(
            out,
            "spectrum: declared peak {} vs N/w = {:.2}; corrected peak {}, shift {:+}; R = {:.4}",
            s.declared_peak_k, s.expected_wavenumber, s.corrected_peak_k, s.shift, s.r_post_shift
        );
        let v = &self.visibility_reconciliation;
        let _ = writeln!(
            out,
            "visibility: pattern {:.3} vs from R {:.3} (A = {:.2}; raised cosine {:.3}), delta {:.3}: {}",
            v.v_pattern,
            v.v_from_r,
            v.envelope_a,
            v.v_from_r_raised_cosine,
            v.delta,
            if v.compatible { "compatible" } else { "incompatible" }
        );
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        let failing: Vec<&str> = self.failing().map(|c| c.name.as_str()).collect();
        let _ = writeln!(
            out,
            "result: {}",
            if failing.is_empty() {
                "all checks pass".to_string()
            } else {
                format!("{} failing ({})", failing.len(), failing.join(", "))
            }
        );
        out
    }
}

fn within(verdict_ok: bool, otherwise: Verdict) -> Verdict {
    if verdict_ok {
        Verdict::Pass
    } else {
        otherwise
    }
}

/// Compares what `config` predicts with what `features` shows.
pub fn audit(config: &ApparatusConfig, features: &ObservedFeatures) -> Result<AuditReport> {
    let prediction = geometry::predict(config)?;
    features.validate()?;
    let mut notes = Vec::new();
    let mut checks = Vec::new();

    // missing order
    let expected_order = prediction.missing_order;
    let rounded = expected_order.round() as u64;
    let observed_order = (features.missing_order_left + features.missing_order_right) as f64 / 2.0;
    let orders_match = features.missing_order_left == rounded && features.missing_order_right == rounded;
    checks.push(
        Check::new(
            "missing_order",
            "m = d/a",
            Quantity::new(expected_order, "order"),
            Some(Quantity::new(observed_order, "order")),
            within(orders_match && prediction.missing_order_integral, Verdict::Warn),
        )
        .note(format!(
            "left {}, right {}",
            features.missing_order_left, features.missing_order_right
        )),
    );

    // fringe count
    let count = features.fringe_count_in_principal;
    checks.push(Check::new(
        "fringe_count",
        "n = 2(m − 1) + 1",
        Quantity::new(prediction.fringe_count as f64, "fringes"),
        Some(Quantity::new(count as f64, "fringes")),
        within(count == prediction.fringe_count, Verdict::Fail),
    ));

    // fringe spacing
    let spacing = prediction.fringe_spacing.pixels;
    let mut spacing_check = Check::new(
        "fringe_spacing",
        "w = Dλ/d",
        Quantity::new(spacing, "px"),
        Some(Quantity::new(features.fringe_spacing_px, "px")),
        within((features.fringe_spacing_px - spacing).abs() <= SPACING_TOLERANCE_PX, Verdict::Fail),
    );
    if let Some(alt) = features.fringe_spacing_alt_px {
        spacing_check = spacing_check.note(format!("alternative reading {alt} px"));
    }
    checks.push(spacing_check);

    // principal width
    let width = prediction.principal_width.pixels;
    checks.push(Check::new(
        "principal_width",
        "2X = 2D·tan(asin(λ/a))",
        Quantity::new(width, "px"),
        Some(Quantity::new(features.principal_width_px, "px")),
        within((features.principal_width_px - width).abs() <= WIDTH_TOLERANCE_PX, Verdict::Fail),
    ));

    // secondary maximum
    let sm = prediction.secondary_max;
    let expected_offset = sm.offset.pixels;
    let i0 = features.i_max - features.i_elev;
    let expected_height = sm.height(i0, features.i_elev);
    let observed = features
        .secondary_max_offset_px
        .filter(|_| features.secondary_max_visible)
        .map(|o| Quantity::new(o, "px"));
    let secondary = match (sm.in_view, features.secondary_max_visible) {
        (false, _) => Check::new(
            "secondary_max",
            "sin θ₂ = 1.45λ/a",
            Quantity::new(expected_offset, "px"),
            observed,
            Verdict::Warn,
        )
        .note(format!(
            "expected at pixel {:.0}, outside camera view",
            sm.absolute_pixel
        )),
        (true, false) => Check::new(
            "secondary_max",
            "sin θ₂ = 1.45λ/a",
            Quantity::new(expected_offset, "px"),
            None,
            Verdict::Warn,
        )
        .note(format!(
            "expected at pixel {:.0} with height {:.1}, not visible",
            sm.absolute_pixel, expected_height
        )),
        (true, true) => {
            let ok = observed
                .as_ref()
                .is_some_and(|o| (o.value - expected_offset).abs() <= SECONDARY_TOLERANCE_SPACINGS * spacing);
            Check::new(
                "secondary_max",
                "sin θ₂ = 1.45λ/a",
                Quantity::new(expected_offset, "px"),
                observed,
                within(ok, Verdict::Fail),
            )
            .note(format!("expected height {expected_height:.1}"))
        }
    };
    checks.push(secondary);

    // far-field condition
    checks.push(Check::new(
        "fraunhofer",
        "a²/(Dλ) < 0.01",
        Quantity::new(geometry::FRAUNHOFER_THRESHOLD, "ratio"),
        Some(Quantity::new(prediction.fraunhofer_number, "ratio")),
        within(prediction.fraunhofer_satisfied, Verdict::Fail),
    ));

    // spectral registration
    let n = config.pixel_count;
    let expected_k = spectral::spacing_to_wavenumber(features.fringe_spacing_px, n)?;
    let alignment = spectral::align_peak(n, features.fft_peak_k, features.fringe_spacing_px)?;
    checks.push(
        Check::new(
            "spectral_peak",
            "k = N/w",
            Quantity::new(alignment.corrected_peak_k as f64, "wavenumber"),
            Some(Quantity::new(features.fft_peak_k as f64, "wavenumber")),
            within(alignment.shift == 0, Verdict::Fail),
        )
        .note(format!("N/w = {expected_k:.2}, shift {:+}", alignment.shift)),
    );

    // distance
    let from_width = geometry::infer_distance_from_width(
        features.principal_width_px / 2.0 * config.pixel_pitch,
        config.slit_width,
        config.wavelength,
    )?;
    let from_spacing = geometry::infer_distance_from_spacing(
        features.fringe_spacing_px,
        config.pixel_pitch,
        config.slit_separation,
        config.wavelength,
    )?;
    let mean = (from_width + from_spacing) / 2.0;
    let configured = config.screen_distance;
    checks.push(Check::new(
        "screen_distance",
        "D = X/tan(asin(λ/a)), D = w·d/λ",
        Quantity::new(configured, "m"),
        Some(Quantity::new(mean, "m")),
        within((mean - configured).abs() <= DISTANCE_TOLERANCE * configured, Verdict::Warn),
    ));
    let inferred_distance = InferredDistance {
        from_width,
        from_spacing,
        mean,
        configured,
    };

    // visibility
    let elevated = fringe_metrics::visibility_elevation_corrected(features.i_max, features.i_min, features.i_elev)?;
    let envelope_a = features.envelope_a.unwrap_or(0.0);
    if features.envelope_a.is_none() {
        notes.push("no envelope coefficient available; R converted with A = 0".into());
    }
    let from_r_env = fringe_metrics::visibility_from_r_envelope(features.r_value, envelope_a)?;
    let from_r = fringe_metrics::visibility_from_r(features.r_value)?;
    let extrema = fringe_metrics::visibility_extrema(features.i_max, features.i_min)?;
    let delta = elevated.value - from_r_env.value;
    let visibility_reconciliation = VisibilityReconciliation {
        v_pattern: elevated.value,
        v_from_r: from_r_env.value,
        v_from_r_raised_cosine: from_r.value,
        envelope_a,
        delta,
        compatible: delta.abs() <= VISIBILITY_TOLERANCE,
    };

    let spectrum = SpectrumRegistration {
        declared_peak_k: features.fft_peak_k,
        expected_wavenumber: expected_k,
        corrected_peak_k: alignment.corrected_peak_k,
        shift: alignment.shift,
        r_post_shift: features.r_value,
        r_pre_shift: features.r_pre_shift,
        r_fraction: features.r_value / (1.0 + features.r_value),
    };

    let photon_flux = geometry::photon_flux_per_slit(config);
    notes.push(format!(
        "slit-to-camera transit time D/c = {:.3e} s (order of magnitude 1e{} s)",
        photon_flux.transit_time,
        photon_flux.transit_time.log10().floor()
    ));
    if !prediction.missing_order_integral {
        notes.push(format!(
            "d/a = {:.4} is not integral; the missing order is only approximate",
            prediction.missing_order
        ));
    }

    Ok(AuditReport {
        config: config.clone(),
        prediction,
        features: features.clone(),
        checks,
        inferred_distance,
        spectrum,
        visibility_reconciliation,
        visibility_estimates: vec![extrema, elevated, from_r, from_r_env],
        photon_flux,
        notes,
    })
}
