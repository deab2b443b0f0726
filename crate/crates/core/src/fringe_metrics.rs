//! Fringe visibility from several independent routes, which-path
//! distinguishability, and the complementarity bound `P² + V² ≤ 1`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VisibilityMethod {
    Extrema,
    ElevationCorrected,
    FromR,
    FromREnvelope,
    Coherence,
}

/// A visibility value with the inputs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityEstimate {
    pub value: f64,
    pub method: VisibilityMethod,
    pub inputs: BTreeMap<String, f64>,
    /// Set when the raw value fell outside [0, 1] and was clamped.
    pub clamped: bool,
}

impl VisibilityEstimate {
    fn new(raw: f64, method: VisibilityMethod, inputs: &[(&str, f64)]) -> Self {
        let clamped = !(0.0..=1.0).contains(&raw);
        VisibilityEstimate {
            value: raw.clamp(0.0, 1.0),
            method,
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            clamped,
        }
    }
}

/// `(I_max − I_min)/(I_max + I_min)`.
pub fn visibility_extrema(i_max: f64, i_min: f64) -> Result<VisibilityEstimate> {
    if i_max < i_min {
        return Err(Error::domain(format!(
            "I_max ({i_max}) is below I_min ({i_min}); arguments swapped?"
        )));
    }
    if !(i_max > 0.0 && i_min >= 0.0) {
        return Err(Error::domain("need I_max > 0 and I_min ≥ 0"));
    }
    Ok(VisibilityEstimate::new(
        (i_max - i_min) / (i_max + i_min),
        VisibilityMethod::Extrema,
        &[("i_max", i_max), ("i_min", i_min)],
    ))
}

/// Contrast after subtracting the pattern's baseline elevation from both
/// extrema.
pub fn visibility_elevation_corrected(i_max: f64, i_min: f64, i_elev: f64) -> Result<VisibilityEstimate> {
    if i_min < i_elev {
        return Err(Error::domain(format!(
            "I_min ({i_min}) lies below the elevation ({i_elev})"
        )));
    }
    if !(i_max > i_elev && i_elev >= 0.0) {
        return Err(Error::domain(format!(
            "need I_max ({i_max}) > I_elev ({i_elev}) ≥ 0"
        )));
    }
    if i_max < i_min {
        return Err(Error::domain(format!(
            "I_max ({i_max}) is below I_min ({i_min}); arguments swapped?"
        )));
    }
    let hi = i_max - i_elev;
    let lo = i_min - i_elev;
    Ok(VisibilityEstimate::new(
        (hi - lo) / (hi + lo),
        VisibilityMethod::ElevationCorrected,
        &[("i_max", i_max), ("i_min", i_min), ("i_elev", i_elev)],
    ))
}

/// `V = √R` for the raised-cosine envelope.
pub fn visibility_from_r(r: f64) -> Result<VisibilityEstimate> {
    if !(r >= 0.0) {
        return Err(Error::domain(format!("R must be non-negative, got {r}")));
    }
    Ok(VisibilityEstimate::new(r.sqrt(), VisibilityMethod::FromR, &[("r", r)]))
}

/// `V = √R·a₁/a₀ = √R/(1 − A)` for the extended envelope.
pub fn visibility_from_r_envelope(r: f64, a: f64) -> Result<VisibilityEstimate> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::domain(format!("envelope coefficient needs 0 ≤ A < 1, got {a}")));
    }
    if !(r >= 0.0) {
        return Err(Error::domain(format!("R must be non-negative, got {r}")));
    }
    let a0 = (1.0 - a) / 2.0;
    let a1 = 0.5;
    Ok(VisibilityEstimate::new(
        r.sqrt() * a1 / a0,
        VisibilityMethod::FromREnvelope,
        &[("r", r), ("a", a)],
    ))
}

/// `2√(I₁I₂)/(I₁ + I₂)·|γ₁₂|`. The time delay of `γ₁₂(τ)` is not modelled.
pub fn visibility_from_coherence(i1: f64, i2: f64, gamma: f64) -> Result<VisibilityEstimate> {
    if !(i1 > 0.0 && i2 > 0.0) {
        return Err(Error::domain("beam intensities must be positive"));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::domain(format!("|γ| must lie in [0, 1], got {gamma}")));
    }
    Ok(VisibilityEstimate::new(
        2.0 * (i1 * i2).sqrt() / (i1 + i2) * gamma,
        VisibilityMethod::Coherence,
        &[("i1", i1), ("i2", i2), ("gamma", gamma)],
    ))
}

/// Which-path predictability of unbalanced beams, `|I₁ − I₂|/(I₁ + I₂)`.
pub fn distinguishability_balanced(i1: f64, i2: f64) -> Result<f64> {
    if !(i1 >= 0.0 && i2 >= 0.0) {
        return Err(Error::domain("beam intensities must be non-negative"));
    }
    if i1 + i2 == 0.0 {
        return Err(Error::domain("both beam intensities are zero"));
    }
    Ok((i1 - i2).abs() / (i1 + i2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Complementarity {
    /// `P² + V²`.
    pub lhs: f64,
    pub satisfied: bool,
    /// Bound reached with equality.
    pub saturated: bool,
}

pub fn complementarity_check(p: f64, v: f64) -> Result<Complementarity> {
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&v) {
        return Err(Error::domain(format!("P ({p}) and V ({v}) must lie in [0, 1]")));
    }
    let lhs = p * p + v * v;
    Ok(Complementarity {
        lhs,
        satisfied: lhs <= 1.0 + 1e-12,
        saturated: (lhs - 1.0).abs() <= 1e-9,
    })
}
