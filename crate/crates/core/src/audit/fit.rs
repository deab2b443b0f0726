//! Least-squares fit of the extended-envelope coefficient `A`.
//!
//! The fit uses the crest heights of the principal maximum: the zero-order
//! fringe and every fringe outward until the crest heights stop falling.
//! For a trial `A`, crest heights are regressed on `max(F_A(x), 0)` with a free
//! scale and offset; a golden-section search then minimises the RMS
//! residual over `A`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::peaks::find_peaks;
use crate::synthesis::{EnvelopeModel, Trace};

pub const A_RANGE: (f64, f64) = (0.0, 0.9);
pub const A_TOLERANCE: f64 = 1e-4;
/// Smallest fitted `A` that is worth a warning when it fails to beat `A = 0`.
const WARN_THRESHOLD: f64 = 0.01;
const MIN_CRESTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    pub a: f64,
    /// RMS crest-height residual at `a`.
    pub residual: f64,
    /// RMS residual of the raised-cosine model (`A = 0`).
    pub residual_at_zero: f64,
    pub scale: f64,
    pub offset: f64,
    pub crests_used: usize,
    /// Set when the search found no improvement over `A = 0`.
    pub warn: bool,
}

/// Minimiser of a unimodal `f` on `[lo, hi]`, bracketed to `tol`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// Crest positions (window coordinate) and heights of the principal maximum.
pub fn principal_crests(trace: &Trace) -> Result<Vec<(f64, f64)>> {
    let samples = trace.samples();
    let n = samples.len();
    let peaks = find_peaks(samples, 0.02 * trace.max());
    if peaks.is_empty() {
        return Err(Error::FeatureExtraction("no fringes to fit".into()));
    }
    let zero = (0..peaks.len())
        .max_by(|&a, &b| peaks[a].height.total_cmp(&peaks[b].height))
        .expect("non-empty");
    let mut hi = zero;
    while hi + 1 < peaks.len() && peaks[hi + 1].height < peaks[hi].height {
        hi += 1;
    }
    let mut lo = zero;
    while lo > 0 && peaks[lo - 1].height < peaks[lo].height {
        lo -= 1;
    }
    let center = peaks[zero].position;
    let crests: Vec<(f64, f64)> = peaks[lo..=hi]
        .iter()
        .map(|p| (2.0 * std::f64::consts::PI * (p.position - center) / n as f64, p.height))
        .collect();
    if crests.len() < MIN_CRESTS {
        return Err(Error::FeatureExtraction(format!(
            "{} crests in the principal maximum, need {MIN_CRESTS}",
            crests.len()
        )));
    }
    Ok(crests)
}

/// Best `(scale, offset, rms)` for `heights ≈ scale·max(F, 0) + offset`.
/// Where `F < 0` (A > ¼ far from the axis) the brightest points of a fringe
/// period sit at the offset, hence the clip.
fn linear_fit(crests: &[(f64, f64)], a: f64) -> (f64, f64, f64) {
    let model = EnvelopeModel::Extended { a };
    let n = crests.len() as f64;
    let fs: Vec<f64> = crests.iter().map(|&(x, _)| model.value(x).max(0.0)).collect();
    let mean_f = fs.iter().sum::<f64>() / n;
    let mean_h = crests.iter().map(|c| c.1).sum::<f64>() / n;
    let mut sff = 0.0;
    let mut sfh = 0.0;
    for (f, &(_, h)) in fs.iter().zip(crests) {
        sff += (f - mean_f) * (f - mean_f);
        sfh += (f - mean_f) * (h - mean_h);
    }
    let scale = if sff > 0.0 { sfh / sff } else { 0.0 };
    let offset = mean_h - scale * mean_f;
    let sse: f64 = fs
        .iter()
        .zip(crests)
        .map(|(f, &(_, h))| (h - scale * f - offset).powi(2))
        .sum();
    (scale, offset, (sse / n).sqrt())
}

pub fn fit_envelope_a(trace: &Trace) -> Result<EnvelopeFit> {
    let crests = principal_crests(trace)?;
    let best = golden_section(|a| linear_fit(&crests, a).2, A_RANGE.0, A_RANGE.1, A_TOLERANCE);
    let (scale, offset, residual) = linear_fit(&crests, best);
    let (scale0, offset0, residual0) = linear_fit(&crests, 0.0);
    if residual0 <= residual {
        return Ok(EnvelopeFit {
            a: 0.0,
            residual: residual0,
            residual_at_zero: residual0,
            scale: scale0,
            offset: offset0,
            crests_used: crests.len(),
            warn: best > WARN_THRESHOLD,
        });
    }
    Ok(EnvelopeFit {
        a: best,
        residual,
        residual_at_zero: residual0,
        scale,
        offset,
        crests_used: crests.len(),
        warn: false,
    })
}
