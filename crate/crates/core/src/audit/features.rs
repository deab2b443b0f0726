//! Pattern features measured on a trace, or read from a published figure.
//!
//! Fringes are local maxima with prominence of at least 2 % of the global
//! maximum. Fringe orders are counted outward from the zero-order (tallest)
//! fringe. Beyond the run of detected fringes the extractor walks the
//! trough chain one spacing at a time, so that fringe windows keep step with
//! the stretch of a flat camera far from the axis. The missing order is the
//! first fringe on each side whose height is a local minimum of the
//! peak-height sequence.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::peaks::{self, find_peaks, Peak};
use crate::spectral::{self, DEFAULT_K_MIN};
use crate::synthesis::Trace;

use super::fit::fit_envelope_a;

/// Minimum fringe prominence as a fraction of the global maximum.
pub const PROMINENCE_FRACTION: f64 = 0.02;
/// Fringe order whose peaks anchor the spacing and recentring.
pub const DEFAULT_ANCHOR_ORDER: usize = 13;
pub const DEFAULT_ANCHOR_LEFT_PX: usize = 600;
pub const DEFAULT_ANCHOR_RIGHT_PX: usize = 2400;
/// Fewest fringes a trace must show to be analysed.
pub const MIN_FRINGES: usize = 5;
pub const FIXTURE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservedFeatures {
    /// Pixel of the zero-order fringe.
    pub center_pixel: f64,
    /// Translation that brings the zero order to the middle of the line.
    pub recenter_shift_px: f64,
    pub fringe_peak_positions: Vec<f64>,
    pub fringe_spacing_px: f64,
    /// A second spacing estimate, when the source offers one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fringe_spacing_alt_px: Option<f64>,
    pub fringe_count_in_principal: u64,
    pub missing_order_left: u64,
    pub missing_order_right: u64,
    pub principal_width_px: f64,
    pub secondary_max_visible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secondary_max_height: Option<f64>,
    /// Distance of the secondary maximum from the zero order, pixels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secondary_max_offset_px: Option<f64>,
    pub i_max: f64,
    pub i_min: f64,
    pub i_elev: f64,
    /// Wavenumber of the interference peak in the spectrum.
    pub fft_peak_k: usize,
    /// `P_K / P_1` with the spectrum correctly registered.
    pub r_value: f64,
    /// `R` as read from a displaced spectrum, when one was reported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_pre_shift: Option<f64>,
    /// Extended-envelope coefficient fitted to the fringe crests.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope_a: Option<f64>,
}

impl ObservedFeatures {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::FeatureExtraction(m));
        if !(self.fringe_spacing_px > 1.0) {
            return bad(format!("fringe spacing {} px must exceed 1", self.fringe_spacing_px));
        }
        if !(self.principal_width_px > self.fringe_spacing_px) {
            return bad(format!(
                "principal width {} px must exceed the fringe spacing {} px",
                self.principal_width_px, self.fringe_spacing_px
            ));
        }
        if !(self.i_max >= self.i_min && self.i_min >= 0.0) {
            return bad(format!("need I_max ({}) ≥ I_min ({}) ≥ 0", self.i_max, self.i_min));
        }
        if self.missing_order_left < 1 || self.missing_order_right < 1 {
            return bad("missing orders must be at least 1".into());
        }
        if let Some(a) = self.envelope_a {
            if !(0.0..1.0).contains(&a) {
                return bad(format!("envelope coefficient {a} outside [0, 1)"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FeaturesFile {
    fixture_version: u32,
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
    features: ObservedFeatures,
}

impl ObservedFeatures {
    /// Parses a features override file: a `fixture_version`, an optional
    /// `description` and a `[features]` table.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: FeaturesFile =
            toml::from_str(text).map_err(|e| Error::FeatureExtraction(e.message().to_string()))?;
        if file.fixture_version != FIXTURE_VERSION {
            return Err(Error::FeatureExtraction(format!(
                "unsupported fixture_version {} (expected {FIXTURE_VERSION})",
                file.fixture_version
            )));
        }
        file.features.validate()?;
        Ok(file.features)
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
}

/// Feature readings of the published 3000-pixel recording, shipped with the
/// crate.
pub const REPORTED_PATTERN_TOML: &str = include_str!("../../fixtures/reported_pattern.toml");

pub fn reported_pattern() -> ObservedFeatures {
    ObservedFeatures::from_toml_str(REPORTED_PATTERN_TOML).expect("bundled fixture parses")
}

/// Detected fringes with their orders relative to the zero-order fringe.
#[derive(Debug, Clone)]
pub struct FringeLadder {
    pub peaks: Vec<Peak>,
    /// Order of each entry of `peaks`.
    pub orders: Vec<i64>,
    /// Index into `peaks` of the zero-order fringe.
    pub zero: usize,
    /// Median adjacent peak distance near the centre.
    pub coarse_spacing: f64,
}

impl FringeLadder {
    pub fn peak_of_order(&self, order: i64) -> Option<&Peak> {
        self.orders
            .iter()
            .position(|&o| o == order)
            .map(|i| &self.peaks[i])
    }

    /// Highest `j` such that every order `1..=j` on the given side
    /// (`+1` right, `−1` left) was detected.
    pub fn contiguous_run(&self, side: i64) -> usize {
        let mut j = 0;
        while self.peak_of_order(side * (j as i64 + 1)).is_some() {
            j += 1;
        }
        j
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Finds fringes and numbers them outward from the tallest one.
pub fn fringe_ladder(samples: &[f64], prominence_fraction: f64) -> Result<FringeLadder> {
    let max = samples.iter().copied().fold(f64::MIN, f64::max);
    let peaks = find_peaks(samples, prominence_fraction * max);
    if peaks.len() < MIN_FRINGES {
        return Err(Error::FeatureExtraction(format!(
            "found {} fringes, need at least {MIN_FRINGES}",
            peaks.len()
        )));
    }
    let middle = samples.len() as f64 / 2.0;
    let zero = (0..peaks.len())
        .max_by(|&a, &b| {
            peaks[a]
                .height
                .total_cmp(&peaks[b].height)
                .then_with(|| (peaks[b].position - middle).abs().total_cmp(&(peaks[a].position - middle).abs()))
        })
        .expect("non-empty");

    let lo = zero.saturating_sub(5);
    let hi = (zero + 5).min(peaks.len() - 1);
    let mut diffs: Vec<f64> = (lo..hi)
        .map(|i| peaks[i + 1].position - peaks[i].position)
        .collect();
    if diffs.is_empty() {
        return Err(Error::FeatureExtraction("no adjacent fringes around the centre".into()));
    }
    let coarse_spacing = median(&mut diffs);

    let mut orders = vec![0i64; peaks.len()];
    for i in zero + 1..peaks.len() {
        let step = ((peaks[i].position - peaks[i - 1].position) / coarse_spacing).round().max(1.0);
        orders[i] = orders[i - 1] + step as i64;
    }
    for i in (0..zero).rev() {
        let step = ((peaks[i + 1].position - peaks[i].position) / coarse_spacing).round().max(1.0);
        orders[i] = orders[i + 1] - step as i64;
    }
    Ok(FringeLadder {
        peaks,
        orders,
        zero,
        coarse_spacing,
    })
}

/// Centred moving average of half width `h`, shrinking at the edges.
pub fn moving_average(samples: &[f64], h: usize) -> Vec<f64> {
    let n = samples.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for v in samples {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(h);
            let hi = (i + h + 1).min(n);
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// Local trough spacing and the fitted position of the latest trough, from
/// a least-squares line through the last four troughs. A single trough
/// displaced by noise then cannot derail the walk.
fn trend(troughs: &[(f64, f64)]) -> (f64, f64) {
    let tail = &troughs[troughs.len().saturating_sub(4)..];
    let n = tail.len() as f64;
    let mean_i = (n - 1.0) / 2.0;
    let mean_p = tail.iter().map(|t| t.0).sum::<f64>() / n;
    let (mut sip, mut sii) = (0.0, 0.0);
    for (i, t) in tail.iter().enumerate() {
        let di = i as f64 - mean_i;
        sip += di * (t.0 - mean_p);
        sii += di * di;
    }
    let slope = sip / sii;
    (slope.abs(), mean_p + slope * (n - 1.0 - mean_i))
}

/// Fringe windows on one side of the zero order, bounded by troughs.
struct SideProfile {
    /// `troughs[j]` sits at order `j + ½` (signed by side).
    troughs: Vec<(f64, f64)>,
    /// `heights[m]` is the crest height of order `m`, `heights[0]` the
    /// zero-order crest.
    heights: Vec<f64>,
    /// Crest position of each order.
    crests: Vec<f64>,
}

fn side_profile(samples: &[f64], ladder: &FringeLadder, side: i64) -> Result<SideProfile> {
    let n = samples.len();
    let last = (n - 1) as f64;
    let zero = &ladder.peaks[ladder.zero];
    let run = ladder.contiguous_run(side);
    let mut troughs: Vec<(f64, f64)> = Vec::new();

    // troughs between detected, consecutive crests
    let mut prev = zero.position;
    for j in 1..=run {
        let crest = ladder.peak_of_order(side * j as i64).expect("in run").position;
        let (a, b) = if prev < crest { (prev, crest) } else { (crest, prev) };
        let t = peaks::minimum_in(samples, a.ceil() as usize, b.floor() as usize)
            .ok_or_else(|| Error::FeatureExtraction("empty trough window".into()))?;
        troughs.push(t);
        prev = crest;
    }

    // walk the trough chain outward
    loop {
        let (step, from) = match troughs.len() {
            0 => (ladder.coarse_spacing, zero.position + side as f64 * ladder.coarse_spacing / 2.0),
            1 => (ladder.coarse_spacing, troughs[0].0),
            _ => trend(&troughs),
        };
        if troughs.is_empty() {
            let r = step / 4.0;
            let t = peaks::minimum_in(samples, (from - r).max(0.0).ceil() as usize, (from + r).min(last).floor() as usize)
                .ok_or_else(|| Error::FeatureExtraction("trace too short around the centre".into()))?;
            troughs.push(t);
            continue;
        }
        let predicted = from + side as f64 * step;
        let radius = step / 4.0;
        if predicted - radius < 0.0 || predicted + radius > last {
            break;
        }
        let t = peaks::minimum_in(
            samples,
            (predicted - radius).ceil() as usize,
            (predicted + radius).floor() as usize,
        )
        .ok_or_else(|| Error::FeatureExtraction("empty trough window".into()))?;
        troughs.push(t);
    }

    let mut heights = vec![zero.height];
    let mut crests = vec![zero.position];
    for w in troughs.windows(2) {
        let (a, b) = if w[0].0 < w[1].0 { (w[0].0, w[1].0) } else { (w[1].0, w[0].0) };
        let (pos, h) = peaks::maximum_in(samples, a.ceil() as usize, b.floor() as usize)
            .ok_or_else(|| Error::FeatureExtraction("empty fringe window".into()))?;
        heights.push(h);
        crests.push(pos);
    }
    Ok(SideProfile {
        troughs,
        heights,
        crests,
    })
}

/// Solves the 3×3 system `a·x = b` by Gaussian elimination with partial
/// pivoting; `None` when singular.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// Where the crest of the missing order `m` would sit. Troughs lie at
/// half-integer orders and, unlike crests, are not pulled inward by the
/// falling envelope. The troughs of orders `½..m−5/2` are fitted with an
/// odd polynomial `c₁u + c₃u³ + c₅u⁵` in `u = order/m` (a flat camera maps
/// `sin θ` through `tan(asin ·)`, which is odd) and the fit is evaluated at
/// `u = 1`. Troughs of the secondary lobe up to `u = 1.6` join the fit when
/// they were found. The faint troughs next to the missing order are left out. With
/// too few troughs, the midpoint of the two flanking the missing order is
/// used instead.
fn missing_order_position(p: &SideProfile, m: usize, center: f64) -> f64 {
    let midpoint = (p.troughs[m - 1].0 + p.troughs[m].0) / 2.0;
    let last = m.saturating_sub(3);
    if last < 4 {
        return midpoint;
    }
    let mf = m as f64;
    // (trough index, half-integer order) pairs
    let fit = |points: &[(usize, f64)]| -> Option<([f64; 3], f64)> {
        let mut ata = [[0.0; 3]; 3];
        let mut atb = [0.0; 3];
        for &(j, order) in points {
            let u = order / mf;
            let basis = [u, u.powi(3), u.powi(5)];
            let y = p.troughs[j].0 - center;
            for r in 0..3 {
                for c in 0..3 {
                    ata[r][c] += basis[r] * basis[c];
                }
                atb[r] += basis[r] * y;
            }
        }
        let c = solve3(ata, atb)?;
        let sse: f64 = points
            .iter()
            .map(|&(j, order)| {
                let u = order / mf;
                (p.troughs[j].0 - center - c[0] * u - c[1] * u.powi(3) - c[2] * u.powi(5)).powi(2)
            })
            .sum();
        Some((c, sse))
    };
    let inner: Vec<(usize, f64)> = (0..=last).map(|j| (j, j as f64 + 0.5)).collect();
    // Troughs in the secondary lobe turn the extrapolation into an
    // interpolation. Noise can make the walk gain or lose an order while
    // crossing the dip, so their numbering is allowed to move by one.
    let outer: Vec<usize> = (m + 2..p.troughs.len())
        .take_while(|&j| (j as f64 + 0.5) < 1.6 * mf)
        .collect();
    let best = [0.0, -1.0, 1.0]
        .iter()
        .filter(|_| !outer.is_empty())
        .filter_map(|&slip| {
            let points: Vec<(usize, f64)> = inner
                .iter()
                .copied()
                .chain(outer.iter().map(|&j| (j, j as f64 + 0.5 + slip)))
                .collect();
            fit(&points)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .or_else(|| fit(&inner));
    match best {
        Some((c, _)) => center + c[0] + c[1] + c[2],
        None => midpoint,
    }
}

/// Fraction of the zero-order crest height, above the floor, that marks the
/// start of the dip around the first envelope zero.
const DIP_FRACTION: f64 = 0.1;

/// The missing order: the lowest crest inside the envelope dip. The dip
/// starts at the first crest below `DIP_FRACTION` of the zero order and
/// extends to 1.8 times that order, short of the secondary maximum. Taking
/// the lowest crest of the whole dip, rather than the first local minimum,
/// keeps noise on the faint crests next to the zero from moving the answer.
/// Falls back to the first local minimum when no crest is that faint.
fn missing_order_of(heights: &[f64]) -> Option<usize> {
    let len = heights.len();
    if len < 3 {
        return None;
    }
    let floor = heights.iter().copied().fold(f64::INFINITY, f64::min);
    let threshold = floor + DIP_FRACTION * (heights[0] - floor);
    match (1..len - 1).find(|&j| heights[j] < threshold) {
        Some(start) => {
            let end = ((start as f64 * 1.8).floor() as usize).clamp(start, len - 2);
            (start..=end).min_by(|&a, &b| heights[a].total_cmp(&heights[b]))
        }
        None => (1..len - 1).find(|&m| heights[m] < heights[m - 1] && heights[m] <= heights[m + 1]),
    }
}

/// The secondary maximum beyond `missing`, as a fractional order and height.
/// The tallest crest between the first and second envelope zeros is refined
/// with a parabola through the crests within a fifth of `missing` of it, since
/// the lobe top is flat enough for noise to pick a neighbouring crest. `None`
/// when the heights still rise at the edge of the view.
fn secondary_max_of(heights: &[f64], missing: usize) -> Option<(f64, f64)> {
    let end = (2 * missing).min(heights.len());
    let top = (missing + 1..end).max_by(|&a, &b| heights[a].total_cmp(&heights[b]))?;
    if top + 1 >= heights.len() || heights[top + 1] >= heights[top] {
        return None;
    }
    let r = (missing / 5).max(1);
    let (lo, hi) = (top.saturating_sub(r).max(missing + 1), (top + r).min(heights.len() - 1));
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for j in lo..=hi {
        let t = j as f64 - top as f64;
        let basis = [1.0, t, t * t];
        for row in 0..3 {
            for col in 0..3 {
                ata[row][col] += basis[row] * basis[col];
            }
            atb[row] += basis[row] * heights[j];
        }
    }
    match solve3(ata, atb) {
        Some([c0, c1, c2]) if c2 < 0.0 => {
            let t = (-c1 / (2.0 * c2)).clamp((lo as f64) - top as f64, (hi as f64) - top as f64);
            Some((top as f64 + t, c0 + c1 * t + c2 * t * t))
        }
        _ => Some((top as f64, heights[top])),
    }
}

/// Crest position at a fractional order, by linear interpolation.
fn crest_at(crests: &[f64], order: f64) -> f64 {
    let j = (order.floor() as usize).min(crests.len() - 1);
    let frac = order - j as f64;
    match crests.get(j + 1) {
        Some(next) if frac > 0.0 => crests[j] + frac * (next - crests[j]),
        _ => crests[j],
    }
}

/// Lower bound for the interference-peak search: half the fringe
/// wavenumber when fringes can be counted, otherwise the default floor.
pub fn interference_search_floor(trace: &Trace) -> usize {
    fringe_ladder(trace.samples(), PROMINENCE_FRACTION)
        .map(|l| (trace.len() as f64 / (2.0 * l.coarse_spacing)).floor() as usize)
        .unwrap_or(0)
        .max(DEFAULT_K_MIN)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractOptions {
    pub prominence_fraction: f64,
    pub anchor_order: usize,
    /// Half width of a moving average used only to locate fringes and
    /// troughs on noisy traces; intensities are always read from the raw
    /// samples. Zero disables it.
    pub smoothing_half_width: usize,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            prominence_fraction: PROMINENCE_FRACTION,
            anchor_order: DEFAULT_ANCHOR_ORDER,
            smoothing_half_width: 0,
        }
    }
}

pub fn extract_features(trace: &Trace) -> Result<ObservedFeatures> {
    extract_features_with(trace, &ExtractOptions::default())
}

pub fn extract_features_with(trace: &Trace, options: &ExtractOptions) -> Result<ObservedFeatures> {
    const MIN_LEN: usize = 64;
    if trace.len() < MIN_LEN {
        return Err(Error::TraceTooShort {
            len: trace.len(),
            min: MIN_LEN,
        });
    }
    let raw = trace.samples();
    let smoothed;
    let samples = if options.smoothing_half_width > 0 {
        smoothed = moving_average(raw, options.smoothing_half_width);
        &smoothed[..]
    } else {
        raw
    };
    let n = samples.len();
    let ladder = fringe_ladder(samples, options.prominence_fraction)?;
    let zero = ladder.peaks[ladder.zero];
    let center = zero.position;
    let baseline = trace.min();

    let right = side_profile(samples, &ladder, 1)?;
    let left = side_profile(samples, &ladder, -1)?;
    let missing_right = missing_order_of(&right.heights)
        .ok_or_else(|| Error::FeatureExtraction("no missing-order fringe on the right".into()))?;
    let missing_left = missing_order_of(&left.heights)
        .ok_or_else(|| Error::FeatureExtraction("no missing-order fringe on the left".into()))?;

    // anchor spacing well inside the principal maximum
    let run = ladder.contiguous_run(1).min(ladder.contiguous_run(-1));
    let run = run.min(missing_right - 1).min(missing_left - 1);
    let anchor = options.anchor_order.min(2 * run / 3).max(1);
    let spacing = match (ladder.peak_of_order(anchor as i64), ladder.peak_of_order(-(anchor as i64))) {
        (Some(r), Some(l)) => (r.position - l.position) / (2 * anchor) as f64,
        _ => ladder.coarse_spacing,
    };

    let right_edge = missing_order_position(&right, missing_right, center);
    let left_edge = missing_order_position(&left, missing_left, center);
    let principal_width_px = right_edge - left_edge;

    let h = options.smoothing_half_width as f64;
    let raw_min = |pos: f64| {
        peaks::minimum_in(raw, (pos - h).max(0.0).round() as usize, (pos + h).round() as usize).map_or(0.0, |t| t.1)
    };
    let i_max = if h > 0.0 {
        peaks::maximum_in(raw, (center - h).max(0.0).round() as usize, (center + h).round() as usize)
            .map_or(zero.height, |p| p.1)
    } else {
        zero.height
    };
    let i_min = if h > 0.0 {
        (raw_min(right.troughs[0].0) + raw_min(left.troughs[0].0)) / 2.0
    } else {
        (right.troughs[0].1 + left.troughs[0].1) / 2.0
    };
    // the elevation is a floor, so it cannot exceed the neighbouring troughs
    let i_elev = ((peaks::sample_at(raw, right_edge) + peaks::sample_at(raw, left_edge)) / 2.0).min(i_min);

    let threshold = options.prominence_fraction * (i_max - baseline);
    let secondary = [(&right, missing_right), (&left, missing_left)]
        .into_iter()
        .filter_map(|(p, m)| {
            secondary_max_of(&p.heights, m)
                .filter(|&(_, h)| h - baseline >= threshold)
                .map(|(order, h)| (h, (crest_at(&p.crests, order) - center).abs()))
        })
        .next();

    let spectrum = spectral::power_spectrum(trace)?;
    let k_min = DEFAULT_K_MIN.max((n as f64 / (2.0 * spacing)).floor() as usize);
    let (fft_peak_k, _) = spectral::detect_interference_peak(&spectrum, k_min)?;
    let r_value = spectral::r_statistic(&spectrum, fft_peak_k)?;
    let envelope_a = fit_envelope_a(trace).ok().map(|fit| fit.a);

    let features = ObservedFeatures {
        center_pixel: center,
        recenter_shift_px: n as f64 / 2.0 - center,
        fringe_peak_positions: ladder.peaks.iter().map(|p| p.position).collect(),
        fringe_spacing_px: spacing,
        fringe_spacing_alt_px: None,
        fringe_count_in_principal: (missing_left as u64 - 1) + (missing_right as u64 - 1) + 1,
        missing_order_left: missing_left as u64,
        missing_order_right: missing_right as u64,
        principal_width_px,
        secondary_max_visible: secondary.is_some(),
        secondary_max_height: secondary.map(|s| s.0),
        secondary_max_offset_px: secondary.map(|s| s.1),
        i_max,
        i_min,
        i_elev,
        fft_peak_k,
        r_value,
        r_pre_shift: None,
        envelope_a,
    };
    features.validate()?;
    Ok(features)
}

/// Translates a trace so that its `anchor_order`-th fringes straddle the
/// midpoint of the anchor pixels, which is where the zero order lands.
/// Returns the shifted trace and the applied shift (positive = right).
pub fn recenter_trace(
    trace: &Trace,
    anchor_left_px: usize,
    anchor_right_px: usize,
    anchor_order: usize,
) -> Result<(Trace, f64)> {
    let n = trace.len();
    if anchor_left_px >= n || anchor_right_px >= n || anchor_left_px >= anchor_right_px {
        return Err(Error::domain(format!(
            "anchors ({anchor_left_px}, {anchor_right_px}) must be ordered and inside a {n}-pixel trace"
        )));
    }
    if anchor_order < 1 {
        return Err(Error::domain("anchor order must be at least 1"));
    }
    let ladder = fringe_ladder(trace.samples(), PROMINENCE_FRACTION)?;
    let order = anchor_order as i64;
    let (Some(r), Some(l)) = (ladder.peak_of_order(order), ladder.peak_of_order(-order)) else {
        return Err(Error::FeatureExtraction(format!(
            "fringes of order ±{anchor_order} not detected"
        )));
    };
    let target = (anchor_left_px + anchor_right_px) as f64 / 2.0;
    let shift = target - (l.position + r.position) / 2.0;
    let samples = trace.samples();
    let moved: Vec<f64> = (0..n)
        .map(|i| peaks::sample_at(samples, i as f64 - shift))
        .collect();
    let shifted = Trace::new(moved, trace.axis(), target)?;
    Ok((shifted, shift))
}
