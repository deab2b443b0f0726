//! Power spectra of traces, wavenumber bookkeeping, the R statistic and the
//! closed-form line powers of the raised-cosine model.
//!
//! Scaling: bin `k` holds the squared amplitude of the cosine component that
//! completes `k` cycles per window. A constant `c` gives `power[0] = c²`; a
//! cosine `C·cos(2πki/N)` with `0 < k < N/2` gives `power[k] = C²`. Parseval
//! then reads `P₀ + Σ P_k/2 + P_{N/2} = mean(x²)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::synthesis::{SampleAxis, Trace, MIN_TRACE_LEN};

/// Bins below this are skipped by the default peak search: DC, envelope
/// fundamental and extended-envelope second harmonic.
pub const DEFAULT_K_MIN: usize = 3;

/// One-sided power per integer wavenumber bin `0..=N/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSpectrum {
    powers: Vec<f64>,
    n_samples: usize,
    axis: SampleAxis,
}

impl PowerSpectrum {
    /// Wraps powers read from elsewhere, e.g. off a published plot.
    pub fn from_powers(powers: Vec<f64>, n_samples: usize, axis: SampleAxis) -> Result<Self> {
        if powers.len() != n_samples / 2 + 1 {
            return Err(Error::domain(format!(
                "{} bins do not fit {n_samples} samples (need {})",
                powers.len(),
                n_samples / 2 + 1
            )));
        }
        if let Some(p) = powers.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::domain(format!("power {p} must be finite and non-negative")));
        }
        Ok(PowerSpectrum {
            powers,
            n_samples,
            axis,
        })
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn axis(&self) -> SampleAxis {
        self.axis
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn power(&self, k: usize) -> Option<f64> {
        self.powers.get(k).copied()
    }

    /// Axis value of bin `k`: cycles per window for camera traces, cycles
    /// per radian for angular traces.
    pub fn wavenumber(&self, k: usize) -> f64 {
        match self.axis {
            SampleAxis::Camera { .. } => k as f64,
            SampleAxis::Angle { step } => k as f64 / (self.n_samples as f64 * step),
        }
    }

    /// Bin nearest to an axis value.
    pub fn bin_of(&self, wavenumber: f64) -> usize {
        let k = match self.axis {
            SampleAxis::Camera { .. } => wavenumber,
            SampleAxis::Angle { step } => wavenumber * self.n_samples as f64 * step,
        };
        (k.round().max(0.0) as usize).min(self.powers.len() - 1)
    }

    /// Weight of bin `k` in the Parseval sum.
    pub fn parseval_weight(&self, k: usize) -> f64 {
        if k == 0 || (self.n_samples % 2 == 0 && k == self.n_samples / 2) {
            1.0
        } else {
            0.5
        }
    }

    /// `Σ w_k P_k`, which equals the mean square of the samples.
    pub fn parseval_sum(&self) -> f64 {
        self.powers
            .iter()
            .enumerate()
            .map(|(k, p)| self.parseval_weight(k) * p)
            .sum()
    }

    /// `log₁₀` of each power; zero bins map to `-inf`.
    pub fn log10_powers(&self) -> Vec<f64> {
        self.powers.iter().map(|p| p.log10()).collect()
    }
}

fn scale_bins(bins: &[Complex<f64>], n: usize) -> Vec<f64> {
    let nf = n as f64;
    (0..=n / 2)
        .map(|k| {
            let amp = bins[k].norm() / nf;
            let nyquist = n % 2 == 0 && k == n / 2;
            if k == 0 || nyquist {
                amp * amp
            } else {
                4.0 * amp * amp
            }
        })
        .collect()
}

/// Power spectrum of raw samples (no window, no detrending).
pub fn power_spectrum_of(samples: &[f64], axis: SampleAxis) -> Result<PowerSpectrum> {
    if samples.len() < MIN_TRACE_LEN {
        return Err(Error::TraceTooShort {
            len: samples.len(),
            min: MIN_TRACE_LEN,
        });
    }
    let n = samples.len();
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    Ok(PowerSpectrum {
        powers: scale_bins(&buf, n),
        n_samples: n,
        axis,
    })
}

pub fn power_spectrum(trace: &Trace) -> Result<PowerSpectrum> {
    power_spectrum_of(trace.samples(), trace.axis())
}

/// Direct O(N²) DFT under the same scaling; the reference for
/// [`power_spectrum_of`].
pub fn brute_force_dft_of(samples: &[f64], axis: SampleAxis) -> Result<PowerSpectrum> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::TraceTooShort { len: n, min: 2 });
    }
    let twiddles: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let angle = -2.0 * PI * j as f64 / n as f64;
            (angle.cos(), angle.sin())
        })
        .collect();
    let bins: Vec<Complex<f64>> = (0..=n / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (i, &v) in samples.iter().enumerate() {
                let (c, s) = twiddles[(k * i) % n];
                re += v * c;
                im += v * s;
            }
            Complex::new(re, im)
        })
        .collect();
    Ok(PowerSpectrum {
        powers: scale_bins(&bins, n),
        n_samples: n,
        axis,
    })
}

pub fn brute_force_dft(trace: &Trace) -> Result<PowerSpectrum> {
    brute_force_dft_of(trace.samples(), trace.axis())
}

/// Wavenumber (cycles per window) of a fringe period of `spacing_px`
/// samples in an `n_samples` window.
pub fn spacing_to_wavenumber(spacing_px: f64, n_samples: usize) -> Result<f64> {
    if !(spacing_px > 0.0) {
        return Err(Error::domain(format!("spacing must be positive, got {spacing_px}")));
    }
    Ok(n_samples as f64 / spacing_px)
}

/// Largest bin at or above `k_min`; ties go to the lower bin.
pub fn detect_interference_peak(spectrum: &PowerSpectrum, k_min: usize) -> Result<(usize, f64)> {
    if k_min < 2 {
        return Err(Error::domain(format!("k_min must be at least 2, got {k_min}")));
    }
    let last = spectrum.len() - 1;
    if k_min > last {
        return Err(Error::EmptySearchRange { k_min, last });
    }
    let mut best = (k_min, spectrum.powers[k_min]);
    for (k, &p) in spectrum.powers.iter().enumerate().skip(k_min + 1) {
        if p > best.1 {
            best = (k, p);
        }
    }
    Ok(best)
}

/// `R = P_K / P_1`.
pub fn r_statistic(spectrum: &PowerSpectrum, k_peak: usize) -> Result<f64> {
    let p1 = spectrum.power(1).ok_or(Error::UndefinedR)?;
    if p1 <= 0.0 {
        return Err(Error::UndefinedR);
    }
    let pk = spectrum
        .power(k_peak)
        .ok_or_else(|| Error::domain(format!("bin {k_peak} outside spectrum")))?;
    Ok(pk / p1)
}

/// `R` read off a spectrum whose axis is displaced by `shift` bins: the
/// value displayed at wavenumber 1 is really bin `1 − shift`.
pub fn r_statistic_displaced(spectrum: &PowerSpectrum, k_peak: usize, shift: i64) -> Result<f64> {
    let reference = 1 - shift;
    if reference < 0 {
        return Err(Error::domain(format!("shift {shift} moves wavenumber 1 below bin 0")));
    }
    let p_ref = spectrum.power(reference as usize).ok_or(Error::UndefinedR)?;
    if p_ref <= 0.0 {
        return Err(Error::UndefinedR);
    }
    let pk = spectrum
        .power(k_peak)
        .ok_or_else(|| Error::domain(format!("bin {k_peak} outside spectrum")))?;
    Ok(pk / p_ref)
}

/// The fractional form `P_K/(P_K + P_1)`, reported alongside `R` for
/// comparison only.
pub fn r_fraction(spectrum: &PowerSpectrum, k_peak: usize) -> Result<f64> {
    let r = r_statistic(spectrum, k_peak)?;
    Ok(r / (1.0 + r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumAlignment {
    /// Declared peak minus expected peak; positive means the spectrum sits
    /// to the right of where it belongs.
    pub shift: i64,
    pub corrected_peak_k: usize,
}

/// Registration of a declared peak against the fringe spacing measured on a
/// trace of `n_samples` pixels.
pub fn align_peak(n_samples: usize, declared_peak_k: usize, spacing_px: f64) -> Result<SpectrumAlignment> {
    let x = spacing_to_wavenumber(spacing_px, n_samples)?;
    // a fringe frequency between two bins leaks into both, so either
    // flanking bin is a correctly registered peak
    let (lo, hi) = (x.floor() as usize, x.ceil() as usize);
    let expected = if declared_peak_k.abs_diff(lo) <= declared_peak_k.abs_diff(hi) { lo } else { hi };
    Ok(SpectrumAlignment {
        shift: declared_peak_k as i64 - expected as i64,
        corrected_peak_k: expected,
    })
}

pub fn align_spectrum_origin(
    spectrum: &PowerSpectrum,
    declared_peak_k: usize,
    spacing_px: f64,
) -> Result<SpectrumAlignment> {
    align_peak(spectrum.n_samples(), declared_peak_k, spacing_px)
}

/// Session normalisation `(R − μ)/σ` with the sample standard deviation.
pub fn r_z_normalize(r_values: &[f64]) -> Result<Vec<f64>> {
    if r_values.len() < 2 {
        return Err(Error::domain("need at least two R values"));
    }
    let n = r_values.len() as f64;
    let mean = r_values.iter().sum::<f64>() / n;
    let var = r_values.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let sigma = var.sqrt();
    if !(sigma > 0.0) {
        return Err(Error::DegenerateSession);
    }
    Ok(r_values.iter().map(|r| (r - mean) / sigma).collect())
}

/// Closed-form line powers of `F·I₀(1 + V cos Kx) + I_DC` with the
/// raised-cosine envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinePowers {
    pub dc: f64,
    pub fundamental: f64,
    pub k_minus_1: f64,
    pub k: f64,
    pub k_plus_1: f64,
}

impl LinePowers {
    /// Keyed by bin for a fringe at integer wavenumber `k`.
    pub fn at(&self, k: usize) -> BTreeMap<usize, f64> {
        BTreeMap::from([
            (0, self.dc),
            (1, self.fundamental),
            (k - 1, self.k_minus_1),
            (k, self.k),
            (k + 1, self.k_plus_1),
        ])
    }
}

pub fn predicted_line_powers(i0: f64, visibility: f64, i_dc: f64) -> LinePowers {
    LinePowers {
        dc: (i0 / 2.0 + i_dc).powi(2),
        fundamental: (i0 / 2.0).powi(2),
        k_minus_1: (i0 * visibility / 4.0).powi(2),
        k: (i0 * visibility / 2.0).powi(2),
        k_plus_1: (i0 * visibility / 4.0).powi(2),
    }
}

/// Line powers for a three-term cosine envelope `a₀ + a₁cos x + a₂cos 2x`
/// at integer fringe wavenumber `k`. Coincident lines add in amplitude.
pub fn envelope_line_powers(
    i0: f64,
    visibility: f64,
    i_dc: f64,
    coefficients: (f64, f64, f64),
    k: usize,
) -> BTreeMap<usize, f64> {
    let (a0, a1, a2) = coefficients;
    let k = k as i64;
    let terms = [
        (0, i0 * a0 + i_dc),
        (1, i0 * a1),
        (2, i0 * a2),
        (k, i0 * visibility * a0),
        (k - 1, i0 * visibility * a1 / 2.0),
        (k + 1, i0 * visibility * a1 / 2.0),
        (k - 2, i0 * visibility * a2 / 2.0),
        (k + 2, i0 * visibility * a2 / 2.0),
    ];
    let mut amplitudes: BTreeMap<usize, f64> = BTreeMap::new();
    for (bin, amp) in terms {
        // cos(−jx) = cos(jx): negative frequencies fold onto |j|
        let bin = bin.unsigned_abs() as usize;
        *amplitudes.entry(bin).or_insert(0.0) += amp;
    }
    amplitudes.into_iter().map(|(bin, a)| (bin, a * a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAM: SampleAxis = SampleAxis::Camera { pixel_pitch: 7e-6 };

    #[test]
    fn constant_is_pure_dc() {
        let s = power_spectrum_of(&[3.0; 64], CAM).unwrap();
        assert!((s.powers()[0] - 9.0).abs() < 1e-12);
        assert!(s.powers()[1..].iter().all(|p| *p < 1e-24));
    }

    #[test]
    fn cosine_amplitude_squared() {
        let n = 128;
        let c = 2.5;
        let x: Vec<f64> = (0..n)
            .map(|i| c * (2.0 * PI * 5.0 * i as f64 / n as f64).cos())
            .collect();
        let s = power_spectrum_of(&x, CAM).unwrap();
        assert!((s.powers()[5] - c * c).abs() < 1e-12);
        for (k, p) in s.powers().iter().enumerate() {
            if k != 5 {
                assert!(*p < 1e-20, "bin {k}: {p}");
            }
        }
    }

    #[test]
    fn impulse_is_flat() {
        let n = 32;
        let mut x = vec![0.0; n];
        x[0] = 1.0;
        let s = brute_force_dft_of(&x, CAM).unwrap();
        let nf = (n * n) as f64;
        assert!((s.powers()[0] - 1.0 / nf).abs() < 1e-15);
        assert!((s.powers()[n / 2] - 1.0 / nf).abs() < 1e-15);
        for k in 1..n / 2 {
            assert!((s.powers()[k] - 4.0 / nf).abs() < 1e-15);
        }
        let z = brute_force_dft_of(&vec![0.0; n], CAM).unwrap();
        assert!(z.powers().iter().all(|p| *p == 0.0));
    }

    #[test]
    fn too_short() {
        assert!(matches!(
            power_spectrum_of(&[1.0; 8], CAM),
            Err(Error::TraceTooShort { len: 8, .. })
        ));
        assert!(brute_force_dft_of(&[1.0], CAM).is_err());
    }

    #[test]
    fn wavenumber_conversions() {
        assert!((spacing_to_wavenumber(69.0, 3000).unwrap() - 43.478).abs() < 1e-3);
        assert!((spacing_to_wavenumber(47.0, 3000).unwrap() - 63.83).abs() < 1e-2);
        assert_eq!(spacing_to_wavenumber(3000.0, 3000).unwrap(), 1.0);
        assert!(spacing_to_wavenumber(0.0, 3000).is_err());
    }

    #[test]
    fn peak_detection_rules() {
        let mut powers = vec![0.0; 101];
        powers[40] = 5.0;
        powers[50] = 5.0;
        powers[1] = 100.0;
        let s = PowerSpectrum {
            powers,
            n_samples: 200,
            axis: CAM,
        };
        assert_eq!(detect_interference_peak(&s, 2).unwrap(), (40, 5.0));
        let zero = PowerSpectrum {
            powers: vec![0.0; 101],
            n_samples: 200,
            axis: CAM,
        };
        assert_eq!(detect_interference_peak(&zero, 7).unwrap(), (7, 0.0));
        assert!(matches!(
            detect_interference_peak(&zero, 101),
            Err(Error::EmptySearchRange { .. })
        ));
        assert!(detect_interference_peak(&zero, 1).is_err());
    }

    #[test]
    fn r_from_log_powers() {
        let mut powers = vec![0.0; 100];
        powers[1] = 10f64.powf(7.9);
        powers[44] = 10f64.powf(7.4);
        let s = PowerSpectrum {
            powers,
            n_samples: 198,
            axis: CAM,
        };
        let r = r_statistic(&s, 44).unwrap();
        assert!((r - 0.316).abs() < 0.001);
        assert!((r_fraction(&s, 44).unwrap() - r / (1.0 + r)).abs() < 1e-15);
        let flat = PowerSpectrum {
            powers: vec![0.0; 100],
            n_samples: 198,
            axis: CAM,
        };
        assert!(matches!(r_statistic(&flat, 44), Err(Error::UndefinedR)));
    }

    #[test]
    fn displaced_r_reads_dc_as_first_bin() {
        let s = PowerSpectrum {
            powers: vec![16.0, 4.0, 0.0, 1.0, 0.0],
            n_samples: 8,
            axis: CAM,
        };
        assert_eq!(r_statistic_displaced(&s, 3, 0).unwrap(), 0.25);
        assert_eq!(r_statistic_displaced(&s, 3, 1).unwrap(), 1.0 / 16.0);
        assert!(r_statistic_displaced(&s, 3, 2).is_err());
    }

    #[test]
    fn alignment_examples() {
        let a = align_peak(3000, 45, 69.0).unwrap();
        assert_eq!(a.shift, 1);
        assert_eq!(a.corrected_peak_k, 44);
        assert_eq!(align_peak(3000, 44, 69.0).unwrap().shift, 0);
        assert_eq!(align_peak(3000, 43, 69.0).unwrap().shift, 0);
        let low = align_peak(3000, 40, 69.0).unwrap();
        assert_eq!((low.shift, low.corrected_peak_k), (-3, 43));
        assert_eq!(align_peak(3000, 50, 60.0).unwrap().shift, 0);
    }

    #[test]
    fn r_z_examples() {
        let z = r_z_normalize(&[1.0, 2.0, 3.0]).unwrap();
        for (a, b) in z.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(matches!(r_z_normalize(&[0.3; 5]), Err(Error::DegenerateSession)));
        assert!(r_z_normalize(&[0.3]).is_err());
    }

    #[test]
    fn line_power_examples() {
        let lp = predicted_line_powers(2.0, 0.5, 0.0);
        let m = lp.at(44);
        assert_eq!(m[&0], 1.0);
        assert_eq!(m[&1], 1.0);
        assert_eq!(m[&44], 0.25);
        assert_eq!(m[&43], 0.0625);
        assert_eq!(m[&45], 0.0625);
        let none = predicted_line_powers(2.0, 0.0, 0.0);
        assert_eq!((none.k_minus_1, none.k, none.k_plus_1), (0.0, 0.0, 0.0));
        let lp = predicted_line_powers(7.3, 0.6, 1.0);
        assert!((lp.k / lp.fundamental - 0.36).abs() < 1e-12);
    }

    #[test]
    fn envelope_lines_reduce_to_table() {
        let m = envelope_line_powers(2.0, 0.5, 0.0, (0.5, 0.5, 0.0), 44);
        let lp = predicted_line_powers(2.0, 0.5, 0.0).at(44);
        for (k, p) in lp {
            assert!((m[&k] - p).abs() < 1e-15);
        }
        assert_eq!(m[&2], 0.0);
    }
}
