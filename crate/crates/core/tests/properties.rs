mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use slitscope::audit::{self, features, Verdict};
use slitscope::fringe_metrics as fm;
use slitscope::geometry::{self, ApparatusConfig};
use slitscope::peaks::find_peaks;
use slitscope::spectral;
use slitscope::synthesis::{self, CameraExposure, Defects, EnvelopeModel, SampleAxis, SynthesisParams, Trace};

const CAM: SampleAxis = SampleAxis::Camera { pixel_pitch: 7e-6 };

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()) + 1e-13 * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fft_matches_dft_and_parseval(samples in prop::collection::vec(0.0f64..1e3, 16..600)) {
        let fast = spectral::power_spectrum_of(&samples, CAM).unwrap();
        let slow = spectral::brute_force_dft_of(&samples, CAM).unwrap();
        let ms = samples.iter().map(|v| v * v).sum::<f64>() / samples.len() as f64;
        for (a, b) in fast.powers().iter().zip(slow.powers()) {
            prop_assert!(close(*a, *b, ms), "{a} vs {b}");
            prop_assert!(*a >= 0.0);
        }
        prop_assert!(close(fast.parseval_sum(), ms, ms));
        prop_assert!(close(slow.parseval_sum(), ms, ms));
    }

    #[test]
    fn spectrum_ignores_reversal_and_rotation(
        samples in prop::collection::vec(0.0f64..1e3, 16..300),
        rot in 0usize..300,
    ) {
        let base = spectral::power_spectrum_of(&samples, CAM).unwrap();
        let mut reversed = samples.clone();
        reversed.reverse();
        let mut rotated = samples.clone();
        let len = rotated.len();
        rotated.rotate_left(rot % len);
        let ms = base.parseval_sum();
        for other in [reversed, rotated] {
            let s = spectral::power_spectrum_of(&other, CAM).unwrap();
            for (a, b) in base.powers().iter().zip(s.powers()) {
                prop_assert!(close(*a, *b, ms));
            }
        }
    }

    #[test]
    fn spectrum_scales_quadratically(samples in prop::collection::vec(0.0f64..1e3, 16..300), c in 0.1f64..10.0) {
        let base = spectral::power_spectrum_of(&samples, CAM).unwrap();
        let scaled: Vec<f64> = samples.iter().map(|v| v * c).collect();
        let s = spectral::power_spectrum_of(&scaled, CAM).unwrap();
        let ms = base.parseval_sum() * c * c;
        for (a, b) in base.powers().iter().zip(s.powers()) {
            prop_assert!(close(a * c * c, *b, ms));
        }
    }

    /// `F·I₀(1 + V cos Kx) + I_DC` with the raised-cosine envelope is a sum
    /// of five cosines; its spectrum holds nothing outside them.
    #[test]
    fn raised_cosine_is_five_lines(v in 0.0f64..=1.0, k in 3usize..100, i_dc in 0.0f64..500.0) {
        let params = SynthesisParams { visibility: v, k: k as f64, i_dc, ..SynthesisParams::default() };
        let t = synthesis::synthesize_trace(&params, 1024).unwrap();
        let s = spectral::power_spectrum(&t).unwrap();
        let table = spectral::predicted_line_powers(params.i0, v, i_dc).at(k);
        for (bin, p) in s.powers().iter().enumerate() {
            let want = table.get(&bin).copied().unwrap_or(0.0);
            prop_assert!((p - want).abs() <= 1e-6 * want + 1e-9 * table[&0], "bin {bin}: {p} vs {want}");
        }
    }

    #[test]
    fn geometry_inverts(
        wavelength in 400e-9f64..800e-9,
        slit_width in 2e-6f64..50e-6,
        ratio in 2.0f64..40.0,
        distance in 0.02f64..2.0,
    ) {
        let config = ApparatusConfig {
            wavelength,
            slit_width,
            slit_separation: ratio * slit_width,
            screen_distance: distance,
            ..ApparatusConfig::reported()
        };
        let p = geometry::predict(&config).unwrap();
        let from_spacing = geometry::infer_distance_from_spacing(
            p.fringe_spacing.pixels, config.pixel_pitch, config.slit_separation, wavelength).unwrap();
        let from_width = geometry::infer_distance_from_width(
            p.principal_half_width.meters, slit_width, wavelength).unwrap();
        prop_assert!((from_spacing - distance).abs() <= 1e-12 * distance);
        prop_assert!((from_width - distance).abs() <= 1e-12 * distance);
        prop_assert!((geometry::missing_order(config.slit_separation, slit_width).unwrap() - ratio).abs() < 1e-12 * ratio);
        // spacing and width both grow linearly with distance
        let doubled = geometry::predict(&config.with_screen_distance(2.0 * distance)).unwrap();
        prop_assert!((doubled.fringe_spacing.meters - 2.0 * p.fringe_spacing.meters).abs() <= 1e-12 * p.fringe_spacing.meters);
        prop_assert!((doubled.principal_width.meters - 2.0 * p.principal_width.meters).abs() <= 1e-12 * p.principal_width.meters);
    }

    #[test]
    fn complementarity_bound(i1 in 0.01f64..100.0, i2 in 0.01f64..100.0, gamma in 0.0f64..=1.0) {
        let p = fm::distinguishability_balanced(i1, i2).unwrap();
        let v = fm::visibility_from_coherence(i1, i2, gamma).unwrap().value;
        let c = fm::complementarity_check(p, v).unwrap();
        prop_assert!(c.satisfied);
        if gamma == 1.0 {
            prop_assert!(c.saturated);
        }
    }

    #[test]
    fn elevation_correction_ignores_common_offset(
        lo in 0.0f64..100.0, span in 1.0f64..1000.0, dip in 0.0f64..1.0, offset in 0.0f64..1000.0,
    ) {
        let (i_elev, i_max) = (lo, lo + span);
        let i_min = i_elev + dip * span;
        let a = fm::visibility_elevation_corrected(i_max, i_min, i_elev).unwrap().value;
        let b = fm::visibility_elevation_corrected(i_max + offset, i_min + offset, i_elev + offset).unwrap().value;
        prop_assert!((a - b).abs() < 1e-9);
        // without a correction an offset only ever lowers the contrast
        let plain = fm::visibility_extrema(i_max + offset, i_min + offset).unwrap().value;
        prop_assert!(plain <= a + 1e-12);
    }

    #[test]
    fn envelope_formula_round_trips(v in 0.0f64..=1.0, a in 0.0f64..0.9) {
        // R = (V·a₁/a₀)⁻²... inverted: V = √R·a₀/a₁ forward gives R = (V(1 − A))²
        let r = (v * (1.0 - a)).powi(2);
        let back = fm::visibility_from_r_envelope(r, a).unwrap();
        prop_assert!((back.value - v).abs() < 1e-12);
        prop_assert!(!back.clamped);
    }

    #[test]
    fn r_z_is_standardised(values in prop::collection::vec(0.0f64..1.0, 2..50)) {
        let spread = values.iter().cloned().fold(f64::MIN, f64::max) - values.iter().cloned().fold(f64::MAX, f64::min);
        prop_assume!(spread > 1e-6);
        let z = spectral::r_z_normalize(&values).unwrap();
        let n = z.len() as f64;
        let mean = z.iter().sum::<f64>() / n;
        let var = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        prop_assert!(mean.abs() < 1e-12);
        prop_assert!((var.sqrt() - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn features_do_not_depend_on_intensity_scale(c in 0.05f64..20.0) {
        let t = synthesis::sample_apparatus(&ApparatusConfig::reported(), &CameraExposure::default()).unwrap();
        let base = audit::extract_features(&t).unwrap();
        let scaled = audit::extract_features(&t.scaled(c).unwrap()).unwrap();
        prop_assert_eq!(base.fringe_count_in_principal, scaled.fringe_count_in_principal);
        prop_assert_eq!(base.fft_peak_k, scaled.fft_peak_k);
        prop_assert!((base.fringe_spacing_px - scaled.fringe_spacing_px).abs() < 1e-6);
        prop_assert!((base.principal_width_px - scaled.principal_width_px).abs() < 1e-6);
        prop_assert!((base.r_value - scaled.r_value).abs() < 1e-9);
        prop_assert!((base.i_max * c - scaled.i_max).abs() < 1e-6 * scaled.i_max);
    }

    #[test]
    fn closure_with_detector_noise(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let config = common::random_config(&mut rng);
        let exposure = CameraExposure { noise_sigma: Some(0.1), rng_seed: seed, ..CameraExposure::default() };
        let t = synthesis::sample_apparatus(&config, &exposure).unwrap();
        let options = features::ExtractOptions { smoothing_half_width: 3, ..Default::default() };
        let f = features::extract_features_with(&t, &options).unwrap();
        let report = audit::audit(&config, &f).unwrap();
        prop_assert!(report.passed(), "{}", report.to_text());
    }
}

#[test]
fn reported_pattern_at_fourteen_cm_hides_the_side_lobe() {
    let config = ApparatusConfig::reported().with_screen_distance(0.14);
    let p = geometry::predict(&config).unwrap();
    assert!((p.principal_width.pixels - 2536.283).abs() < 0.01);
    assert!(!p.secondary_max.in_view);
    let t = synthesis::sample_apparatus(&config, &CameraExposure::default()).unwrap();
    let report = audit::audit(&config, &audit::extract_features(&t).unwrap()).unwrap();
    let sm = report.check("secondary_max").unwrap();
    assert_eq!(sm.verdict, Verdict::Warn);
    assert!(sm.note.as_deref().unwrap().contains("outside camera view"));
    assert!(report.passed());
}

#[test]
fn extraction_recovers_the_reported_geometry() {
    let config = ApparatusConfig::reported();
    let t = synthesis::sample_apparatus(&config, &CameraExposure::default()).unwrap();
    let f = audit::extract_features(&t).unwrap();
    assert_eq!((f.missing_order_left, f.missing_order_right), (20, 20));
    assert_eq!(f.fringe_count_in_principal, 39);
    assert!((f.fringe_spacing_px - 47.008).abs() < 0.1);
    assert!((f.principal_width_px - 1884.096).abs() < 2.0);
    assert!(f.secondary_max_visible);
    let offset = f.secondary_max_offset_px.unwrap();
    assert!((offset - 1369.0).abs() < 47.0);
    assert!((f.secondary_max_height.unwrap() - 282.0).abs() < 2.0);
    assert!((f.center_pixel - 1500.0).abs() < 1e-6);
    assert!((f.i_max - 1032.0).abs() < 1e-6);
}

#[test]
fn recentring_undoes_a_translation() {
    let t = synthesis::sample_apparatus(&ApparatusConfig::reported(), &CameraExposure::default()).unwrap();
    let (same, shift) = audit::recenter_trace(&t, 600, 2400, 13).unwrap();
    assert!(shift.abs() < 1e-6);
    assert_eq!(same.samples(), t.samples());

    // move the pattern 19 px to the right
    let moved: Vec<f64> = (0..t.len())
        .map(|i| t.samples()[i.saturating_sub(19)])
        .collect();
    let moved = Trace::camera(moved, 7e-6).unwrap();
    let (back, shift) = audit::recenter_trace(&moved, 600, 2400, 13).unwrap();
    assert!((shift + 19.0).abs() < 0.05, "shift {shift}");
    let f = audit::extract_features(&back).unwrap();
    assert!((f.center_pixel - 1500.0).abs() <= 0.5);
    assert!(audit::recenter_trace(&t, 2400, 600, 13).is_err());
    assert!(audit::recenter_trace(&t, 600, 2400, 40).is_err());
}

#[test]
fn dead_pixels_hide_fringes_from_the_detector() {
    let t = synthesis::synthesize_trace(&SynthesisParams::default(), 3000).unwrap();
    let count = |t: &Trace| find_peaks(t.samples(), features::PROMINENCE_FRACTION * t.max()).len();
    let before = count(&t);
    let ladder = features::fringe_ladder(t.samples(), features::PROMINENCE_FRACTION).unwrap();
    // blank whole fringe periods around seven crests right of centre
    let half = (ladder.coarse_spacing / 2.0) as usize;
    let dead: Vec<usize> = (1..=7)
        .flat_map(|m| {
            let c = ladder.peak_of_order(m).unwrap().index;
            c - half..=c + half
        })
        .collect();
    let defects = Defects { dead_pixels: dead, ..Defects::default() };
    let after = count(&synthesis::apply_defects(&t, &defects).unwrap());
    assert_eq!(before - after, 7);
}

#[test]
fn apodization_raises_the_fitted_envelope_coefficient() {
    let t = synthesis::synthesize_trace(&SynthesisParams { i_dc: 245.0, ..SynthesisParams::default() }, 3000).unwrap();
    let plain = audit::fit_envelope_a(&t).unwrap().a;
    let tapered = synthesis::apply_defects(&t, &Defects { apodization_strength: 1.0, ..Defects::default() }).unwrap();
    let apodized = audit::fit_envelope_a(&tapered).unwrap().a;
    assert!(plain < 0.02);
    assert!(apodized > plain + 0.05, "{plain} → {apodized}");
}

#[test]
fn fitted_coefficients_are_ordered() {
    let fits: Vec<f64> = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]
        .iter()
        .map(|&a| {
            let p = SynthesisParams { envelope: EnvelopeModel::Extended { a }, i_dc: 245.0, ..SynthesisParams::default() };
            audit::fit_envelope_a(&synthesis::synthesize_trace(&p, 3000).unwrap()).unwrap().a
        })
        .collect();
    for (a, fit) in [0.0, 0.1, 0.2, 0.3, 0.4, 0.5].iter().zip(&fits) {
        assert!((a - fit).abs() <= 0.02, "{a} → {fit}");
    }
    assert!(fits.windows(2).all(|w| w[0] < w[1]), "{fits:?}");
}

#[test]
fn non_integral_wavenumber_splits_asymmetrically() {
    let p = SynthesisParams { k: 43.5, ..SynthesisParams::default() };
    let s = spectral::power_spectrum(&synthesis::synthesize_trace(&p, 3000).unwrap()).unwrap();
    let (lo, hi) = (s.powers()[43], s.powers()[45]);
    assert!((lo - hi).abs() > 1e-6 * lo.max(hi), "{lo} vs {hi}");
}

#[test]
fn reference_alignment_needs_no_shift() {
    let t = synthesis::simulate_reference(synthesis::REFERENCE_POINTS, synthesis::REFERENCE_STEP).unwrap();
    let s = spectral::power_spectrum(&t).unwrap();
    let (k, _) = spectral::detect_interference_peak(&s, features::interference_search_floor(&t)).unwrap();
    // cos²(200θ) has period π/200 rad
    let spacing = std::f64::consts::PI / 200.0 / synthesis::REFERENCE_STEP;
    let a = spectral::align_peak(t.len(), k, spacing).unwrap();
    assert_eq!(a.shift, 0);
    assert_eq!(s.wavenumber(k).floor(), 63.0);
}

#[test]
fn flat_camera_far_from_axis_still_counts_fringes() {
    // a short distance puts high orders at large angles where the camera
    // stretches the fringes
    let config = ApparatusConfig {
        slit_width: 5e-6,
        slit_separation: 100e-6,
        screen_distance: 0.06,
        ..ApparatusConfig::reported()
    };
    let p = geometry::predict(&config).unwrap();
    assert!(p.half_angle_theta > 0.12);
    let t = synthesis::sample_apparatus(&config, &CameraExposure::default()).unwrap();
    let f = audit::extract_features(&t).unwrap();
    assert_eq!(f.fringe_count_in_principal, p.fringe_count);
    assert!((f.principal_width_px - p.principal_width.pixels).abs() <= 2.0);
}
