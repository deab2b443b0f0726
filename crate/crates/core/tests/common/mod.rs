#![allow(dead_code)]

use rand::Rng;
use slitscope::geometry::{self, ApparatusConfig};

/// A far-field apparatus on a 3000-pixel, 7 μm camera whose slit ratio is
/// integral, whose fringes are at least 12 px apart and whose first
/// secondary maxima land between 60 % and 90 % of the half window.
pub fn random_config<R: Rng>(rng: &mut R) -> ApparatusConfig {
    loop {
        let wavelength: f64 = rng.random_range(450e-9..700e-9);
        let slit_width: f64 = rng.random_range(5e-6..20e-6);
        let order = rng.random_range(10..=30) as f64;
        let fill: f64 = rng.random_range(0.6..0.9);
        let pixel_pitch = 7e-6;
        let pixel_count = 3000;
        let side_lobe = (geometry::SECONDARY_MAX_SINE_FACTOR * wavelength / slit_width).asin().tan();
        let config = ApparatusConfig {
            wavelength,
            slit_width,
            slit_separation: order * slit_width,
            screen_distance: fill * (pixel_count as f64 / 2.0) * pixel_pitch / side_lobe,
            pixel_pitch,
            pixel_count,
            beam_power: 0.5e-3,
            beam_diameter: 0.8e-3,
            longitudinal_modes: None,
            coherence_length: None,
        };
        let p = geometry::predict(&config).expect("valid config");
        if p.fringe_spacing.pixels >= 12.0 && p.fraunhofer_satisfied {
            return config;
        }
    }
}
