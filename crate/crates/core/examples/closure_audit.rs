//! Simulate a camera trace from an apparatus, extract its features and audit
//! them against the same apparatus. A self-consistent description passes.

use slitscope::audit;
use slitscope::geometry::ApparatusConfig;
use slitscope::synthesis::{self, CameraExposure};

fn main() -> slitscope::Result<()> {
    for distance in [0.104, 0.1274, 0.14] {
        let config = ApparatusConfig::reported().with_screen_distance(distance);
        let exposure = CameraExposure {
            noise_sigma: Some(0.1),
            rng_seed: 1,
            ..CameraExposure::default()
        };
        let trace = synthesis::sample_apparatus(&config, &exposure)?;
        let options = audit::features::ExtractOptions {
            smoothing_half_width: 3,
            ..Default::default()
        };
        let features = audit::features::extract_features_with(&trace, &options)?;
        let report = audit::audit(&config, &features)?;
        println!(
            "D = {distance} m: {} fringes, spacing {:.2} px, width {:.1} px, {}",
            features.fringe_count_in_principal,
            features.fringe_spacing_px,
            features.principal_width_px,
            if report.passed() { "all checks pass" } else { "checks fail" }
        );
        for c in &report.checks {
            println!("    {:<16} {:?}", c.name, c.verdict);
        }
    }
    Ok(())
}
