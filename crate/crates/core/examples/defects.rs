//! How camera tilt, dead pixels and apodization change what the audit sees.

use slitscope::audit;
use slitscope::geometry::ApparatusConfig;
use slitscope::synthesis::{self, CameraExposure, Defects};

fn main() -> slitscope::Result<()> {
    let config = ApparatusConfig::reported();
    let clean = synthesis::sample_apparatus(&config, &CameraExposure::default())?;
    let cases = [
        ("clean", Defects::default()),
        (
            "tilt 0.3",
            Defects {
                tilt_skew: 0.3,
                ..Defects::default()
            },
        ),
        (
            "dead column",
            Defects {
                dead_pixels: (1700..1760).collect(),
                ..Defects::default()
            },
        ),
        (
            "apodized",
            Defects {
                apodization_strength: 2.0,
                ..Defects::default()
            },
        ),
    ];
    for (name, defects) in cases {
        let trace = synthesis::apply_defects(&clean, &defects)?;
        let fit = audit::fit_envelope_a(&trace).map(|f| f.a).unwrap_or(f64::NAN);
        match audit::extract_features(&trace) {
            Ok(f) => {
                let report = audit::audit(&config, &f)?;
                let failing: Vec<&str> = report.failing().map(|c| c.name.as_str()).collect();
                println!(
                    "{name:<12} missing orders {}/{}, fitted A {fit:.3}, failing {failing:?}",
                    f.missing_order_left, f.missing_order_right
                );
            }
            Err(e) => println!("{name:<12} extraction failed: {e}"),
        }
    }
    Ok(())
}
