//! The angular reference pattern and its spectrum.

use slitscope::{spectral, synthesis};

fn main() -> slitscope::Result<()> {
    let trace = synthesis::simulate_reference(synthesis::REFERENCE_POINTS, synthesis::REFERENCE_STEP)?;
    let spectrum = spectral::power_spectrum(&trace)?;
    let (k, power) = spectral::detect_interference_peak(&spectrum, 20)?;
    println!("{} samples of {} rad", trace.len(), synthesis::REFERENCE_STEP);
    println!(
        "interference peak at bin {k}: {:.2} cycles/rad, power {power:.3e}",
        spectrum.wavenumber(k)
    );
    // cos²(200θ) repeats every π/200 rad
    println!("expected fringe frequency {:.2} cycles/rad", 200.0 / std::f64::consts::PI);
    println!("R = P_K/P_1 = {:.4}", spectral::r_statistic(&spectrum, k)?);
    Ok(())
}
