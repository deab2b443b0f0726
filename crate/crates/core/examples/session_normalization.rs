//! Standardise R across a session of noisy exposures so runs with different
//! detector settings can be compared.

use slitscope::synthesis::{self, SynthesisParams};
use slitscope::spectral;

fn main() -> slitscope::Result<()> {
    let mut r_values = Vec::new();
    for (seed, v) in [(1, 0.9), (2, 0.8), (3, 0.85), (4, 0.6), (5, 0.95)] {
        let params = SynthesisParams {
            visibility: v,
            i_dc: 245.0,
            noise_sigma: Some(5.0),
            rng_seed: seed,
            ..SynthesisParams::default()
        };
        let spectrum = spectral::power_spectrum(&synthesis::synthesize_trace(&params, 3000)?)?;
        r_values.push(spectral::r_statistic(&spectrum, 44)?);
    }
    let z = spectral::r_z_normalize(&r_values)?;
    for (r, z) in r_values.iter().zip(&z) {
        println!("R = {r:.4}  R_Z = {z:+.3}");
    }
    Ok(())
}
