//! Spectral lines of a synthesized fringe pattern against their closed form.

use slitscope::spectral;
use slitscope::synthesis::{self, SynthesisParams};

fn main() -> slitscope::Result<()> {
    let (k, n) = (44usize, 3000usize);
    println!("{:>5} {:>6} {:>10} {:>14} {:>14}", "V", "I_DC", "bin", "measured", "predicted");
    for v in [1.0, 0.5] {
        for i_dc in [0.0, 245.0] {
            let params = SynthesisParams {
                visibility: v,
                i_dc,
                k: k as f64,
                ..SynthesisParams::default()
            };
            let spectrum = spectral::power_spectrum(&synthesis::synthesize_trace(&params, n)?)?;
            let lines = spectral::predicted_line_powers(params.i0, v, i_dc).at(k);
            for (bin, predicted) in &lines {
                let measured = spectrum.power(*bin).unwrap_or(f64::NAN);
                println!("{v:>5} {i_dc:>6} {bin:>10} {measured:>14.4} {predicted:>14.4}");
            }
            let r = spectral::r_statistic(&spectrum, k)?;
            println!("{v:>5} {i_dc:>6} {:>10} {r:>14.4} {:>14.4}", "R", v * v);
        }
    }
    Ok(())
}
