//! Recover the extended-envelope coefficient from synthetic traces and use
//! it to correct the spectral visibility.

use slitscope::synthesis::{self, EnvelopeModel, SynthesisParams};
use slitscope::{audit, fringe_metrics, spectral};

fn main() -> slitscope::Result<()> {
    println!("{:>6} {:>8} {:>10} {:>10} {:>10}", "A", "fitted", "R", "V(A=0)", "V(fit)");
    for a in [0.0, 0.1, 0.25, 0.4] {
        let params = SynthesisParams {
            envelope: EnvelopeModel::extended(a)?,
            visibility: 0.8,
            i_dc: 245.0,
            ..SynthesisParams::default()
        };
        let trace = synthesis::synthesize_trace(&params, 3000)?;
        let fit = audit::fit_envelope_a(&trace)?;
        let spectrum = spectral::power_spectrum(&trace)?;
        let r = spectral::r_statistic(&spectrum, 44)?;
        let naive = fringe_metrics::visibility_from_r(r)?.value;
        let corrected = fringe_metrics::visibility_from_r_envelope(r, fit.a)?.value;
        println!("{a:>6} {:>8.4} {r:>10.4} {naive:>10.4} {corrected:>10.4}", fit.a);
    }
    Ok(())
}
