//! Every visibility estimate for the reported pattern, and the
//! complementarity bound for partially coherent beams.

use slitscope::audit;
use slitscope::fringe_metrics as fm;

fn main() -> slitscope::Result<()> {
    let f = audit::reported_pattern();
    let estimates = [
        fm::visibility_extrema(f.i_max, f.i_min)?,
        fm::visibility_elevation_corrected(f.i_max, f.i_min, f.i_elev)?,
        fm::visibility_from_r(f.r_value)?,
        fm::visibility_from_r_envelope(f.r_value, 0.0)?,
        fm::visibility_from_r_envelope(f.r_value, f.envelope_a.unwrap_or(0.25))?,
    ];
    for e in &estimates {
        println!("{:<22} {:.4}  {:?}", format!("{:?}", e.method), e.value, e.inputs);
    }

    println!("\nunbalanced beams: which-path predictability P against visibility V");
    for (i1, i2) in [(1.0, 1.0), (3.0, 1.0), (9.0, 1.0)] {
        let p = fm::distinguishability_balanced(i1, i2)?;
        for gamma in [1.0, 0.5] {
            let v = fm::visibility_from_coherence(i1, i2, gamma)?.value;
            let c = fm::complementarity_check(p, v)?;
            println!(
                "  I1/I2 = {:.0}, γ = {gamma:.1}: P = {p:.3}, V = {v:.3}, P² + V² = {:.3}{}",
                i1 / i2,
                c.lhs,
                if c.saturated { " (saturated)" } else { "" }
            );
        }
    }
    Ok(())
}
