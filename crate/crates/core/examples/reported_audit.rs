//! Audit of the reported pattern against its stated apparatus.

use slitscope::audit;
use slitscope::geometry::ApparatusConfig;

fn main() -> slitscope::Result<()> {
    let report = audit::audit(&ApparatusConfig::reported(), &audit::reported_pattern())?;
    print!("{}", report.to_text());
    let failing: Vec<&str> = report.failing().map(|c| c.name.as_str()).collect();
    println!("\nfailing checks: {failing:?}");
    Ok(())
}
