//! Closed-form fringe geometry for the reported apparatus and a few screen
//! distances.

use slitscope::geometry::{self, ApparatusConfig};

fn main() -> slitscope::Result<()> {
    let config = ApparatusConfig::reported();
    let p = geometry::predict(&config)?;
    println!("missing order     {:.3}", p.missing_order);
    println!("fringe count      {}", p.fringe_count);
    println!("fringe spacing    {:.3} px", p.fringe_spacing.pixels);
    println!("half angle        {:.4} deg", p.half_angle_theta.to_degrees());
    println!("principal width   {:.1} px", p.principal_width.pixels);
    println!(
        "secondary max     pixel {:.1}, {} ({:.3} of peak)",
        p.secondary_max.absolute_pixel,
        if p.secondary_max.in_view { "in view" } else { "outside camera view" },
        p.secondary_max.rel_height
    );
    println!("a²/(Dλ)           {:.2e} (far field: {})", p.fraunhofer_number, p.fraunhofer_satisfied);

    println!("\nscreen distance sweep");
    for d in [0.10, 0.104, 0.12, 0.14, 0.16] {
        let p = geometry::predict(&config.with_screen_distance(d))?;
        println!(
            "  D = {d:.3} m: spacing {:6.2} px, width {:7.1} px, side lobe {}",
            p.fringe_spacing.pixels,
            p.principal_width.pixels,
            if p.secondary_max.in_view { "visible" } else { "off camera" }
        );
    }

    // what the reported 69 px spacing and 2308 px width imply for D
    let from_spacing = geometry::infer_distance_from_spacing(69.0, config.pixel_pitch, config.slit_separation, config.wavelength)?;
    let from_width = geometry::infer_distance_from_width(2308.0 / 2.0 * config.pixel_pitch, config.slit_width, config.wavelength)?;
    println!("\nD implied by a 69 px spacing: {from_spacing:.4} m; by a 2308 px width: {from_width:.4} m");

    let flux = geometry::photon_flux_per_slit(&config);
    println!("photons per slit {:.3e} /s, transit time {:.3e} s", flux.per_slit_rate, flux.transit_time);
    Ok(())
}
