//! G·p ∩ T*Σ equals the Weyl orbit of p.

use polarsym::liegroups::ExampleId;
use polarsym::polar::{compute_weyl_group, polar_structure, section_covector, weyl_orbit_intersection};

fn main() -> polarsym::Result<()> {
    let ps = polar_structure(ExampleId::So3Sym0);
    println!("Weyl group order {}", compute_weyl_group(&ps)?.order());
    let bp = section_covector(&ps, &[0.7, -0.3], &[0.2, 0.5]);
    let r = weyl_orbit_intersection(&ps, &bp, 10, 5)?;
    for im in &r.images {
        println!("  section {:?}  fiber {:?}", im.section_param, im.fiber_param);
    }
    println!("{} images, translates off by at most {:.1e}", r.images.len(), r.projected_distance.max);
    Ok(())
}
