//! Moves points of the zero level into T*Σ by a group element.

use polarsym::hamilton::{moment_map, sample_zero_level};
use polarsym::liegroups::ExampleId;
use polarsym::numcore::sample_rng;
use polarsym::polar::{polar_structure, project_covector};
use polarsym::sasaki::BundlePoint;

fn main() -> polarsym::Result<()> {
    let ps = polar_structure(ExampleId::So3Sym0);
    let mut rng = sample_rng(3, "example", 0);
    for bp in sample_zero_level(&ps.action, &mut rng, 3, ps.base_sampler()) {
        let p = project_covector(&ps, &bp)?;
        println!("section {:?}  fiber {:?}  residual {:.1e} ({:?})", p.section_param, p.fiber_param, p.residual, p.method);
    }
    // off the zero level there is nothing to project
    let off = BundlePoint::cotangent(vec![1.0, 0.5, -0.2, 0.3, 0.1], vec![0.0, 1.0, 0.0, 0.0, 0.0]);
    println!("|u| = {:.3}: {}", moment_map(&ps.action, &off)?.norm(), project_covector(&ps, &off).unwrap_err());
    Ok(())
}
