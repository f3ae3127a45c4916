//! Exact restriction certificates, with and without the mixed generator.

use polarsym::invariants::{certify_surjectivity, curated_basis};
use polarsym::liegroups::ExampleId;
use polarsym::polar::polar_structure;

fn main() -> polarsym::Result<()> {
    let ps = polar_structure(ExampleId::So2R2);
    let basis = curated_basis(ExampleId::So2R2, 2)?;
    println!("generators: {}", basis.names.join(", "));
    for d in 0..=4 {
        let c = certify_surjectivity(&ps, &basis, d)?;
        println!("degree {d}: {}/{} reached, residual {}", c.achieved_dim, c.target_dim, c.max_residual);
    }
    let cut = certify_surjectivity(&ps, &basis.without("x.p")?, 4)?;
    println!("without x.p: passed = {}, unreachable {:?}", cut.passed, cut.unreachable);
    Ok(())
}
