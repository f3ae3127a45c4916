//! Generator lists are plain text; edit one and certify it.

use polarsym::invariants::{certify_surjectivity, curated_basis, InvariantBasis};
use polarsym::liegroups::ExampleId;
use polarsym::polar::polar_structure;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = curated_basis(ExampleId::So3Adj, 1)?.to_config();
    println!("{text}");
    let path = std::env::temp_dir().join("so3-adj.gens");
    std::fs::write(&path, &text)?;
    let basis = InvariantBasis::load(&path)?;
    let c = certify_surjectivity(&polar_structure(ExampleId::So3Adj), &basis, 4)?;
    println!("loaded {} generators, degree 4 certificate passed: {}", basis.len(), c.passed);
    Ok(())
}
