//! Compares invariants on the reduced space with Weyl invariants on T*Σ.

use polarsym::invariants::{curated_basis, reduced_algebra_compare};
use polarsym::liegroups::ExampleId;
use polarsym::polar::polar_structure;

fn main() -> polarsym::Result<()> {
    let id = ExampleId::TorusCn(2);
    let ps = polar_structure(id);
    let basis = curated_basis(id, 2)?;
    let r = reduced_algebra_compare(&ps, Some(&basis), 50, 2)?;
    println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
    Ok(())
}
