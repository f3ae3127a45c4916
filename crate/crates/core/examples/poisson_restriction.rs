//! Brackets of invariants computed on T*M and on T*Σ.

use polarsym::invariants::{check_poisson_restriction, default_pairs};
use polarsym::liegroups::ExampleId;
use polarsym::polar::polar_structure;

fn main() -> polarsym::Result<()> {
    for id in [ExampleId::So3Adj, ExampleId::S1S2] {
        let ps = polar_structure(id);
        let r = check_poisson_restriction(&ps, &default_pairs(id, &ps)?, 20, 11)?;
        println!("{id}");
        for p in r.pairs.iter().take(6) {
            println!("  {{{}, {}}}: {:.1e}  exact: {:?}", p.first, p.second, p.residual.max, p.exact);
        }
    }
    Ok(())
}
