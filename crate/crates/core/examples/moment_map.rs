//! Moment map identities on every built-in example.

use polarsym::hamilton::check_moment_identities;
use polarsym::liegroups::ExampleId;
use polarsym::polar::polar_structure;

fn main() -> polarsym::Result<()> {
    for id in ExampleId::ALL {
        let ps = polar_structure(id);
        let r = check_moment_identities(&ps.action, 100, 1, ps.base_sampler())?;
        println!("{id:>9}  d<u,X> - i_X# omega: {:.2e}   equivariance: {:.2e}", r.differential.max, r.equivariance.max);
    }
    Ok(())
}
