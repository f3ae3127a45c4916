//! The symplectic slice V at a point of T*Σ and its identification with W ⊕ W.

use polarsym::liegroups::ExampleId;
use polarsym::polar::{check_slice_diagram, polar_structure, section_covector, symplectic_slice};

fn main() -> polarsym::Result<()> {
    for id in [ExampleId::So2R2, ExampleId::So3Adj, ExampleId::So3Sym0] {
        let ps = polar_structure(id);
        let k = ps.section.dim();
        let bp = section_covector(&ps, &vec![0.0; k], &vec![1.0; k]);
        let r = symplectic_slice(&ps, &bp)?;
        let d = check_slice_diagram(&ps, &bp, 5, 1)?;
        println!(
            "{id:>9}  dim V = {}  dim W = {}  span residual {:.1e}  stabilizer dim {}  diagram {:.1e}",
            r.dim_v,
            r.dim_w,
            r.phi_v_in_ww.max(r.ww_in_phi_v),
            d.stabilizer_dim,
            d.residual
        );
    }
    Ok(())
}
