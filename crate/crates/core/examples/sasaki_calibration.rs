//! Fixes the curvature slot convention of the Sasaki connection against a
//! finite-difference Levi-Civita connection on TS².

use polarsym::sasaki::calibrate_curvature_slots;

fn main() -> polarsym::Result<()> {
    let r = calibrate_curvature_slots(20, 7, 1e-4)?;
    for s in &r.residuals {
        println!("{:<24} {:.3e}", s.label, s.max_residual);
    }
    println!("passing: {}, chosen: {}", r.passing, r.choice_label());
    Ok(())
}
