//! Fourier-side integrability conditions on a kernel transform and on a g profile.
use frac_hausdorff::fourier::{hypothesis_integrals_g, hypothesis_integrals_phi, Profile};
use frac_hausdorff::Result;

fn main() -> Result<()> {
    let r = hypothesis_integrals_phi(&Profile::gaussian(1.0)?, 1)?;
    for e in &r.entries {
        println!("phi {}({},{}) = {:.6e} divergent {}", e.family, e.indices.0, e.indices.1, e.value, e.divergent);
    }
    let g = hypothesis_integrals_g(&Profile::exp_poly(0, 1.0)?, 1)?;
    for e in g.divergent_entries() {
        println!("g divergent: {}({},{})", e.family, e.indices.0, e.indices.1);
    }
    Ok(())
}
