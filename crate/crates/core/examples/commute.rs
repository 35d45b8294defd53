//! Hilbert transform commuting with a Hausdorff operator (GaussianHat kernel, one beta).
use frac_hausdorff::fourier::{commutation_check, CommuteConfig};
use frac_hausdorff::*;

fn main() -> Result<()> {
    let k = Kernel::gaussian_hat(1.0)?;
    let rep = commutation_check(&k, 0.25, &TestFunction::gaussian(), &CommuteConfig::default())?;
    for c in &rep.checks {
        println!("{:<20} {:.3e} pass {}", c.name, c.value, c.pass);
    }
    Ok(())
}
