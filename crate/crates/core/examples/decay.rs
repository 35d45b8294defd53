//! Decay of the smoothed kernel integral, fitted on a log-log scale.
use frac_hausdorff::fourier::{kernel_decay_probe, standard_bump, DecayProbe, Profile};
use frac_hausdorff::Result;

fn main() -> Result<()> {
    let rep = kernel_decay_probe(&Profile::gaussian(1.0)?, &standard_bump, 0.25, &DecayProbe::standard())?;
    for c in &rep.checks {
        println!("{:<14} {:.9}", c.name, c.value);
    }
    Ok(())
}
