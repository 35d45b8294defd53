//! Muckenhoupt A_p characteristics of constant and power weights.
use frac_hausdorff::weights::default_balls;
use frac_hausdorff::*;

fn main() -> Result<()> {
    let balls = default_balls();
    println!("constant: {}", ap_characteristic(&Weight::constant(3.0)?, 2.0, &balls)?.characteristic);
    let w = Weight::power(0.5)?;
    for p in [1.4, 1.6, 2.0, 4.0] {
        let r = ap_characteristic(&w, p, &balls)?;
        println!("|x|^0.5, p = {p}: characteristic {:.6}, divergent {}", r.characteristic, r.divergent);
    }
    println!("critical index: {}", critical_index(&w)?);
    Ok(())
}
