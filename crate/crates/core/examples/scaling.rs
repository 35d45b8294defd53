//! Scaling fit showing which exponent relation keeps the operator bounded.
use frac_hausdorff::*;

fn main() -> Result<()> {
    let k = Kernel::gaussian_hat(1.0)?;
    let scales: Vec<f64> = (-4..=4).map(|i| 2f64.powf(i as f64 / 2.0)).collect();
    for g in [0.0, 0.1] {
        let input = ScalingInput { beta: 0.25, p: 1.0, q: 4.0 / 3.0, a: 0.0, g };
        let rep = exponent_relation_probe(&k, &input, &TestFunction::gaussian(), &scales, 1e-3)?;
        println!("gamma = {g}: residual {:.6}", rep.value("residual").unwrap_or(f64::NAN));
    }
    Ok(())
}
