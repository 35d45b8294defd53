//! Lower, empirical and upper operator-norm constants for increasing and decreasing weights.
use frac_hausdorff::*;

fn main() -> Result<()> {
    let e = ExponentSet::new(4.0 / 3.0, 4.0, 0.5, 0.0, 0.0)?;
    let one = Weight::one();
    let k = Kernel::fractional_hardy(0.5)?;
    let b = KernelBounds::new(1.0, 1.0, BoundRegion::OutsideUnit { beta: 0.5 })?;
    let r = verify_sandwich_increasing(&k, &b, 0.5, &one, &one, &e, &[])?;
    println!("increasing: {:.6} <= {:.6} <= {:.6} (witness {}), pass {}", r.lower, r.empirical, r.upper, r.witness, r.pass);
    let b = KernelBounds::new(1.0, 1.0, BoundRegion::InsideUnit)?;
    let r = verify_sandwich_decreasing(&Kernel::AdjointHardy, &b, 0.5, &one, &one, &e, &[])?;
    println!("decreasing: {:.6} <= {:.6} <= {:.6}, pass {}", r.lower, r.empirical, r.upper, r.pass);
    Ok(())
}
