//! The two-weight scale constants A, B and the kernel constant K.
use frac_hausdorff::*;

fn main() -> Result<()> {
    let e = ExponentSet::new(4.0 / 3.0, 4.0, 0.5, 0.0, 0.0)?;
    let one = Weight::one();
    let a = a_constant(&one, &one, &e)?;
    let b = b_constant(&one, &one, &e)?;
    println!("A = {:.12} at alpha = {:.3e}", a.value.value, a.maximizer);
    println!("B = {:.12} at alpha = {:.3e}", b.value.value, b.maximizer);
    let k = k_constant(&Kernel::fractional_hardy(0.5)?, 0.5, 4.0)?;
    println!("K = {:.12}", k.value);
    Ok(())
}
