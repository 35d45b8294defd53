//! Pointwise and grid evaluation of a fractional Hausdorff operator.
use frac_hausdorff::*;

fn main() -> Result<()> {
    let beta = 0.25;
    let k = Kernel::fractional_hardy(beta)?;
    let f = TestFunction::gaussian();
    for x in [0.1, 1.0, 10.0] {
        println!("h f({x}) = {:.10}", apply_hausdorff(&k, beta, &f, x, 1e-10)?);
    }
    let grid = LogGrid::new(1e-2, 1e2, 41)?;
    let img = apply_on_grid(&k, beta, &f, &grid, 1e-10)?;
    println!("grid image: max |h f| = {:.6}, divergent nodes = {}", img.function.max_abs(), img.divergent_nodes.len());
    Ok(())
}
