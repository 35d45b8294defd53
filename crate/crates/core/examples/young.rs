//! Young's inequality for the multiplicative convolution on (0, inf) with dx/x.
use frac_hausdorff::inequalities::young_mult_check;
use frac_hausdorff::*;

fn main() -> Result<()> {
    let grid = LogGrid::new(1e-4, 1e4, 801)?;
    let f = TestFunction::LogBump { center: 0.5, width: 1.0, sides: Sides::Positive }.sample(grid)?;
    let g = TestFunction::LogBump { center: -1.0, width: 0.4, sides: Sides::Positive }.sample(grid)?;
    let (p, s) = (1.5, 2.0);
    let q = 1.0 / (1.0 / p + 1.0 / s - 1.0);
    let rep = young_mult_check(&f, &g, p, q, s)?;
    let lhs = rep.get("young_inequality").map(|c| c.value).unwrap_or(f64::NAN);
    println!("p={p}, s={s}, q={q:.3}: ||f*g||_q = {lhs:.6} <= {:.6}, pass {}", rep.value("rhs").unwrap_or(f64::NAN), rep.pass());
    Ok(())
}
