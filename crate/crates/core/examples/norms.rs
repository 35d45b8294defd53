//! Weighted strong and weak Lebesgue norms.
use frac_hausdorff::*;

fn main() -> Result<()> {
    let f = TestFunction::Indicator { lo: -1.0, hi: 1.0 };
    let w = Weight::power(1.0)?;
    let strong = weighted_lp_norm(&f, &w, 2.0)?;
    let weak = weak_lp_norm(&f.sample(LogGrid::new(1e-3, 10.0, 400)?)?, &w, 2.0)?;
    println!("||1_[-1,1]||_L^2(|x|) = {:.10} (exact 1)", strong.value);
    println!("weak norm = {:.10} <= strong", weak.value);
    let g = TestFunction::PowerBand { exponent: -0.5, inner: 1.0, outer: f64::INFINITY, sides: Sides::Both };
    println!("|x|^-1/2 on |x| >= 1 in L^2: divergent = {}", weighted_lp_norm(&g, &Weight::one(), 2.0)?.divergent);
    Ok(())
}
