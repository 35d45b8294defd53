//! Two-weight Hardy inequalities in both directions.
use frac_hausdorff::inequalities::HardyDirection;
use frac_hausdorff::*;

fn main() -> Result<()> {
    let e = ExponentSet::new(4.0 / 3.0, 4.0, 0.5, 0.0, 0.0)?;
    let one = Weight::one();
    for d in [HardyDirection::Inner, HardyDirection::Outer] {
        let r = hardy_inequality_check(&one, &one, &e, d, &[])?;
        println!("{d:?}: best ratio {:.6} in [{:.6}, {:.6}]", r.empirical, r.lower, r.upper);
    }
    Ok(())
}
