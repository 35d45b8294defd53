//! Radial maximal function, Hardy-space quasi-norms and their dilation invariance.
use frac_hausdorff::hardy_space::{default_grid, hardy_quasi_norm, hilbert_hardy_quasi_norm};
use frac_hausdorff::*;

fn main() -> Result<()> {
    let grid = default_grid();
    let cfg = MaximalConfig::default();
    let f = TestFunction::Gaussian { center: 0.0, width: 2.0, freq: 2.0, phase: 0.0 };
    let samples = grid.sample(|x| f.eval(x));
    let m = hardy_quasi_norm(grid, &samples, 0.0, 1.0, &cfg)?;
    let h = hilbert_hardy_quasi_norm(grid, &samples, &Weight::one(), 1.0)?;
    println!("maximal H^1 norm {:.6}, Hilbert H^1 norm {:.6}, ratio {:.4}", m.value, h.value, h.value / m.value);
    let rep = dilation_invariance_check(&f, 4.0, 1.0, 0.0, grid, &cfg, 1e-3)?;
    println!("dilation by 4: ratio {:.8}, pass {}", rep.value("ratio").unwrap_or(f64::NAN), rep.pass());
    Ok(())
}
