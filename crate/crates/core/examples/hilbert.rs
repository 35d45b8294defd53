//! FFT Fourier and Hilbert transforms on a uniform grid.
use std::f64::consts::PI;

use frac_hausdorff::fourier::{fourier_transform, hilbert_transform, l2_norm, Spectrum, UniformGrid};
use frac_hausdorff::Result;

fn main() -> Result<()> {
    let grid = UniformGrid::new(32.0, 4096)?;
    let f = grid.sample(|x| (-PI * x * x).exp());
    let spec = fourier_transform(grid, &f)?;
    println!("Parseval: {:.15} vs {:.15}", l2_norm(grid, &f), spec.l2_norm());
    let hf = hilbert_transform(grid, &f)?;
    let hhf = Spectrum::of(grid, &hf)?.hilbert().inverse_real();
    let err = hhf.iter().zip(&f).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max);
    println!("Hf(1) ~ {:.8}, max |HHf + f| = {err:.2e}", hf[grid.n / 2 + 128]);
    Ok(())
}
