//! Discrete Fourier and Hilbert transforms with the `e^{-2πixξ}` convention.
//!
//! Samples live on `x_j = -L + 2Lj/n`. The dual grid is shifted by half a bin,
//! `ξ_k = (k - n/2 + 1/2)/(2L)`, so it is symmetric about 0 and never contains it.
//! The Hilbert multiplier then squares to -1 on every bin.

mod commute;
mod decay;
mod hypotheses;
mod profile;

pub use commute::{commutation_check, hilbert_of_kernel, CommuteConfig};
pub use decay::{decay_series, kernel_decay_probe, standard_bump, DecayProbe};
pub use hypotheses::{hypothesis_integrals_g, hypothesis_integrals_phi, HypothesisEntry, HypothesisReport};
pub use profile::Profile;

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Relative size below which samples count as decayed at the grid edges.
pub const EDGE_DECAY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    pub half_width: f64,
    pub n: usize,
}

impl UniformGrid {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return domain(format!("uniform grid needs L > 0, got {half_width}"));
        }
        if n < 8 || !n.is_power_of_two() {
            return domain(format!("uniform grid needs a power-of-two n ≥ 8, got {n}"));
        }
        Ok(Self { half_width, n })
    }

    /// Grid with spacing at most `step` covering `[-L, L)`.
    pub fn with_step(half_width: f64, step: f64) -> Result<Self> {
        let n = ((2.0 * half_width / step).ceil() as usize).max(8).next_power_of_two();
        Self::new(half_width, n)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.half_width + self.step() * j as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    pub fn dual_step(&self) -> f64 {
        0.5 / self.half_width
    }

    pub fn freq(&self, k: usize) -> f64 {
        (k as f64 - (self.n / 2) as f64 + 0.5) * self.dual_step()
    }

    pub fn freqs(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.freq(k)).collect()
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.n).map(|j| f(self.node(j))).collect()
    }

    /// Same `n` and `L` with the roles of space and frequency swapped.
    pub fn dual(&self) -> Self {
        Self { half_width: 0.25 * self.n as f64 / self.half_width, n: self.n }
    }
}

/// Complex samples `f̂(ξ_k)` on the dual grid of `grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: UniformGrid,
    values: Vec<Complex64>,
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl Spectrum {
    /// Forward transform without the edge-decay check.
    pub fn of(grid: UniformGrid, samples: &[f64]) -> Result<Self> {
        let data: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::of_complex(grid, &data)
    }

    pub fn of_complex(grid: UniformGrid, samples: &[Complex64]) -> Result<Self> {
        let n = grid.n;
        if samples.len() != n {
            return domain(format!("grid has {n} nodes, got {} samples", samples.len()));
        }
        // f̂_k = Δ e^{iπ(k - n/2 + 1/2)} DFT[f_j (-1)^j e^{-iπj/n}]_k
        let mut buf: Vec<Complex64> = samples
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                v * Complex64::from_polar(sign, -PI * j as f64 / n as f64)
            })
            .collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let dx = grid.step();
        for (k, v) in buf.iter_mut().enumerate() {
            *v *= Complex64::from_polar(dx, PI * (k as f64 - (n / 2) as f64 + 0.5));
        }
        Ok(Self { grid, values: buf })
    }

    pub fn grid(&self) -> UniformGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn freqs(&self) -> Vec<f64> {
        self.grid.freqs()
    }

    /// Pointwise product with `m(ξ)`.
    pub fn multiply<M: Fn(f64) -> Complex64>(mut self, m: M) -> Self {
        for (k, v) in self.values.iter_mut().enumerate() {
            *v *= m(self.grid.freq(k));
        }
        self
    }

    /// Multiplies by `-i sgn ξ`.
    pub fn hilbert(self) -> Self {
        self.multiply(|xi| Complex64::new(0.0, -sgn(xi)))
    }

    /// Samples of the inverse transform on the spatial grid.
    pub fn inverse(&self) -> Vec<Complex64> {
        let n = self.grid.n;
        let dx = self.grid.step();
        let mut buf: Vec<Complex64> = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| v * Complex64::from_polar(1.0 / dx, -PI * (k as f64 - (n / 2) as f64 + 0.5)))
            .collect();
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        for (j, v) in buf.iter_mut().enumerate() {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            *v *= Complex64::from_polar(sign * scale, PI * j as f64 / n as f64);
        }
        buf
    }

    pub fn inverse_real(&self) -> Vec<f64> {
        self.inverse().into_iter().map(|v| v.re).collect()
    }

    /// `(∫|f̂|²)^{1/2}` as a Riemann sum on the dual grid.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.dual_step() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }
}

/// Fails unless the samples at both ends are below `EDGE_DECAY` relative to the peak.
pub fn check_edge_decay(samples: &[f64]) -> Result<()> {
    let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let edge = samples.first().map_or(0.0, |v| v.abs()).max(samples.last().map_or(0.0, |v| v.abs()));
    if edge > EDGE_DECAY * peak {
        return domain(format!(
            "samples have not decayed at the grid edges ({:e} of the peak); enlarge half_width",
            edge / peak
        ));
    }
    Ok(())
}

pub fn fourier_transform(grid: UniformGrid, samples: &[f64]) -> Result<Spectrum> {
    check_edge_decay(samples)?;
    Spectrum::of(grid, samples)
}

pub fn inverse_fourier_transform(spectrum: &Spectrum) -> Vec<Complex64> {
    spectrum.inverse()
}

/// `Δ Σ f(x_j) e^{-2πi x_j ξ}` at a single frequency.
pub fn fourier_at(grid: UniformGrid, samples: &[f64], xi: f64) -> Complex64 {
    let dx = grid.step();
    samples
        .iter()
        .enumerate()
        .map(|(j, &v)| Complex64::from_polar(v * dx, -2.0 * PI * grid.node(j) * xi))
        .sum()
}

/// `H f` through the multiplier `-i sgn ξ`.
pub fn hilbert_transform(grid: UniformGrid, samples: &[f64]) -> Result<Vec<f64>> {
    Ok(fourier_transform(grid, samples)?.hilbert().inverse_real())
}

/// `(∫|f|²)^{1/2}` as a Riemann sum on the grid.
pub fn l2_norm(grid: UniformGrid, samples: &[f64]) -> f64 {
    (grid.step() * samples.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(x: f64) -> f64 {
        (-PI * x * x).exp()
    }

    #[test]
    fn gaussian_is_self_dual() {
        let g = UniformGrid::new(8.0, 256).unwrap();
        let s = fourier_transform(g, &g.sample(gauss)).unwrap();
        for (xi, v) in s.freqs().iter().zip(s.values()) {
            assert!((v.re - gauss(*xi)).abs() < 1e-8 && v.im.abs() < 1e-8);
        }
        let back = s.inverse();
        for (x, v) in g.nodes().iter().zip(&back) {
            assert!((v.re - gauss(*x)).abs() < 1e-10 && v.im.abs() < 1e-10);
        }
        assert!((s.l2_norm() - l2_norm(g, &g.sample(gauss))).abs() < 1e-12);
    }

    #[test]
    fn indicator_transform_vanishes_at_one() {
        let g = UniformGrid::new(4.0, 1024).unwrap();
        let f = g.sample(|x| if x.abs() < 0.5 { 1.0 } else if x.abs() == 0.5 { 0.5 } else { 0.0 });
        assert!(fourier_at(g, &f, 1.0).norm() < 1e-6);
        assert!((fourier_at(g, &f, 0.25).re - (PI * 0.25).sin() / (PI * 0.25)).abs() < 1e-3);
    }

    #[test]
    fn hilbert_basics() {
        let g = UniformGrid::new(32.0, 4096).unwrap();
        let f = g.sample(gauss);
        let hf = hilbert_transform(g, &f).unwrap();
        assert!(hf[g.n / 2].abs() < 1e-8);
        assert!((l2_norm(g, &hf) - l2_norm(g, &f)).abs() < 1e-6);
        let hhf = Spectrum::of(g, &f).unwrap().hilbert().hilbert().inverse_real();
        let err: f64 = hhf.iter().zip(&f).map(|(a, b)| (a + b).powi(2)).sum::<f64>().sqrt();
        assert!(err / f.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-6);
        // H e^{-πx²} = (2/√π) D(√π x) with Dawson's D; D(1) = 0.5380795069...
        let j = g.n / 2 + (1.0 / (PI.sqrt() * g.step())).round() as usize;
        let x = g.node(j);
        let want = dawson(PI.sqrt() * x) * 2.0 / PI.sqrt();
        assert!((hf[j] - want).abs() < 1e-3, "{} vs {want}", hf[j]);
    }

    fn dawson(x: f64) -> f64 {
        // D(x) = e^{-x²} ∫_0^x e^{t²} dt by Simpson on 2000 panels.
        let n = 2000;
        let h = x / n as f64;
        let mut s = 0.0;
        for i in 0..=n {
            let t = i as f64 * h;
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * (t * t).exp();
        }
        (-x * x).exp() * s * h / 3.0
    }

    #[test]
    fn edge_decay_rejected() {
        let g = UniformGrid::new(1.0, 64).unwrap();
        assert!(fourier_transform(g, &g.sample(gauss)).is_err());
    }
}
