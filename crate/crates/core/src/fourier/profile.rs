//! Smooth profiles with derivatives: `Φ̂` on the line or `g` with `Φ̂(ξ) = g(ξ²)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_edge_decay, Spectrum, UniformGrid};
use crate::error::{domain, Result};
use crate::kernels::{cubic_interp, Kernel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Profile {
    Zero,
    /// `e^{-σξ²}`, the transform of the Gaussian kernel.
    Gaussian { sigma: f64 },
    /// `ξ^k e^{-cξ}` for `ξ ≥ 0`, zero for `ξ < 0`.
    ExpPoly { power: u32, rate: f64 },
    #[serde(skip)]
    Sampled(SampledProfile),
}

/// Uniform samples with spectrally differentiated derivative tables.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    x0: f64,
    dx: f64,
    /// `derivs[k][j]` is the k-th derivative at node j.
    derivs: Vec<Vec<f64>>,
}

impl SampledProfile {
    fn end(&self) -> f64 {
        self.x0 + self.dx * (self.derivs[0].len() - 1) as f64
    }
}

impl Default for Profile {
    fn default() -> Self {
        Profile::Zero
    }
}

fn hermite(k: usize, u: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * u);
    if k == 0 {
        return h0;
    }
    for j in 1..k {
        let h2 = 2.0 * u * h1 - 2.0 * j as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Flat-top taper applied before spectral differentiation; ~1 below 60% of the band edge.
fn taper(x: f64, edge: f64) -> f64 {
    (-(x / (0.7 * edge)).powi(16)).exp()
}

impl Profile {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return domain(format!("Gaussian profile needs σ > 0, got {sigma}"));
        }
        Ok(Profile::Gaussian { sigma })
    }

    pub fn exp_poly(power: u32, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return domain(format!("exponential profile needs rate > 0, got {rate}"));
        }
        Ok(Profile::ExpPoly { power, rate })
    }

    /// Samples `values` on `grid` and tabulates derivatives up to `max_order`.
    pub fn sampled(grid: UniformGrid, values: &[f64], max_order: usize) -> Result<Self> {
        check_edge_decay(values)?;
        let spec = Spectrum::of(grid, values)?;
        let edge = grid.dual().half_width;
        let mut derivs = vec![values.to_vec()];
        for k in 1..=max_order {
            let d = spec
                .clone()
                .multiply(|x| Complex64::new(0.0, 2.0 * PI * x).powu(k as u32) * taper(x, edge))
                .inverse_real();
            derivs.push(d);
        }
        Ok(Profile::Sampled(SampledProfile { x0: grid.node(0), dx: grid.step(), derivs }))
    }

    pub fn sampled_fn<F: Fn(f64) -> f64>(grid: UniformGrid, f: F, max_order: usize) -> Result<Self> {
        let values = grid.sample(f);
        Self::sampled(grid, &values, max_order)
    }

    /// `Φ̂` of an even kernel: analytic for the Gaussian kernel, sampled on the dual of `grid` otherwise.
    pub fn of_kernel(k: &Kernel, grid: UniformGrid, max_order: usize) -> Result<Self> {
        match k {
            Kernel::Zero => Ok(Profile::Zero),
            Kernel::GaussianHat { sigma } => Self::gaussian(*sigma),
            _ if !k.fourier_admissible() => domain(format!("{} has no integrable transform", k.name())),
            _ if !k.is_even() => domain(format!("{} has a complex transform; profiles are real", k.name())),
            _ => {
                // Φ̂^{(k)} = F[(-2πit)^k Φ(t)], taken directly on the kernel samples.
                let dx = grid.step();
                let phi = grid.sample(|t| k.sample_value(t, dx));
                check_edge_decay(&phi)?;
                let mut derivs = Vec::with_capacity(max_order + 1);
                for order in 0..=max_order {
                    let weighted: Vec<Complex64> = grid
                        .nodes()
                        .iter()
                        .zip(&phi)
                        .map(|(&t, &v)| Complex64::new(0.0, -2.0 * PI * t).powu(order as u32) * v)
                        .collect();
                    let s = Spectrum::of_complex(grid, &weighted)?;
                    derivs.push(s.values().iter().map(|v| v.re).collect());
                }
                Ok(Profile::Sampled(SampledProfile { x0: grid.freq(0), dx: grid.dual_step(), derivs }))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Profile::Zero => true,
            Profile::Sampled(s) => s.derivs[0].iter().all(|v| *v == 0.0),
            _ => false,
        }
    }

    /// Highest derivative order available, `None` when unlimited.
    pub fn max_order(&self) -> Option<usize> {
        match self {
            Profile::Sampled(s) => Some(s.derivs.len() - 1),
            _ => None,
        }
    }

    pub fn value(&self, xi: f64) -> f64 {
        self.derivative(0, xi)
    }

    /// k-th derivative; zero beyond the tabulated range of a sampled profile.
    pub fn derivative(&self, k: usize, xi: f64) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Gaussian { sigma } => {
                let r = sigma.sqrt();
                (-r).powi(k as i32) * hermite(k, r * xi) * (-sigma * xi * xi).exp()
            }
            Profile::ExpPoly { power, rate } => {
                if xi < 0.0 {
                    return 0.0;
                }
                let a = *power as usize;
                let mut acc = 0.0;
                for i in 0..=k.min(a) {
                    let falling: f64 = (0..i).map(|j| (a - j) as f64).product();
                    acc += binomial(k, i) * falling * xi.powi((a - i) as i32) * (-rate).powi((k - i) as i32);
                }
                acc * (-rate * xi).exp()
            }
            Profile::Sampled(s) => match s.derivs.get(k) {
                Some(d) => cubic_interp(s.x0, s.dx, d, xi).unwrap_or(0.0),
                None => f64::NAN,
            },
        }
    }

    /// Points where derivatives may jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Profile::ExpPoly { .. } => vec![0.0],
            Profile::Sampled(s) => vec![s.x0, s.end()],
            _ => Vec::new(),
        }
    }

    /// `|ξ|` beyond which every derivative up to `order` is negligible.
    pub fn extent(&self, order: usize) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Gaussian { sigma } => ((45.0 + 2.0 * order as f64) / sigma).sqrt(),
            Profile::ExpPoly { power, rate } => (45.0 + 3.0 * (*power as usize + order) as f64) / rate,
            Profile::Sampled(s) => s.end().abs().max(s.x0.abs()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Profile::Zero => "zero".into(),
            Profile::Gaussian { sigma } => format!("gaussian(sigma={sigma})"),
            Profile::ExpPoly { power, rate } => format!("exp_poly(power={power}, rate={rate})"),
            Profile::Sampled(s) => format!("sampled({} nodes)", s.derivs[0].len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_derivatives() {
        let p = Profile::gaussian(2.0).unwrap();
        let x: f64 = 0.3;
        let e = (-2.0 * x * x).exp();
        assert!((p.derivative(1, x) - (-4.0 * x * e)).abs() < 1e-14);
        assert!((p.derivative(2, x) - (16.0 * x * x - 4.0) * e).abs() < 1e-13);
    }

    #[test]
    fn exp_poly_derivatives() {
        let p = Profile::exp_poly(1, 1.0).unwrap();
        for k in 0..4 {
            let x: f64 = 0.7;
            let want = (-1.0f64).powi(k as i32) * (x - k as f64) * (-x).exp();
            assert!((p.derivative(k, x) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn spectral_derivatives_match_analytic() {
        let g = UniformGrid::new(12.0, 4096).unwrap();
        let p = Profile::sampled_fn(g, |x| (-x * x).exp(), 3).unwrap();
        let q = Profile::gaussian(1.0).unwrap();
        for &x in &[-1.3, 0.01, 0.4, 2.2] {
            for k in 0..=3 {
                assert!((p.derivative(k, x) - q.derivative(k, x)).abs() < 1e-6, "k={k} x={x} {}", p.derivative(k, x) - q.derivative(k, x));
            }
        }
    }

    #[test]
    fn kernel_profile_matches_gaussian_transform() {
        let k = Kernel::AdjointHardy;
        let g = UniformGrid::new(32.0, 1 << 16).unwrap();
        let p = Profile::of_kernel(&k, g, 1).unwrap();
        // Φ̂(ξ) = sin(2πξ)/(πξ), Φ̂'(ξ) = (2πξ cos 2πξ - sin 2πξ)/(πξ²).
        for &xi in &[0.25, 0.6, -1.1] {
            let v = (2.0 * PI * xi).sin() / (PI * xi);
            let d = (2.0 * PI * xi * (2.0 * PI * xi).cos() - (2.0 * PI * xi).sin()) / (PI * xi * xi);
            assert!((p.derivative(0, xi) - v).abs() < 1e-3, "{} vs {v}", p.derivative(0, xi));
            assert!((p.derivative(1, xi) - d).abs() < 1e-2, "{} vs {d}", p.derivative(1, xi));
        }
    }
}
