//! Fourier-side decay of the smoothed dilated kernel at derivative order zero.
//!
//! `F(x, y, s) = |x|^{-β} y^β |∫ Φ̂(yξ) Ψ(sξ) e^{2πixξ} dξ|`, and `sup_{y,s} F` should
//! fall off like `|x|^{-1}`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Profile;
use crate::error::{domain, Result};
use crate::quad::gauss_legendre;
use crate::report::{Check, VerificationReport};

const PROVENANCE: &str = "smoothed-kernel-decay";

/// `exp(1 - 1/(1 - ξ²))` on `|ξ| < 1`, so `Ψ(0) = 1`.
pub fn standard_bump(xi: f64) -> f64 {
    let r = xi * xi;
    if r < 1.0 {
        (1.0 - 1.0 / (1.0 - r)).exp()
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProbe {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub ss: Vec<f64>,
}

fn geometric(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let steps = ((hi / lo).log10() * per_decade as f64).round() as usize;
    (0..=steps).map(|k| lo * 10f64.powf(k as f64 / per_decade as f64)).collect()
}

impl DecayProbe {
    /// Shared geometric ratio for all three sets, so the probe is itself dilation invariant.
    pub fn geometric(x: (f64, f64), y: (f64, f64), s: (f64, f64), per_decade: usize) -> Result<Self> {
        for (lo, hi) in [x, y, s] {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) || per_decade == 0 {
                return domain(format!("probe range needs 0 < lo < hi, got ({lo}, {hi})"));
            }
        }
        Ok(Self { xs: geometric(x.0, x.1, per_decade), ys: geometric(y.0, y.1, per_decade), ss: geometric(s.0, s.1, per_decade) })
    }

    /// `x ∈ [1, 100]`, with `y` and `s` wide enough to contain the maximizers for the Gaussian kernel.
    pub fn standard() -> Self {
        Self::geometric((1.0, 100.0), (10f64.powf(-0.5), 1e4), (1e-3, 1e2), 10).expect("valid ranges")
    }
}

/// `∫_{-R}^{R} Φ̂(yξ) Ψ(sξ) e^{2πixξ} dξ` with `R = min(1/s, extent/y)`, by Gauss-Legendre panels.
fn smoothed_integral(khat: &Profile, psi: &(dyn Fn(f64) -> f64 + Sync), x: f64, y: f64, s: f64, gl: &(Vec<f64>, Vec<f64>)) -> f64 {
    let r = (1.0 / s).min(khat.extent(0) / y);
    if !(r > 0.0) {
        return 0.0;
    }
    // One panel per period of the exponential, plus enough to resolve Ψ and Φ̂.
    let panels = ((2.0 * r * x.abs()).ceil() as usize + 24).min(1 << 20);
    let width = 2.0 * r / panels as f64;
    let w = 2.0 * PI * x;
    let (mut re, mut im) = (0.0, 0.0);
    for p in 0..panels {
        let c = -r + (p as f64 + 0.5) * width;
        for (t, wt) in gl.0.iter().zip(&gl.1) {
            let xi = c + 0.5 * width * t;
            let v = khat.value(y * xi) * psi(s * xi) * wt;
            re += v * (w * xi).cos();
            im += v * (w * xi).sin();
        }
    }
    0.5 * width * re.hypot(im)
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = xs.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Fits `ln sup_{y,s} F` against `ln |x|`; passes when the slope is `-1 ± 0.05` and
/// `|x| sup F` varies by at most a factor 10 across the probe.
pub fn kernel_decay_probe(
    khat: &Profile,
    psi: &(dyn Fn(f64) -> f64 + Sync),
    beta: f64,
    probe: &DecayProbe,
) -> Result<VerificationReport> {
    if psi(0.0) == 0.0 {
        return domain("the bump must satisfy Ψ(0) ≠ 0");
    }
    if !(0.0..1.0).contains(&beta) {
        return domain(format!("β must lie in [0, 1), got {beta}"));
    }
    if probe.xs.len() < 2 || probe.ys.is_empty() || probe.ss.is_empty() || probe.xs.iter().any(|x| *x <= 0.0) {
        return domain("decay probe needs at least two positive x values and nonempty y, s sets");
    }
    let sups: Vec<f64> = decay_series(khat, psi, beta, probe).into_iter().map(|(_, v)| v).collect();
    let mut rep = VerificationReport::new(format!("decay probe: {}", khat.name()));
    if sups.iter().all(|v| *v == 0.0) {
        rep.push(Check::flag("vanishes", true, PROVENANCE));
        return Ok(rep);
    }
    if sups.iter().any(|v| !(*v > 0.0)) {
        rep.push(Check::flag("positive_sup", false, PROVENANCE));
        return Ok(rep);
    }
    let lx: Vec<f64> = probe.xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = sups.iter().map(|v| v.ln()).collect();
    let (slope, intercept) = fit_slope(&lx, &ly);
    let scaled: Vec<f64> = probe.xs.iter().zip(&sups).map(|(x, v)| x * v).collect();
    let hi = scaled.iter().fold(0.0f64, |a, b| a.max(*b));
    let lo = scaled.iter().fold(f64::INFINITY, |a, b| a.min(*b));
    rep.push(Check::near("slope", slope, -1.0, 0.05, PROVENANCE));
    rep.push(Check::bracket("ratio_spread", hi / lo, None, Some(10.0), 0.0, PROVENANCE));
    rep.push(Check::info("constant", intercept.exp(), PROVENANCE));
    rep.push(Check::info("ratio_min", lo, PROVENANCE));
    rep.push(Check::info("ratio_max", hi, PROVENANCE));
    Ok(rep)
}

/// `(x, sup_{y,s} F(x, y, s))` pairs for plotting.
pub fn decay_series(khat: &Profile, psi: &(dyn Fn(f64) -> f64 + Sync), beta: f64, probe: &DecayProbe) -> Vec<(f64, f64)> {
    let gl = gauss_legendre(16);
    probe
        .xs
        .par_iter()
        .map(|&x| {
            let best = probe
                .ys
                .iter()
                .flat_map(|&y| probe.ss.iter().map(move |&s| (y, s)))
                .map(|(y, s)| (y / x).powf(beta) * smoothed_integral(khat, psi, x, y, s, &gl))
                .fold(0.0, f64::max);
            (x, best)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_decays_like_inverse() {
        let p = Profile::gaussian(1.0).unwrap();
        let rep = kernel_decay_probe(&p, &standard_bump, 0.25, &DecayProbe::standard()).unwrap();
        assert!(rep.pass(), "{rep:?}");
    }

    #[test]
    fn zero_profile_vanishes() {
        let rep = kernel_decay_probe(&Profile::Zero, &standard_bump, 0.25, &DecayProbe::standard()).unwrap();
        assert!(rep.pass() && rep.get("vanishes").is_some());
    }
}
