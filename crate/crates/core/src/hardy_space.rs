//! Radial maximal function and power-weighted Hardy quasi-norms on uniform samples.
//!
//! `M_φ⁺f(x) = sup_s |φ_s ∗ f(x)|` is taken over a geometric grid of dilations, each
//! convolution done by the FFT multiplier `φ̂(sξ)`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::fourier::{fourier_transform, hilbert_transform, Profile, UniformGrid};
use crate::function::{RealFunction, TestFunction};
use crate::kernels::Kernel;
use crate::norms::weighted_lp_norm_with;
use crate::operator::HausdorffImage;
use crate::quad::{NormValue, QuadConfig};
use crate::report::{Check, VerificationReport};
use crate::weights::Weight;

const DILATION: &str = "hardy-norm-dilation-invariance";
const NECESSITY: &str = "scaling-forces-exponent-relation";
const EQUIVALENCE: &str = "maximal-vs-hilbert-quasi-norms";

/// Share of the weighted mass allowed beyond `3L/4` before a norm counts as truncated.
pub const TAIL_SHARE: f64 = 1e-6;

/// `[-32, 32)` at spacing `1/1024`: wide enough for widths up to 8, fine enough that
/// Riemann sums of the kinked maximal function stay within `1e-5` under dilation by 4.
pub fn default_grid() -> UniformGrid {
    UniformGrid { half_width: 32.0, n: 1 << 16 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalConfig {
    /// `φ̂`; the default `e^{-πξ²}` is the transform of the unit-mass Gaussian.
    pub phi_hat: Profile,
    pub s_min: f64,
    pub s_max: f64,
    /// Ratio between consecutive dilations.
    pub density: f64,
}

impl Default for MaximalConfig {
    fn default() -> Self {
        Self { phi_hat: Profile::Gaussian { sigma: std::f64::consts::PI }, s_min: 2f64.powi(-20), s_max: 2f64.powi(20), density: 2f64.powf(0.125) }
    }
}

impl MaximalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.phi_hat.value(0.0) == 0.0 {
            return domain("the maximal kernel needs ∫φ = φ̂(0) ≠ 0");
        }
        if !(self.s_min > 0.0 && self.s_max >= self.s_min && self.s_max.is_finite()) {
            return domain(format!("dilation range needs 0 < s_min ≤ s_max, got [{}, {}]", self.s_min, self.s_max));
        }
        if !(self.density > 1.0) {
            return domain(format!("dilation density must exceed 1, got {}", self.density));
        }
        Ok(())
    }

    /// `s_min ρ^k` up to `s_max`.
    pub fn s_grid(&self) -> Vec<f64> {
        let steps = ((self.s_max / self.s_min).ln() / self.density.ln() + 1e-9).floor() as i32;
        (0..=steps).map(|k| self.s_min * self.density.powi(k)).collect()
    }

    /// Same range with twice as many dilations per octave.
    pub fn refined(&self) -> Self {
        Self { density: self.density.sqrt(), ..self.clone() }
    }
}

/// Magnitudes below this multiple of `ε·max|f|` are FFT round-off and are set to zero.
fn noise_floor(samples: &[f64]) -> f64 {
    64.0 * f64::EPSILON * samples.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// `max_s |φ_s ∗ f|` at every node of `grid`.
pub fn radial_maximal(grid: UniformGrid, samples: &[f64], cfg: &MaximalConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let spec = fourier_transform(grid, samples)?;
    let floor = noise_floor(samples);
    let scales = cfg.s_grid();
    let chunk = scales.len().div_ceil(rayon::current_num_threads().max(1));
    let partial: Vec<Vec<f64>> = scales
        .par_chunks(chunk.max(1))
        .map(|ss| {
            let mut best = vec![0.0f64; grid.n];
            for &s in ss {
                let conv = spec.clone().multiply(|xi| cfg.phi_hat.value(s * xi).into()).inverse_real();
                for (b, v) in best.iter_mut().zip(conv) {
                    *b = b.max(v.abs());
                }
            }
            best
        })
        .collect();
    let mut out = vec![0.0f64; grid.n];
    for p in partial {
        for (o, v) in out.iter_mut().zip(p) {
            *o = o.max(v);
        }
    }
    for v in out.iter_mut() {
        if *v < floor {
            *v = 0.0;
        }
    }
    Ok(out)
}

/// `(Σ Δ w(x_j) |v_j|^p)^{1/p}`; divergent when the outer quarter carries more than `TAIL_SHARE`.
pub fn uniform_lp_norm(grid: UniformGrid, values: &[f64], w: &Weight, p: f64) -> Result<NormValue> {
    if !(p > 0.0 && p.is_finite()) {
        return domain(format!("exponent must be positive, got {p}"));
    }
    let dx = grid.step();
    let edge = 0.75 * grid.half_width;
    let (mut total, mut tail) = (0.0, 0.0);
    for (j, v) in values.iter().enumerate() {
        if *v == 0.0 {
            continue;
        }
        let x = grid.node(j);
        let c = dx * w.eval(x) * v.abs().powf(p);
        total += c;
        if x.abs() > edge {
            tail += c;
        }
    }
    let value = total.powf(1.0 / p);
    if tail > TAIL_SHARE * total {
        return Ok(NormValue::diverged(value));
    }
    Ok(NormValue::finite(value, 0.0))
}

fn check_hardy_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return domain(format!("Hardy quasi-norms take p ∈ (0, 1], got {p}"));
    }
    Ok(())
}

/// `‖M_φ⁺f‖_{L^p(|x|^a)}`.
pub fn hardy_quasi_norm(grid: UniformGrid, samples: &[f64], a: f64, p: f64, cfg: &MaximalConfig) -> Result<NormValue> {
    check_hardy_p(p)?;
    let w = Weight::power(a)?;
    if samples.iter().all(|v| *v == 0.0) {
        return Ok(NormValue::zero());
    }
    let m = radial_maximal(grid, samples, cfg)?;
    uniform_lp_norm(grid, &m, &w, p)
}

/// `‖f‖_{L^p_w} + ‖Hf‖_{L^p_w}`.
pub fn hilbert_hardy_quasi_norm(grid: UniformGrid, samples: &[f64], w: &Weight, p: f64) -> Result<NormValue> {
    check_hardy_p(p)?;
    if samples.iter().all(|v| *v == 0.0) {
        return Ok(NormValue::zero());
    }
    let floor = noise_floor(samples);
    let mut h = hilbert_transform(grid, samples)?;
    for v in h.iter_mut() {
        if v.abs() < floor {
            *v = 0.0;
        }
    }
    let a = uniform_lp_norm(grid, samples, w, p)?;
    let b = uniform_lp_norm(grid, &h, w, p)?;
    Ok(a.add(b))
}

/// `s^{(1+a)/p} f(s·)`.
pub fn normalized_dilate(f: &TestFunction, s: f64, a: f64, p: f64) -> TestFunction {
    f.clone().dilated(s).scaled(s.powf((1.0 + a) / p))
}

/// Ratio `‖s^{(1+a)/p} f(s·)‖ / ‖f‖` of maximal Hardy quasi-norms; passes when within `tol` of 1.
pub fn dilation_invariance_check(
    f: &TestFunction,
    s: f64,
    p: f64,
    a: f64,
    grid: UniformGrid,
    cfg: &MaximalConfig,
    tol: f64,
) -> Result<VerificationReport> {
    if !(s >= 10.0 * cfg.s_min && s <= cfg.s_max / 10.0) {
        return domain(format!("dilation {s} leaves [10 s_min, s_max/10] = [{}, {}]", 10.0 * cfg.s_min, cfg.s_max / 10.0));
    }
    let base = hardy_quasi_norm(grid, &grid.sample(|x| f.eval(x)), a, p, cfg)?;
    let dil = if s == 1.0 {
        base
    } else {
        let g = normalized_dilate(f, s, a, p);
        hardy_quasi_norm(grid, &grid.sample(|x| g.eval(x)), a, p, cfg)?
    };
    let ratio = if base.value == 0.0 && dil.value == 0.0 { 1.0 } else { dil.value / base.value };
    let mut rep = VerificationReport::new(format!("dilation s={s}, p={p}, a={a}"));
    rep.push(Check::flag("norms_finite", !base.divergent && !dil.divergent, DILATION));
    rep.push(Check::near("ratio", ratio, 1.0, tol, DILATION));
    rep.push(Check::info("norm", base.value, DILATION));
    rep.push(Check::info("norm_dilated", dil.value, DILATION));
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingInput {
    pub beta: f64,
    pub p: f64,
    pub q: f64,
    /// Source weight power; only the normalization `s^{(1+a)/p}` uses it.
    pub a: f64,
    /// Target weight power.
    pub g: f64,
}

/// `(ln s, ln ‖h_{Φ,β}(s^{(1+a)/p} f(s·))‖_{L^q(|x|^g)})` per scale.
pub fn scaling_series(k: &Kernel, input: &ScalingInput, f: &TestFunction, s_list: &[f64]) -> Result<Vec<(f64, f64)>> {
    let w = Weight::power(input.g)?;
    let cfg = QuadConfig::with_tol(1e-9);
    s_list
        .par_iter()
        .map(|&s| {
            let fs = normalized_dilate(f, s, input.a, input.p);
            let image = HausdorffImage::new(k, input.beta, &fs, 1e-11);
            let n = weighted_lp_norm_with(&image as &dyn RealFunction, &w, input.q, &cfg)?;
            if n.divergent || !(n.value > 0.0) {
                return domain(format!("target norm at s = {s} is degenerate ({:?})", n));
            }
            Ok((s.ln(), n.value.ln()))
        })
        .collect()
}

/// Least-squares slope of the scaling series, which equals `(1+a)/p - (1+g)/q - β`.
pub fn exponent_relation_probe(k: &Kernel, input: &ScalingInput, f: &TestFunction, s_list: &[f64], tol: f64) -> Result<VerificationReport> {
    if s_list.len() < 3 || s_list.iter().any(|s| !(*s > 0.0)) {
        return domain("the scaling fit needs at least three positive scales");
    }
    if !(0.0..1.0).contains(&input.beta) {
        return domain(format!("β must lie in [0, 1), got {}", input.beta));
    }
    if f.is_zero() {
        return domain("the zero function has no scaling exponent");
    }
    let pts = scaling_series(k, input, f, s_list)?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let fit_rms = (pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum::<f64>() / n).sqrt();
    let predicted = (1.0 + input.a) / input.p - (1.0 + input.g) / input.q - input.beta;
    let mut rep = VerificationReport::new(format!("exponent relation: {}", k.name()));
    rep.push(Check::info("residual", slope, NECESSITY));
    rep.push(Check::near("residual_vs_exponents", slope, predicted, tol, NECESSITY));
    rep.push(Check::info("predicted", predicted, NECESSITY));
    rep.push(Check::info("fit_rms", fit_rms, NECESSITY));
    Ok(rep)
}

/// Random modulated Gaussians whose moments are all below `e^{-9π}`, so they sit in every `H^p`.
pub fn smooth_family(seed: u64, count: usize) -> Vec<TestFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let center = rng.gen_range(-2.0..2.0);
            let width = rng.gen_range(1.5..2.5);
            let freq = rng.gen_range(2.0..3.0);
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            TestFunction::modulated_gaussian(center, width, freq, phase)
        })
        .collect()
}

/// Observed band of `hilbert_hardy_quasi_norm / hardy_quasi_norm` over `family`.
pub fn equivalence_band(
    family: &[TestFunction],
    grid: UniformGrid,
    p: f64,
    a: f64,
    cfg: &MaximalConfig,
    max_spread: f64,
) -> Result<(VerificationReport, Vec<f64>)> {
    let w = Weight::power(a)?;
    let mut ratios = Vec::with_capacity(family.len());
    let mut finite = true;
    for f in family {
        let samples = grid.sample(|x| f.eval(x));
        let m = hardy_quasi_norm(grid, &samples, a, p, cfg)?;
        let h = hilbert_hardy_quasi_norm(grid, &samples, &w, p)?;
        finite &= !m.divergent && !h.divergent;
        ratios.push(h.value / m.value);
    }
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    let mut rep = VerificationReport::new(format!("quasi-norm equivalence, p={p}, a={a}"));
    rep.push(Check::flag("norms_finite", finite, EQUIVALENCE));
    rep.push(Check::bracket("band_spread", hi / lo, None, Some(max_spread), 0.0, EQUIVALENCE));
    rep.push(Check::info("r_min", lo, EQUIVALENCE));
    rep.push(Check::info("r_max", hi, EQUIVALENCE));
    Ok((rep, ratios))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> UniformGrid {
        default_grid()
    }

    fn member() -> TestFunction {
        TestFunction::modulated_gaussian(0.0, 2.0, 2.0, 0.0)
    }

    #[test]
    fn maximal_dominates_and_is_even() {
        let g = grid();
        let f = g.sample(|x| (-std::f64::consts::PI * x * x).exp());
        let m = radial_maximal(g, &f, &MaximalConfig::default()).unwrap();
        for j in 1..g.n {
            assert!(m[j] >= f[j].abs() - 1e-9);
            assert!((m[j] - m[g.n - j]).abs() < 1e-12);
        }
        assert!(radial_maximal(g, &vec![0.0; g.n], &MaximalConfig::default()).unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn gaussian_is_outside_h1() {
        let g = grid();
        let f = g.sample(|x| (-std::f64::consts::PI * x * x).exp());
        assert!(hardy_quasi_norm(g, &f, 0.0, 1.0, &MaximalConfig::default()).unwrap().divergent);
    }

    #[test]
    fn dilation_invariance() {
        let cfg = MaximalConfig::default();
        let one = dilation_invariance_check(&member(), 1.0, 1.0, 0.0, grid(), &cfg, 1e-12).unwrap();
        assert!(one.pass() && one.value("ratio") == Some(1.0));
        let four = dilation_invariance_check(&member(), 4.0, 1.0, 0.0, grid(), &cfg, 1e-3).unwrap();
        assert!(four.pass(), "{four:?}");
    }

    #[test]
    fn density_refinement_is_stable() {
        let g = grid();
        let f = g.sample(|x| member().eval(x));
        let cfg = MaximalConfig::default();
        let a = hardy_quasi_norm(g, &f, 0.0, 1.0, &cfg).unwrap();
        let b = hardy_quasi_norm(g, &f, 0.0, 1.0, &cfg.refined()).unwrap();
        assert!(((a.value - b.value) / b.value).abs() < 5e-3);
    }

    #[test]
    fn homogeneity() {
        let g = grid();
        let f = g.sample(|x| member().eval(x));
        let cfg = MaximalConfig::default();
        let a = hardy_quasi_norm(g, &f, 0.0, 0.5, &cfg).unwrap().value;
        let f3: Vec<f64> = f.iter().map(|v| -3.0 * v).collect();
        let b = hardy_quasi_norm(g, &f3, 0.0, 0.5, &cfg).unwrap().value;
        assert!((b / a - 3.0).abs() < 1e-10);
    }
}
