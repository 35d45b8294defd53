//! Weighted Lebesgue norms, weak norms and the kernel/weight constants.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exponents::ExponentSet;
use crate::function::RealFunction;
use crate::grid::{log_linear, GridFunction, Interval};
use crate::kernels::Kernel;
use crate::quad::{gauss_legendre, integrate_flagged, scale_seeds, sup_from_scan, NormValue, QuadConfig};
use crate::weights::{radial_moment, Weight};

const CELL_GL: usize = 8;

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p.is_finite()) {
        return domain(format!("norm exponent must be positive and finite, got {p}"));
    }
    Ok(())
}

/// `(∫ |f|^p w)^{1/p}`.
pub fn weighted_lp_norm(f: &dyn RealFunction, w: &Weight, p: f64) -> Result<NormValue> {
    weighted_lp_norm_with(f, w, p, &QuadConfig::with_tol(1e-10))
}

pub fn weighted_lp_norm_with(f: &dyn RealFunction, w: &Weight, p: f64, cfg: &QuadConfig) -> Result<NormValue> {
    Ok(lp_integral(f, w, p, cfg)?.powf(1.0 / p))
}

/// `∫ |f|^p w` without the final root.
pub fn lp_integral(f: &dyn RealFunction, w: &Weight, p: f64, cfg: &QuadConfig) -> Result<NormValue> {
    check_p(p)?;
    if w.is_zero() {
        return Ok(NormValue::zero());
    }
    if let Some(g) = f.as_grid() {
        return Ok(NormValue::finite(grid_lp_integral(g, w, p), 0.0));
    }
    let support = f.support();
    let f_bps = f.breakpoints();
    let w_bps: Vec<f64> = w.breakpoints().into_iter().filter(|b| *b > 0.0).collect();
    let mut total = NormValue::zero();
    for side in [1.0f64, -1.0] {
        let Some((lo, hi)) = support.side(side > 0.0) else { continue };
        let mut bps = w_bps.clone();
        bps.extend(f_bps.iter().filter(|c| c.signum() == side).map(|c| c.abs()));
        let part = integrate_flagged(|r| f.eval(side * r).abs().powf(p) * w.eval(r), Interval { lo, hi }, &bps, cfg);
        total = total.add(part);
    }
    Ok(total)
}

/// Cellwise Gauss–Legendre in `ln|x|` over the log-linear interpolant.
fn grid_lp_integral(f: &GridFunction, w: &Weight, p: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(CELL_GL);
    let grid = f.grid();
    let n = grid.n_per_side();
    let h = grid.log_step();
    let u0 = grid.r_min().ln();
    let vals = f.values();
    let mut total = 0.0;
    for side in [1.0f64, -1.0] {
        let idx = |kk: usize| if side > 0.0 { n + kk } else { n - 1 - kk };
        for c in 0..n - 1 {
            let (va, vb) = (vals[idx(c)], vals[idx(c + 1)]);
            if va == 0.0 && vb == 0.0 {
                continue;
            }
            let mid = u0 + (c as f64 + 0.5) * h;
            for (t, wt) in nodes.iter().zip(&weights) {
                let u = mid + 0.5 * h * t;
                let y = u.exp();
                let v = log_linear(va, vb, 0.5 + 0.5 * t);
                total += wt * 0.5 * h * v.abs().powf(p) * w.eval(y) * y;
            }
        }
    }
    total
}

/// One monotone stretch of `|f|` in a cell: radii `[r0, r1]` with end values `a`, `b`.
#[derive(Clone, Copy)]
struct Stretch {
    r0: f64,
    r1: f64,
    a: f64,
    b: f64,
    geometric: bool,
}

impl Stretch {
    /// Radial subinterval where `|f| > λ`.
    fn above(&self, lambda: f64) -> Option<(f64, f64)> {
        let (a, b) = (self.a, self.b);
        if a <= lambda && b <= lambda {
            return None;
        }
        if a > lambda && b > lambda {
            return Some((self.r0, self.r1));
        }
        let frac = if self.geometric { (lambda / a).ln() / (b / a).ln() } else { (lambda - a) / (b - a) };
        let ln0 = self.r0.ln();
        let cross = (ln0 + frac * (self.r1.ln() - ln0)).exp();
        Some(if a > lambda { (self.r0, cross) } else { (cross, self.r1) })
    }
}

fn stretches(f: &GridFunction) -> Vec<Stretch> {
    let grid = f.grid();
    let n = grid.n_per_side();
    let vals = f.values();
    let mut out = Vec::new();
    for side in [1.0f64, -1.0] {
        let idx = |kk: usize| if side > 0.0 { n + kk } else { n - 1 - kk };
        for c in 0..n - 1 {
            let (va, vb) = (vals[idx(c)], vals[idx(c + 1)]);
            if va == 0.0 && vb == 0.0 {
                continue;
            }
            let (r0, r1) = (grid.radius(c), grid.radius(c + 1));
            if va * vb > 0.0 {
                out.push(Stretch { r0, r1, a: va.abs(), b: vb.abs(), geometric: true });
            } else if va * vb == 0.0 {
                out.push(Stretch { r0, r1, a: va.abs(), b: vb.abs(), geometric: false });
            } else {
                // Sign change: linear through zero, split at the root (in log radius).
                let frac = va / (va - vb);
                let rz = (r0.ln() + frac * (r1 / r0).ln()).exp();
                out.push(Stretch { r0, r1: rz, a: va.abs(), b: 0.0, geometric: false });
                out.push(Stretch { r0: rz, r1, a: 0.0, b: vb.abs(), geometric: false });
            }
        }
    }
    out
}

/// `sup_λ λ w({|f| > λ})^{1/p}` for a sampled function.
pub fn weak_lp_norm(f: &GridFunction, w: &Weight, p: f64) -> Result<NormValue> {
    if !(p >= 1.0 && p.is_finite()) {
        return domain(format!("weak norm needs p ≥ 1, got {p}"));
    }
    if f.is_zero() || w.is_zero() {
        return Ok(NormValue::zero());
    }
    let parts = stretches(f);
    let objective = |lambda: f64| -> f64 {
        let mut m = 0.0;
        for s in &parts {
            if let Some((r0, r1)) = s.above(lambda) {
                m += 0.5 * radial_moment(w, 1.0, 0.0, r0, r1).value;
            }
        }
        lambda * m.powf(1.0 / p)
    };
    // Level values of the samples are the natural seeds: the sup sits at or just below one.
    let mut levels: Vec<f64> = f.values().iter().map(|v| v.abs()).filter(|v| *v > 0.0).collect();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();
    let seeds: Vec<f64> = levels.iter().map(|l| l * (1.0 - 1e-12)).collect();
    let values: Vec<f64> = seeds.par_iter().map(|&l| objective(l)).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    let mut value = values[best];
    // Golden-section between the neighbouring levels.
    let lo = if best > 0 { seeds[best - 1] } else { seeds[best] * 0.5 };
    let hi = seeds[best];
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (objective(c.exp()), objective(d.exp()));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = objective(c.exp());
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = objective(d.exp());
        }
    }
    value = value.max(fc).max(fd);
    Ok(NormValue::finite(value, 0.0))
}

/// Inner (`|t| ≤ 1`) and tail (`|t| ≥ 1`) parts of a kernel constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KSplit {
    /// Integral over `|t| ≤ 1`, before the root.
    pub inner: NormValue,
    /// Integral over `|t| ≥ 1`, before the root.
    pub tail: NormValue,
    /// The constant itself.
    pub value: NormValue,
    pub tail_dominates: bool,
}

/// `(∫ |Φ(t)|^s |t|^{e} dt)^{1/s}`, split at `|t| = 1`.
fn kernel_power_integral(k: &Kernel, s: f64, e: f64) -> KSplit {
    let cfg = QuadConfig::with_tol(1e-12);
    let mut inner = NormValue::zero();
    let mut tail = NormValue::zero();
    for positive in [true, false] {
        let Some((t0, t1)) = k.support_side(positive) else { continue };
        let sign = if positive { 1.0 } else { -1.0 };
        let bps: Vec<f64> =
            k.breakpoints().into_iter().filter(|b| *b != 0.0 && (*b > 0.0) == positive).map(f64::abs).collect();
        let g = |t: f64| {
            let v = k.eval(sign * t).abs();
            if v == 0.0 {
                0.0
            } else {
                v.powf(s) * t.powf(e)
            }
        };
        if t0 < 1.0 {
            inner = inner.add(integrate_flagged(g, Interval { lo: t0, hi: t1.min(1.0) }, &bps, &cfg));
        }
        if t1 > 1.0 {
            tail = tail.add(integrate_flagged(g, Interval { lo: t0.max(1.0), hi: t1 }, &bps, &cfg));
        }
    }
    let total = inner.add(tail);
    KSplit { inner, tail, value: total.powf(1.0 / s), tail_dominates: tail.value > inner.value }
}

/// `K_{Φ,β,q} = (∫ Φ^{1/(1-β)} |t|^{1/(q(1-β)) - 1} dt)^{1-β}`.
pub fn k_constant(k: &Kernel, beta: f64, q: f64) -> Result<NormValue> {
    Ok(k_constant_split(k, beta, q)?.value)
}

pub fn k_constant_split(k: &Kernel, beta: f64, q: f64) -> Result<KSplit> {
    if !(0.0..1.0).contains(&beta) || !(q > 0.0) {
        return domain(format!("K constant needs β ∈ [0,1) and q > 0, got β={beta}, q={q}"));
    }
    let s = 1.0 / (1.0 - beta);
    Ok(kernel_power_integral(k, s, s / q - 1.0))
}

/// `K_{Φ,s,q,γ} = (∫ |Φ|^s |t|^{(1+γ)s/q - 1} dt)^{1/s}`.
pub fn k_general(k: &Kernel, s: f64, q: f64, gamma: f64) -> Result<NormValue> {
    if !(s >= 1.0) || !(q > 0.0) {
        return domain(format!("K constant needs s ≥ 1 and q > 0, got s={s}, q={q}"));
    }
    Ok(kernel_power_integral(k, s, (1.0 + gamma) * s / q - 1.0).value)
}

/// A two-weight constant: its supremum over the scale α and the attaining α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleConstant {
    pub value: NormValue,
    pub maximizer: f64,
    /// Relative standard deviation of the integrand over the scan.
    pub scan_rel_std: f64,
}

fn two_weight_gate(exps: &ExponentSet) -> Result<()> {
    if !(exps.p > 1.0 && exps.q > 1.0) {
        return domain(format!("two-weight constants need p, q > 1, got p={}, q={}", exps.p, exps.q));
    }
    Ok(())
}

/// `(∫_{|x|≥α} u |x|^{-q(1-β)})^{1/q} (∫_{|x|≤α} v^{1-p'})^{1/p'}`.
pub fn a_integrand(u: &Weight, v: &Weight, exps: &ExponentSet, alpha: f64) -> NormValue {
    let (q, pp, beta) = (exps.q, exps.p_prime(), exps.beta);
    let first = radial_moment(u, 1.0, -q * (1.0 - beta), alpha, f64::INFINITY).powf(1.0 / q);
    let second = radial_moment(v, 1.0 - pp, 0.0, 0.0, alpha).powf(1.0 / pp);
    first.mul(second)
}

/// `(∫_{|x|≤α} u)^{1/q} (∫_{|x|≥α} v^{1-p'} |x|^{-(1-β)p'})^{1/p'}`.
pub fn b_integrand(u: &Weight, v: &Weight, exps: &ExponentSet, alpha: f64) -> NormValue {
    let (q, pp, beta) = (exps.q, exps.p_prime(), exps.beta);
    let first = radial_moment(u, 1.0, 0.0, 0.0, alpha).powf(1.0 / q);
    let second = radial_moment(v, 1.0 - pp, -(1.0 - beta) * pp, alpha, f64::INFINITY).powf(1.0 / pp);
    first.mul(second)
}

fn scale_constant(g: impl Fn(f64) -> NormValue + Sync) -> Result<ScaleConstant> {
    let seeds = scale_seeds(Interval::positive())?;
    let parts: Vec<NormValue> = seeds.par_iter().map(|&a| g(a)).collect();
    if parts.iter().any(|v| v.divergent) {
        let arg = seeds[parts.iter().position(|v| v.divergent).unwrap()];
        return Ok(ScaleConstant { value: NormValue::diverged(f64::INFINITY), maximizer: arg, scan_rel_std: f64::NAN });
    }
    let values: Vec<f64> = parts.iter().map(|v| v.value).collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let rel_std = if mean == 0.0 { 0.0 } else { var.sqrt() / mean.abs() };
    let err = parts.iter().fold(0.0f64, |m, v| m.max(v.quadrature_error));
    let sup = sup_from_scan(&|a: f64| g(a).value, &seeds, &values, 1e-10)?;
    let value = if sup.divergent { NormValue::diverged(sup.value) } else { NormValue::finite(sup.value, err) };
    Ok(ScaleConstant { value, maximizer: sup.arg, scan_rel_std: rel_std })
}

/// `A = sup_α` of [`a_integrand`].
pub fn a_constant(u: &Weight, v: &Weight, exps: &ExponentSet) -> Result<ScaleConstant> {
    two_weight_gate(exps)?;
    scale_constant(|a| a_integrand(u, v, exps, a))
}

/// `B = sup_α` of [`b_integrand`].
pub fn b_constant(u: &Weight, v: &Weight, exps: &ExponentSet) -> Result<ScaleConstant> {
    two_weight_gate(exps)?;
    scale_constant(|a| b_integrand(u, v, exps, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::TestFunction;
    use crate::grid::LogGrid;

    #[test]
    fn lp_examples() {
        let f = TestFunction::Indicator { lo: 0.0, hi: 1.0 };
        for (a, p) in [(0.0, 2.0), (0.5, 3.0), (-0.5, 1.5)] {
            let n = weighted_lp_norm(&f, &Weight::power(a).unwrap(), p).unwrap();
            assert!((n.value - (1.0f64 / (a + 1.0)).powf(1.0 / p)).abs() < 1e-9, "{a} {p} {n:?}");
        }
        let g = TestFunction::modulated_gaussian(0.0, 1.0, 0.0, 0.0);
        let n = weighted_lp_norm(&g, &Weight::one(), 2.0).unwrap();
        assert!((n.value - 2f64.powf(-0.25)).abs() < 1e-10);
        assert_eq!(weighted_lp_norm(&TestFunction::Zero, &Weight::one(), 2.0).unwrap().value, 0.0);
    }

    #[test]
    fn grid_norm_matches_closed_form() {
        let grid = LogGrid::new(1e-6, 1e3, 3000).unwrap();
        let f = GridFunction::from_fn(grid, |x| (-std::f64::consts::PI * x * x).exp()).unwrap();
        let n = weighted_lp_norm(&f, &Weight::one(), 2.0).unwrap();
        assert!((n.value - 2f64.powf(-0.25)).abs() < 1e-5, "{n:?}");
    }

    #[test]
    fn weak_examples() {
        let grid = LogGrid::new(1e-6, 1e6, 600).unwrap();
        for p in [1.0, 2.0, 3.5] {
            let f = GridFunction::from_fn(grid, |x| x.abs().powf(-1.0 / p)).unwrap();
            let n = weak_lp_norm(&f, &Weight::one(), p).unwrap();
            assert!((n.value - 2f64.powf(1.0 / p)).abs() < 1e-9, "{p}: {n:?}");
        }
        let grid = LogGrid::new(1e-3, 1e3, 301).unwrap();
        let chi = GridFunction::from_fn(grid, |x| if x.abs() <= 1.0 + 1e-12 { 1.0 } else { 0.0 }).unwrap();
        let n = weak_lp_norm(&chi, &Weight::one(), 2.0).unwrap();
        // The sampled function vanishes below r_min, so E is [-1, -1e-3] ∪ [1e-3, 1].
        assert!((n.value - (2.0 * (1.0 - 1e-3f64)).sqrt()).abs() < 1e-9, "{n:?}");
    }

    #[test]
    fn k_examples() {
        let k = k_constant(&Kernel::fractional_hardy(0.5).unwrap(), 0.5, 4.0).unwrap();
        assert!((k.value - 2.0).abs() < 1e-8);
        let k = k_constant(&Kernel::AdjointHardy, 0.0, 2.0).unwrap();
        assert!((k.value - 4.0).abs() < 1e-8);
        assert_eq!(k_constant(&Kernel::Zero, 0.5, 4.0).unwrap().value, 0.0);
        let g = k_general(&Kernel::fractional_hardy(0.5).unwrap(), 2.0, 4.0, 0.0).unwrap();
        assert!((g.value - 2.0).abs() < 1e-10);
        let g = k_general(&Kernel::AdjointHardy, 1.0, 1.0, 0.0).unwrap();
        assert!((g.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn a_and_b_reference() {
        let e = ExponentSet::diagonal(4.0, 0.5).unwrap();
        let a = a_constant(&Weight::one(), &Weight::one(), &e).unwrap();
        assert!((a.value.value - 2f64.sqrt()).abs() < 1e-10);
        assert!(a.scan_rel_std < 1e-12);
        let b = b_constant(&Weight::one(), &Weight::one(), &e).unwrap();
        assert!((b.value.value - 2f64.sqrt()).abs() < 1e-10);
        let zero = a_constant(&Weight::zero(), &Weight::one(), &e).unwrap();
        assert_eq!(zero.value.value, 0.0);
        let bad_v = Weight::power(0.5).unwrap();
        assert!(a_constant(&Weight::one(), &bad_v, &e).unwrap().value.divergent);
        let flat = ExponentSet::new(2.0, 2.0, 0.5, 0.0, 0.0).unwrap();
        assert!(b_constant(&Weight::one(), &Weight::one(), &flat).unwrap().value.divergent);
    }
}
