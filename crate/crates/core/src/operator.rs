//! The fractional Hausdorff operator `h_{Φ,β} f(x) = ∫ Φ(x/|y|) |y|^{β-1} f(y) dy`.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{domain, Error, Result};
use crate::exponents::ExponentSet;
use crate::function::{RealFunction, Support};
use crate::grid::{log_linear, GridFunction, Interval, LogGrid};
use crate::kernels::Kernel;
use crate::quad::{gauss_legendre, integrate_flagged, integrate_with, QuadConfig};

const CELL_GL: usize = 8;

/// Radial range in `|y|` where `Φ(x/|y|)` can be nonzero.
fn kernel_radii(k: &Kernel, x: f64) -> Option<(f64, f64)> {
    let (t_lo, t_hi) = k.support_side(x > 0.0)?;
    let r = x.abs();
    let lo = if t_hi.is_infinite() { 0.0 } else { r / t_hi };
    let hi = if t_lo == 0.0 { f64::INFINITY } else { r / t_lo };
    Some((lo, hi))
}

/// Kernel jumps `t = b` mapped to `|y| = |x|/|b|` on the side of `x`.
fn kernel_cuts(k: &Kernel, x: f64) -> Vec<f64> {
    k.breakpoints()
        .into_iter()
        .filter(|b| *b != 0.0 && b.is_finite() && (*b > 0.0) == (x > 0.0))
        .map(|b| x.abs() / b.abs())
        .collect()
}

fn intersect(a: (f64, f64), b: (f64, f64)) -> Option<(f64, f64)> {
    let lo = a.0.max(b.0);
    let hi = a.1.min(b.1);
    (lo < hi).then_some((lo, hi))
}

/// `h_{Φ,β} f(x)` by quadrature; the result is an error when the integral diverges.
pub fn apply_hausdorff(k: &Kernel, beta: f64, f: &dyn RealFunction, x: f64, tol: f64) -> Result<f64> {
    if x == 0.0 || !x.is_finite() {
        return domain(format!("operator evaluated at x = {x}"));
    }
    if !(0.0..1.0).contains(&beta) {
        return domain(format!("β must lie in [0, 1), got {beta}"));
    }
    let Some(kr) = kernel_radii(k, x) else { return Ok(0.0) };
    if let Some(g) = f.as_grid() {
        return Ok(apply_cellwise(k, beta, g, x, kr));
    }
    // Integrate in t = |x|/|y|: h f(x) = |x|^β Σ_± ∫ Φ(sgn(x) t) t^{-1-β} f(±|x|/t) dt.
    // This keeps the integrand on the scale of f(x) even for extreme |x|.
    let cfg = QuadConfig::with_tol(tol);
    let r = x.abs();
    let sx = x.signum();
    let (t_lo, t_hi) = k.support_side(x > 0.0).expect("kernel radii exist");
    let k_bps: Vec<f64> =
        k.breakpoints().into_iter().filter(|b| *b != 0.0 && b.is_finite() && (*b > 0.0) == (x > 0.0)).map(f64::abs).collect();
    let support = f.support();
    let f_bps = f.breakpoints();
    let mut total = 0.0;
    for side in [1.0f64, -1.0] {
        let Some((a, b)) = support.side(side > 0.0) else { continue };
        let ft = (if b.is_infinite() { 0.0 } else { r / b }, if a == 0.0 { f64::INFINITY } else { r / a });
        let Some((lo, hi)) = intersect((t_lo, t_hi), ft) else { continue };
        let mut bps = k_bps.clone();
        bps.extend(f_bps.iter().filter(|c| c.signum() == side && c.is_finite()).map(|c| r / c.abs()));
        // t = |x| is |y| = 1, the unit scale of f; the divergence probes work relative to it.
        bps.push(r);
        let integrand = |t: f64| {
            let v = f.eval(side * r / t);
            if v == 0.0 {
                0.0
            } else {
                k.eval(sx * t) * t.powf(-1.0 - beta) * v
            }
        };
        let res = integrate_flagged(integrand, Interval { lo, hi }, &bps, &cfg);
        if res.divergent {
            return Err(Error::Divergent { what: format!("operator integral at x = {x}"), last: r.powf(beta) * (res.value + total) });
        }
        total += res.value;
    }
    total *= r.powf(beta);
    Ok(total)
}

/// Cellwise Gauss–Legendre in `ln|y|` over the log-linear interpolant of a grid function.
fn apply_cellwise(k: &Kernel, beta: f64, f: &GridFunction, x: f64, kr: (f64, f64)) -> f64 {
    thread_local! {
        static GL: (Vec<f64>, Vec<f64>) = gauss_legendre(CELL_GL);
    }
    let grid = f.grid();
    let n = grid.n_per_side();
    let h = grid.log_step();
    let u0 = grid.r_min().ln();
    let cuts = kernel_cuts(k, x);
    let vals = f.values();
    let r = x.abs();
    let sx = x.signum();
    let term = |y: f64| k.eval(sx * r / y) * y.powf(beta);
    let mut total = 0.0;
    // Only cells inside the kernel's radial range can contribute.
    let first = if kr.0 > grid.r_min() { (((kr.0.ln() - u0) / h).floor().max(0.0)) as usize } else { 0 };
    let last = if kr.1 < grid.r_max() { (((kr.1.ln() - u0) / h).ceil() as usize).min(n - 1) } else { n - 1 };
    for side in [1.0f64, -1.0] {
        let idx = |kk: usize| if side > 0.0 { n + kk } else { n - 1 - kk };
        for c in first..last {
            let (va, vb) = (vals[idx(c)], vals[idx(c + 1)]);
            if va == 0.0 && vb == 0.0 {
                continue;
            }
            let ua = u0 + c as f64 * h;
            let ub = ua + h;
            let (ya, yb) = (ua.exp(), ub.exp());
            let Some((lo, hi)) = intersect((ya, yb), kr) else { continue };
            let interp = |y: f64| log_linear(va, vb, ((y.ln() - ua) / h).clamp(0.0, 1.0));
            let inner: Vec<f64> = cuts.iter().copied().filter(|&b| lo < b && b < hi).collect();
            if !inner.is_empty() || lo > ya || hi < yb {
                // A kernel jump (or the edge of its support) falls in this cell.
                let cfg = QuadConfig::with_tol(1e-11);
                let g = |y: f64| term(y) * interp(y) / y;
                match integrate_with(g, Interval { lo, hi }, &inner, &cfg) {
                    Ok(res) => total += res.value,
                    Err(Error::Convergence { estimate, .. }) => total += estimate,
                    Err(_) => {}
                }
                continue;
            }
            GL.with(|(nodes, weights)| {
                let mid = 0.5 * (ua + ub);
                let half = 0.5 * h;
                for (t, w) in nodes.iter().zip(weights) {
                    let u = mid + half * t;
                    let frac = (u - ua) / h;
                    let y = u.exp();
                    total += w * half * term(y) * log_linear(va, vb, frac);
                }
            });
        }
    }
    total
}

/// Lazily evaluated image `h_{Φ,β} f`, usable wherever a [`RealFunction`] is.
pub struct HausdorffImage<'a> {
    pub kernel: &'a Kernel,
    pub beta: f64,
    pub f: &'a dyn RealFunction,
    pub tol: f64,
}

impl<'a> HausdorffImage<'a> {
    pub fn new(kernel: &'a Kernel, beta: f64, f: &'a dyn RealFunction, tol: f64) -> Self {
        Self { kernel, beta, f, tol }
    }
}

impl RealFunction for HausdorffImage<'_> {
    fn eval(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        match apply_hausdorff(self.kernel, self.beta, self.f, x, self.tol) {
            Ok(v) => v,
            Err(_) => f64::INFINITY,
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        let kb: Vec<f64> = self.kernel.breakpoints().into_iter().filter(|b| *b != 0.0 && b.is_finite()).collect();
        let fb: Vec<f64> = self.f.breakpoints().into_iter().filter(|c| *c != 0.0 && c.is_finite()).collect();
        let mut out = Vec::new();
        for b in &kb {
            for c in &fb {
                out.push(b * c.abs());
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup();
        out
    }

    fn support(&self) -> Support {
        let fs = self.f.support();
        let radial = Support::hull_of(fs.pos, fs.neg);
        let side = |positive: bool| -> Option<(f64, f64)> {
            let (t0, t1) = self.kernel.support_side(positive)?;
            let (r0, r1) = radial?;
            Some((t0 * r0, if t1.is_infinite() || r1.is_infinite() { f64::INFINITY } else { t1 * r1 }))
        };
        Support { pos: side(true), neg: side(false) }
    }
}

/// Operator image on a grid, with nodes whose integral diverged.
#[derive(Debug, Clone)]
pub struct GridImage {
    pub function: GridFunction,
    pub divergent_nodes: Vec<usize>,
}

/// `h_{Φ,β} f` at every node of `out_grid`; divergent nodes are recorded and set to the last finite value.
pub fn apply_on_grid(k: &Kernel, beta: f64, f: &dyn RealFunction, out_grid: &LogGrid, tol: f64) -> Result<GridImage> {
    let nodes = out_grid.nodes();
    let results: Vec<Result<f64>> = nodes.par_iter().map(|&x| apply_hausdorff(k, beta, f, x, tol)).collect();
    let mut values = Vec::with_capacity(nodes.len());
    let mut divergent_nodes = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => values.push(v),
            Err(Error::Divergent { last, .. }) => {
                divergent_nodes.push(i);
                values.push(if last.is_finite() { last } else { 0.0 });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(GridImage { function: GridFunction::new(*out_grid, values)?, divergent_nodes })
}

/// Linear convolution of two real sequences by FFT.
pub(crate) fn fft_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let len = a.len() + b.len() - 1;
    let size = len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let pad = |v: &[f64]| {
        let mut out: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        out.resize(size, Complex64::new(0.0, 0.0));
        out
    };
    let mut fa = pad(a);
    let mut fb = pad(b);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);
    fa.truncate(len);
    fa.into_iter().map(|z| z.re / size as f64).collect()
}

/// `(f ∗ g)(x) = ∫ f(y) g(x/y) dy/y` on `(0, ∞)`, as a discrete convolution in `ln x`.
///
/// Inputs use their positive halves and must share the log step; the result lives on the
/// grid from `r_min(f)·r_min(g)` with `n_f + n_g - 1` radii, and vanishes on the negative half.
pub fn mult_convolve(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    let (gf, gg) = (f.grid(), g.grid());
    let h = gf.log_step();
    if !gf.same_spacing(gg) {
        return domain(format!("log steps differ: {} vs {}", h, gg.log_step()));
    }
    let conv = fft_convolve(f.positive_values(), g.positive_values());
    let n = conv.len();
    let r_min = gf.r_min() * gg.r_min();
    let r_max = r_min * (h * (n - 1) as f64).exp();
    let grid = LogGrid::new(r_min, r_max, n)?;
    let mut values = vec![0.0; 2 * n];
    for (i, c) in conv.into_iter().enumerate() {
        values[n + i] = h * c;
    }
    GridFunction::new(grid, values)
}

/// `h_{Φ,β} f` rebuilt from four multiplicative convolutions of `Φ(j·)(·)^c` against
/// `f(i·)(·)^{(1+α)/p}`, `c = (1+γ)/q`; an oracle independent of [`apply_on_grid`].
pub fn hausdorff_as_mellin(k: &Kernel, beta: f64, f: &GridFunction, exps: &ExponentSet) -> Result<GridFunction> {
    exps.require_hardy_scaling()?;
    if (exps.beta - beta).abs() > 1e-12 {
        return domain(format!("β = {beta} disagrees with the exponent set's β = {}", exps.beta));
    }
    let grid = *f.grid();
    let n = grid.n_per_side();
    let h = grid.log_step();
    let c = (1.0 + exps.gamma) / exps.q;
    let a = (1.0 + exps.alpha) / exps.p;
    let radii = grid.radii();
    let (gl_x, gl_w) = gauss_legendre(4);
    let bps: Vec<f64> = k.breakpoints().into_iter().filter(|b| *b != 0.0 && b.is_finite()).collect();
    // Cell average of w ↦ Φ(j e^w) e^{cw} over [w - h/2, w + h/2].
    let cell_avg = |j: f64, w: f64| -> f64 {
        let (lo, hi) = (w - 0.5 * h, w + 0.5 * h);
        let mut cuts = vec![lo];
        for b in &bps {
            if (*b > 0.0) == (j > 0.0) {
                let wb = b.abs().ln();
                if lo < wb && wb < hi {
                    cuts.push(wb);
                }
            }
        }
        cuts.push(hi);
        let mut acc = 0.0;
        for s in cuts.windows(2) {
            let (m, half) = (0.5 * (s[0] + s[1]), 0.5 * (s[1] - s[0]));
            for (t, wt) in gl_x.iter().zip(&gl_w) {
                let ww = m + half * t;
                acc += wt * half * k.eval(j * ww.exp()) * (c * ww).exp();
            }
        }
        acc / h
    };
    let mut out = vec![0.0; 2 * n];
    for j in [1.0f64, -1.0] {
        let kern: Vec<f64> = (0..2 * n - 1).map(|m| cell_avg(j, (m as f64 - (n as f64 - 1.0)) * h)).collect();
        let mut sum = vec![0.0; n];
        for i in [1.0f64, -1.0] {
            let fi: Vec<f64> = (0..n)
                .map(|kk| {
                    let idx = if i > 0.0 { n + kk } else { n - 1 - kk };
                    radii[kk].powf(a) * f.values()[idx]
                })
                .collect();
            let conv = fft_convolve(&fi, &kern);
            for kk in 0..n {
                sum[kk] += h * conv[kk + n - 1];
            }
        }
        for kk in 0..n {
            let idx = if j > 0.0 { n + kk } else { n - 1 - kk };
            out[idx] = radii[kk].powf(-c) * sum[kk];
        }
    }
    GridFunction::new(grid, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{FnFunction, TestFunction};

    #[test]
    fn spec_examples() {
        let hardy = Kernel::fractional_hardy(0.0).unwrap();
        let f = TestFunction::Indicator { lo: 0.0, hi: 1.0 };
        let v = apply_hausdorff(&hardy, 0.0, &f, 2.0, 1e-10).unwrap();
        assert!((v - 0.5).abs() < 1e-9, "{v}");
        let g = TestFunction::Indicator { lo: 1.0, hi: 2.0 };
        let v = apply_hausdorff(&Kernel::AdjointHardy, 0.5, &g, 0.5, 1e-10).unwrap();
        assert!((v - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-9, "{v}");
        assert_eq!(apply_hausdorff(&hardy, 0.0, &TestFunction::Zero, 3.0, 1e-10).unwrap(), 0.0);
        assert!(apply_hausdorff(&hardy, 0.0, &f, 0.0, 1e-10).is_err());
    }

    #[test]
    fn even_indicator_on_grid() {
        let hardy = Kernel::fractional_hardy(0.0).unwrap();
        let f = TestFunction::Indicator { lo: -1.0, hi: 1.0 };
        let out = LogGrid::new(0.5, 2.0, 2).unwrap();
        let img = apply_on_grid(&hardy, 0.0, &f, &out, 1e-10).unwrap();
        let v = img.function.values();
        assert!((v[out.positive_index(0)] - 2.0).abs() < 1e-8);
        assert!((v[out.positive_index(1)] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn cellwise_matches_pointwise() {
        let grid = LogGrid::new(1e-5, 1e4, 4000).unwrap();
        let f = GridFunction::from_fn(grid, |x| (-x * x).exp()).unwrap();
        let k = Kernel::fractional_hlp(0.3).unwrap();
        for x in [-3.0, 0.2, 1.7] {
            let a = apply_hausdorff(&k, 0.3, &f, x, 1e-10).unwrap();
            let b = apply_hausdorff(&k, 0.3, &FnFunction { f: |x: f64| (-x * x).exp(), breakpoints: Vec::new() }, x, 1e-10).unwrap();
            assert!((a - b).abs() < 1e-4 * b.abs(), "{x}: {a} vs {b}");
        }
    }

    #[test]
    fn mult_convolve_support() {
        let grid = LogGrid::new(0.1, 100.0, 400).unwrap();
        let e = std::f64::consts::E;
        let chi = GridFunction::from_fn(grid, |x| if (1.0..=e).contains(&x) { 1.0 } else { 0.0 }).unwrap();
        let conv = mult_convolve(&chi, &chi).unwrap();
        let g = conv.grid();
        let h = g.log_step();
        for (k, v) in conv.positive_values().iter().enumerate() {
            let r = g.radius(k);
            if *v > 1e-12 {
                assert!(r > (-2.0 * h).exp() && r < e * e * (2.0 * h).exp(), "{r}");
            }
        }
    }

    #[test]
    fn mellin_oracle_agrees() {
        let grid = LogGrid::new(1e-6, 1e6, 3000).unwrap();
        let f = GridFunction::from_fn(grid, |x| (-x * x).exp()).unwrap();
        let k = Kernel::fractional_hardy(0.0).unwrap();
        let exps = ExponentSet::new(2.0, 2.0, 0.0, 0.0, 0.0).unwrap();
        let m = hausdorff_as_mellin(&k, 0.0, &f, &exps).unwrap();
        let d = apply_on_grid(&k, 0.0, &f, &grid, 1e-10).unwrap();
        let rel = d.function.relative_l2_distance(&m).unwrap();
        assert!(rel < 1e-4, "{rel}");
    }
}
