//! Kernels Φ of the fractional Hausdorff operator.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::function::{RealFunction, Support};
use crate::grid::{ComplexGridFunction, GridFunction, Interval, LogGrid};
use crate::quad::{gauss_legendre, integrate_with, QuadConfig};
use crate::report::{Check, VerificationReport};
use crate::weights::read_profile_csv;

/// Signed kernel tabulated on a uniform grid, with `c/t` tails beyond it.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedKernel {
    pub(crate) x0: f64,
    pub(crate) dx: f64,
    pub(crate) values: Vec<f64>,
}

impl TabulatedKernel {
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 4 || !(dx > 0.0) || values.iter().any(|v| !v.is_finite()) {
            return domain("tabulated kernel needs at least four finite samples and dx > 0");
        }
        Ok(Self { x0, dx, values })
    }

    fn end(&self) -> f64 {
        self.x0 + self.dx * (self.values.len() - 1) as f64
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.values.len();
        let last = self.end();
        if t < self.x0 {
            return if self.x0 != 0.0 { self.values[0] * self.x0 / t } else { 0.0 };
        }
        if t > last {
            return if last != 0.0 { self.values[n - 1] * last / t } else { 0.0 };
        }
        cubic_interp(self.x0, self.dx, &self.values, t).unwrap_or(0.0)
    }
}

/// Piecewise cubic Lagrange interpolation of samples at `x0 + j·dx`, linear in the end cells.
/// `None` outside the sampled range.
pub(crate) fn cubic_interp(x0: f64, dx: f64, values: &[f64], t: f64) -> Option<f64> {
    let n = values.len();
    let pos = (t - x0) / dx;
    if !(pos >= 0.0 && pos <= (n - 1) as f64) || n < 2 {
        return None;
    }
    let j = (pos.floor() as usize).min(n - 2);
    let s = pos - j as f64;
    if j == 0 || j + 2 >= n {
        return Some(values[j] * (1.0 - s) + values[j + 1] * s);
    }
    let (a, b, c, d) = (values[j - 1], values[j], values[j + 1], values[j + 2]);
    let w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
    let w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    let w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    let w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
    Some(a * w0 + b * w1 + c * w2 + d * w3)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    Zero,
    /// `|t|^{β-1} 1{|t|>1}`
    FractionalHardy { beta: f64 },
    /// `1{0<|t|≤1}`
    AdjointHardy,
    /// Sum of the two above.
    FractionalHlp { beta: f64 },
    /// `g(1-t)^{g-1} 1{0<t<1}`
    CesaroGamma { g: f64 },
    /// Inverse Fourier transform of `e^{-σξ²}`: `√(π/σ) e^{-π²t²/σ}`.
    GaussianHat { sigma: f64 },
    /// Even extension of a nonnegative profile on positive radii.
    Sampled(GridFunction),
    Tabulated(TabulatedKernel),
}

/// Region of the two-sided kernel bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BoundRegion {
    /// `C1/|t|^{1-β} ≤ Φ(t) ≤ C2/|t|^{1-β}` for `|t| ≥ 1`.
    OutsideUnit { beta: f64 },
    /// `C1 ≤ Φ(t) ≤ C2` for `|t| ≤ 1`.
    InsideUnit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelBounds {
    pub c1: f64,
    pub c2: f64,
    pub region: BoundRegion,
}

impl KernelBounds {
    pub fn new(c1: f64, c2: f64, region: BoundRegion) -> Result<Self> {
        if !(0.0 <= c1 && c1 <= c2) {
            return domain(format!("kernel bounds need 0 ≤ C1 ≤ C2, got ({c1}, {c2})"));
        }
        Ok(Self { c1, c2, region })
    }
}

impl Kernel {
    pub fn fractional_hardy(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Kernel::FractionalHardy { beta })
    }

    pub fn fractional_hlp(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Kernel::FractionalHlp { beta })
    }

    pub fn cesaro_gamma(g: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return domain(format!("Cesàro kernel needs g > 0, got {g}"));
        }
        Ok(Kernel::CesaroGamma { g })
    }

    pub fn gaussian_hat(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return domain(format!("Gaussian kernel needs σ > 0, got {sigma}"));
        }
        Ok(Kernel::GaussianHat { sigma })
    }

    /// Even kernel from a nonnegative profile sampled on the positive radii of `grid`.
    pub fn sampled(grid: LogGrid, profile: &[f64]) -> Result<Self> {
        if profile.len() != grid.n_per_side() {
            return domain(format!("profile needs {} values, got {}", grid.n_per_side(), profile.len()));
        }
        if profile.iter().any(|v| !(*v >= 0.0)) {
            return domain("sampled kernel profile must be nonnegative");
        }
        let n = grid.n_per_side();
        let values = (0..grid.len()).map(|i| if i < n { profile[n - 1 - i] } else { profile[i - n] }).collect();
        Ok(Kernel::Sampled(GridFunction::new(grid, values)?))
    }

    /// Loads a two-column `(node, value)` CSV and applies the even extension.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let (grid, values) = read_profile_csv(path)?;
        Self::sampled(grid, &values)
    }

    /// Φ(t) for `t ≠ 0`.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if t == 0.0 || t.is_nan() {
            return domain("kernel evaluated at t = 0");
        }
        Ok(self.eval(t))
    }

    /// Unchecked evaluation; at `t = 0` returns the limit from the right where one exists.
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        let r = t.abs();
        match self {
            Kernel::Zero => 0.0,
            Kernel::FractionalHardy { beta } => {
                if r > 1.0 {
                    r.powf(beta - 1.0)
                } else {
                    0.0
                }
            }
            Kernel::AdjointHardy => {
                if r <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Kernel::FractionalHlp { beta } => {
                if r > 1.0 {
                    r.powf(beta - 1.0)
                } else {
                    1.0
                }
            }
            Kernel::CesaroGamma { g } => {
                if t >= 0.0 && t < 1.0 {
                    if *g == 1.0 {
                        1.0
                    } else {
                        g * (1.0 - t).powf(g - 1.0)
                    }
                } else {
                    0.0
                }
            }
            Kernel::GaussianHat { sigma } => (PI / sigma).sqrt() * (-PI * PI * t * t / sigma).exp(),
            Kernel::Sampled(f) => f.eval(r),
            Kernel::Tabulated(k) => k.eval(t),
        }
    }

    /// Jump locations of Φ in `t`.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Kernel::FractionalHardy { .. } | Kernel::AdjointHardy | Kernel::FractionalHlp { .. } => vec![-1.0, 1.0],
            Kernel::CesaroGamma { .. } => vec![0.0, 1.0],
            Kernel::Sampled(f) => {
                let g = f.grid();
                vec![-g.r_max(), -g.r_min(), g.r_min(), g.r_max()]
            }
            Kernel::Tabulated(k) => vec![k.x0, k.end()],
            Kernel::Zero | Kernel::GaussianHat { .. } => Vec::new(),
        }
    }

    /// Support in `|t|` on the side `sign(t) = positive`.
    pub fn support_side(&self, positive: bool) -> Option<(f64, f64)> {
        match self {
            Kernel::Zero => None,
            Kernel::FractionalHardy { .. } => Some((1.0, f64::INFINITY)),
            Kernel::AdjointHardy => Some((0.0, 1.0)),
            Kernel::CesaroGamma { .. } => {
                if positive {
                    Some((0.0, 1.0))
                } else {
                    None
                }
            }
            Kernel::Sampled(f) => {
                if f.is_zero() {
                    None
                } else {
                    Some((f.grid().r_min(), f.grid().r_max()))
                }
            }
            _ => Some((0.0, f64::INFINITY)),
        }
    }

    pub fn is_even(&self) -> bool {
        !matches!(self, Kernel::CesaroGamma { .. } | Kernel::Tabulated(_))
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            Kernel::Tabulated(k) => k.values.iter().all(|v| *v >= 0.0),
            _ => true,
        }
    }

    /// Whether Φ and Φ̂ are integrable, as required on the Fourier side.
    pub fn fourier_admissible(&self) -> bool {
        !matches!(self, Kernel::FractionalHardy { .. } | Kernel::FractionalHlp { .. } | Kernel::Tabulated(_))
    }

    pub fn name(&self) -> String {
        match self {
            Kernel::Zero => "zero".into(),
            Kernel::FractionalHardy { beta } => format!("fractional_hardy(beta={beta})"),
            Kernel::AdjointHardy => "adjoint_hardy".into(),
            Kernel::FractionalHlp { beta } => format!("fractional_hlp(beta={beta})"),
            Kernel::CesaroGamma { g } => format!("cesaro_gamma(g={g})"),
            Kernel::GaussianHat { sigma } => format!("gaussian_hat(sigma={sigma})"),
            Kernel::Sampled(f) => format!("sampled({} nodes)", f.grid().n_per_side()),
            Kernel::Tabulated(k) => format!("tabulated({} nodes)", k.values.len()),
        }
    }

    /// Value for uniform sampling: the cell average when a jump falls inside the cell.
    pub fn sample_value(&self, t: f64, dx: f64) -> f64 {
        let (lo, hi) = (t - 0.5 * dx, t + 0.5 * dx);
        let jumps = self.breakpoints();
        if jumps.iter().any(|&b| lo <= b && b <= hi) {
            let cfg = QuadConfig::with_tol(1e-12);
            if let Ok(r) = integrate_with(|s| self.eval(s), Interval { lo, hi }, &jumps, &cfg) {
                return r.value / dx;
            }
        }
        self.eval(t)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..1.0).contains(&beta) {
        return domain(format!("β must lie in [0, 1), got {beta}"));
    }
    Ok(())
}

impl RealFunction for Kernel {
    fn eval(&self, x: f64) -> f64 {
        Kernel::eval(self, x)
    }

    fn breakpoints(&self) -> Vec<f64> {
        Kernel::breakpoints(self)
    }

    fn support(&self) -> Support {
        Support { pos: self.support_side(true), neg: self.support_side(false) }
    }
}

/// Checks the two-sided bound at every probe node in the declared region.
pub fn verify_bounds(k: &Kernel, b: &KernelBounds, probe: &LogGrid) -> VerificationReport {
    let (rel_lo, rel_hi, beta) = match b.region {
        BoundRegion::OutsideUnit { beta } => (1.0, f64::INFINITY, beta),
        BoundRegion::InsideUnit => (0.0, 1.0, 1.0),
    };
    let mut c1_seen = f64::INFINITY;
    let mut c2_seen: f64 = 0.0;
    let mut ok = true;
    let mut probed = 0usize;
    for t in probe.nodes() {
        let r = t.abs();
        let inside = match b.region {
            BoundRegion::OutsideUnit { .. } => r >= rel_lo && r < rel_hi,
            BoundRegion::InsideUnit => r > rel_lo && r <= rel_hi,
        };
        if !inside {
            continue;
        }
        probed += 1;
        let scale = r.powf(1.0 - beta);
        let phi = k.eval(t) * scale;
        c1_seen = c1_seen.min(phi);
        c2_seen = c2_seen.max(phi);
        let slack = 1e-12 * phi.abs().max(1.0);
        if phi < b.c1 - slack || phi > b.c2 + slack {
            ok = false;
        }
    }
    let mut rep = VerificationReport::new(format!("kernel bounds: {}", k.name()));
    rep.push(Check::flag("bounds_hold", ok && probed > 0, "kernel-two-sided-bound"));
    rep.push(Check::info("probed_nodes", probed as f64, "kernel-two-sided-bound"));
    rep.push(Check::info("c1_observed", if probed > 0 { c1_seen } else { f64::NAN }, "kernel-two-sided-bound"));
    rep.push(Check::info("c2_observed", c2_seen, "kernel-two-sided-bound"));
    rep
}

/// Φ̂ at `ξ`, by quadrature over the kernel's compact support.
fn compact_ft(k: &Kernel, lo: f64, hi: f64, singular: &[f64], xi: f64) -> Complex64 {
    const GL_ORDER: usize = 16;
    thread_local! {
        static GL: (Vec<f64>, Vec<f64>) = gauss_legendre(GL_ORDER);
    }
    let panels = ((4.0 * xi.abs() * (hi - lo)).ceil() as usize).max(1);
    let width = (hi - lo) / panels as f64;
    let w = 2.0 * PI * xi;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..panels {
        let a = lo + j as f64 * width;
        let b = if j + 1 == panels { hi } else { a + width };
        let touches = singular.iter().any(|&s| (s - a).abs() < 1e-15 || (s - b).abs() < 1e-15);
        if touches {
            let cfg = QuadConfig::with_tol(1e-13);
            let iv = Interval { lo: a, hi: b };
            let re = integrate_with(|t| k.eval(t) * (w * t).cos(), iv, &[], &cfg).map(|r| r.value).unwrap_or(f64::NAN);
            let im = integrate_with(|t| -k.eval(t) * (w * t).sin(), iv, &[], &cfg).map(|r| r.value).unwrap_or(f64::NAN);
            acc += Complex64::new(re, im);
        } else {
            GL.with(|(x, wts)| {
                let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
                for (xi_, wi) in x.iter().zip(wts) {
                    let t = c + h * xi_;
                    let v = k.eval(t) * wi * h;
                    acc += Complex64::new(v * (w * t).cos(), -v * (w * t).sin());
                }
            });
        }
    }
    acc
}

/// Fourier transform `Φ̂(ξ) = ∫ Φ(t) e^{-2πitξ} dt` at the nodes of `grid`.
pub fn fourier_of_kernel(k: &Kernel, grid: &LogGrid) -> Result<ComplexGridFunction> {
    let nodes = grid.nodes();
    let values: Vec<Complex64> = match k {
        Kernel::Zero => vec![Complex64::new(0.0, 0.0); nodes.len()],
        Kernel::GaussianHat { sigma } => nodes.iter().map(|xi| Complex64::new((-sigma * xi * xi).exp(), 0.0)).collect(),
        Kernel::FractionalHardy { .. } | Kernel::FractionalHlp { .. } => {
            return Err(Error::Domain(format!(
                "{} is not integrable (tail |t|^(β-1) diverges); use spatial-side operations only",
                k.name()
            )))
        }
        Kernel::Tabulated(_) => return domain("tabulated kernels are signed helpers without a Fourier transform"),
        Kernel::AdjointHardy => nodes
            .par_iter()
            .map(|&xi| {
                let half = compact_ft(k, 0.0, 1.0, &[], xi);
                Complex64::new(2.0 * half.re, 0.0)
            })
            .collect(),
        Kernel::CesaroGamma { g } => {
            let singular: Vec<f64> = if *g < 1.0 { vec![1.0] } else { Vec::new() };
            nodes.par_iter().map(|&xi| compact_ft(k, 0.0, 1.0, &singular, xi)).collect()
        }
        Kernel::Sampled(f) => {
            let g = f.grid();
            let cells: Vec<f64> = g.radii();
            nodes
                .par_iter()
                .map(|&xi| {
                    // Even kernel: 2∫ Φ(t) cos(2πtξ) over each interpolation cell.
                    let mut acc = 0.0;
                    for w in cells.windows(2) {
                        acc += compact_ft(k, w[0], w[1], &[], xi).re;
                    }
                    Complex64::new(2.0 * acc, 0.0)
                })
                .collect()
        }
    };
    ComplexGridFunction::new(*grid, values)
}
