//! `H h_{Φ,β} f = h_{HΦ,β} f`, checked numerically at two kernel resolutions.
//!
//! The left side applies a principal-value quadrature to `h_{Φ,β} f`. The right side
//! uses `HΦ` from the FFT multiplier on the sampled kernel, tabulated on `|t| ≤ T`
//! with `c/t` tails, and pushed through the operator.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{hilbert_transform, UniformGrid};
use crate::error::{domain, Result};
use crate::function::RealFunction;
use crate::grid::Interval;
use crate::kernels::{Kernel, TabulatedKernel};
use crate::operator::{apply_hausdorff, HausdorffImage};
use crate::quad::{integrate_with, QuadConfig};
use crate::report::{Check, VerificationReport};

const PROVENANCE: &str = "hilbert-commutes-with-hausdorff";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommuteConfig {
    /// Half-width of the FFT grid carrying Φ; large so the antiperiodic images stay far.
    pub kernel_half_width: f64,
    /// Kernel sampling step at the coarse level; the fine level halves it.
    pub kernel_step: f64,
    /// `HΦ` is tabulated on `|t| ≤ table_half_width` and continued by `c/t`.
    pub table_half_width: f64,
    /// Comparison nodes are cell midpoints of `[-eval_half_width, eval_half_width]`.
    pub eval_half_width: f64,
    pub eval_points: usize,
    pub tol: f64,
    /// Pass threshold on the fine-level relative L² discrepancy.
    pub max_discrepancy: f64,
    /// Minimum coarse/fine discrepancy ratio.
    pub min_gain: f64,
}

impl Default for CommuteConfig {
    fn default() -> Self {
        Self {
            kernel_half_width: 65536.0,
            kernel_step: 0.125,
            table_half_width: 1024.0,
            eval_half_width: 8.0,
            eval_points: 64,
            tol: 1e-8,
            max_discrepancy: 1e-3,
            min_gain: 2.0,
        }
    }
}

fn admissible(k: &Kernel) -> bool {
    matches!(k, Kernel::Zero | Kernel::AdjointHardy | Kernel::GaussianHat { .. } | Kernel::CesaroGamma { .. } | Kernel::Sampled(_))
}

/// `HΦ` sampled from the FFT multiplier, as a tabulated kernel.
pub fn hilbert_of_kernel(k: &Kernel, half_width: f64, step: f64, table_half_width: f64) -> Result<TabulatedKernel> {
    let grid = UniformGrid::with_step(half_width, step)?;
    let dx = grid.step();
    let phi = grid.sample(|t| k.sample_value(t, dx));
    let h = hilbert_transform(grid, &phi)?;
    let first = (0..grid.n).find(|&j| grid.node(j) >= -table_half_width).unwrap_or(0);
    let last = (0..grid.n).rev().find(|&j| grid.node(j) <= table_half_width).unwrap_or(grid.n - 1);
    TabulatedKernel::new(grid.node(first), dx, h[first..=last].to_vec())
}

/// `(1/π) ∫_0^∞ (g(x-t) - g(x+t))/t dt`.
fn pv_hilbert(g: &dyn RealFunction, x: f64, cfg: &QuadConfig) -> Result<f64> {
    let mut cuts: Vec<f64> = vec![x.abs()];
    for b in g.breakpoints() {
        cuts.push((x - b).abs());
    }
    let r = integrate_with(|t| (g.eval(x - t) - g.eval(x + t)) / t, Interval::positive(), &cuts, cfg)?;
    Ok(r.value / PI)
}

fn relative_l2(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let norm: f64 = b.iter().map(|y| y * y).sum();
    if norm == 0.0 {
        diff.sqrt()
    } else {
        (diff / norm).sqrt()
    }
}

/// Compares `H(h_{Φ,β} f)` with `h_{HΦ,β} f` at two kernel resolutions.
pub fn commutation_check(k: &Kernel, beta: f64, f: &dyn RealFunction, cfg: &CommuteConfig) -> Result<VerificationReport> {
    if !admissible(k) {
        return domain(format!("{} fails the Φ, Φ̂ ∈ L¹ gate for the commutation identity", k.name()));
    }
    if !(0.0..1.0).contains(&beta) {
        return domain(format!("β must lie in [0, 1), got {beta}"));
    }
    if cfg.eval_points < 2 || !(cfg.eval_half_width > 0.0) {
        return domain("commutation check needs at least two comparison points");
    }
    let xs: Vec<f64> = (0..cfg.eval_points)
        .map(|i| -cfg.eval_half_width + (i as f64 + 0.5) * 2.0 * cfg.eval_half_width / cfg.eval_points as f64)
        .collect();
    let qcfg = QuadConfig::with_tol(cfg.tol);
    let image = HausdorffImage::new(k, beta, f, cfg.tol * 0.1);
    let lhs: Vec<f64> = xs.par_iter().map(|&x| pv_hilbert(&image, x, &qcfg)).collect::<Result<_>>()?;
    let mut levels = Vec::new();
    for step in [cfg.kernel_step, 0.5 * cfg.kernel_step] {
        let hk = Kernel::Tabulated(hilbert_of_kernel(k, cfg.kernel_half_width, step, cfg.table_half_width)?);
        let rhs: Vec<f64> = xs.par_iter().map(|&x| apply_hausdorff(&hk, beta, f, x, cfg.tol)).collect::<Result<_>>()?;
        levels.push(relative_l2(&lhs, &rhs));
    }
    let (coarse, fine) = (levels[0], levels[1]);
    let mut rep = VerificationReport::new(format!("commutation: {}, beta={beta}", k.name()));
    rep.push(Check::bracket("discrepancy", fine, None, Some(cfg.max_discrepancy), 0.0, PROVENANCE));
    rep.push(Check::info("discrepancy_coarse", coarse, PROVENANCE));
    if coarse <= 1e-12 {
        // Already at round-off; there is nothing left for refinement to remove.
        rep.push(Check::flag("refinement_gain", true, PROVENANCE));
    } else {
        rep.push(Check::bracket("refinement_gain", coarse / fine, Some(cfg.min_gain), None, 0.0, PROVENANCE));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::TestFunction;

    #[test]
    fn gate_rejects_hardy_kernel() {
        let k = Kernel::fractional_hardy(0.5).unwrap();
        assert!(commutation_check(&k, 0.5, &TestFunction::gaussian(), &CommuteConfig::default()).is_err());
    }

    #[test]
    fn zero_input_has_zero_discrepancy() {
        let k = Kernel::gaussian_hat(1.0).unwrap();
        let rep = commutation_check(&k, 0.25, &TestFunction::Zero, &CommuteConfig::default()).unwrap();
        assert_eq!(rep.value("discrepancy"), Some(0.0));
        assert!(rep.pass());
    }
}
