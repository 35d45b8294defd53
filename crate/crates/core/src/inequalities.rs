//! Constant sandwiches for the weighted Lebesgue bounds, the two-weight Hardy
//! inequalities and Young's inequality on `(0, ∞)` with `dx/x`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, precondition, Error, Result};
use crate::exponents::ExponentSet;
use crate::function::{Sides, TestFunction};
use crate::grid::{GridFunction, LogGrid};
use crate::kernels::{verify_bounds, BoundRegion, Kernel, KernelBounds};
use crate::norms::{a_constant, b_constant, k_constant_split, lp_integral, KSplit};
use crate::operator::{mult_convolve, HausdorffImage};
use crate::quad::QuadConfig;
use crate::report::{Check, VerificationReport};
use crate::weights::{radial_moment, Weight};

/// Relative tolerance on empirical ratios against their bounds.
pub const SANDWICH_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HardyDirection {
    /// `|x|^{β-1} ∫_{|y|≤|x|} f`.
    Inner,
    /// `∫_{|y|≥|x|} |y|^{β-1} f`.
    Outer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub lower: f64,
    pub empirical: f64,
    pub upper: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Label of the family member attaining `empirical`.
    pub witness: String,
    pub witnesses: Vec<Witness>,
    /// The two-weight constant A or B.
    pub constant: f64,
    pub constant_maximizer: f64,
    pub k: Option<KSplit>,
    pub checks: VerificationReport,
}

/// The truncated powers that attain the lower constants.
///
/// Increasing: `v^{1-p'} 1{|x| ≤ a}`. Decreasing: `(|x|^{1-β} v)^{1-p'} 1{|x| ≥ a}`.
pub fn extremal_test_function(kind: Monotonicity, a: f64, v: &Weight, exps: &ExponentSet) -> Result<TestFunction> {
    if !(a > 0.0 && a.is_finite()) {
        return domain(format!("truncation radius must be positive, got {a}"));
    }
    let pp = exps.p_prime();
    if !(exps.p > 1.0) {
        return domain(format!("extremal functions need p > 1, got {}", exps.p));
    }
    let (f, norm_p) = match kind {
        Monotonicity::Increasing => (
            TestFunction::WeightedPower { x_exp: 0.0, weight: v.clone(), w_exp: 1.0 - pp, inner: 0.0, outer: a },
            radial_moment(v, 1.0 - pp, 0.0, 0.0, a),
        ),
        Monotonicity::Decreasing => (
            TestFunction::WeightedPower {
                x_exp: (1.0 - exps.beta) * (1.0 - pp),
                weight: v.clone(),
                w_exp: 1.0 - pp,
                inner: a,
                outer: f64::INFINITY,
            },
            radial_moment(v, 1.0 - pp, -(1.0 - exps.beta) * pp, a, f64::INFINITY),
        ),
    };
    if norm_p.divergent {
        return Err(Error::Divergent { what: format!("‖f_a‖ in L^p_v for the {kind:?} extremal function"), last: norm_p.value });
    }
    Ok(f)
}

/// Closed-form `‖f_a‖_{L^p_v}` for [`extremal_test_function`].
pub fn extremal_norm(kind: Monotonicity, a: f64, v: &Weight, exps: &ExponentSet) -> f64 {
    let pp = exps.p_prime();
    let m = match kind {
        Monotonicity::Increasing => radial_moment(v, 1.0 - pp, 0.0, 0.0, a),
        Monotonicity::Decreasing => radial_moment(v, 1.0 - pp, -(1.0 - exps.beta) * pp, a, f64::INFINITY),
    };
    m.value.powf(1.0 / exps.p)
}

/// Default truncation radii: `10^{k/2}`, `k = -4..=4`.
pub fn default_a_grid() -> Vec<f64> {
    (-4..=4).map(|k| 10f64.powf(k as f64 / 2.0)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalNorm {
    pub ratio: f64,
    pub witness: usize,
    /// Per-member ratio; `None` for members skipped as divergent or zero.
    pub ratios: Vec<Option<f64>>,
}

/// Ratio of `‖h f‖_{L^q_u}` to `‖f‖_{L^p_v}`, or `None` when either side is unusable.
pub fn operator_ratio(k: &Kernel, beta: f64, u: &Weight, v: &Weight, exps: &ExponentSet, f: &TestFunction) -> Option<f64> {
    let cfg = QuadConfig::with_tol(1e-9);
    let den = lp_integral(f, v, exps.p, &cfg).ok()?;
    if den.divergent || den.value <= 0.0 || !den.value.is_finite() {
        return None;
    }
    let image = HausdorffImage::new(k, beta, f, 1e-11);
    let num = lp_integral(&image, u, exps.q, &cfg).ok()?;
    if num.divergent || !num.value.is_finite() {
        return None;
    }
    Some(num.value.powf(1.0 / exps.q) / den.value.powf(1.0 / exps.p))
}

/// Largest `‖h f‖_{L^q_u} / ‖f‖_{L^p_v}` over the family.
pub fn empirical_operator_norm(
    k: &Kernel,
    beta: f64,
    u: &Weight,
    v: &Weight,
    exps: &ExponentSet,
    family: &[TestFunction],
) -> Result<EmpiricalNorm> {
    if family.is_empty() {
        return domain("test family is empty");
    }
    let ratios: Vec<Option<f64>> = family.par_iter().map(|f| operator_ratio(k, beta, u, v, exps, f)).collect();
    let mut best: Option<usize> = None;
    for (i, r) in ratios.iter().enumerate() {
        if let Some(r) = r {
            if best.map_or(true, |b| *r > ratios[b].unwrap()) {
                best = Some(i);
            }
        }
    }
    let Some(witness) = best else {
        return domain("no family member has finite, nonzero norms");
    };
    Ok(EmpiricalNorm { ratio: ratios[witness].unwrap(), witness, ratios })
}

/// Power of a closed-form weight, when it has one.
fn weight_power(w: &Weight) -> Option<f64> {
    match w {
        Weight::Power { a } => Some(*a),
        Weight::Constant { c } if *c > 0.0 => Some(0.0),
        _ => None,
    }
}

/// Smooth-tailed members `|x|^{-(1+a_v)/p - ε}` on `|x| ≥ 1`, for power-type `v`.
fn power_decay_members(v: &Weight, p: f64) -> Vec<(String, TestFunction)> {
    let Some(av) = weight_power(v) else { return Vec::new() };
    [0.1, 0.03, 0.01]
        .into_iter()
        .map(|eps| {
            let e = -(1.0 + av) / p - eps;
            (format!("power_decay(eps={eps})"), TestFunction::PowerBand { exponent: e, inner: 1.0, outer: f64::INFINITY, sides: Sides::Both })
        })
        .collect()
}

fn label_of(f: &TestFunction) -> String {
    serde_json::to_string(f).unwrap_or_else(|_| "test_function".into())
}

/// Family with the extremal functions over `a_grid` prepended.
fn augmented_family(
    kind: Monotonicity,
    v: &Weight,
    exps: &ExponentSet,
    family: &[TestFunction],
    a_grid: &[f64],
) -> Result<Vec<(String, TestFunction)>> {
    let mut out = Vec::new();
    for &a in a_grid {
        let f = extremal_test_function(kind, a, v, exps)?;
        let tag = match kind {
            Monotonicity::Increasing => "extremal_increasing",
            Monotonicity::Decreasing => "extremal_decreasing",
        };
        out.push((format!("{tag}(a={a})"), f));
    }
    out.extend(power_decay_members(v, exps.p));
    out.extend(family.iter().map(|f| (label_of(f), f.clone())));
    Ok(out)
}

fn sandwich(
    kernel: &Kernel,
    beta: f64,
    u: &Weight,
    v: &Weight,
    exps: &ExponentSet,
    family: Vec<(String, TestFunction)>,
    lower: f64,
    upper: f64,
    constant: (f64, f64),
    k: Option<KSplit>,
    mut checks: VerificationReport,
    provenance: &str,
) -> Result<SandwichReport> {
    let members: Vec<TestFunction> = family.iter().map(|(_, f)| f.clone()).collect();
    let emp = empirical_operator_norm(kernel, beta, u, v, exps, &members)?;
    let witnesses: Vec<Witness> = family
        .iter()
        .zip(&emp.ratios)
        .filter_map(|((label, _), r)| r.map(|ratio| Witness { label: label.clone(), ratio }))
        .collect();
    let tol = SANDWICH_TOL;
    checks.push(Check::bracket("empirical_ratio", emp.ratio, Some(lower), Some(upper), tol, provenance));
    checks.push(Check::flag("lower_le_upper", lower <= upper, provenance));
    let pass = checks.pass();
    Ok(SandwichReport {
        lower,
        empirical: emp.ratio,
        upper,
        tolerance: tol,
        pass,
        witness: family[emp.witness].0.clone(),
        witnesses,
        constant: constant.0,
        constant_maximizer: constant.1,
        k,
        checks,
    })
}

fn exponent_gates(exps: &ExponentSet) -> Result<()> {
    exps.validate()?;
    if !(exps.p > 1.0 && exps.q > 1.0) {
        return precondition(format!("1 < p, q < ∞ fails (p={}, q={})", exps.p, exps.q));
    }
    if !exps.is_lebesgue_diagonal() {
        return precondition(format!("1/p - 1/q = β fails by {:e}", exps.diagonal_defect()));
    }
    Ok(())
}

fn check_bounds_hold(k: &Kernel, bounds: &KernelBounds, probe: &LogGrid, what: &str) -> Result<VerificationReport> {
    let rep = verify_bounds(k, bounds, probe);
    if !rep.pass() {
        return precondition(format!("kernel does not satisfy the {what} bound with C1={}, C2={}", bounds.c1, bounds.c2));
    }
    Ok(rep)
}

/// Lower `C1·A`, empirical best ratio and the explicit upper constant, increasing weights.
pub fn verify_sandwich_increasing(
    k: &Kernel,
    bounds: &KernelBounds,
    beta: f64,
    u: &Weight,
    v: &Weight,
    exps: &ExponentSet,
    family: &[TestFunction],
) -> Result<SandwichReport> {
    verify_sandwich_increasing_on(k, bounds, beta, u, v, exps, family, &default_a_grid())
}

#[allow(clippy::too_many_arguments)]
pub fn verify_sandwich_increasing_on(
    k: &Kernel,
    bounds: &KernelBounds,
    beta: f64,
    u: &Weight,
    v: &Weight,
    exps: &ExponentSet,
    family: &[TestFunction],
    a_grid: &[f64],
) -> Result<SandwichReport> {
    const PROV: &str = "sandwich-increasing-weights";
    exponent_gates(exps)?;
    if (exps.beta - beta).abs() > 1e-15 {
        return precondition(format!("β = {beta} disagrees with the exponent set (β = {})", exps.beta));
    }
    let (p, q) = (exps.p, exps.q);
    if !(q * (1.0 - beta) > 1.0) {
        return precondition(format!("q > 1/(1-β) fails: q(1-β) = {}", q * (1.0 - beta)));
    }
    if !(u.is_increasing() && v.is_increasing()) {
        return precondition("u and v must be even and increasing on (0, ∞)");
    }
    if !k.is_nonnegative() {
        return precondition("kernel must be nonnegative");
    }
    match bounds.region {
        BoundRegion::OutsideUnit { beta: b } if (b - beta).abs() < 1e-15 => {}
        _ => return precondition("kernel bounds must be of the |t| ≥ 1 form with the same β"),
    }
    let probe = LogGrid::new(1.0 + 1e-9, 1e6, 400)?;
    let mut checks = check_bounds_hold(k, bounds, &probe, "|t| ≥ 1")?;
    let ks = k_constant_split(k, beta, q)?;
    if ks.inner.divergent {
        return precondition("the kernel integral over |t| ≤ 1 diverges");
    }
    let a = a_constant(u, v, exps)?;
    if a.value.divergent {
        return precondition("the constant A is infinite");
    }
    let (qq, pp) = (exps.q_prime(), exps.p_prime());
    let kk = ks.value.value;
    let av = a.value.value;
    let upper = 2f64.powf(1.0 / qq)
        * av
        * (kk * 2f64.powf(beta - 1.0) * (q * (1.0 - beta) - 1.0).powf(1.0 / q) * (1.0 + 2f64.powf(1.0 / qq))
            + bounds.c2 * pp.powf(1.0 / pp) * p.powf(1.0 / q));
    let lower = bounds.c1 * av;
    checks.push(Check::info("A", av, PROV));
    checks.push(Check::info("K", kk, PROV));
    checks.push(Check::info("k_tail_dominates", if ks.tail_dominates { 1.0 } else { 0.0 }, PROV));
    let fam = augmented_family(Monotonicity::Increasing, v, exps, family, a_grid)?;
    sandwich(k, beta, u, v, exps, fam, lower, upper, (av, a.maximizer), Some(ks), checks, PROV)
}

/// Mirror of [`verify_sandwich_increasing`] for decreasing weights, with the constant B.
pub fn verify_sandwich_decreasing(
    k: &Kernel,
    bounds: &KernelBounds,
    beta: f64,
    u: &Weight,
    v: &Weight,
    exps: &ExponentSet,
    family: &[TestFunction],
) -> Result<SandwichReport> {
    verify_sandwich_decreasing_on(k, bounds, beta, u, v, exps, family, &default_a_grid())
}

#[allow(clippy::too_many_arguments)]
pub fn verify_sandwich_decreasing_on(
    k: &Kernel,
    bounds: &KernelBounds,
    beta: f64,
    u: &Weight,
    v: &Weight,
    exps: &ExponentSet,
    family: &[TestFunction],
    a_grid: &[f64],
) -> Result<SandwichReport> {
    const PROV: &str = "sandwich-decreasing-weights";
    exponent_gates(exps)?;
    if (exps.beta - beta).abs() > 1e-15 {
        return precondition(format!("β = {beta} disagrees with the exponent set (β = {})", exps.beta));
    }
    let (p, q) = (exps.p, exps.q);
    let (qq, pp) = (exps.q_prime(), exps.p_prime());
    if !(pp * (1.0 - beta) > 1.0) {
        return precondition(format!("p' > 1/(1-β) fails: p'(1-β) = {}", pp * (1.0 - beta)));
    }
    if !(u.is_decreasing() && v.is_decreasing()) {
        return precondition("u and v must be even and decreasing on (0, ∞)");
    }
    if !k.is_nonnegative() {
        return precondition("kernel must be nonnegative");
    }
    if bounds.region != BoundRegion::InsideUnit {
        return precondition("kernel bounds must be of the |t| ≤ 1 form");
    }
    let probe = LogGrid::new(1e-6, 1.0, 400)?;
    let mut checks = check_bounds_hold(k, bounds, &probe, "|t| ≤ 1")?;
    let ks = k_constant_split(k, beta, q)?;
    if ks.tail.divergent {
        return precondition("the kernel integral over |t| ≥ 1 diverges");
    }
    let b = b_constant(u, v, exps)?;
    if b.value.divergent {
        return precondition("the constant B is infinite");
    }
    let kk = ks.value.value;
    let bv = b.value.value;
    let upper = 2f64.powf(1.0 / qq)
        * bv
        * (kk * 2f64.powf(beta - 1.0) * (pp * (1.0 - beta) - 1.0).powf(1.0 / pp) * (1.0 + 2f64.powf(1.0 / qq))
            + bounds.c2 * pp.powf(1.0 / pp) * p.powf(1.0 / q));
    let lower = bounds.c1 * bv;
    checks.push(Check::info("B", bv, PROV));
    checks.push(Check::info("K", kk, PROV));
    checks.push(Check::info("k_tail_dominates", if ks.tail_dominates { 1.0 } else { 0.0 }, PROV));
    let fam = augmented_family(Monotonicity::Decreasing, v, exps, family, a_grid)?;
    sandwich(k, beta, u, v, exps, fam, lower, upper, (bv, b.maximizer), Some(ks), checks, PROV)
}

/// Two-weight Hardy inequality: best ratio against `[A, A (p')^{1/p'} p^{1/q}]` (inner) or the B analogue (outer).
pub fn hardy_inequality_check(
    u: &Weight,
    v: &Weight,
    exps: &ExponentSet,
    direction: HardyDirection,
    family: &[TestFunction],
) -> Result<SandwichReport> {
    hardy_inequality_check_on(u, v, exps, direction, family, &default_a_grid())
}

pub fn hardy_inequality_check_on(
    u: &Weight,
    v: &Weight,
    exps: &ExponentSet,
    direction: HardyDirection,
    family: &[TestFunction],
    a_grid: &[f64],
) -> Result<SandwichReport> {
    exps.validate()?;
    let (p, q, beta) = (exps.p, exps.q, exps.beta);
    if !(1.0 < p && p <= q) {
        return precondition(format!("1 < p ≤ q < ∞ fails (p={p}, q={q})"));
    }
    let pp = exps.p_prime();
    let factor = pp.powf(1.0 / pp) * p.powf(1.0 / q);
    let (kernel, constant, kind, prov) = match direction {
        HardyDirection::Inner => (Kernel::fractional_hardy(beta)?, a_constant(u, v, exps)?, Monotonicity::Increasing, "hardy-inner-two-weight"),
        HardyDirection::Outer => (Kernel::AdjointHardy, b_constant(u, v, exps)?, Monotonicity::Decreasing, "hardy-outer-two-weight"),
    };
    if constant.value.divergent {
        return precondition("the two-weight constant is infinite");
    }
    let c = constant.value.value;
    let mut fam = Vec::new();
    for &a in a_grid {
        if let Ok(f) = extremal_test_function(kind, a, v, exps) {
            fam.push((format!("extremal(a={a})"), f));
        }
    }
    fam.extend(power_decay_members(v, p));
    fam.extend(family.iter().map(|f| (label_of(f), f.clone())));
    if fam.iter().all(|(_, f)| f.is_zero()) {
        return domain("no admissible witness: every family member vanishes");
    }
    let mut checks = VerificationReport::new(format!("two-weight Hardy inequality ({direction:?})"));
    checks.push(Check::info("constant", c, prov));
    sandwich(&kernel, beta, u, v, exps, fam, c, c * factor, (c, constant.maximizer), None, checks, prov)
}

/// `(h Σ |F_i|^p)^{1/p}`: the discrete Haar `L^p` norm of the positive half.
pub fn haar_norm(f: &GridFunction, p: f64) -> f64 {
    let h = f.grid().log_step();
    // Factor out the peak so large p cannot overflow the sum.
    let m = f.positive_values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    m * (h * f.positive_values().iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>()).powf(1.0 / p)
}

/// `‖f ∗ g‖_q ≤ ‖g‖_s ‖f‖_p` on `(0, ∞)` with Haar measure `dx/x`.
pub fn young_mult_check(f: &GridFunction, g: &GridFunction, p: f64, q: f64, s: f64) -> Result<VerificationReport> {
    const PROV: &str = "young-multiplicative-group";
    if !(p >= 1.0 && q >= 1.0 && s >= 1.0) {
        return domain(format!("Young exponents must be ≥ 1, got p={p}, q={q}, s={s}"));
    }
    let defect = 1.0 / q - (1.0 / p + 1.0 / s - 1.0);
    if defect.abs() > 1e-12 {
        return domain(format!("1/q = 1/p + 1/s - 1 fails by {defect:e}"));
    }
    // g̃(x) = g(1/x) on the inverted grid: its samples are the reversed positive half.
    let gg = g.grid();
    let inv_grid = LogGrid::new(1.0 / gg.r_max(), 1.0 / gg.r_min(), gg.n_per_side())?;
    let n = gg.n_per_side();
    let mut inv_vals = vec![0.0; 2 * n];
    for (k, v) in g.positive_values().iter().rev().enumerate() {
        inv_vals[n + k] = *v;
    }
    let g_inv = GridFunction::new(inv_grid, inv_vals)?;
    let gs = haar_norm(g, s);
    let gs_inv = haar_norm(&g_inv, s);
    let conv = mult_convolve(f, g)?;
    let lhs = haar_norm(&conv, q);
    let rhs = gs * haar_norm(f, p);
    let mut rep = VerificationReport::new("Young inequality on (0, ∞) with dx/x");
    rep.push(Check::near("inversion_symmetry", gs_inv, gs, 1e-12 * gs.max(1.0), PROV));
    rep.push(Check::bracket("young_inequality", lhs, None, Some(rhs + 1e-6), 0.0, PROV));
    rep.push(Check::info("rhs", rhs, PROV));
    Ok(rep)
}
