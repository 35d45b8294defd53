use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::spec::{GridSpec, KernelSpec, ProfileSpec, WeightSpec};
use super::report::ReportBundle;
use super::ExperimentConfig;
use crate::error::{Error, Result};
use crate::exponents::ExponentSet;
use crate::fourier::{
    commutation_check, decay_series, hypothesis_integrals_g, hypothesis_integrals_phi, kernel_decay_probe, standard_bump,
    CommuteConfig, DecayProbe, UniformGrid,
};
use crate::function::{Sides, TestFunction};
use crate::grid::{GridFunction, Interval};
use crate::hardy_space::{
    default_grid, dilation_invariance_check, equivalence_band, exponent_relation_probe, scaling_series, smooth_family,
    MaximalConfig, ScalingInput,
};
use crate::inequalities::{
    default_a_grid, hardy_inequality_check_on, verify_sandwich_decreasing_on, verify_sandwich_increasing_on, young_mult_check,
    HardyDirection, SandwichReport,
};
use crate::kernels::KernelBounds;
use crate::norms::{a_constant, a_integrand, b_constant, b_integrand, k_constant, weak_lp_norm, weighted_lp_norm};
use crate::operator::apply_on_grid;
use crate::report::Check;
use crate::weights::{ap_characteristic, default_balls};

/// `(name, summary)` for `fhaus list`.
pub const EXPERIMENTS: &[(&str, &str)] = &[
    ("apply", "evaluate h_{Φ,β} f on a log grid"),
    ("norms", "weighted strong and weak Lebesgue norms of a test function"),
    ("constants", "two-weight constants A, B and the kernel constant K"),
    ("verify-thm-increasing", "best-constant sandwich for increasing weights"),
    ("verify-thm-decreasing", "best-constant sandwich for decreasing weights"),
    ("hardy-ineq", "two-weight Hardy inequalities, inner and outer"),
    ("young", "Young's inequality on (0, ∞) with dx/x over seeded random pairs"),
    ("commute", "Hilbert transform against the Hausdorff operator"),
    ("hypotheses", "integrability conditions on Φ̂ or g"),
    ("decay", "decay of the smoothed dilated kernel"),
    ("scaling", "scaling-fit residual of the exponent relation"),
    ("dilation", "Hardy quasi-norm dilation invariance and quasi-norm equivalence"),
    ("ap", "Muckenhoupt A_p characteristic"),
];

fn cfg_err(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {msg}"))
}

fn default_tol_apply() -> f64 {
    1e-10
}

fn default_log_grid() -> GridSpec {
    GridSpec { r_min: 1e-3, r_max: 1e3, n_per_side: 121 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApplyParams {
    pub kernel: KernelSpec,
    pub beta: f64,
    pub f: TestFunction,
    #[serde(default = "default_log_grid")]
    pub grid: GridSpec,
    #[serde(default = "default_tol_apply")]
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormsParams {
    pub f: TestFunction,
    #[serde(default = "WeightSpec::one")]
    pub weight: WeightSpec,
    pub p: f64,
    /// Grid for the weak norm, which is defined on sampled functions.
    #[serde(default)]
    pub weak_grid: Option<GridSpec>,
    #[serde(default)]
    pub expect: Option<f64>,
    #[serde(default = "default_rel_tol")]
    pub tol: f64,
}

fn default_rel_tol() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstantExpectations {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsParams {
    #[serde(default)]
    pub kernel: Option<KernelSpec>,
    #[serde(default = "WeightSpec::one")]
    pub u: WeightSpec,
    #[serde(default = "WeightSpec::one")]
    pub v: WeightSpec,
    pub exponents: ExponentSet,
    #[serde(default)]
    pub expect: ConstantExpectations,
    /// Relative tolerance for `expect`.
    #[serde(default = "default_rel_tol")]
    pub tol: f64,
    /// Bound on the relative spread of the A and B integrands over 50 log-spaced α.
    #[serde(default = "default_rel_tol")]
    pub alpha_spread_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichParams {
    pub kernel: KernelSpec,
    pub bounds: KernelBounds,
    #[serde(default = "WeightSpec::one")]
    pub u: WeightSpec,
    #[serde(default = "WeightSpec::one")]
    pub v: WeightSpec,
    pub exponents: ExponentSet,
    #[serde(default)]
    pub family: Vec<TestFunction>,
    #[serde(default)]
    pub a_grid: Option<Vec<f64>>,
}

fn both_directions() -> Vec<HardyDirection> {
    vec![HardyDirection::Inner, HardyDirection::Outer]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyParams {
    #[serde(default = "WeightSpec::one")]
    pub u: WeightSpec,
    #[serde(default = "WeightSpec::one")]
    pub v: WeightSpec,
    pub exponents: ExponentSet,
    #[serde(default = "both_directions")]
    pub directions: Vec<HardyDirection>,
    #[serde(default)]
    pub family: Vec<TestFunction>,
    #[serde(default)]
    pub a_grid: Option<Vec<f64>>,
}

fn default_pairs() -> usize {
    100
}

fn young_grid() -> GridSpec {
    GridSpec { r_min: 1e-4, r_max: 1e4, n_per_side: 801 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YoungParams {
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    #[serde(default = "young_grid")]
    pub grid: GridSpec,
}

fn default_betas() -> Vec<f64> {
    vec![0.0, 0.25, 0.5]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommuteParams {
    pub kernel: KernelSpec,
    #[serde(default = "default_betas")]
    pub betas: Vec<f64>,
    #[serde(default = "TestFunction::gaussian")]
    pub f: TestFunction,
    #[serde(default)]
    pub config: CommuteConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisForm {
    /// Conditions on `Φ̂` directly.
    Phi,
    /// Conditions on `g` with `Φ̂(ξ) = g(ξ²)`.
    G,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedEntry {
    pub family: String,
    pub indices: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesesParams {
    pub profile: ProfileSpec,
    pub form: HypothesisForm,
    pub m: Vec<usize>,
    /// Entries expected to diverge; every other entry is expected finite.
    #[serde(default)]
    pub expect_divergent: Vec<ExpectedEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayParams {
    pub profile: ProfileSpec,
    pub beta: f64,
    #[serde(default)]
    pub probe: Option<DecayProbe>,
}

fn default_scales() -> Vec<f64> {
    (-4..=4).map(|i| 2f64.powf(0.5 * i as f64)).collect()
}

fn default_fit_tol() -> f64 {
    1e-3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingParams {
    pub kernel: KernelSpec,
    pub input: ScalingInput,
    #[serde(default = "TestFunction::gaussian")]
    pub f: TestFunction,
    #[serde(default = "default_scales")]
    pub scales: Vec<f64>,
    /// Shifts of the target weight power, each probed alongside the base run.
    #[serde(default)]
    pub gamma_shifts: Vec<f64>,
    #[serde(default = "default_fit_tol")]
    pub tol: f64,
}

fn hardy_member() -> TestFunction {
    TestFunction::modulated_gaussian(0.0, 2.0, 2.0, 0.0)
}

fn default_dilations() -> Vec<f64> {
    vec![0.25, 4.0]
}

fn default_hardy_ps() -> Vec<f64> {
    vec![0.5, 1.0]
}

fn default_hardy_as() -> Vec<f64> {
    vec![0.0, 1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceParams {
    #[serde(default = "default_family_size")]
    pub count: usize,
    #[serde(default = "one")]
    pub p: f64,
    #[serde(default)]
    pub a: f64,
    #[serde(default = "default_spread")]
    pub max_spread: f64,
}

fn default_family_size() -> usize {
    20
}

fn one() -> f64 {
    1.0
}

fn default_spread() -> f64 {
    20.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationParams {
    #[serde(default = "hardy_member")]
    pub f: TestFunction,
    #[serde(default = "default_dilations")]
    pub s: Vec<f64>,
    #[serde(default = "default_hardy_ps")]
    pub p: Vec<f64>,
    #[serde(default = "default_hardy_as")]
    pub a: Vec<f64>,
    #[serde(default = "default_grid")]
    pub grid: UniformGrid,
    #[serde(default)]
    pub maximal: MaximalConfig,
    #[serde(default = "default_fit_tol")]
    pub tol: f64,
    /// Random smooth family drawn from the config seed.
    #[serde(default)]
    pub equivalence: Option<EquivalenceParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ApExpect {
    Finite,
    Divergent,
    Value { value: f64, tol: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApCase {
    pub p: f64,
    pub expect: ApExpect,
    /// Compare against the same balls dilated by this factor, within `dilation_tol`.
    #[serde(default)]
    pub dilation: Option<f64>,
    #[serde(default = "default_dilation_tol")]
    pub dilation_tol: f64,
}

fn default_dilation_tol() -> f64 {
    1e-4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApParams {
    pub weight: WeightSpec,
    pub cases: Vec<ApCase>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum Experiment {
    Apply(ApplyParams),
    Norms(NormsParams),
    Constants(ConstantsParams),
    VerifyThmIncreasing(SandwichParams),
    VerifyThmDecreasing(SandwichParams),
    HardyIneq(HardyParams),
    Young(YoungParams),
    Commute(CommuteParams),
    Hypotheses(HypothesesParams),
    Decay(DecayParams),
    Scaling(ScalingParams),
    Dilation(DilationParams),
    Ap(ApParams),
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Apply(_) => "apply",
            Experiment::Norms(_) => "norms",
            Experiment::Constants(_) => "constants",
            Experiment::VerifyThmIncreasing(_) => "verify-thm-increasing",
            Experiment::VerifyThmDecreasing(_) => "verify-thm-decreasing",
            Experiment::HardyIneq(_) => "hardy-ineq",
            Experiment::Young(_) => "young",
            Experiment::Commute(_) => "commute",
            Experiment::Hypotheses(_) => "hypotheses",
            Experiment::Decay(_) => "decay",
            Experiment::Scaling(_) => "scaling",
            Experiment::Dilation(_) => "dilation",
            Experiment::Ap(_) => "ap",
        }
    }

    pub fn validate(&self, base: &Path) -> Result<()> {
        let exps = |e: &ExponentSet| e.validate().map_err(|err| cfg_err("exponents", err));
        match self {
            Experiment::Apply(p) => {
                p.kernel.build(base, "kernel")?;
                p.grid.build("grid")?;
                if !(0.0..1.0).contains(&p.beta) {
                    return Err(cfg_err("beta", format!("must lie in [0, 1), got {}", p.beta)));
                }
            }
            Experiment::Norms(p) => {
                p.weight.build(base, "weight")?;
                if let Some(g) = &p.weak_grid {
                    g.build("weak_grid")?;
                }
                if !(p.p > 0.0) {
                    return Err(cfg_err("p", "must be positive"));
                }
            }
            Experiment::Constants(p) => {
                if let Some(k) = &p.kernel {
                    k.build(base, "kernel")?;
                }
                p.u.build(base, "u")?;
                p.v.build(base, "v")?;
                exps(&p.exponents)?;
            }
            Experiment::VerifyThmIncreasing(p) | Experiment::VerifyThmDecreasing(p) => {
                p.kernel.build(base, "kernel")?;
                p.u.build(base, "u")?;
                p.v.build(base, "v")?;
                exps(&p.exponents)?;
                KernelBounds::new(p.bounds.c1, p.bounds.c2, p.bounds.region).map_err(|e| cfg_err("bounds", e))?;
            }
            Experiment::HardyIneq(p) => {
                p.u.build(base, "u")?;
                p.v.build(base, "v")?;
                exps(&p.exponents)?;
                if p.directions.is_empty() {
                    return Err(cfg_err("directions", "empty"));
                }
            }
            Experiment::Young(p) => {
                p.grid.build("grid")?;
                if p.pairs == 0 {
                    return Err(cfg_err("pairs", "must be positive"));
                }
            }
            Experiment::Commute(p) => {
                p.kernel.build(base, "kernel")?;
                if p.betas.iter().any(|b| !(0.0..1.0).contains(b)) {
                    return Err(cfg_err("betas", "each β must lie in [0, 1)"));
                }
            }
            Experiment::Hypotheses(p) => {
                p.profile.build(base, "profile")?;
                if p.m.is_empty() {
                    return Err(cfg_err("m", "empty"));
                }
            }
            Experiment::Decay(p) => {
                p.profile.build(base, "profile")?;
                if !(0.0..1.0).contains(&p.beta) {
                    return Err(cfg_err("beta", format!("must lie in [0, 1), got {}", p.beta)));
                }
            }
            Experiment::Scaling(p) => {
                p.kernel.build(base, "kernel")?;
                if p.scales.len() < 3 {
                    return Err(cfg_err("scales", "need at least three"));
                }
            }
            Experiment::Dilation(p) => {
                UniformGrid::new(p.grid.half_width, p.grid.n).map_err(|e| cfg_err("grid", e))?;
                p.maximal.validate().map_err(|e| cfg_err("maximal", e))?;
                if p.p.iter().any(|q| !(*q > 0.0 && *q <= 1.0)) {
                    return Err(cfg_err("p", "each p must lie in (0, 1]"));
                }
                if p.a.iter().any(|a| !(*a > -1.0)) {
                    return Err(cfg_err("a", "each a must exceed -1"));
                }
            }
            Experiment::Ap(p) => {
                p.weight.build(base, "weight")?;
                if p.cases.iter().any(|c| !(c.p > 1.0)) {
                    return Err(cfg_err("cases", "each p must exceed 1"));
                }
            }
        }
        Ok(())
    }
}

/// Validates and runs one experiment; files are written by the caller.
pub fn run(cfg: &ExperimentConfig) -> Result<ReportBundle> {
    cfg.validate()?;
    let base = cfg.base_dir.as_path();
    let mut out = ReportBundle::new(cfg.experiment.name(), cfg.seed);
    match &cfg.experiment {
        Experiment::Apply(p) => apply(p, base, &mut out)?,
        Experiment::Norms(p) => norms(p, base, &mut out)?,
        Experiment::Constants(p) => constants(p, base, &mut out)?,
        Experiment::VerifyThmIncreasing(p) => sandwich(p, base, true, &mut out)?,
        Experiment::VerifyThmDecreasing(p) => sandwich(p, base, false, &mut out)?,
        Experiment::HardyIneq(p) => hardy(p, base, &mut out)?,
        Experiment::Young(p) => young(p, cfg.seed, &mut out)?,
        Experiment::Commute(p) => commute(p, base, &mut out)?,
        Experiment::Hypotheses(p) => hypotheses(p, base, &mut out)?,
        Experiment::Decay(p) => decay(p, base, &mut out)?,
        Experiment::Scaling(p) => scaling(p, base, &mut out)?,
        Experiment::Dilation(p) => dilation(p, cfg.seed, &mut out)?,
        Experiment::Ap(p) => ap(p, base, &mut out)?,
    }
    Ok(out)
}

fn apply(p: &ApplyParams, base: &Path, out: &mut ReportBundle) -> Result<()> {
    const PROV: &str = "hausdorff-operator-evaluation";
    let k = p.kernel.build(base, "kernel")?;
    let grid = p.grid.build("grid")?;
    let img = apply_on_grid(&k, p.beta, &p.f, &grid, p.tol)?;
    let case = format!("apply: {}, beta={}", k.name(), p.beta);
    out.quantity(&case, "max_abs", img.function.max_abs(), PROV);
    out.quantity(&case, "divergent_nodes", img.divergent_nodes.len() as f64, PROV);
    out.verdict(&case, Check::flag("finite_everywhere", img.divergent_nodes.is_empty(), PROV));
    out.add_series("apply", grid.nodes().into_iter().zip(img.function.values().iter().copied()).collect());
    Ok(())
}

fn norms(p: &NormsParams, base: &Path, out: &mut ReportBundle) -> Result<()> {
    const PROV: &str = "weighted-lebesgue-norms";
    let w = p.weight.build(base, "weight")?;
    let strong = weighted_lp_norm(&p.f, &w, p.p)?;
    let case = format!("norms: p={}", p.p);
    out.quantity(&case, "lp_norm", strong.value, PROV);
    out.quantity(&case, "lp_divergent", if strong.divergent { 1.0 } else { 0.0 }, PROV);
    if let Some(target) = p.expect {
        out.verdict(&case, Check::near("lp_norm_expected", strong.value, target, p.tol * target.abs().max(1e-300), PROV));
    }
    if let Some(g) = &p.weak_grid {
        let gf = p.f.sample(g.build("weak_grid")?)?;
        let weak = weak_lp_norm(&gf, &w, p.p)?;
        out.quantity(&case, "weak_norm", weak.value, PROV);
        if !strong.divergent {
            // Chebyshev, with slack for sampling the level sets on the grid.
            out.verdict(&case, Check::bracket("weak_le_strong", weak.value, None, Some(strong.value), 1e-3, PROV));
        }
    }
    Ok(())
}

/// Relative standard deviation of an integrand over 50 log-spaced scales in `[1e-3, 1e3]`.
fn alpha_spread(g: impl Fn(f64) -> f64) -> f64 {
    let vals: Vec<f64> = (0..50).map(|i| g(1e-3 * 1e6f64.powf(i as f64 / 49.0))).collect();
    let mean = vals.iter().sum::<f64>() / 50.0;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 49.0;
    if mean == 0.0 {
        0.0
    } else {
        var.sqrt() / mean.abs()
    }
}

fn constants(p: &ConstantsParams, base: &Path, out: &mut ReportBundle) -> Result<()> {
    const PROV: &str = "two-weight-scale-constants";
    let u = p.u.build(base, "u")?;
    let v = p.v.build(base, "v")?;
    let e = &p.exponents;
    let case = format!("constants: p={}, q={}, beta={}", e.p, e.q, e.beta);
    let rel = |c: &str, value: f64, target: Option<f64>, out: &mut ReportBundle| {
        if let Some(t) = target {
            out.verdict(&case, Check::near(&format!("{c}_expected"), value, t, p.tol * t.abs(), PROV));
        }
    };
    if e.p > 1.0 && e.q > 1.0 {
        let a = a_constant(&u, &v, e)?;
        out.quantity(&case, "A", if a.value.divergent { f64::INFINITY } else { a.value.value }, PROV);
        out.quantity(&case, "A_maximizer", a.maximizer, PROV);
        rel("A", a.value.value, p.expect.a, out);
        let b = b_constant(&u, &v, e)?;
        out.quantity(&case, "B", if b.value.divergent { f64::INFINITY } else { b.value.value }, PROV);
        out.quantity(&case, "B_maximizer", b.maximizer, PROV);
        rel("B", b.value.value, p.expect.b, out);
        // Scale invariance: with power weights on the Hardy line the integrands do not depend on α.
        if e.is_hardy_scaling() && !a.value.divergent {
            let s = alpha_spread(|al| a_integrand(&u, &v, e, al).value);
            out.verdict(&case, Check::bracket("A_alpha_rel_std", s, None, Some(p.alpha_spread_tol), 0.0, PROV));
        }
        if e.is_hardy_scaling() && !b.value.divergent {
            let s = alpha_spread(|al| b_integrand(&u, &v, e, al).value);
            out.verdict(&case, Check::bracket("B_alpha_rel_std", s, None, Some(p.alpha_spread_tol), 0.0, PROV));
        }
    }
    if let Some(ks) = &p.kernel {
        let k = ks.build(base, "kernel")?;
        let kv = k_constant(&k, e.beta, e.q)?;
        out.quantity(&case, "K", if kv.divergent { f64::INFINITY } else { kv.value }, "kernel-power-integral");
        rel("K", kv.value, p.expect.k, out);
    }
    Ok(())
}

fn push_sandwich(out: &mut ReportBundle, rep: &SandwichReport, series: &str) {
    out.push_report(&rep.checks);
    let case = rep.checks.name.clone();
    let prov = rep.checks.get("empirical_ratio").map(|c| c.provenance.clone()).unwrap_or_default();
    out.quantity(&case, "lower", rep.lower, &prov);
    out.quantity(&case, "upper", rep.upper, &prov);
    out.quantity(&case, "empirical", rep.empirical, &prov);
    out.add_series(series, rep.witnesses.iter().enumerate().map(|(i, w)| (i as f64, w.ratio)).collect());
}

fn sandwich(p: &SandwichParams, base: &Path, increasing: bool, out: &mut ReportBundle) -> Result<()> {
    let k = p.kernel.build(base, "kernel")?;
    let u = p.u.build(base, "u")?;
    let v = p.v.build(base, "v")?;
    let a_grid = p.a_grid.clone().unwrap_or_else(default_a_grid);
    let e = &p.exponents;
    let mut rep = if increasing {
        verify_sandwich_increasing_on(&k, &p.bounds, e.beta, &u, &v, e, &p.family, &a_grid)?
    } else {
        verify_sandwich_decreasing_on(&k, &p.bounds, e.beta, &u, &v, e, &p.family, &a_grid)?
    };
    rep.checks.name = format!("{}: {}", if increasing { "increasing" } else { "decreasing" }, k.name());
    push_sandwich(out, &rep, "witness_ratios");
    Ok(())
}

fn hardy(p: &HardyParams, base: &Path, out: &mut ReportBundle) -> Result<()> {
    let u = p.u.build(base, "u")?;
    let v = p.v.build(base, "v")?;
    let a_grid = p.a_grid.clone().unwrap_or_else(default_a_grid);
    for d in &p.directions {
        let rep = hardy_inequality_check_on(&u, &v, &p.exponents, *d, &p.family, &a_grid)?;
        let tag = match d {
            HardyDirection::Inner => "inner",
            HardyDirection::Outer => "outer",
        };
        push_sandwich(out, &rep, &format!("witness_ratios_{tag}"));
    }
    Ok(())
}

/// Sum of one to three log-bumps with random centres, widths and amplitudes.
fn random_bumps(rng: &mut ChaCha8Rng) -> TestFunction {
    let n = rng.gen_range(1..=3);
    let terms = (0..n)
        .map(|_| {
            let c = rng.gen_range(-3.0..3.0);
            let w = rng.gen_range(0.3..2.0);
            let amp = rng.gen_range(0.1..2.0);
            TestFunction::LogBump { center: c, width: w, sides: Sides::Positive }.scaled(amp)
        })
        .collect();
    TestFunction::Sum { terms }
}

/// `(p, s)` in `[1, 4]²` with `1/p + 1/s ≥ 1`, and the matching `q`.
fn random_young_exponents(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    loop {
        let p: f64 = rng.gen_range(1.0..4.0);
        let s: f64 = rng.gen_range(1.0..4.0);
        let inv_q = 1.0 / p + 1.0 / s - 1.0;
        if inv_q > 0.0 {
            return (p, 1.0 / inv_q, s);
        }
    }
}

fn young(p: &YoungParams, seed: u64, out: &mut ReportBundle) -> Result<()> {
    const PROV: &str = "young-multiplicative-group";
    let grid = p.grid.build("grid")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0usize;
    let mut margins = Vec::with_capacity(p.pairs);
    for i in 0..p.pairs {
        let (ep, eq, es) = random_young_exponents(&mut rng);
        let f: GridFunction = random_bumps(&mut rng).sample(grid)?;
        let g: GridFunction = random_bumps(&mut rng).sample(grid)?;
        let rep = young_mult_check(&f, &g, ep, eq, es)?;
        let c = rep.get("young_inequality").expect("young check present");
        if c.pass {
            passed += 1;
        }
        let rhs = rep.value("rhs").unwrap_or(f64::NAN);
        margins.push((i as f64, c.value / rhs));
        out.push_check(&format!("pair {i}: p={ep:.4}, q={eq:.4}, s={es:.4}"), c);
    }
    out.verdict("young summary", Check::near("pairs_passing", passed as f64, p.pairs as f64, 0.0, PROV));
    out.add_series("young_lhs_over_rhs", margins);
    Ok(())
}

fn commute(p: &CommuteParams, base: &Path, out: &mut ReportBundle) -> Result<()> {
    let k = p.kernel.build(base, "kernel")?;
    for &beta in &p.betas {
        let rep = commutation_check(&k, beta, &p.f, &p.config)?;
        out.push_report(&rep);
    }
    Ok(())
}

fn hypotheses(p: &HypothesesParams, base: &Path, out: &mut ReportBundle) -> Result<()> {
    const PROV: &str = "fourier-integrability-conditions";
    let prof = p.profile.build(base, "profile")?;
    for &m in &p.m {
        let rep = match p.form {
            HypothesisForm::Phi => hypothesis_integrals_phi(&prof, m)?,
            HypothesisForm::G => hypothesis_integrals_g(&prof, m)?,
        };
        let case = format!("hypotheses {:?}: {}, m={m}", p.form, rep.profile).to_lowercase();
        for e in &rep.entries {
            let expected = p.expect_divergent.iter().any(|x| x.family == e.family && x.indices == e.indices);
            let name = format!("{}({},{})", e.family, e.indices.0, e.indices.1);
            out.quantity(&case, &name, e.value, PROV);
            out.verdict(&case, Check::flag(&format!("{name}_as_expected"), e.divergent == expected, PROV));
        }
        out.quantity(&case, "max_finite", rep.max_value, PROV);
    }
    Ok(())
}

fn decay(p: &DecayParams, base: &Path, out: &mut ReportBundle) -> Result<()> {
    let prof = p.profile.build(base, "profile")?;
    let probe = p.probe.clone().unwrap_or_else(DecayProbe::standard);
    let rep = kernel_decay_probe(&prof, &standard_bump, p.beta, &probe)?;
    out.push_report(&rep);
    out.add_series("decay_sup", decay_series(&prof, &standard_bump, p.beta, &probe));
    Ok(())
}

fn scaling(p: &ScalingParams, base: &Path, out: &mut ReportBundle) -> Result<()> {
    const PROV: &str = "scaling-forces-exponent-relation";
    let k = p.kernel.build(base, "kernel")?;
    let mut shifts = vec![0.0];
    shifts.extend(p.gamma_shifts.iter().copied());
    for (i, dg) in shifts.into_iter().enumerate() {
        let input = ScalingInput { g: p.input.g + dg, ..p.input.clone() };
        let mut rep = exponent_relation_probe(&k, &input, &p.f, &p.scales, p.tol)?;
        rep.name = format!("{} (gamma shift {dg})", rep.name);
        let residual = rep.value("residual").unwrap_or(f64::NAN);
        out.push_report(&rep);
        if dg != 0.0 {
            // Shifting γ by δ moves the residual by exactly -δ/q.
            out.verdict(&rep.name, Check::near("shift_response", residual, -dg / input.q, p.tol, PROV));
        }
        let series = scaling_series(&k, &input, &p.f, &p.scales)?;
        out.add_series(&format!("scaling_{i}"), series);
    }
    Ok(())
}

fn dilation(p: &DilationParams, seed: u64, out: &mut ReportBundle) -> Result<()> {
    for &pp in &p.p {
        for &a in &p.a {
            for &s in &p.s {
                let rep = dilation_invariance_check(&p.f, s, pp, a, p.grid, &p.maximal, p.tol)?;
                out.push_report(&rep);
            }
        }
    }
    if let Some(eq) = &p.equivalence {
        let family = smooth_family(seed, eq.count);
        let (rep, ratios) = equivalence_band(&family, p.grid, eq.p, eq.a, &p.maximal, eq.max_spread)?;
        out.push_report(&rep);
        out.add_series("equivalence_ratios", ratios.into_iter().enumerate().map(|(i, r)| (i as f64, r)).collect());
    }
    Ok(())
}

fn ap(p: &ApParams, base: &Path, out: &mut ReportBundle) -> Result<()> {
    const PROV: &str = "muckenhoupt-power-weights";
    let w = p.weight.build(base, "weight")?;
    let balls = default_balls();
    for c in &p.cases {
        let r = ap_characteristic(&w, c.p, &balls)?;
        let case = format!("ap: p={}", c.p);
        out.quantity(&case, "characteristic", r.characteristic, PROV);
        match &c.expect {
            ApExpect::Finite => out.verdict(&case, Check::flag("finite", !r.divergent, PROV)),
            ApExpect::Divergent => out.verdict(&case, Check::flag("flagged_divergent", r.divergent, PROV)),
            ApExpect::Value { value, tol } => out.verdict(&case, Check::near("characteristic_expected", r.characteristic, *value, *tol, PROV)),
        }
        if let Some(lambda) = c.dilation {
            let scaled: Vec<Interval> = balls.iter().map(|b| Interval { lo: lambda * b.lo, hi: lambda * b.hi }).collect();
            let rs = ap_characteristic(&w, c.p, &scaled)?;
            let ratio = if r.characteristic == rs.characteristic { 1.0 } else { rs.characteristic / r.characteristic };
            out.verdict(&case, Check::near("dilation_ratio", ratio, 1.0, c.dilation_tol, PROV));
        }
    }
    Ok(())
}
