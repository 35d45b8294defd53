use std::f64::consts::PI;

use frac_hausdorff::fourier::{hilbert_transform, l2_norm, Spectrum, UniformGrid};
use frac_hausdorff::function::FnFunction;
use frac_hausdorff::hardy_space::{exponent_relation_probe, hardy_quasi_norm, radial_maximal, MaximalConfig, ScalingInput};
use frac_hausdorff::inequalities::{operator_ratio, Monotonicity};
use frac_hausdorff::norms::{a_constant, a_integrand, b_constant};
use frac_hausdorff::quad::{integrate, sup_over_scale};
use frac_hausdorff::weights::origin_balls;
use frac_hausdorff::*;
use proptest::prelude::*;

fn cheap() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

fn few() -> ProptestConfig {
    ProptestConfig { cases: 6, ..ProptestConfig::default() }
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, k| acc * x + k)
}

proptest! {
    #![proptest_config(cheap())]

    #[test]
    fn integrate_is_linear(c1 in prop::collection::vec(-3.0..3.0f64, 1..6), c2 in prop::collection::vec(-3.0..3.0f64, 1..6), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let unit = Interval::new(0.0, 1.0).unwrap();
        let tol = 1e-12;
        let f = integrate(|x| poly(&c1, x), unit, tol).unwrap();
        let g = integrate(|x| poly(&c2, x), unit, tol).unwrap();
        let h = integrate(|x| a * poly(&c1, x) + b * poly(&c2, x), unit, tol).unwrap();
        let scale = 1.0 + a.abs() * f.abs() + b.abs() * g.abs();
        prop_assert!((h - a * f - b * g).abs() <= 1e-10 * scale);
    }

    #[test]
    fn integrate_respects_reflection(lo in 0.0..2.0f64, len in 0.1..3.0f64, w in 0.2..4.0f64) {
        let f = |x: f64| (w * x).cos() * (-x * x / 3.0).exp() + x.powi(3);
        let right = integrate(f, Interval::new(lo, lo + len).unwrap(), 1e-12).unwrap();
        let left = integrate(|x| f(-x), Interval::new(-lo - len, -lo).unwrap(), 1e-12).unwrap();
        prop_assert!((right - left).abs() <= 1e-10 * (1.0 + right.abs()));
    }

    #[test]
    fn sup_over_scale_dominates_scan(c in -2.0..2.0f64, w in 0.3..2.0f64) {
        // Bump in ln α centred at c.
        let g = |a: f64| (-(a.ln() - c).powi(2) / w).exp();
        let sup = sup_over_scale(g, Interval::positive(), 1e-10).unwrap();
        for a0 in quad::scale_seeds(Interval::positive()).unwrap() {
            prop_assert!(sup.value >= g(a0) - 1e-10 * g(a0));
        }
    }

    #[test]
    fn kernels_even_except_cesaro(t in 0.01..50.0f64, beta in 0.0..0.95f64, sigma in 0.2..5.0f64) {
        for k in [Kernel::fractional_hardy(beta).unwrap(), Kernel::AdjointHardy, Kernel::fractional_hlp(beta).unwrap(), Kernel::gaussian_hat(sigma).unwrap(), Kernel::Zero] {
            prop_assert_eq!(k.evaluate(t).unwrap(), k.evaluate(-t).unwrap());
        }
        let c = Kernel::cesaro_gamma(2.0).unwrap();
        prop_assert!(!c.is_even());
        if t < 1.0 {
            prop_assert!(c.evaluate(t).unwrap() > 0.0 && c.evaluate(-t).unwrap() == 0.0);
        }
    }

    #[test]
    fn hlp_is_hardy_plus_adjoint(t in -60.0..60.0f64, beta in 0.0..0.95f64) {
        prop_assume!(t != 0.0);
        let hlp = Kernel::fractional_hlp(beta).unwrap().evaluate(t).unwrap();
        let sum = Kernel::fractional_hardy(beta).unwrap().evaluate(t).unwrap() + Kernel::AdjointHardy.evaluate(t).unwrap();
        prop_assert!((hlp - sum).abs() <= 1e-15 * sum.abs());
    }

    #[test]
    fn norm_homogeneity(c in -5.0..5.0f64, a in -0.5..2.0f64, p in 1.0..4.0f64) {
        let f = TestFunction::gaussian();
        let w = Weight::power(a).unwrap();
        let n = weighted_lp_norm(&f, &w, p).unwrap().value;
        let nc = weighted_lp_norm(&f.clone().scaled(c), &w, p).unwrap().value;
        prop_assert!((nc - c.abs() * n).abs() <= 1e-8 * (1.0 + c.abs() * n));
    }

    #[test]
    fn weak_below_strong(lo in 0.05..1.0f64, len in 0.1..3.0f64, p in 1.0..4.0f64, a in 0.0..1.5f64) {
        let f = TestFunction::Indicator { lo, hi: lo + len };
        let w = Weight::power(a).unwrap();
        let grid = LogGrid::new(1e-3, 10.0, 600).unwrap();
        let weak = weak_lp_norm(&f.sample(grid).unwrap(), &w, p).unwrap().value;
        let strong = weighted_lp_norm(&f, &w, p).unwrap().value;
        prop_assert!(weak <= strong * (1.0 + 1e-3));
    }

    #[test]
    fn hilbert_anticommutes_with_reflection(c in -3.0..3.0f64, w in 0.5..2.0f64, nu in 0.0..2.0f64) {
        let grid = UniformGrid::new(32.0, 4096).unwrap();
        let f = |x: f64| (-PI * ((x - c) / w).powi(2)).exp() * (2.0 * PI * nu * x).cos();
        let hf = hilbert_transform(grid, &grid.sample(f)).unwrap();
        let hr = hilbert_transform(grid, &grid.sample(|x| f(-x))).unwrap();
        // Node j maps to -x_j at index n - j; index 0 (x = -L) has no mirror.
        let n = grid.n;
        let scale = hf.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for j in 1..n {
            prop_assert!((hr[j] + hf[n - j]).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn parseval(c in -3.0..3.0f64, w in 0.5..2.0f64, nu in 0.0..3.0f64) {
        let grid = UniformGrid::new(32.0, 4096).unwrap();
        let s = grid.sample(|x| (-PI * ((x - c) / w).powi(2)).exp() * (2.0 * PI * nu * x).cos());
        let spec = Spectrum::of(grid, &s).unwrap();
        let a = l2_norm(grid, &s);
        prop_assert!((spec.l2_norm() - a).abs() <= 1e-8 * a);
    }
}

proptest! {
    #![proptest_config(few())]

    #[test]
    fn operator_is_linear(a in -2.0..2.0f64, b in -2.0..2.0f64, x in 0.1..5.0f64, beta in 0.0..0.9f64) {
        let k = Kernel::fractional_hlp(beta).unwrap();
        let f = TestFunction::gaussian();
        let g = TestFunction::Indicator { lo: 0.5, hi: 2.0 };
        let sum = TestFunction::Sum { terms: vec![f.clone().scaled(a), g.clone().scaled(b)] };
        let hs = apply_hausdorff(&k, beta, &sum, x, 1e-11).unwrap();
        let hf = apply_hausdorff(&k, beta, &f, x, 1e-11).unwrap();
        let hg = apply_hausdorff(&k, beta, &g, x, 1e-11).unwrap();
        prop_assert!((hs - a * hf - b * hg).abs() <= 1e-8 * (1.0 + (a * hf).abs() + (b * hg).abs()));
    }

    #[test]
    fn operator_is_positive(x in -5.0..5.0f64, beta in 0.0..0.9f64, g in 0.5..3.0f64) {
        prop_assume!(x.abs() > 1e-3);
        let f = TestFunction::Indicator { lo: -1.0, hi: 3.0 };
        for k in [Kernel::fractional_hardy(beta).unwrap(), Kernel::AdjointHardy, Kernel::cesaro_gamma(g).unwrap(), Kernel::gaussian_hat(1.0).unwrap()] {
            prop_assert!(apply_hausdorff(&k, beta, &f, x, 1e-10).unwrap() >= 0.0);
        }
    }

    #[test]
    fn operator_dilation_covariance(s in 0.2..5.0f64, x in 0.2..4.0f64, beta in 0.0..0.9f64) {
        let k = Kernel::fractional_hardy(beta).unwrap();
        let f = TestFunction::gaussian();
        let lhs = apply_hausdorff(&k, beta, &f.clone().dilated(s), x, 1e-11).unwrap();
        let rhs = s.powf(-beta) * apply_hausdorff(&k, beta, &f, s * x, 1e-11).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs.abs().max(1e-300));
    }

    #[test]
    fn mellin_oracle_matches_grid(c in -1.0..1.0f64, w in 0.5..1.5f64) {
        let grid = LogGrid::new(1e-4, 1e4, 1200).unwrap();
        let f = TestFunction::LogBump { center: c, width: w, sides: Sides::Both };
        let fg = f.sample(grid).unwrap();
        let k = Kernel::fractional_hardy(0.0).unwrap();
        let exps = ExponentSet::new(2.0, 2.0, 0.0, 0.0, 0.0).unwrap();
        let m = hausdorff_as_mellin(&k, 0.0, &fg, &exps).unwrap();
        let d = apply_on_grid(&k, 0.0, &f, &grid, 1e-10).unwrap();
        prop_assert!(d.function.relative_l2_distance(&m).unwrap() < 1e-4);
    }

    #[test]
    fn ap_nonincreasing_in_p(a in -0.5..1.5f64, p1 in 1.2..4.0f64, dp in 0.1..2.0f64) {
        let w = Weight::power(a).unwrap();
        let balls = origin_balls(9);
        let lo = ap_characteristic(&w, p1, &balls).unwrap();
        let hi = ap_characteristic(&w, p1 + dp, &balls).unwrap();
        prop_assert!(lo.divergent || hi.characteristic <= lo.characteristic * (1.0 + 1e-8));
    }

    #[test]
    fn ap_power_dilation_invariant(a in -0.5..1.5f64, lambda in 0.1..10.0f64) {
        let w = Weight::power(a).unwrap();
        let p = 2.0 + a.max(0.0);
        let balls = origin_balls(9);
        let scaled: Vec<Interval> = balls.iter().map(|b| Interval { lo: lambda * b.lo, hi: lambda * b.hi }).collect();
        let x = ap_characteristic(&w, p, &balls).unwrap().characteristic;
        let y = ap_characteristic(&w, p, &scaled).unwrap().characteristic;
        prop_assert!((x - y).abs() <= 1e-8 * x);
    }

    #[test]
    fn ap_bounded_near_one_for_nonpositive_powers(a in -0.9..0.0f64) {
        let w = Weight::power(a).unwrap();
        let r = ap_characteristic(&w, 1.01, &origin_balls(9)).unwrap();
        // Bounded by the A_1 constant 1/(1+a) as p → 1+.
        prop_assert!(!r.divergent && r.characteristic <= 1.0 / (1.0 + a) + 1e-8);
    }

    #[test]
    fn a_constant_monotone_in_u(c in 1.0..4.0f64) {
        // u = c ≥ 1 dominates u = 1, so A can only grow.
        let exps = ExponentSet::new(4.0 / 3.0, 4.0, 0.5, 0.0, 0.0).unwrap();
        let v = Weight::one();
        let one = a_constant(&Weight::one(), &v, &exps).unwrap().value.value;
        let big = a_constant(&Weight::constant(c).unwrap(), &v, &exps).unwrap().value.value;
        prop_assert!(big >= one * (1.0 - 1e-9));
    }

    #[test]
    fn b_constant_monotone_in_v(c in 0.1..1.0f64) {
        // Smaller v raises v^{1-p'}, so B can only grow.
        let exps = ExponentSet::new(4.0 / 3.0, 4.0, 0.5, 0.0, 0.0).unwrap();
        let u = Weight::one();
        let b1 = b_constant(&u, &Weight::one(), &exps).unwrap().value.value;
        let bc = b_constant(&u, &Weight::constant(c).unwrap(), &exps).unwrap().value.value;
        prop_assert!(bc >= b1 * (1.0 - 1e-9));
    }

    #[test]
    fn a_integrand_alpha_independent(a in 0.0..1.0f64) {
        // u = |x|^γ, v = |x|^α on the Hardy line (1+α)/p - (1+γ)/q = β.
        let (p, q, beta) = (2.0, 4.0, 0.25);
        let alpha = a;
        let gamma = q * ((1.0 + alpha) / p - beta) - 1.0;
        prop_assume!(gamma > -1.0);
        let exps = ExponentSet::new(p, q, beta, alpha, gamma).unwrap();
        let u = Weight::power(gamma).unwrap();
        let v = Weight::power(alpha).unwrap();
        let vals: Vec<f64> = (0..20).map(|i| a_integrand(&u, &v, &exps, 1e-2 * 1e4f64.powf(i as f64 / 19.0)).value).collect();
        let mean = vals.iter().sum::<f64>() / 20.0;
        let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 19.0).sqrt();
        prop_assert!(sd <= 1e-6 * mean);
    }

    #[test]
    fn extremal_ratio_invariant_in_a(a1 in 0.1..10.0f64, a2 in 0.1..10.0f64) {
        let exps = ExponentSet::diagonal(4.0, 0.5).unwrap();
        let k = Kernel::fractional_hardy(0.5).unwrap();
        let one = Weight::one();
        let f1 = extremal_test_function(Monotonicity::Increasing, a1, &one, &exps).unwrap();
        let f2 = extremal_test_function(Monotonicity::Increasing, a2, &one, &exps).unwrap();
        let r1 = operator_ratio(&k, 0.5, &one, &one, &exps, &f1).unwrap();
        let r2 = operator_ratio(&k, 0.5, &one, &one, &exps, &f2).unwrap();
        prop_assert!((r1 - r2).abs() <= 1e-4 * r1);
    }

    #[test]
    fn maximal_sublinear_and_reflection(c in -3.0..3.0f64, d in -3.0..3.0f64) {
        let grid = UniformGrid::new(32.0, 1 << 13).unwrap();
        let cfg = MaximalConfig { s_min: 2f64.powi(-8), s_max: 2f64.powi(8), density: 2f64.powf(0.25), ..MaximalConfig::default() };
        let f = grid.sample(|x| (-PI * (x - c).powi(2)).exp());
        let g = grid.sample(|x| (-PI * (x - d).powi(2) / 2.0).exp() * (3.0 * x).sin());
        let fg: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        let mf = radial_maximal(grid, &f, &cfg).unwrap();
        let mg = radial_maximal(grid, &g, &cfg).unwrap();
        let mfg = radial_maximal(grid, &fg, &cfg).unwrap();
        for j in 0..grid.n {
            prop_assert!(mfg[j] <= mf[j] + mg[j] + 1e-12);
        }
        let n = grid.n;
        let fr = grid.sample(|x| (-PI * (-x - c).powi(2)).exp());
        let mr = radial_maximal(grid, &fr, &cfg).unwrap();
        for j in 1..n {
            prop_assert!((mr[j] - mf[n - j]).abs() <= 1e-12);
        }
    }

    #[test]
    fn hardy_norm_homogeneous(c in -4.0..4.0f64) {
        prop_assume!(c.abs() > 1e-3);
        let grid = UniformGrid::new(32.0, 1 << 13).unwrap();
        let cfg = MaximalConfig { s_min: 2f64.powi(-8), s_max: 2f64.powi(8), density: 2f64.powf(0.25), ..MaximalConfig::default() };
        let f = grid.sample(|x| (-PI * x * x / 4.0).exp() * (4.0 * PI * x).cos());
        let fc: Vec<f64> = f.iter().map(|v| c * v).collect();
        let a = hardy_quasi_norm(grid, &f, 0.0, 1.0, &cfg).unwrap().value;
        let b = hardy_quasi_norm(grid, &fc, 0.0, 1.0, &cfg).unwrap().value;
        prop_assert!((b - c.abs() * a).abs() <= 1e-10 * b);
    }

    #[test]
    fn residual_linear_in_gamma_and_alpha(dg in -0.2..0.2f64, da in -0.2..0.2f64) {
        let k = Kernel::gaussian_hat(1.0).unwrap();
        let f = TestFunction::gaussian();
        let scales: Vec<f64> = (-2..=2).map(|i| 2f64.powi(i)).collect();
        let base = ScalingInput { beta: 0.25, p: 1.0, q: 4.0 / 3.0, a: 0.0, g: 0.0 };
        let r0 = exponent_relation_probe(&k, &base, &f, &scales, 1e-3).unwrap().value("residual").unwrap();
        let shifted = ScalingInput { g: dg, a: da, ..base.clone() };
        let r1 = exponent_relation_probe(&k, &shifted, &f, &scales, 1e-3).unwrap().value("residual").unwrap();
        prop_assert!((r1 - r0 - (da / base.p - dg / base.q)).abs() <= 1e-6);
    }
}

#[test]
fn sandwich_lower_le_upper_and_bounds_empirical() {
    let k = Kernel::fractional_hardy(0.5).unwrap();
    let b = KernelBounds::new(1.0, 1.0, BoundRegion::OutsideUnit { beta: 0.5 }).unwrap();
    let exps = ExponentSet::diagonal(4.0, 0.5).unwrap();
    let one = Weight::one();
    let rep = verify_sandwich_increasing(&k, &b, 0.5, &one, &one, &exps, &[]).unwrap();
    assert!(rep.lower <= rep.upper);
    assert!(rep.empirical <= rep.upper * (1.0 + 1e-6));
    let hr = hardy_inequality_check(&one, &one, &exps, HardyDirection::Inner, &[]).unwrap();
    assert!(hr.empirical >= hr.lower * (1.0 - 1e-3), "{} vs {}", hr.empirical, hr.lower);
}

#[test]
fn gaussian_kernel_hypotheses_finite_away_from_origin() {
    // Every moment entry is finite for m ≤ 3; the shifted entries that diverge are exactly
    // those whose integrand behaves like |ξ|^{-1} or worse at 0, because Φ̂(0) = 1.
    let p = Profile::gaussian(1.0).unwrap();
    for m in 0..=3usize {
        let r = hypothesis_integrals_phi(&p, m).unwrap();
        for e in &r.entries {
            if e.family == "moment" {
                assert!(!e.divergent, "moment {:?} at m={m}", e.indices);
                continue;
            }
            // Derivative order k of e^{-ξ²} vanishes at 0 to order k mod 2.
            let vanish = (e.order % 2) as f64;
            assert_eq!(e.divergent, e.power + vanish <= -1.0, "shifted {:?} at m={m}", e.indices);
        }
    }
}

#[test]
fn fn_function_is_usable_as_input() {
    let f = FnFunction { f: |x: f64| (-x * x).exp(), breakpoints: Vec::new() };
    let v = apply_hausdorff(&Kernel::AdjointHardy, 0.0, &f, 1.0, 1e-10).unwrap();
    assert!(v > 0.0);
}
