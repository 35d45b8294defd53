//! Real functions on the line: closed-form test functions and sampled ones.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::grid::{GridFunction, LogGrid};
use crate::weights::Weight;
use crate::Result;

/// Radial support on each half-line, as `(inner, outer)` radii; `None` means identically zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub pos: Option<(f64, f64)>,
    pub neg: Option<(f64, f64)>,
}

impl Support {
    pub fn full() -> Self {
        Self { pos: Some((0.0, f64::INFINITY)), neg: Some((0.0, f64::INFINITY)) }
    }

    pub fn empty() -> Self {
        Self { pos: None, neg: None }
    }

    pub fn side(&self, positive: bool) -> Option<(f64, f64)> {
        if positive {
            self.pos
        } else {
            self.neg
        }
    }

    /// Smallest radial range covering both.
    pub fn hull_of(a: Option<(f64, f64)>, b: Option<(f64, f64)>) -> Option<(f64, f64)> {
        match (a, b) {
            (Some(x), Some(y)) => Some((x.0.min(y.0), x.1.max(y.1))),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn union(self, other: Self) -> Self {
        Self { pos: Self::hull_of(self.pos, other.pos), neg: Self::hull_of(self.neg, other.neg) }
    }
}

/// A real function that quadrature code can evaluate pointwise.
pub trait RealFunction: Sync {
    fn eval(&self, x: f64) -> f64;

    /// Points where the function or its derivative jumps.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    fn support(&self) -> Support {
        Support::full()
    }

    /// Grid-backed functions get cellwise quadrature instead of pointwise adaptivity.
    fn as_grid(&self) -> Option<&GridFunction> {
        None
    }
}

impl RealFunction for GridFunction {
    fn eval(&self, x: f64) -> f64 {
        GridFunction::eval(self, x)
    }

    fn breakpoints(&self) -> Vec<f64> {
        let g = self.grid();
        vec![-g.r_max(), -g.r_min(), g.r_min(), g.r_max()]
    }

    fn support(&self) -> Support {
        let g = self.grid();
        let n = g.n_per_side();
        let v = self.values();
        let pos = v[n..].iter().any(|&x| x != 0.0);
        let neg = v[..n].iter().any(|&x| x != 0.0);
        let s = Some((g.r_min(), g.r_max()));
        Support { pos: if pos { s } else { None }, neg: if neg { s } else { None } }
    }

    fn as_grid(&self) -> Option<&GridFunction> {
        Some(self)
    }
}

impl<F: RealFunction + ?Sized> RealFunction for &F {
    fn eval(&self, x: f64) -> f64 {
        (**self).eval(x)
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
    fn support(&self) -> Support {
        (**self).support()
    }
    fn as_grid(&self) -> Option<&GridFunction> {
        (**self).as_grid()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sides {
    Both,
    Positive,
    Negative,
}

impl Sides {
    fn has(&self, positive: bool) -> bool {
        match self {
            Sides::Both => true,
            Sides::Positive => positive,
            Sides::Negative => !positive,
        }
    }
}

/// Closed-form test functions used by the verification harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TestFunction {
    Zero,
    /// 1 on `(lo, hi)`, 1/2 at the endpoints.
    Indicator { lo: f64, hi: f64 },
    /// `exp(-π((x-c)/w)²) cos(2π ν (x-c) + φ)`.
    Gaussian {
        #[serde(default)]
        center: f64,
        #[serde(default = "one")]
        width: f64,
        #[serde(default)]
        freq: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `|x|^e` for `inner ≤ |x| ≤ outer`.
    PowerBand {
        exponent: f64,
        inner: f64,
        #[serde(with = "crate::grid::ext_real")]
        outer: f64,
        #[serde(default = "both")]
        sides: Sides,
    },
    /// `|x|^e w(x)^k` for `inner ≤ |x| ≤ outer`.
    WeightedPower {
        x_exp: f64,
        weight: Weight,
        w_exp: f64,
        inner: f64,
        #[serde(with = "crate::grid::ext_real")]
        outer: f64,
    },
    /// Smooth bump in `ln|x|`, supported on `|ln|x| - c| < w`.
    LogBump {
        center: f64,
        width: f64,
        #[serde(default = "both")]
        sides: Sides,
    },
    /// `f(s x)`, `s > 0`.
    Dilated { s: f64, f: Box<TestFunction> },
    Scaled { c: f64, f: Box<TestFunction> },
    Sum { terms: Vec<TestFunction> },
}

fn one() -> f64 {
    1.0
}

fn both() -> Sides {
    Sides::Both
}

impl TestFunction {
    pub fn gaussian() -> Self {
        TestFunction::Gaussian { center: 0.0, width: 1.0, freq: 0.0, phase: 0.0 }
    }

    pub fn modulated_gaussian(center: f64, width: f64, freq: f64, phase: f64) -> Self {
        TestFunction::Gaussian { center, width, freq, phase }
    }

    pub fn dilated(self, s: f64) -> Self {
        TestFunction::Dilated { s, f: Box::new(self) }
    }

    pub fn scaled(self, c: f64) -> Self {
        TestFunction::Scaled { c, f: Box::new(self) }
    }

    /// Even extension of `x^e` on `|x| ≥ inner`.
    pub fn power_tail(exponent: f64, inner: f64) -> Self {
        TestFunction::PowerBand { exponent, inner, outer: f64::INFINITY, sides: Sides::Both }
    }

    pub fn sample(&self, grid: LogGrid) -> Result<GridFunction> {
        GridFunction::from_fn(grid, |x| self.eval(x))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TestFunction::Zero => true,
            TestFunction::Scaled { c, f } => *c == 0.0 || f.is_zero(),
            TestFunction::Dilated { f, .. } => f.is_zero(),
            TestFunction::Sum { terms } => terms.iter().all(|t| t.is_zero()),
            _ => false,
        }
    }
}

fn band(radius: f64, inner: f64, outer: f64) -> f64 {
    if radius < inner || radius > outer {
        0.0
    } else if radius == inner || radius == outer {
        0.5
    } else {
        1.0
    }
}

impl RealFunction for TestFunction {
    fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Zero => 0.0,
            TestFunction::Indicator { lo, hi } => {
                if x > *lo && x < *hi {
                    1.0
                } else if x == *lo || x == *hi {
                    0.5
                } else {
                    0.0
                }
            }
            TestFunction::Gaussian { center, width, freq, phase } => {
                let y = x - center;
                let env = (-PI * (y / width).powi(2)).exp();
                if *freq == 0.0 && *phase == 0.0 {
                    env
                } else {
                    env * (2.0 * PI * freq * y + phase).cos()
                }
            }
            TestFunction::PowerBand { exponent, inner, outer, sides } => {
                let r = x.abs();
                if x == 0.0 || !sides.has(x > 0.0) {
                    return 0.0;
                }
                let b = band(r, *inner, *outer);
                if b == 0.0 {
                    0.0
                } else {
                    b * r.powf(*exponent)
                }
            }
            TestFunction::WeightedPower { x_exp, weight, w_exp, inner, outer } => {
                let r = x.abs();
                let b = band(r, *inner, *outer);
                if b == 0.0 || x == 0.0 {
                    0.0
                } else {
                    b * r.powf(*x_exp) * weight.eval(r).powf(*w_exp)
                }
            }
            TestFunction::LogBump { center, width, sides } => {
                if x == 0.0 || !sides.has(x > 0.0) {
                    return 0.0;
                }
                let z = (x.abs().ln() - center) / width;
                if z.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - z * z)).exp()
                }
            }
            TestFunction::Dilated { s, f } => f.eval(s * x),
            TestFunction::Scaled { c, f } => c * f.eval(x),
            TestFunction::Sum { terms } => terms.iter().map(|t| t.eval(x)).sum(),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        let sym = |r: f64, sides: &Sides| {
            let mut v = Vec::new();
            if r.is_finite() && r > 0.0 {
                if sides.has(true) {
                    v.push(r);
                }
                if sides.has(false) {
                    v.push(-r);
                }
            }
            v
        };
        match self {
            TestFunction::Zero | TestFunction::Gaussian { .. } => Vec::new(),
            TestFunction::Indicator { lo, hi } => vec![*lo, *hi],
            TestFunction::PowerBand { inner, outer, sides, .. } => {
                let mut v = sym(*inner, sides);
                v.extend(sym(*outer, sides));
                v
            }
            TestFunction::WeightedPower { weight, inner, outer, .. } => {
                let mut v = sym(*inner, &Sides::Both);
                v.extend(sym(*outer, &Sides::Both));
                v.extend(weight.breakpoints());
                v
            }
            TestFunction::LogBump { center, width, sides } => {
                let mut v = sym((center - width).exp(), sides);
                v.extend(sym((center + width).exp(), sides));
                v
            }
            TestFunction::Dilated { s, f } => f.breakpoints().into_iter().map(|b| b / s).collect(),
            TestFunction::Scaled { f, .. } => f.breakpoints(),
            TestFunction::Sum { terms } => terms.iter().flat_map(|t| t.breakpoints()).collect(),
        }
    }

    fn support(&self) -> Support {
        let sided = |inner: f64, outer: f64, sides: &Sides| {
            let s = Some((inner, outer));
            Support { pos: if sides.has(true) { s } else { None }, neg: if sides.has(false) { s } else { None } }
        };
        match self {
            TestFunction::Zero => Support::empty(),
            TestFunction::Indicator { lo, hi } => {
                let pos = if *hi > 0.0 { Some((lo.max(0.0), *hi)) } else { None };
                let neg = if *lo < 0.0 { Some(((-hi).max(0.0), -lo)) } else { None };
                Support { pos, neg }
            }
            TestFunction::Gaussian { .. } => Support::full(),
            TestFunction::PowerBand { inner, outer, sides, .. } => sided(*inner, *outer, sides),
            TestFunction::WeightedPower { inner, outer, .. } => sided(*inner, *outer, &Sides::Both),
            TestFunction::LogBump { center, width, sides } => {
                sided((center - width).exp(), (center + width).exp(), sides)
            }
            TestFunction::Dilated { s, f } => {
                let inner = f.support();
                let map = |o: Option<(f64, f64)>| o.map(|(a, b)| (a / s, b / s));
                Support { pos: map(inner.pos), neg: map(inner.neg) }
            }
            TestFunction::Scaled { c, f } => {
                if *c == 0.0 {
                    Support::empty()
                } else {
                    f.support()
                }
            }
            TestFunction::Sum { terms } => terms.iter().fold(Support::empty(), |acc, t| acc.union(t.support())),
        }
    }
}

/// Pointwise closure wrapper.
pub struct FnFunction<F: Fn(f64) -> f64 + Sync> {
    pub f: F,
    pub breakpoints: Vec<f64>,
}

impl<F: Fn(f64) -> f64 + Sync> RealFunction for FnFunction<F> {
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_half_values() {
        let f = TestFunction::Indicator { lo: 0.0, hi: 1.0 };
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(1.0), 0.5);
        assert_eq!(f.eval(-0.5), 0.0);
        assert_eq!(f.support().pos, Some((0.0, 1.0)));
        assert_eq!(f.support().neg, None);
    }

    #[test]
    fn dilation_maps_support() {
        let f = TestFunction::power_tail(-0.6, 1.0).dilated(4.0);
        assert_eq!(f.support().pos, Some((0.25, f64::INFINITY)));
        assert_eq!(f.eval(0.5), 2f64.powf(-0.6));
    }

    #[test]
    fn serde_roundtrip() {
        let f = TestFunction::Sum { terms: vec![TestFunction::gaussian(), TestFunction::power_tail(-0.7, 2.0)] };
        let s = serde_json::to_string(&f).unwrap();
        let g: TestFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}
