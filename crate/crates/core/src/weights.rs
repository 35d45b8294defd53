//! Even weights on the line, their measures, and Muckenhoupt characteristics.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::grid::{log_linear, Interval, LogGrid};
use crate::quad::{integrate_flagged, NormValue, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Profile on positive radii; held constant beyond the grid span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneProfile {
    grid: LogGrid,
    values: Vec<f64>,
    direction: Direction,
}

impl MonotoneProfile {
    pub fn new(grid: LogGrid, values: Vec<f64>, direction: Direction) -> Result<Self> {
        if values.len() != grid.n_per_side() {
            return domain(format!("profile needs {} values, got {}", grid.n_per_side(), values.len()));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return domain("profile values must be finite and nonnegative");
        }
        let ok = values.windows(2).all(|w| match direction {
            Direction::Increasing => w[1] >= w[0],
            Direction::Decreasing => w[1] <= w[0],
        });
        if !ok {
            return domain(format!("profile is not {direction:?} on its grid"));
        }
        Ok(Self { grid, values, direction })
    }

    pub fn from_fn(grid: LogGrid, f: impl Fn(f64) -> f64, direction: Direction) -> Result<Self> {
        Self::new(grid, grid.radii().into_iter().map(f).collect(), direction)
    }

    /// Loads `(radius, value)` rows; radii must be positive, ascending and log-uniform.
    pub fn from_csv(path: &Path, direction: Direction) -> Result<Self> {
        let (grid, values) = read_profile_csv(path)?;
        Self::new(grid, values, direction)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn grid(&self) -> &LogGrid {
        &self.grid
    }

    pub fn eval(&self, r: f64) -> f64 {
        let n = self.values.len();
        if r <= self.grid.r_min() {
            return self.values[0];
        }
        if r >= self.grid.r_max() {
            return self.values[n - 1];
        }
        let (k, frac) = self.grid.locate(r).expect("radius inside span");
        log_linear(self.values[k], self.values[k + 1], frac)
    }
}

/// Reads a two-column `(node, value)` CSV into a log grid and its values.
pub fn read_profile_csv(path: &Path) -> Result<(LogGrid, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        if rec.len() < 2 {
            return domain(format!("{}: expected two columns", path.display()));
        }
        let (Ok(x), Ok(v)) = (rec[0].parse::<f64>(), rec[1].parse::<f64>()) else {
            // Tolerate a single header row.
            if nodes.is_empty() {
                continue;
            }
            return domain(format!("{}: unparsable row {:?}", path.display(), rec));
        };
        nodes.push(x);
        values.push(v);
    }
    if nodes.len() < 2 || nodes[0] <= 0.0 || nodes.windows(2).any(|w| w[1] <= w[0]) {
        return domain(format!("{}: nodes must be positive and ascending", path.display()));
    }
    let grid = LogGrid::new(nodes[0], *nodes.last().unwrap(), nodes.len())?;
    for (k, x) in nodes.iter().enumerate() {
        if (grid.radius(k) / x - 1.0).abs() > 1e-6 {
            return domain(format!("{}: nodes must be log-uniformly spaced", path.display()));
        }
    }
    Ok((grid, values))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Weight {
    /// `|x|^a`, `a > -1`.
    Power { a: f64 },
    EvenMonotone { profile: MonotoneProfile },
    /// `c ≥ 0`; zero is allowed so that vanishing weights can be expressed.
    Constant { c: f64 },
}

impl Weight {
    pub fn power(a: f64) -> Result<Self> {
        if !(a > -1.0 && a.is_finite()) {
            return domain(format!("power weight needs a > -1, got {a}"));
        }
        Ok(Weight::Power { a })
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return domain(format!("constant weight needs c ≥ 0, got {c}"));
        }
        Ok(Weight::Constant { c })
    }

    pub fn one() -> Self {
        Weight::Constant { c: 1.0 }
    }

    pub fn zero() -> Self {
        Weight::Constant { c: 0.0 }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Weight::Power { a } => {
                if *a == 0.0 {
                    1.0
                } else {
                    x.abs().powf(*a)
                }
            }
            Weight::EvenMonotone { profile } => profile.eval(x.abs()),
            Weight::Constant { c } => *c,
        }
    }

    /// `w(x)^e`, with `0^0 = 1`.
    pub fn pow(&self, x: f64, e: f64) -> f64 {
        if e == 0.0 {
            return 1.0;
        }
        match self {
            Weight::Power { a } => x.abs().powf(a * e),
            _ => self.eval(x).powf(e),
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Weight::EvenMonotone { profile } => {
                let g = profile.grid();
                vec![-g.r_max(), -g.r_min(), g.r_min(), g.r_max()]
            }
            _ => Vec::new(),
        }
    }

    pub fn is_increasing(&self) -> bool {
        match self {
            Weight::Power { a } => *a >= 0.0,
            Weight::EvenMonotone { profile } => profile.direction == Direction::Increasing,
            Weight::Constant { .. } => true,
        }
    }

    pub fn is_decreasing(&self) -> bool {
        match self {
            Weight::Power { a } => *a <= 0.0,
            Weight::EvenMonotone { profile } => profile.direction == Direction::Decreasing,
            Weight::Constant { .. } => true,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Weight::Constant { c } if *c == 0.0)
    }
}

/// `w(E) = ∫_E w`.
pub fn weight_measure(w: &Weight, set: Interval) -> NormValue {
    weight_power_measure(w, 1.0, set)
}

/// `∫_E w^e`, exact for constants and by flagged quadrature otherwise.
pub fn weight_power_measure(w: &Weight, e: f64, set: Interval) -> NormValue {
    if let Weight::Constant { c } = w {
        let level = if e == 0.0 { 1.0 } else { c.powf(e) };
        if level == 0.0 {
            return NormValue::zero();
        }
        if !level.is_finite() {
            return NormValue::diverged(f64::INFINITY);
        }
        return if set.is_bounded() { NormValue::finite(level * set.length(), 0.0) } else { NormValue::diverged(f64::INFINITY) };
    }
    let cfg = QuadConfig::with_tol(1e-11);
    integrate_flagged(|x| w.pow(x, e), set, &w.breakpoints(), &cfg)
}

/// `∫_{r0}^{r1} r^k dr`, with divergence at whichever end fails.
fn power_integral(k: f64, r0: f64, r1: f64) -> NormValue {
    if r0 >= r1 {
        return NormValue::zero();
    }
    let e = k + 1.0;
    if (r0 == 0.0 && e <= 0.0) || (r1.is_infinite() && e >= 0.0) {
        return NormValue::diverged(f64::INFINITY);
    }
    let v = if e == 0.0 { (r1 / r0).ln() } else { (r1.powf(e) - r0.powf(e)) / e };
    NormValue::finite(v, 0.0)
}

/// `∫_{r0 ≤ |x| ≤ r1} w(x)^e |x|^c dx`, closed form for power and constant weights.
pub fn radial_moment(w: &Weight, e: f64, c: f64, r0: f64, r1: f64) -> NormValue {
    match w {
        Weight::Power { a } => power_integral(a * e + c, r0, r1).scale(2.0),
        Weight::Constant { c: level } => {
            let factor = if e == 0.0 { 1.0 } else { level.powf(e) };
            if factor == 0.0 || r0 >= r1 {
                return NormValue::zero();
            }
            if !factor.is_finite() {
                return NormValue::diverged(f64::INFINITY);
            }
            power_integral(c, r0, r1).scale(2.0 * factor)
        }
        Weight::EvenMonotone { .. } => {
            if r0 >= r1 {
                return NormValue::zero();
            }
            let cfg = QuadConfig::with_tol(1e-11);
            let bps: Vec<f64> = w.breakpoints().into_iter().filter(|b| *b > 0.0).collect();
            integrate_flagged(|r| w.pow(r, e) * r.powf(c), Interval { lo: r0, hi: r1 }, &bps, &cfg).scale(2.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApReport {
    pub p: f64,
    pub characteristic: f64,
    pub balls_probed: usize,
    pub divergent: bool,
    /// Ball attaining the supremum.
    pub worst_ball: Option<Interval>,
}

/// `(avg_B w)(avg_B w^{-1/(p-1)})^{p-1}` for one ball.
pub fn ap_product(w: &Weight, p: f64, ball: Interval) -> NormValue {
    let len = ball.length();
    if let Weight::Constant { c } = w {
        if *c > 0.0 {
            return NormValue::finite(c * c.powf(-1.0 / (p - 1.0)).powf(p - 1.0), 0.0);
        }
    }
    let first = weight_measure(w, ball).scale(1.0 / len);
    let second = weight_power_measure(w, -1.0 / (p - 1.0), ball).scale(1.0 / len).powf(p - 1.0);
    if first.divergent || second.divergent {
        return NormValue::diverged(f64::INFINITY);
    }
    first.mul(second)
}

/// Supremum of the A_p product over the supplied balls.
pub fn ap_characteristic(w: &Weight, p: f64, balls: &[Interval]) -> Result<ApReport> {
    if !(p > 1.0) {
        return domain(format!("A_p needs p > 1, got {p}"));
    }
    if balls.is_empty() || balls.iter().any(|b| !b.is_bounded()) {
        return domain("A_p needs a nonempty list of bounded balls");
    }
    let products: Vec<NormValue> = balls.par_iter().map(|b| ap_product(w, p, *b)).collect();
    let divergent = products.iter().any(|v| v.divergent);
    let mut best = 0;
    for (i, v) in products.iter().enumerate() {
        if v.value > products[best].value {
            best = i;
        }
    }
    Ok(ApReport {
        p,
        characteristic: if divergent { f64::INFINITY } else { products[best].value },
        balls_probed: balls.len(),
        divergent,
        worst_ball: Some(balls[best]),
    })
}

/// Balls `B(c, R)` with `c ∈ {0, ±1, ±10}` and `R` log-spaced over `[1e-3, 1e3]`.
pub fn default_balls() -> Vec<Interval> {
    let mut out = Vec::new();
    for c in [0.0, 1.0, -1.0, 10.0, -10.0] {
        out.extend(origin_balls(25).into_iter().map(|b| Interval { lo: b.lo + c, hi: b.hi + c }));
    }
    out
}

/// `B(0, R)` for `count` radii log-spaced over `[1e-3, 1e3]`.
pub fn origin_balls(count: usize) -> Vec<Interval> {
    (0..count)
        .map(|i| {
            let r = 1e-3 * 1e6f64.powf(i as f64 / (count - 1).max(1) as f64);
            Interval { lo: -r, hi: r }
        })
        .collect()
}

/// Critical index `inf{q > 1 : w ∈ A_q}` for the closed-form weights.
pub fn critical_index(w: &Weight) -> Result<f64> {
    match w {
        Weight::Power { a } => Ok((1.0 + a).max(1.0)),
        Weight::Constant { .. } => Ok(1.0),
        Weight::EvenMonotone { .. } => Err(Error::Unsupported("critical index of a sampled weight has no closed form".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measures() {
        let m = weight_measure(&Weight::power(1.0).unwrap(), Interval::new(0.0, 1.0).unwrap());
        assert!((m.value - 0.5).abs() < 1e-12);
        let m = weight_measure(&Weight::one(), Interval::new(-2.0, 2.0).unwrap());
        assert_eq!(m.value, 4.0);
        let m = weight_measure(&Weight::power(-0.5).unwrap(), Interval::new(0.0, 1.0).unwrap());
        assert!((m.value - 2.0).abs() < 1e-10 && !m.divergent);
    }

    #[test]
    fn ap_examples() {
        let r = ap_characteristic(&Weight::one(), 3.0, &default_balls()).unwrap();
        assert_eq!(r.characteristic, 1.0);
        let w = Weight::power(0.5).unwrap();
        let r = ap_characteristic(&w, 2.0, &origin_balls(9)).unwrap();
        assert!(!r.divergent && (r.characteristic - 4.0 / 3.0).abs() < 1e-8, "{r:?}");
        let r = ap_characteristic(&w, 1.4, &origin_balls(9)).unwrap();
        assert!(r.divergent);
    }

    #[test]
    fn radial_moments_match_quadrature() {
        let w = Weight::power(0.7).unwrap();
        let m = radial_moment(&w, 1.0 - 4.0, 0.0, 0.0, 2.0);
        assert!(m.divergent);
        let m = radial_moment(&w, -0.2, -1.5, 1.0, f64::INFINITY);
        let q = integrate_flagged(|x: f64| x.abs().powf(-0.14 - 1.5), Interval { lo: 1.0, hi: f64::INFINITY }, &[], &QuadConfig::default());
        assert!((m.value - 2.0 * q.value).abs() < 1e-8 * m.value);
        assert!(radial_moment(&Weight::one(), 1.0, -2.0, 1.0, f64::INFINITY).value == 2.0);
    }

    #[test]
    fn critical_indices() {
        assert_eq!(critical_index(&Weight::power(0.5).unwrap()).unwrap(), 1.5);
        assert_eq!(critical_index(&Weight::one()).unwrap(), 1.0);
        assert_eq!(critical_index(&Weight::power(0.0).unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn monotone_profile_validated() {
        let g = LogGrid::new(0.1, 10.0, 5).unwrap();
        assert!(MonotoneProfile::from_fn(g, |r| r, Direction::Increasing).is_ok());
        assert!(MonotoneProfile::from_fn(g, |r| r, Direction::Decreasing).is_err());
        let p = MonotoneProfile::from_fn(g, |r| r, Direction::Increasing).unwrap();
        assert_eq!(p.eval(100.0), 10.0);
        assert_eq!(p.eval(0.01), 0.1);
    }
}
