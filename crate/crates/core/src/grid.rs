//! Symmetric logarithmic grids and functions sampled on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Closed or half-open interval with possibly infinite ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "ext_real")]
    pub lo: f64,
    #[serde(with = "ext_real")]
    pub hi: f64,
}

/// Serializes `±∞` as the strings `"inf"` / `"-inf"`, which JSON cannot carry as numbers.
pub mod ext_real {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.trim().to_ascii_lowercase().as_str() {
                "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
                "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
                other => other.parse().map_err(|_| de::Error::custom(format!("not a number: {t}"))),
            },
        }
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return domain(format!("interval needs lo < hi, got [{lo}, {hi}]"));
        }
        Ok(Self { lo, hi })
    }

    pub fn real_line() -> Self {
        Self { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn positive() -> Self {
        Self { lo: 0.0, hi: f64::INFINITY }
    }

    pub fn ball(center: f64, radius: f64) -> Result<Self> {
        Self::new(center - radius, center + radius)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }
}

/// Nodes `±exp(u_k)` with `u_k` uniform on `[ln r_min, ln r_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogGrid {
    r_min: f64,
    r_max: f64,
    n_per_side: usize,
}

pub fn make_log_grid(r_min: f64, r_max: f64, n_per_side: usize) -> Result<LogGrid> {
    LogGrid::new(r_min, r_max, n_per_side)
}

impl LogGrid {
    pub fn new(r_min: f64, r_max: f64, n_per_side: usize) -> Result<Self> {
        if !(r_min.is_finite() && r_max.is_finite() && r_min > 0.0 && r_min < r_max) {
            return domain(format!("log grid needs 0 < r_min < r_max < inf, got ({r_min}, {r_max})"));
        }
        if n_per_side < 2 {
            return domain("log grid needs at least two nodes per side");
        }
        Ok(Self { r_min, r_max, n_per_side })
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n_per_side(&self) -> usize {
        self.n_per_side
    }

    pub fn len(&self) -> usize {
        2 * self.n_per_side
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spacing in `u = ln|x|`.
    pub fn log_step(&self) -> f64 {
        (self.r_max.ln() - self.r_min.ln()) / (self.n_per_side - 1) as f64
    }

    /// `k`-th positive radius, `k = 0` being `r_min`.
    pub fn radius(&self, k: usize) -> f64 {
        if k == 0 {
            self.r_min
        } else if k + 1 == self.n_per_side {
            self.r_max
        } else {
            (self.r_min.ln() + k as f64 * self.log_step()).exp()
        }
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.n_per_side).map(|k| self.radius(k)).collect()
    }

    /// Node at sorted position `i`: negatives first, descending in magnitude.
    pub fn node(&self, i: usize) -> f64 {
        let n = self.n_per_side;
        if i < n {
            -self.radius(n - 1 - i)
        } else {
            self.radius(i - n)
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    /// Sorted index of the positive node with radius index `k`.
    pub fn positive_index(&self, k: usize) -> usize {
        self.n_per_side + k
    }

    pub fn negative_index(&self, k: usize) -> usize {
        self.n_per_side - 1 - k
    }

    /// Fractional radius index of `r`, if `r` lies within the grid span.
    pub(crate) fn locate(&self, r: f64) -> Option<(usize, f64)> {
        if !(r >= self.r_min && r <= self.r_max) {
            return None;
        }
        let pos = (r.ln() - self.r_min.ln()) / self.log_step();
        let k = (pos.floor() as usize).min(self.n_per_side - 2);
        let frac = (pos - k as f64).clamp(0.0, 1.0);
        Some((k, frac))
    }

    pub(crate) fn same_spacing(&self, other: &LogGrid) -> bool {
        let (a, b) = (self.log_step(), other.log_step());
        (a - b).abs() <= 1e-9 * a.max(b)
    }
}

/// Interpolates between two samples; geometric when both share a sign, so power laws are exact.
pub(crate) fn log_linear(a: f64, b: f64, frac: f64) -> f64 {
    if frac == 0.0 {
        return a;
    }
    if frac == 1.0 {
        return b;
    }
    if a > 0.0 && b > 0.0 {
        (a.ln() * (1.0 - frac) + b.ln() * frac).exp()
    } else if a < 0.0 && b < 0.0 {
        -((-a).ln() * (1.0 - frac) + (-b).ln() * frac).exp()
    } else {
        a * (1.0 - frac) + b * frac
    }
}

/// Real function sampled on a [`LogGrid`], zero off the grid span.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: LogGrid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: LogGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return domain(format!("expected {} values, got {}", grid.len(), values.len()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return domain("grid function values must be finite");
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: LogGrid) -> Self {
        Self { values: vec![0.0; grid.len()], grid }
    }

    pub fn from_fn(grid: LogGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    /// Even function from its profile on positive radii.
    pub fn even_from_profile(grid: LogGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |x| f(x.abs()))
    }

    pub fn grid(&self) -> &LogGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Values on the positive half, by radius index.
    pub fn positive_values(&self) -> &[f64] {
        &self.values[self.grid.n_per_side..]
    }

    pub fn eval(&self, x: f64) -> f64 {
        let r = x.abs();
        let Some((k, frac)) = self.grid.locate(r) else {
            return 0.0;
        };
        let n = self.grid.n_per_side;
        let (i0, i1) = if x > 0.0 {
            (n + k, n + k + 1)
        } else {
            (n - 1 - k, n - 2 - k)
        };
        log_linear(self.values[i0], self.values[i1], frac)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Relative discrete L² distance, in Haar measure on each half.
    pub fn relative_l2_distance(&self, other: &GridFunction) -> Result<f64> {
        if self.grid != other.grid {
            return domain("grid functions live on different grids");
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, (a, b)) in self.values.iter().zip(&other.values).enumerate() {
            let r = self.grid.node(i).abs();
            num += (a - b).powi(2) * r;
            den += b.powi(2) * r;
        }
        Ok(if den == 0.0 { num.sqrt() } else { (num / den).sqrt() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGridFunction {
    grid: LogGrid,
    values: Vec<Complex64>,
}

impl ComplexGridFunction {
    pub fn new(grid: LogGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return domain(format!("expected {} values, got {}", grid.len(), values.len()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return domain("grid function values must be finite");
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &LogGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn real_part(&self) -> GridFunction {
        GridFunction { grid: self.grid, values: self.values.iter().map(|z| z.re).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = make_log_grid(1e-3, 1e3, 2048).unwrap();
        assert_eq!(g.len(), 4096);
        let nodes = g.nodes();
        assert_eq!(nodes.iter().fold(f64::INFINITY, |m, x| m.min(x.abs())), 1e-3);
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(nodes.iter().all(|&x| x != 0.0));
    }

    #[test]
    fn degenerate_grid_rejected() {
        assert!(make_log_grid(1.0, 1.0, 10).is_err());
        assert!(make_log_grid(0.0, 1.0, 10).is_err());
        assert!(make_log_grid(1.0, 2.0, 1).is_err());
    }

    #[test]
    fn symmetric_nodes() {
        let g = make_log_grid(1e-6, 1e6, 4096).unwrap();
        let nodes = g.nodes();
        let n = nodes.len();
        for i in 0..n {
            assert_eq!(nodes[i], -nodes[n - 1 - i]);
        }
    }

    #[test]
    fn power_law_interpolation_exact() {
        let g = make_log_grid(1e-2, 1e2, 41).unwrap();
        let f = GridFunction::even_from_profile(g, |r| r.powf(-0.7)).unwrap();
        for x in [0.013, 0.5, 3.7, -42.0] {
            let want = f64::abs(x).powf(-0.7);
            assert!((f.eval(x) - want).abs() < 1e-12 * want);
        }
        assert_eq!(f.eval(200.0), 0.0);
        assert_eq!(f.eval(1e-3), 0.0);
    }
}
