//! Verdict records shared by every verification routine.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub provenance: String,
}

impl Check {
    /// Passes iff `lower·(1 - tol) ≤ value ≤ upper·(1 + tol)`, bounds taken as absolute when zero.
    pub fn bracket(name: &str, value: f64, lower: Option<f64>, upper: Option<f64>, tolerance: f64, provenance: &str) -> Self {
        let lo_ok = lower.map_or(true, |l| value >= l - tolerance * l.abs().max(f64::MIN_POSITIVE));
        let hi_ok = upper.map_or(true, |u| value <= u + tolerance * u.abs());
        let pass = value.is_finite() && lo_ok && hi_ok;
        Self { name: name.into(), value, lower, upper, tolerance, pass, provenance: provenance.into() }
    }

    /// Passes iff `|value - target| ≤ tol`.
    pub fn near(name: &str, value: f64, target: f64, tolerance: f64, provenance: &str) -> Self {
        let pass = (value - target).abs() <= tolerance;
        Self {
            name: name.into(),
            value,
            lower: Some(target - tolerance),
            upper: Some(target + tolerance),
            tolerance,
            pass,
            provenance: provenance.into(),
        }
    }

    pub fn flag(name: &str, ok: bool, provenance: &str) -> Self {
        Self {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            lower: Some(1.0),
            upper: None,
            tolerance: 0.0,
            pass: ok,
            provenance: provenance.into(),
        }
    }

    /// Informational quantity, always passing.
    pub fn info(name: &str, value: f64, provenance: &str) -> Self {
        Self { name: name.into(), value, lower: None, upper: None, tolerance: 0.0, pass: true, provenance: provenance.into() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) -> &mut Self {
        self.checks.push(c);
        self
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.get(name).map(|c| c.value)
    }
}
