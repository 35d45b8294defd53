//! Exponent tuples `(p, q, β, α, γ)` and their conjugates.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

const RELATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentSet {
    pub p: f64,
    pub q: f64,
    #[serde(default)]
    pub beta: f64,
    /// Power of the source weight `|x|^α`.
    #[serde(default)]
    pub alpha: f64,
    /// Power of the target weight `|x|^γ`.
    #[serde(default)]
    pub gamma: f64,
}

/// `p/(p-1)`; infinite at `p = 1` and undefined below.
pub fn conjugate(p: f64) -> f64 {
    if p > 1.0 {
        p / (p - 1.0)
    } else if p == 1.0 {
        f64::INFINITY
    } else {
        f64::NAN
    }
}

impl ExponentSet {
    pub fn new(p: f64, q: f64, beta: f64, alpha: f64, gamma: f64) -> Result<Self> {
        if !(p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite()) {
            return domain(format!("exponents need 0 < p, q < ∞, got p={p}, q={q}"));
        }
        if !(0.0..1.0).contains(&beta) {
            return domain(format!("β must lie in [0, 1), got {beta}"));
        }
        if !(alpha > -1.0 && gamma > -1.0) {
            return domain(format!("weight powers need α, γ > -1, got α={alpha}, γ={gamma}"));
        }
        Ok(Self { p, q, beta, alpha, gamma })
    }

    /// Unweighted exponents with `1/p - 1/q = β`, given `q` and `β`.
    pub fn diagonal(q: f64, beta: f64) -> Result<Self> {
        let inv_p = 1.0 / q + beta;
        if !(inv_p < 1.0) {
            return domain(format!("1/q + β = {inv_p} leaves no p > 1"));
        }
        Self::new(1.0 / inv_p, q, beta, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.p, self.q, self.beta, self.alpha, self.gamma).map(|_| ())
    }

    pub fn p_prime(&self) -> f64 {
        conjugate(self.p)
    }

    pub fn q_prime(&self) -> f64 {
        conjugate(self.q)
    }

    /// Young exponent: `1/s = 1 + 1/q - 1/p`.
    pub fn young_s(&self) -> f64 {
        1.0 / (1.0 + 1.0 / self.q - 1.0 / self.p)
    }

    /// `1/p - 1/q - β`.
    pub fn diagonal_defect(&self) -> f64 {
        1.0 / self.p - 1.0 / self.q - self.beta
    }

    /// `(1+α)/p - (1+γ)/q - β`.
    pub fn scaling_defect(&self) -> f64 {
        (1.0 + self.alpha) / self.p - (1.0 + self.gamma) / self.q - self.beta
    }

    pub fn is_lebesgue_diagonal(&self) -> bool {
        self.diagonal_defect().abs() <= RELATION_TOL
    }

    pub fn is_hardy_scaling(&self) -> bool {
        self.scaling_defect().abs() <= RELATION_TOL
    }

    pub fn require_hardy_scaling(&self) -> Result<()> {
        if !self.is_hardy_scaling() {
            return domain(format!("(1+α)/p - (1+γ)/q = β fails by {:e}", self.scaling_defect()));
        }
        Ok(())
    }
}
