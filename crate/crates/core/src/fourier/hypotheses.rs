//! Integrability conditions on `Φ̂` (or on `g` with `Φ̂(ξ) = g(ξ²)`) used by the Hardy-space bounds.

use serde::{Deserialize, Serialize};

use super::Profile;
use crate::error::{domain, Result};
use crate::grid::Interval;
use crate::quad::{integrate_flagged, QuadConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisEntry {
    /// `"moment"` for `∫|D^a||ξ|^a`-type entries, `"shifted"` for the `m`-dependent ones.
    pub family: String,
    /// `(n, l)` for `Φ̂`, `(i, j)` for `g`.
    pub indices: (usize, usize),
    pub order: usize,
    pub power: f64,
    #[serde(with = "crate::grid::ext_real")]
    pub value: f64,
    pub divergent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub profile: String,
    pub m: usize,
    pub entries: Vec<HypothesisEntry>,
    pub all_finite: bool,
    /// Largest value among the finite entries.
    pub max_value: f64,
    pub note: String,
}

impl HypothesisReport {
    pub fn divergent_entries(&self) -> Vec<&HypothesisEntry> {
        self.entries.iter().filter(|e| e.divergent).collect()
    }

    pub fn entry(&self, family: &str, indices: (usize, usize)) -> Option<&HypothesisEntry> {
        self.entries.iter().find(|e| e.family == family && e.indices == indices)
    }
}

fn weighted_abs(p: &Profile, order: usize, power: f64, domain: Interval) -> (f64, bool) {
    if p.is_zero() {
        return (0.0, false);
    }
    let f = |xi: f64| {
        let d = p.derivative(order, xi);
        if d == 0.0 {
            0.0
        } else {
            d.abs() * xi.abs().powf(power)
        }
    };
    let ext = p.extent(order);
    let dom = Interval { lo: domain.lo.max(-ext), hi: domain.hi.min(ext) };
    let cfg = QuadConfig::with_tol(1e-10);
    // Zero always splits the range, so the origin is probed from both sides.
    let v = integrate_flagged(f, dom, &p.breakpoints(), &cfg);
    let value = if v.divergent { f64::INFINITY } else { v.value };
    (value, v.divergent)
}

fn finish(profile: &Profile, m: usize, entries: Vec<HypothesisEntry>, note: &str) -> HypothesisReport {
    let all_finite = entries.iter().all(|e| !e.divergent && e.value.is_finite());
    let max_value = entries.iter().filter(|e| !e.divergent).map(|e| e.value).fold(0.0, f64::max);
    HypothesisReport { profile: profile.name(), m, entries, all_finite, max_value, note: note.into() }
}

fn check_order(p: &Profile, needed: usize) -> Result<()> {
    if let Some(have) = p.max_order() {
        if have < needed {
            return domain(format!("profile carries derivatives up to order {have}, need {needed}"));
        }
    }
    Ok(())
}

/// `∫|Φ̂^{(n)} ξ^n|` for `n ≤ m` and `∫|Φ̂^{(n+l)} ξ^{n+l-m-1}|` for `n ≤ m`, `l ≤ m+1`.
pub fn hypothesis_integrals_phi(khat: &Profile, m: usize) -> Result<HypothesisReport> {
    check_order(khat, 2 * m + 1)?;
    let line = Interval::real_line();
    let mut entries = Vec::new();
    for n in 0..=m {
        let (value, divergent) = weighted_abs(khat, n, n as f64, line);
        entries.push(HypothesisEntry { family: "moment".into(), indices: (n, 0), order: n, power: n as f64, value, divergent });
    }
    for n in 0..=m {
        for l in 0..=m + 1 {
            let order = n + l;
            let power = order as f64 - m as f64 - 1.0;
            let (value, divergent) = weighted_abs(khat, order, power, line);
            entries.push(HypothesisEntry { family: "shifted".into(), indices: (n, l), order, power, value, divergent });
        }
    }
    Ok(finish(
        khat,
        m,
        entries,
        "l ranges over 0..=m+1, the union over k = 0..=n of 0..=m+1-k",
    ))
}

/// `∫₀^∞|g^{(j)}|ξ^{j-1/2}` and `∫₀^∞|g^{(i+j)}|ξ^{i+j-m/2-1}` for `i ≤ ⌊m/2+1⌋`, `j ≤ ⌊(m+1)/2⌋`.
pub fn hypothesis_integrals_g(g: &Profile, m: usize) -> Result<HypothesisReport> {
    let i_max = m / 2 + 1;
    let j_max = (m + 1) / 2;
    check_order(g, i_max + j_max)?;
    let half = Interval::positive();
    let mut entries = Vec::new();
    for j in 0..=j_max {
        let power = j as f64 - 0.5;
        let (value, divergent) = weighted_abs(g, j, power, half);
        entries.push(HypothesisEntry { family: "moment".into(), indices: (0, j), order: j, power, value, divergent });
    }
    for i in 0..=i_max {
        for j in 0..=j_max {
            let order = i + j;
            let power = order as f64 - 0.5 * m as f64 - 1.0;
            let (value, divergent) = weighted_abs(g, order, power, half);
            entries.push(HypothesisEntry { family: "shifted".into(), indices: (i, j), order, power, value, divergent });
        }
    }
    Ok(finish(g, m, entries, "i ≤ ⌊m/2 + 1⌋, j ≤ ⌊(m + 1)/2⌋"))
}
