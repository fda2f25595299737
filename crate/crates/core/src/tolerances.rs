//! Comparison tolerances and the MATCH/MISMATCH rule.

use std::fmt;

/// `|a − b| ≤ abs + rel · max(|a|, |b|)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol {
    pub abs: f64,
    pub rel: f64,
}

impl Tol {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    pub fn bound(&self, a: f64, b: f64) -> f64 {
        self.abs + self.rel * a.abs().max(b.abs())
    }

    pub fn matches(&self, a: f64, b: f64) -> bool {
        let gap = (a - b).abs();
        gap.is_finite() && gap <= self.bound(a, b)
    }
}

/// Tolerances used when checking quantities, split by how the reference is
/// produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// References evaluated in closed form (metric, connection, tensor laws).
    pub closed_form: Tol,
    /// References that pass through one or more differentiation layers.
    pub differentiated: Tol,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            closed_form: Tol::new(1e-10, 1e-10),
            differentiated: Tol::new(1e-8, 1e-8),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Mismatch,
}

impl Verdict {
    pub fn from_gap(tol: &Tol, published: f64, oracle: f64) -> Self {
        if tol.matches(published, oracle) {
            Verdict::Match
        } else {
            Verdict::Mismatch
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "MATCH",
            Verdict::Mismatch => "MISMATCH",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
