//! Degree-sequence arithmetic of (α,β) power-law graphs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zeta::zeta_unchecked;

/// Default guardrail on the number of nodes a degree sequence may expand to.
pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

/// Environment variable that overrides [`DEFAULT_NODE_CAP`].
pub const NODE_CAP_ENV: &str = "PLGTSP_NODE_CAP";

/// Node cap taken from `PLGTSP_NODE_CAP` when set and parseable.
pub fn node_cap_from_env() -> u64 {
    std::env::var(NODE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_CAP)
}

/// The pair (α, β): `e^α` sets the scale, `β` is the power-law exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawParams {
    alpha: f64,
    beta: f64,
}

impl PowerLawParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParams(format!("alpha must be > 0, got {alpha}")));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParams(format!("beta must be > 0, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `e^α`, the number of degree-1 nodes before flooring.
    pub fn scale(&self) -> f64 {
        self.alpha.exp()
    }

    /// Δ = ⌊e^(α/β)⌋, always at least 1.
    pub fn max_degree(&self) -> u64 {
        (snapped_floor((self.alpha / self.beta).exp()) as u64).max(1)
    }

    /// y_i = ⌊e^α / i^β⌋.
    pub fn count_at(&self, degree: u64) -> u64 {
        if degree == 0 || degree > self.max_degree() {
            return 0;
        }
        snapped_floor((self.alpha - self.beta * (degree as f64).ln()).exp()) as u64
    }
}

/// Floor that treats values within rounding noise of an integer as that
/// integer, so `e^(ln 100) / 10^2` counts as 1 rather than 0.
pub(crate) fn snapped_floor(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        x.floor()
    }
}

/// Node counts per degree for a deterministic (α,β) power-law graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence {
    /// `counts[i - 1]` is the number of nodes of degree `i`.
    counts: Vec<u64>,
}

impl DegreeSequence {
    pub fn max_degree(&self) -> u64 {
        self.counts.len() as u64
    }

    /// y_i for degree `i` (zero outside 1..=Δ).
    pub fn count(&self, degree: u64) -> u64 {
        if degree == 0 {
            return 0;
        }
        self.counts.get(degree as usize - 1).copied().unwrap_or(0)
    }

    /// `(degree, count)` pairs for every degree 1..=Δ.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().enumerate().map(|(i, &c)| (i as u64 + 1, c))
    }

    pub fn node_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Σ i·y_i.
    pub fn volume(&self) -> u64 {
        self.iter().map(|(d, c)| d * c).sum()
    }

    /// Degree of every node, nodes ordered by increasing degree.
    pub fn node_degrees(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.node_count() as usize);
        for (d, c) in self.iter() {
            out.extend(std::iter::repeat_n(d as u32, c as usize));
        }
        out
    }
}

/// The exact degree sequence, refusing sequences larger than `node_cap`.
pub fn degree_sequence(params: &PowerLawParams, node_cap: u64) -> Result<DegreeSequence> {
    let max_degree = params.max_degree();
    let mut counts = Vec::new();
    let mut total: u64 = 0;
    for i in 1..=max_degree {
        let y = params.count_at(i);
        total = total.saturating_add(y);
        if total > node_cap {
            return Err(Error::NodeCap {
                needed: estimate_nodes(params).max(total as f64) as u64,
                cap: node_cap,
            });
        }
        counts.push(y);
    }
    Ok(DegreeSequence { counts })
}

fn estimate_nodes(params: &PowerLawParams) -> f64 {
    asymptotic_counts(params).0
}

/// Regime-dependent estimates `(n, m)` of node and edge counts.
pub fn asymptotic_counts(params: &PowerLawParams) -> (f64, f64) {
    let (alpha, beta) = (params.alpha, params.beta);
    let scale = alpha.exp();
    let n = if beta > 1.0 {
        zeta_unchecked(beta) * scale
    } else if beta == 1.0 {
        alpha * scale
    } else {
        (alpha / beta).exp() / (1.0 - beta)
    };
    let m = if beta > 2.0 {
        0.5 * zeta_unchecked(beta - 1.0) * scale
    } else if beta == 2.0 {
        0.25 * alpha * scale
    } else {
        0.5 * (2.0 * alpha / beta).exp() / (2.0 - beta)
    };
    (n, m)
}

/// vol([a, b]) = Σ_{i=a..b} y_i · i, exact.
pub fn interval_volume(params: &PowerLawParams, a: u64, b: u64) -> Result<u64> {
    let max_degree = params.max_degree();
    if a < 1 || a > b || b > max_degree {
        return Err(Error::Range(format!(
            "need 1 <= a <= b <= {max_degree}, got a={a}, b={b}"
        )));
    }
    Ok((a..=b).map(|i| params.count_at(i) * i).sum())
}

/// Upper estimate `e^(2α/β) / ((β-2) x^(β-2))` on vol([xΔ, Δ]) for β > 2.
pub fn volume_upper_bound(params: &PowerLawParams, x: f64) -> Result<f64> {
    let beta = params.beta;
    if !(beta > 2.0) {
        return Err(Error::Domain(format!("volume bound needs beta > 2, got {beta}")));
    }
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Range(format!("x must lie in (0, 1], got {x}")));
    }
    Ok((2.0 * params.alpha / beta).exp() / ((beta - 2.0) * x.powf(beta - 2.0)))
}
