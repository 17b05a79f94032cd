//! Closed-form approximation ratios, expectations and inapproximability
//! bounds as functions of the power-law exponent β, plus curve sampling.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::PowerLawParams;
use crate::zeta::zeta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    MstGraphic,
    ChristofidesGraphic,
    MsGraphicStated,
    MsGraphicWithT,
    MuchaGraphic,
    OnetwoDet,
    OnetwoLarge,
    EkBetaGt2,
    OnetwoRandomGt2,
    #[serde(rename = "onetwo_random_1to2")]
    OnetwoRandom1to2,
    OnetwoRandomEq2,
    LbSimple,
    LbPacking,
    #[serde(rename = "ref_7_5")]
    Ref7_5,
    #[serde(rename = "ref_8_7")]
    Ref8_7,
}

impl BoundId {
    pub const ALL: [BoundId; 15] = [
        BoundId::MstGraphic,
        BoundId::ChristofidesGraphic,
        BoundId::MsGraphicStated,
        BoundId::MsGraphicWithT,
        BoundId::MuchaGraphic,
        BoundId::OnetwoDet,
        BoundId::OnetwoLarge,
        BoundId::EkBetaGt2,
        BoundId::OnetwoRandomGt2,
        BoundId::OnetwoRandom1to2,
        BoundId::OnetwoRandomEq2,
        BoundId::LbSimple,
        BoundId::LbPacking,
        BoundId::Ref7_5,
        BoundId::Ref8_7,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::MstGraphic => "mst_graphic",
            BoundId::ChristofidesGraphic => "christofides_graphic",
            BoundId::MsGraphicStated => "ms_graphic_stated",
            BoundId::MsGraphicWithT => "ms_graphic_with_t",
            BoundId::MuchaGraphic => "mucha_graphic",
            BoundId::OnetwoDet => "onetwo_det",
            BoundId::OnetwoLarge => "onetwo_large",
            BoundId::EkBetaGt2 => "ek_beta_gt2",
            BoundId::OnetwoRandomGt2 => "onetwo_random_gt2",
            BoundId::OnetwoRandom1to2 => "onetwo_random_1to2",
            BoundId::OnetwoRandomEq2 => "onetwo_random_eq2",
            BoundId::LbSimple => "lb_simple",
            BoundId::LbPacking => "lb_packing",
            BoundId::Ref7_5 => "ref_7_5",
            BoundId::Ref8_7 => "ref_8_7",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            BoundId::MstGraphic => "2 zeta(b) / max(2, zeta(b) + 1/2)",
            BoundId::ChristofidesGraphic => "1/2 + zeta(b) / max(2, zeta(b) + 1/2)",
            BoundId::MsGraphicStated => {
                "(2/3 zeta(b-1) + 2/3 zeta(b) + 5/6) / (1/2 + max(2, zeta(b) + 1/2))"
            }
            BoundId::MsGraphicWithT => {
                "(2/3 zeta(b-1) + 2/3 zeta(b) + 5/6 - 2/3 t(b)) / (1/2 + max(2, zeta(b) + 1/2)), \
                 t(b) = [(b-2)(zeta(b-1)/2 - zeta(b) + 1)]^((b-1)/(b-2)) / (b-1)"
            }
            BoundId::MuchaGraphic => "10/9 + (zeta(b)/3) / max(2, zeta(b) + 1/2)",
            BoundId::OnetwoDet => "(11/9 zeta(b) + 29/72) / (zeta(b) + 1/2)",
            BoundId::OnetwoLarge => "(2 zeta(b) + 1/2 zeta(b-1) - 1) / (zeta(b) + 1/2)",
            BoundId::EkBetaGt2 => {
                "1/2 + max(0, (1/((b-2)(b-1)) - 1/(4 zeta(b-1))) / (zeta(b-1)^(b-1) 2^(b-1))) \
                 + max(0, 2^(-b(b-1)) zeta(b-1)^(1-b) / ((b-1)(b-2)) + zeta(b-1)^(-b) (2^(-(b^2+1)) - 2^(-2b)))"
            }
            BoundId::OnetwoRandomGt2 => "(11/9 zeta(b) + 29/36 E(b)) / (zeta(b) + E(b))",
            BoundId::OnetwoRandom1to2 => "(11/9 zeta(b) + 29/36 * 5/4) / (zeta(b) + 5/4)",
            BoundId::OnetwoRandomEq2 => "(11/9 zeta(2) + 29/36 * 5/8) / (zeta(2) + 5/8)",
            BoundId::LbSimple => {
                "1 + 1/(D (zeta(b) + 1/2)), D = 3^b 516 for b <= b*, 4^b 36 above, \
                 b* = ln(516/36)/ln(4/3)"
            }
            BoundId::LbPacking => "1 + 1/((zeta(b) + 1/2) 3^(b-1) 2(b-1) 354)",
            BoundId::Ref7_5 => "7/5",
            BoundId::Ref8_7 => "8/7",
        }
    }

    pub fn validity(self) -> Validity {
        match self {
            BoundId::MsGraphicStated | BoundId::MsGraphicWithT => Validity {
                lo: 2.0,
                lo_closed: false,
                hi: 2.48,
                hi_closed: true,
            },
            BoundId::OnetwoLarge => Validity::above(onetwo_large_threshold()),
            BoundId::EkBetaGt2 | BoundId::OnetwoRandomGt2 => Validity::above(2.0),
            BoundId::OnetwoRandom1to2 => Validity {
                lo: 1.0,
                lo_closed: false,
                hi: 2.0,
                hi_closed: false,
            },
            BoundId::OnetwoRandomEq2 => Validity {
                lo: 2.0,
                lo_closed: true,
                hi: 2.0,
                hi_closed: true,
            },
            _ => Validity::above(1.0),
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown bound id `{s}`")))
    }
}

/// An interval of β, possibly unbounded above.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Validity {
    pub lo: f64,
    pub lo_closed: bool,
    pub hi: f64,
    pub hi_closed: bool,
}

impl Validity {
    fn above(lo: f64) -> Validity {
        Validity {
            lo,
            lo_closed: false,
            hi: f64::INFINITY,
            hi_closed: false,
        }
    }

    pub fn contains(&self, beta: f64) -> bool {
        let lo_ok = if self.lo_closed {
            beta >= self.lo
        } else {
            beta > self.lo
        };
        let hi_ok = if self.hi_closed {
            beta <= self.hi
        } else {
            beta < self.hi
        };
        beta.is_finite() && lo_ok && hi_ok
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        if self.hi.is_infinite() {
            write!(f, "{open}{}, inf)", self.lo)
        } else {
            write!(f, "{open}{}, {}{close}", self.lo, self.hi)
        }
    }
}

/// Root of `ζ(β−1) = 2`; above it the degree-1 matching bound is positive.
pub fn onetwo_large_threshold() -> f64 {
    // ζ is decreasing on (1, ∞); ζ(1.5) > 2 > ζ(2).
    let (mut lo, mut hi) = (2.5_f64, 3.0_f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if zeta(mid - 1.0).unwrap_or(f64::INFINITY) > 2.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Exponent where `3^β·516 = 4^β·36`.
pub fn beta_star() -> f64 {
    (516.0_f64 / 36.0).ln() / (4.0_f64 / 3.0).ln()
}

/// Per-`e^α` size of the high-degree interval that lifts the removable set.
pub fn t_beta(beta: f64) -> Result<f64> {
    if !(beta > 2.0) {
        return Err(Error::Domain(format!("t_beta needs beta > 2, got {beta}")));
    }
    let base = (beta - 2.0) * (zeta(beta - 1.0)? / 2.0 - zeta(beta)? + 1.0);
    if base < 0.0 {
        return Err(Error::Domain(format!("t_beta base negative at beta {beta}")));
    }
    Ok(base.powf((beta - 1.0) / (beta - 2.0)) / (beta - 1.0))
}

/// Expected degree-1 excess per `e^α`, before clamping.
pub fn lemma5_term(beta: f64) -> Result<f64> {
    if !(beta > 2.0) {
        return Err(Error::Domain(format!("needs beta > 2, got {beta}")));
    }
    let z1 = zeta(beta - 1.0)?;
    let num = 1.0 / ((beta - 2.0) * (beta - 1.0)) - 1.0 / (4.0 * z1);
    Ok(num / (z1.powf(beta - 1.0) * 2f64.powf(beta - 1.0)))
}

/// Expected degree-2 excess per `e^α`.
pub fn lemma6_term(beta: f64) -> Result<f64> {
    if !(beta > 2.0) {
        return Err(Error::Domain(format!("needs beta > 2, got {beta}")));
    }
    let z1 = zeta(beta - 1.0)?;
    let first = 2f64.powf(-beta * (beta - 1.0)) * z1.powf(1.0 - beta) / ((beta - 1.0) * (beta - 2.0));
    let second = z1.powf(-beta) * (2f64.powf(-(beta * beta + 1.0)) - 2f64.powf(-2.0 * beta));
    Ok(first + second)
}

/// Expected 2-edges of the optimal cover per `e^α`, for β > 2.
///
/// Both excess terms bound nonnegative counts, so each is clamped at 0. The
/// degree-1 term goes negative just above β = 2, the degree-2 term for
/// large β.
pub fn e_k(beta: f64) -> Result<f64> {
    Ok(0.5 + lemma5_term(beta)?.max(0.0) + lemma6_term(beta)?.max(0.0))
}

fn graphic_denominator(z: f64) -> f64 {
    (z + 0.5).max(2.0)
}

fn random_ratio(z: f64, e: f64) -> f64 {
    (11.0 / 9.0 * z + 29.0 / 36.0 * e) / (z + e)
}

fn lb_ratio(d: f64, z: f64) -> f64 {
    let denom = d * (z + 0.5);
    (denom + 1.0) / denom
}

/// `3^β·516` below β*, `4^β·36` above.
pub fn lb_simple_scale(beta: f64) -> f64 {
    if beta <= beta_star() {
        3f64.powf(beta) * 516.0
    } else {
        4f64.powf(beta) * 36.0
    }
}

pub fn lb_packing_scale(beta: f64) -> f64 {
    3f64.powf(beta - 1.0) * 2.0 * (beta - 1.0) * 354.0
}

pub fn evaluate_bound(id: BoundId, beta: f64) -> Result<f64> {
    let validity = id.validity();
    if !validity.contains(beta) {
        return Err(Error::OutOfValidity {
            id: id.as_str().to_string(),
            interval: validity.to_string(),
            beta,
        });
    }
    let z = || zeta(beta);
    let value = match id {
        BoundId::MstGraphic => {
            let z = z()?;
            2.0 * z / graphic_denominator(z)
        }
        BoundId::ChristofidesGraphic => {
            let z = z()?;
            0.5 + z / graphic_denominator(z)
        }
        BoundId::MsGraphicStated => {
            let z = z()?;
            ms_numerator(beta, z)? / (0.5 + graphic_denominator(z))
        }
        BoundId::MsGraphicWithT => {
            let z = z()?;
            (ms_numerator(beta, z)? - 2.0 / 3.0 * t_beta(beta)?) / (0.5 + graphic_denominator(z))
        }
        BoundId::MuchaGraphic => {
            let z = z()?;
            10.0 / 9.0 + (z / 3.0) / graphic_denominator(z)
        }
        BoundId::OnetwoDet => {
            let z = z()?;
            (11.0 / 9.0 * z + 29.0 / 72.0) / (z + 0.5)
        }
        BoundId::OnetwoLarge => {
            let z = z()?;
            (2.0 * z + 0.5 * zeta(beta - 1.0)? - 1.0) / (z + 0.5)
        }
        BoundId::EkBetaGt2 => e_k(beta)?,
        BoundId::OnetwoRandomGt2 => random_ratio(z()?, e_k(beta)?),
        BoundId::OnetwoRandom1to2 => random_ratio(z()?, 5.0 / 4.0),
        BoundId::OnetwoRandomEq2 => random_ratio(z()?, 5.0 / 8.0),
        BoundId::LbSimple => lb_ratio(lb_simple_scale(beta), z()?),
        BoundId::LbPacking => lb_ratio(lb_packing_scale(beta), z()?),
        BoundId::Ref7_5 => 1.4,
        BoundId::Ref8_7 => 8.0 / 7.0,
    };
    Ok(value)
}

fn ms_numerator(beta: f64, z: f64) -> Result<f64> {
    Ok(2.0 / 3.0 * zeta(beta - 1.0)? + 2.0 / 3.0 * z + 5.0 / 6.0)
}

/// Bisection root of `A(β) − B(β)` on `[lo, hi]`, to `1e-6` in β.
pub fn crossover(a: BoundId, b: BoundId, lo: f64, hi: f64) -> Result<f64> {
    let diff = |beta: f64| -> Result<f64> { Ok(evaluate_bound(a, beta)? - evaluate_bound(b, beta)?) };
    let (mut lo, mut hi) = (lo, hi);
    let f_lo = diff(lo)?;
    let f_hi = diff(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        let f_mid = diff(mid)?;
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioCurve {
    pub bound_id: BoundId,
    pub samples: Vec<(f64, f64)>,
}

impl RatioCurve {
    /// Data rows `beta,value,bound_id`, without header.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for (beta, value) in &self.samples {
            out.push_str(&format!("{beta:.6},{value:.6},{}\n", self.bound_id));
        }
        out
    }
}

pub const CSV_HEADER: &str = "beta,value,bound_id\n";

pub fn curves_to_csv(curves: &[RatioCurve]) -> String {
    let mut out = String::from(CSV_HEADER);
    for c in curves {
        out.push_str(&c.csv_rows());
    }
    out
}

/// Samples `lo, lo+step, …, hi`; the grid has `round((hi−lo)/step)+1`
/// points and the last one is pinned to `hi`.
pub fn emit_curve(id: BoundId, lo: f64, hi: f64, step: f64) -> Result<RatioCurve> {
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Range(format!("need lo <= hi, got [{lo}, {hi}]")));
    }
    let count = if hi == lo {
        1
    } else {
        if !(step > 0.0) {
            return Err(Error::Range(format!("step must be positive, got {step}")));
        }
        ((hi - lo) / step).round() as usize + 1
    };
    let mut samples = Vec::with_capacity(count);
    for i in 0..count {
        let beta = if i + 1 == count { hi } else { lo + i as f64 * step };
        samples.push((beta, evaluate_bound(id, beta)?));
    }
    Ok(RatioCurve {
        bound_id: id,
        samples,
    })
}

/// Curve sets matching the published plots.
pub fn figure_spec(name: &str) -> Option<Vec<(BoundId, f64, f64)>> {
    use BoundId::*;
    let spec = match name {
        "graphic" => vec![
            (MstGraphic, 1.25, 2.48),
            (ChristofidesGraphic, 1.25, 2.48),
            (MuchaGraphic, 1.25, 2.48),
            (Ref7_5, 1.25, 2.48),
            (MsGraphicStated, 2.4, 2.48),
            (MsGraphicWithT, 2.4, 2.48),
        ],
        "onetwo_det" => vec![
            (OnetwoDet, 1.1, 9.0),
            (OnetwoLarge, 2.73, 9.0),
            (Ref8_7, 1.1, 9.0),
        ],
        "onetwo_random" => vec![(OnetwoRandomGt2, 2.1, 7.0), (OnetwoDet, 2.1, 7.0)],
        "onetwo_random_small" => vec![
            (OnetwoRandom1to2, 1.5, 1.99),
            (OnetwoRandomEq2, 2.0, 2.0),
            (OnetwoRandomGt2, 2.01, 3.0),
        ],
        "lower" => vec![(LbSimple, 1.1, 3.0), (LbPacking, 1.1, 3.0)],
        _ => return None,
    };
    Some(spec)
}

pub const FIGURES: [&str; 5] = [
    "graphic",
    "onetwo_det",
    "onetwo_random",
    "onetwo_random_small",
    "lower",
];

pub fn figure_csv(name: &str, step: f64) -> Result<String> {
    let spec = figure_spec(name).ok_or_else(|| Error::Parse(format!("unknown figure `{name}`")))?;
    let curves = spec
        .into_iter()
        .map(|(id, lo, hi)| emit_curve(id, lo, hi, step))
        .collect::<Result<Vec<_>>>()?;
    Ok(curves_to_csv(&curves))
}

/// `max{2, ζ(β)+½}·e^α`, a lower bound on any graphic tour.
pub fn analytic_tour_lower_bound(params: &PowerLawParams) -> Result<f64> {
    tour_lower_bound_at(params.alpha(), params.beta())
}

/// Same formula on raw `(α, β)`; accepts `α = 0`, which no graph has.
pub fn tour_lower_bound_at(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be >= 0, got {alpha}")));
    }
    let z = zeta(beta)?;
    Ok(graphic_denominator(z) * alpha.exp())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: BoundId,
    pub validity: String,
    pub formula: String,
}

pub fn catalog() -> Vec<CatalogEntry> {
    BoundId::ALL
        .iter()
        .map(|&id| CatalogEntry {
            id,
            validity: id.validity().to_string(),
            formula: id.formula().to_string(),
        })
        .collect()
}
