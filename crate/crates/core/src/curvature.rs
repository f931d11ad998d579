//! Weil-Petersson curvature bounds from systole, genus and puncture data.
//!
//! Every query evaluates all applicable source bounds and returns the best
//! one, keeping a record of where each number came from.

use crate::bounds::{expr, k0, EPS2};
use crate::error::{Error, Result};
use crate::interval::Interval;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureQuery {
    pub genus: u32,
    pub punctures: u32,
    pub systole: f64,
}

impl CurvatureQuery {
    pub fn new(genus: u32, punctures: u32, systole: f64) -> Result<Self> {
        if 3 * genus + punctures < 5 {
            return Err(Error::InvalidQuery(format!(
                "3g + n = {} must be at least 5",
                3 * genus + punctures
            )));
        }
        if !(systole > 0.0 && systole.is_finite()) {
            return Err(Error::InvalidQuery(format!("systole {systole} must be positive")));
        }
        Ok(CurvatureQuery {
            genus,
            punctures,
            systole,
        })
    }

    /// Complex dimension `3g - 3 + n`.
    pub fn dimension(&self) -> f64 {
        3.0 * self.genus as f64 - 3.0 + self.punctures as f64
    }

    pub fn is_thin(&self) -> bool {
        self.systole <= 2.0 * EPS2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RicMode {
    /// `-4 / l`.
    Rounded,
    /// `-2 K0 / l = -3.3394 / l`.
    Sharp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Thin,
    Thick,
}

/// One candidate bound and whether it was the one reported.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Source {
    pub quantity: &'static str,
    pub source: &'static str,
    pub value: f64,
    pub selected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureBounds {
    pub query: CurvatureQuery,
    pub regime: Regime,
    pub ric_lo: f64,
    pub ric_lo_rounded: f64,
    pub sca_lo: Option<f64>,
    pub sca_hi: Option<f64>,
    pub sec_lo: Option<f64>,
    pub sec_perp_lo: Option<f64>,
    pub constants_used: Vec<Source>,
    pub notes: Vec<String>,
}

fn c_sq(r: f64) -> f64 {
    expr::c_teo(r).powi(2)
}

fn best(quantity: &'static str, candidates: Vec<(&'static str, f64)>, log: &mut Vec<Source>) -> Option<f64> {
    let top = candidates.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let mut chosen = false;
    for (source, value) in &candidates {
        let selected = !chosen && *value == top;
        chosen |= selected;
        log.push(Source {
            quantity,
            source,
            value: *value,
            selected,
        });
    }
    (!candidates.is_empty()).then_some(top)
}

fn ric_candidates(q: &CurvatureQuery, mode: RicMode) -> Vec<(&'static str, f64)> {
    let l = q.systole;
    let mut out = Vec::new();
    if q.is_thin() {
        match mode {
            RicMode::Rounded => out.push(("thin systole, Ric >= -4/l", -4.0 / l)),
            RicMode::Sharp => out.push(("thin systole, Ric >= -2 K0/l", -2.0 * k0() / l)),
        }
    }
    out.push(("injectivity bound, Ric >= -2 C(l/2)^2", -2.0 * c_sq(l / 2.0)));
    out
}

/// Ricci curvature lower bound for unit tangent vectors.
pub fn ric_lower(q: &CurvatureQuery, mode: RicMode) -> f64 {
    best("ric_lo", ric_candidates(q, mode), &mut Vec::new()).expect("the injectivity bound always applies")
}

fn sca_lower_candidates(q: &CurvatureQuery) -> Vec<(&'static str, f64)> {
    let l = q.systole;
    let g = q.genus as f64;
    let mut out = Vec::new();
    if q.is_thin() {
        out.push(("thin systole, Sca >= -4 (3g-3+n)/l", -4.0 * q.dimension() / l));
        if q.punctures == 0 {
            out.push(("thin systole, closed, Sca >= -11 (g-1)/l", -11.0 * (g - 1.0) / l));
        }
    }
    if q.punctures == 0 && l >= EPS2 {
        out.push(("thick part, closed, Sca >= -(6g-6) C(eps2)^2", -(6.0 * g - 6.0) * c_sq(EPS2)));
    }
    out
}

/// Scalar curvature lower bound, the best of the applicable sources.
pub fn sca_lower(q: &CurvatureQuery) -> Result<f64> {
    best("sca_lo", sca_lower_candidates(q), &mut Vec::new()).ok_or(Error::OutOfHypothesis {
        what: "scalar curvature lower bound for punctured surfaces",
        systole: q.systole,
    })
}

/// `Sca <= -3 (3g - 2) / (4 pi)`, stated for closed surfaces.
pub fn sca_upper(q: &CurvatureQuery) -> Result<f64> {
    if q.punctures == 0 {
        Ok(-3.0 * (3.0 * q.genus as f64 - 2.0) / (4.0 * PI))
    } else {
        Err(Error::InvalidQuery("the scalar curvature upper bound is stated for closed surfaces".into()))
    }
}

/// Sectional curvature lower bound `-4 / l`.
pub fn sec_lower(q: &CurvatureQuery) -> Result<f64> {
    if q.is_thin() {
        Ok(-4.0 / q.systole)
    } else {
        Err(Error::OutOfHypothesis {
            what: "sectional curvature lower bound",
            systole: q.systole,
        })
    }
}

/// Sectional curvature lower bound on planes orthogonal to the short
/// geodesic length gradients.
pub fn sec_perp_lower() -> f64 {
    -4.0
}

/// Two-sided estimate of holomorphic sectional curvature from the quartic
/// integral: `[-2 Q, -2 Q / 3]` with `Q = l4 / wp_norm^4`.
pub fn holk_envelope(l4: f64, wp_norm: f64) -> Result<Interval> {
    if !(wp_norm > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let q = l4 / wp_norm.powi(4);
    Ok(Interval::new(-2.0 * q, -2.0 * q / 3.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThinRegion {
    Thick,
    CuspThin,
    CollarThin,
}

/// Bound on `sum_i |mu_i|^2(z)` over an orthonormal basis.
pub fn pointwise_density_bound(region: ThinRegion, systole: f64) -> Result<f64> {
    match region {
        ThinRegion::Thick | ThinRegion::CuspThin => Ok(c_sq(EPS2)),
        ThinRegion::CollarThin if systole > 0.0 && systole <= 2.0 * EPS2 => Ok(k0() / systole),
        ThinRegion::CollarThin => Err(Error::OutOfHypothesis {
            what: "collar density bound",
            systole,
        }),
    }
}

/// `||mu(z)|| <= sqrt 2 ||mu||` for `mu` orthogonal to the short length
/// gradients.
pub fn perp_sup_bound() -> f64 {
    2f64.sqrt()
}

/// `||phi||_inf <= sqrt(2 / min(2 eps2, l)) ||phi||_2`.
pub fn systole_sup_bound(systole: f64) -> Result<f64> {
    if systole > 0.0 {
        Ok((2.0 / systole.min(2.0 * EPS2)).sqrt())
    } else {
        Err(Error::InvalidQuery(format!("systole {systole} must be positive")))
    }
}

/// All bounds for a query, with provenance.
pub fn curvature_bounds(q: &CurvatureQuery) -> CurvatureBounds {
    let mut log = Vec::new();
    let mut notes = Vec::new();
    let ric_lo = best("ric_lo", ric_candidates(q, RicMode::Sharp), &mut log).expect("always applicable");
    let ric_lo_rounded = best("ric_lo_rounded", ric_candidates(q, RicMode::Rounded), &mut log).expect("always applicable");
    let sca_lo = best("sca_lo", sca_lower_candidates(q), &mut log);
    if sca_lo.is_none() {
        notes.push("no scalar curvature lower bound applies to a punctured surface with systole above 2 eps2".into());
    }
    let sca_hi = sca_upper(q).ok();
    if let Some(v) = sca_hi {
        log.push(Source {
            quantity: "sca_hi",
            source: "Sca <= -3 (3g-2)/(4 pi) for closed surfaces",
            value: v,
            selected: true,
        });
    }
    let (sec_lo, sec_perp_lo) = if q.is_thin() {
        log.push(Source {
            quantity: "sec_lo",
            source: "thin systole, K >= -4/l",
            value: -4.0 / q.systole,
            selected: true,
        });
        log.push(Source {
            quantity: "sec_perp_lo",
            source: "thin systole, K >= -4 on planes orthogonal to short length gradients",
            value: -4.0,
            selected: true,
        });
        (Some(-4.0 / q.systole), Some(sec_perp_lower()))
    } else {
        notes.push(format!(
            "systole {} exceeds 2 eps2 = {:.6}: the thin-systole sectional bounds do not apply; thick bounds reported",
            q.systole,
            2.0 * EPS2
        ));
        (None, None)
    };
    CurvatureBounds {
        query: *q,
        regime: if q.is_thin() { Regime::Thin } else { Regime::Thick },
        ric_lo,
        ric_lo_rounded,
        sca_lo,
        sca_hi,
        sec_lo,
        sec_perp_lo,
        constants_used: log,
        notes,
    }
}
