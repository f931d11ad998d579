//! Model thin parts: the collar annulus around a short geodesic and the
//! maximal cusp disk.
//!
//! Points are kept in `(log|z|, arg z)` coordinates so that nothing underflows
//! near the puncture or at the ends of a long annulus.

use crate::bounds::{self, EPS2};
use crate::error::{domain, Error, Result};
use crate::roots::{self, BISECT_ABS_TOL, BISECT_MAX_ITER};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A point in `(log|z|, arg z)` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    pub log_modulus: f64,
    pub argument: f64,
}

pub type CollarPoint = ModelPoint;

impl ModelPoint {
    pub fn new(log_modulus: f64, argument: f64) -> Self {
        ModelPoint {
            log_modulus,
            argument: argument.rem_euclid(2.0 * PI),
        }
    }
}

/// Standard collar about a closed geodesic of length `L`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CollarGeometry {
    length: f64,
    certified: bool,
}

impl CollarGeometry {
    /// Collar with `0 < L <= 2 eps2`.
    pub fn new(length: f64) -> Result<Self> {
        if length > 0.0 && length <= 2.0 * EPS2 {
            Ok(CollarGeometry {
                length,
                certified: true,
            })
        } else {
            Err(domain("collar core length", length, "(0, 2*eps2]"))
        }
    }

    /// Collar for any positive length. Results outside `L <= 2 eps2` carry no
    /// guarantee and are flagged by [`Self::is_certified`].
    pub fn exploratory(length: f64) -> Result<Self> {
        if length > 0.0 && length.is_finite() {
            Ok(CollarGeometry {
                length,
                certified: length <= 2.0 * EPS2,
            })
        } else {
            Err(domain("collar core length", length, "(0, inf)"))
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Distance from the core to the collar boundary.
    pub fn half_width(&self) -> f64 {
        (1.0 / (self.length / 2.0).sinh()).asinh()
    }

    /// Injectivity radius on the collar boundary, `asinh(cosh(L/2))`.
    pub fn boundary_inj(&self) -> f64 {
        (self.length / 2.0).cosh().asinh()
    }

    /// Strip half-height `h(L)` of the collar.
    pub fn h(&self) -> f64 {
        bounds::expr::h_collar(self.length)
    }

    /// Collar extent in `log|z|`.
    pub fn s(&self) -> f64 {
        bounds::expr::s_collar(self.length)
    }

    /// Extent of the ambient annulus in `log|z|`, `pi^2 / L`.
    pub fn annulus_extent(&self) -> f64 {
        PI * PI / self.length
    }

    /// Strip coordinate `y = L log|z| / (2 pi)`.
    pub fn strip_y(&self, log_modulus: f64) -> f64 {
        self.length * log_modulus / (2.0 * PI)
    }

    pub fn in_collar(&self, p: &ModelPoint) -> bool {
        p.log_modulus.abs() <= self.s()
    }

    pub fn in_annulus(&self, p: &ModelPoint) -> bool {
        p.log_modulus.abs() < self.annulus_extent()
    }

    /// Collar strip half-height at which the injectivity radius equals `t`,
    /// i.e. `acos(sinh(L/2)/sinh t)`. Zero for `t <= L/2`.
    pub fn strip_extent_below(&self, t: f64) -> f64 {
        let ratio = (self.length / 2.0).sinh() / t.sinh();
        if ratio >= 1.0 {
            0.0
        } else {
            ratio.acos().min(self.h())
        }
    }

    fn check_annulus(&self, what: &'static str, p: &ModelPoint) -> Result<()> {
        if self.in_annulus(p) {
            Ok(())
        } else {
            Err(domain(what, p.log_modulus, "|log|z|| < pi^2/L"))
        }
    }

    fn check_collar(&self, what: &'static str, p: &ModelPoint) -> Result<()> {
        if self.in_collar(p) {
            Ok(())
        } else {
            Err(domain(what, p.log_modulus, "|log|z|| <= s(L)"))
        }
    }
}

/// Maximal cusp region `0 < |z| < e^-pi`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct CuspGeometry;

impl CuspGeometry {
    pub fn contains(&self, p: &ModelPoint) -> bool {
        p.log_modulus <= -PI
    }

    /// `log|z|` at which the injectivity radius equals `t`.
    pub fn log_modulus_at_inj(&self, t: f64) -> f64 {
        -PI / t.sinh()
    }
}

/// Hyperbolic density `(L/2pi) / (|z| cos(L log|z| / 2pi))` on the ambient
/// annulus.
pub fn collar_metric_density(geom: &CollarGeometry, p: &ModelPoint) -> Result<f64> {
    geom.check_annulus("collar_metric_density", p)?;
    let l = geom.length;
    Ok(l / (2.0 * PI) * (-p.log_modulus).exp() / geom.strip_y(p.log_modulus).cos())
}

/// Injectivity radius on the collar, from `sinh r = sinh(L/2) / cos y`.
pub fn inj_collar(geom: &CollarGeometry, p: &ModelPoint) -> Result<f64> {
    geom.check_collar("inj_collar", p)?;
    Ok(inj_annulus_unchecked(geom, p.log_modulus))
}

/// Same relation extended to the ambient annulus.
pub fn inj_annulus(geom: &CollarGeometry, p: &ModelPoint) -> Result<f64> {
    geom.check_annulus("inj_annulus", p)?;
    Ok(inj_annulus_unchecked(geom, p.log_modulus))
}

pub(crate) fn inj_annulus_unchecked(geom: &CollarGeometry, log_modulus: f64) -> f64 {
    ((geom.length / 2.0).sinh() / geom.strip_y(log_modulus).cos()).asinh()
}

/// Injectivity radius in the cusp, `asinh(-pi / log|z|)`.
pub fn inj_cusp(log_modulus: f64) -> Result<f64> {
    if log_modulus <= -PI {
        Ok((-PI / log_modulus).asinh())
    } else {
        Err(domain("inj_cusp", log_modulus, "(-inf, -pi]"))
    }
}

/// Cusp density `-1 / (|z| log|z|)`.
pub fn cusp_metric_density(log_modulus: f64) -> Result<f64> {
    if log_modulus < 0.0 && log_modulus.is_finite() {
        Ok((-log_modulus).exp() / -log_modulus)
    } else {
        Err(domain("cusp_metric_density", log_modulus, "(-inf, 0)"))
    }
}

/// Distance `d` from a collar point of injectivity radius `r` to the collar
/// boundary, solving `sinh r = cosh(L/2) cosh d - sinh d`.
pub fn dist_to_collar_boundary(geom: &CollarGeometry, r: f64) -> Result<f64> {
    let (lo, hi) = (geom.length / 2.0, geom.boundary_inj());
    let slack = 1e-14 * hi;
    if !(r >= lo - slack && r <= hi + slack) {
        return Err(domain("dist_to_collar_boundary", r, "[L/2, asinh(cosh(L/2))]"));
    }
    let target = r.sinh();
    let ch = (geom.length / 2.0).cosh();
    let g = |d: f64| ch * d.cosh() - d.sinh() - target;
    let w = geom.half_width();
    if g(0.0) <= 0.0 {
        return Ok(0.0);
    }
    if g(w) >= 0.0 {
        return Ok(w);
    }
    roots::bisect("dist_to_collar_boundary", g, 0.0, w, BISECT_ABS_TOL, BISECT_MAX_ITER)
}

/// Radius at which the injectivity radius equals the distance to the collar
/// boundary, `atanh(cosh(L/2)/2)`.
pub fn self_consistent_radius(geom: &CollarGeometry) -> Result<f64> {
    let x = (geom.length / 2.0).cosh() / 2.0;
    if x < 1.0 {
        Ok(x.atanh())
    } else {
        Err(Error::Inconclusive {
            what: "self_consistent_radius",
            detail: format!("cosh(L/2)/2 = {x} >= 1"),
        })
    }
}
