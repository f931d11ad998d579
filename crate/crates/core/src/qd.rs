//! Finite Laurent-mode quadratic differentials `f(z) dz^2/z^2` on the collar
//! annulus and on the cusp disk.
//!
//! Coefficients are stored boundary-normalised: `c_n = a_n exp(n l_ref(n))`
//! where `l_ref` is the `log|z|` of the circle on which mode `n` is largest
//! inside the model (`+s(L)` for `n > 0`, `-s(L)` for `n < 0`, `-pi` on the
//! cusp). Raw coefficients overflow for short collars, normalised ones do not.

use crate::domains::{CollarGeometry, CuspGeometry, ModelPoint};
use crate::error::{domain, Error, Result};
use crate::quadrature::{self, QuadResult};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Domain {
    Collar(CollarGeometry),
    Cusp(CuspGeometry),
}

impl Domain {
    pub fn collar(length: f64) -> Result<Self> {
        CollarGeometry::new(length).map(Domain::Collar)
    }

    pub fn cusp() -> Self {
        Domain::Cusp(CuspGeometry)
    }

    /// `log|z|` of the reference circle for mode `n`.
    pub fn reference_log_modulus(&self, n: i32) -> f64 {
        match self {
            Domain::Collar(g) => match n.signum() {
                1 => g.s(),
                -1 => -g.s(),
                _ => 0.0,
            },
            Domain::Cusp(_) => -PI,
        }
    }

    pub fn admits(&self, n: i32) -> bool {
        match self {
            Domain::Collar(_) => true,
            Domain::Cusp(_) => n > 0,
        }
    }

    /// `|phi(p)| / sigma(p)` divided by `|f(p)|`.
    pub fn prefactor(&self, p: &ModelPoint) -> Result<f64> {
        self.check_point(p)?;
        Ok(match self {
            Domain::Collar(g) => {
                let c = g.strip_y(p.log_modulus).cos();
                (2.0 * PI / g.length()).powi(2) * c * c
            }
            Domain::Cusp(_) => p.log_modulus * p.log_modulus,
        })
    }

    pub fn check_point(&self, p: &ModelPoint) -> Result<()> {
        match self {
            Domain::Collar(g) if g.in_annulus(p) => Ok(()),
            Domain::Collar(_) => Err(domain("point", p.log_modulus, "|log|z|| < pi^2/L")),
            Domain::Cusp(c) if c.contains(p) => Ok(()),
            Domain::Cusp(_) => Err(domain("point", p.log_modulus, "(-inf, -pi]")),
        }
    }
}

/// Integration region.
///
/// `Full` is the standard collar or maximal cusp. `Ambient` is the whole
/// covering surface (the annulus `|log|z|| < pi^2/L`, or the punctured unit
/// disk), which contains every embedded injectivity ball of a model point;
/// bounds derived from ball estimates are stated against its norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Region {
    Full,
    Ambient,
    InjBelow(f64),
}

/// Region in native coordinates: strip half-height for collars, `-log|z|`
/// cut-off for cusps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extent {
    Collar { h_star: f64 },
    Cusp { u_min: f64 },
}

pub fn resolve(dom: &Domain, region: Region) -> Result<Extent> {
    match (dom, region) {
        (Domain::Collar(g), Region::Full) => Ok(Extent::Collar { h_star: g.h() }),
        (Domain::Collar(g), Region::InjBelow(t)) => {
            if t > g.length() / 2.0 {
                Ok(Extent::Collar {
                    h_star: g.strip_extent_below(t),
                })
            } else {
                Err(domain("sub-collar radius", t, "(L/2, inf)"))
            }
        }
        (Domain::Collar(_), Region::Ambient) => Ok(Extent::Collar { h_star: PI / 2.0 }),
        (Domain::Cusp(_), Region::Full) => Ok(Extent::Cusp { u_min: PI }),
        (Domain::Cusp(_), Region::Ambient) => Ok(Extent::Cusp { u_min: 0.0 }),
        (Domain::Cusp(_), Region::InjBelow(t)) => {
            if t > 0.0 {
                Ok(Extent::Cusp {
                    u_min: (PI / t.sinh()).max(PI),
                })
            } else {
                Err(domain("sub-cusp radius", t, "(0, inf)"))
            }
        }
    }
}

/// Hyperbolic area of a region.
pub fn area(dom: &Domain, region: Region) -> Result<f64> {
    if region == Region::Ambient {
        return Ok(f64::INFINITY);
    }
    Ok(match (dom, resolve(dom, region)?) {
        (Domain::Collar(g), Extent::Collar { h_star }) => 2.0 * g.length() * h_star.tan(),
        (_, Extent::Cusp { u_min }) => 2.0 * PI / u_min,
        _ => unreachable!(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModeWeight {
    pub n: i32,
    /// Weight for the boundary-normalised coefficient.
    pub normalized: f64,
    /// Natural log of the weight for the raw coefficient `a_n`.
    pub log_weight: f64,
}

impl ModeWeight {
    /// Raw weight `w_n`; may overflow to infinity or underflow to zero.
    pub fn weight(&self) -> f64 {
        self.log_weight.exp()
    }
}

fn collar_weight_normalized(g: &CollarGeometry, n: i32, h_star: f64) -> f64 {
    let l = g.length();
    let scale = 2.0 * PI * (2.0 * PI / l).powi(3);
    if n == 0 {
        return scale * (h_star + 0.5 * (2.0 * h_star).sin());
    }
    let a = 4.0 * PI * n.unsigned_abs() as f64 / l;
    // the exponent e^{a t} is measured against e^{a h(L)}
    let shift = a * g.h();
    if a * h_star < 1.0 {
        let f = |t: f64| (a * t - shift).exp() * t.cos().powi(2);
        let r = quadrature::integrate_1d(f, -h_star, h_star, 1e-15, 0.0, 2_000);
        return scale * r.value;
    }
    let nfun = |t: f64| (a * t.cos() + t.sin()).powi(2) + 1.0 + t.cos().powi(2);
    let hi = (a * h_star - shift).exp() * nfun(h_star);
    let lo = (-a * h_star - shift).exp() * nfun(-h_star);
    scale * (hi - lo) / (a * (a * a + 4.0))
}

fn cusp_weight_normalized(n: i32, u_min: f64) -> f64 {
    let nf = n as f64;
    let u = u_min;
    2.0 * PI * (-2.0 * nf * (u - PI)).exp() * (u * u / (2.0 * nf) + u / (2.0 * nf * nf) + 1.0 / (4.0 * nf.powi(3)))
}

/// Closed-form `L^2` weight of the single mode `z^n dz^2/z^2` over a region.
pub fn mode_weight(dom: &Domain, n: i32, region: Region) -> Result<ModeWeight> {
    if !dom.admits(n) {
        return Err(Error::InfiniteWeight { n });
    }
    let ext = resolve(dom, region)?;
    let normalized = match (dom, ext) {
        (Domain::Collar(g), Extent::Collar { h_star }) => collar_weight_normalized(g, n, h_star),
        (Domain::Cusp(_), Extent::Cusp { u_min }) => cusp_weight_normalized(n, u_min),
        _ => unreachable!(),
    };
    let lref = dom.reference_log_modulus(n);
    Ok(ModeWeight {
        n,
        normalized,
        log_weight: normalized.ln() + 2.0 * n as f64 * lref,
    })
}

/// A finitely supported Laurent differential.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaurentQd {
    domain: Domain,
    coeffs: BTreeMap<i32, Complex64>,
}

impl LaurentQd {
    pub fn zero(domain: Domain) -> Self {
        LaurentQd {
            domain,
            coeffs: BTreeMap::new(),
        }
    }

    /// From boundary-normalised coefficients.
    pub fn from_normalized(domain: Domain, coeffs: impl IntoIterator<Item = (i32, Complex64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, c) in coeffs {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if !domain.admits(n) {
                return Err(Error::InfiniteWeight { n });
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(domain_err_coeff(n));
            }
            *map.entry(n).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(LaurentQd { domain, coeffs: map })
    }

    /// From raw Laurent coefficients `a_n` of `f(z) = sum a_n z^n`.
    pub fn from_raw(domain: Domain, coeffs: impl IntoIterator<Item = (i32, Complex64)>) -> Result<Self> {
        let scaled: Vec<_> = coeffs
            .into_iter()
            .map(|(n, a)| (n, a * (n as f64 * domain.reference_log_modulus(n)).exp()))
            .collect();
        Self::from_normalized(domain, scaled)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn coeffs(&self) -> &BTreeMap<i32, Complex64> {
        &self.coeffs
    }

    pub fn normalized(&self, n: i32) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    /// Raw coefficient `a_n`; may overflow.
    pub fn raw(&self, n: i32) -> Complex64 {
        self.normalized(n) * (-(n as f64) * self.domain.reference_log_modulus(n)).exp()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_abs_mode(&self) -> u32 {
        self.coeffs.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn is_pure_positive(&self) -> bool {
        self.coeffs.keys().all(|&n| n > 0)
    }

    pub fn is_pure_negative(&self) -> bool {
        self.coeffs.keys().all(|&n| n < 0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&n, &v)| (n, v * c))
            .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
            .collect();
        LaurentQd {
            domain: self.domain,
            coeffs,
        }
    }

    fn filtered(&self, keep: impl Fn(i32) -> bool) -> Self {
        LaurentQd {
            domain: self.domain,
            coeffs: self.coeffs.iter().filter(|(&n, _)| keep(n)).map(|(&n, &c)| (n, c)).collect(),
        }
    }

    /// `f(z)` at a point, as a complex number.
    pub fn f_value(&self, p: &ModelPoint) -> Complex64 {
        self.f_value_at(p.log_modulus, p.argument)
    }

    fn f_value_at(&self, log_modulus: f64, argument: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&n, &c) in &self.coeffs {
            let nf = n as f64;
            let mag = (nf * (log_modulus - self.domain.reference_log_modulus(n))).exp();
            acc += c * Complex64::from_polar(mag, nf * argument);
        }
        acc
    }
}

fn domain_err_coeff(n: i32) -> Error {
    domain("coefficient", n as f64, "finite values")
}

/// Splits into negative, zero and positive modes. On a cusp everything is
/// positive.
pub fn decompose(phi: &LaurentQd) -> (LaurentQd, LaurentQd, LaurentQd) {
    (
        phi.filtered(|n| n < 0),
        phi.filtered(|n| n == 0),
        phi.filtered(|n| n > 0),
    )
}

/// `|phi(p)| / sigma(p)`.
pub fn pointwise_norm(phi: &LaurentQd, p: &ModelPoint) -> Result<f64> {
    let pre = phi.domain.prefactor(p)?;
    Ok(pre * phi.f_value(p).norm())
}

/// Sum of `|c_n|^2` times weight over modes present in `phi`.
pub fn l2_norm_squared(phi: &LaurentQd, region: Region) -> Result<f64> {
    let mut acc = 0.0;
    for (&n, &c) in &phi.coeffs {
        acc += c.norm_sqr() * mode_weight(&phi.domain, n, region)?.normalized;
    }
    Ok(acc)
}

pub fn l2_norm(phi: &LaurentQd, region: Region) -> Result<f64> {
    l2_norm_squared(phi, region).map(f64::sqrt)
}

/// Hermitian `L^2` product, linear in the first argument.
pub fn inner_product(phi: &LaurentQd, psi: &LaurentQd, region: Region) -> Result<Complex64> {
    if phi.domain != psi.domain {
        return Err(Error::InvalidQuery("inner product of differentials on different domains".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (&n, &c) in &phi.coeffs {
        if let Some(&d) = psi.coeffs.get(&n) {
            acc += c * d.conj() * mode_weight(&phi.domain, n, region)?.normalized;
        }
    }
    Ok(acc)
}

/// A sampled supremum: a lower estimate of the true sup together with where
/// it was found and how finely the search resolved the domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupEstimate {
    pub value: f64,
    pub location: ModelPoint,
    pub samples: usize,
    /// Final step size of the local refinement.
    pub resolution: f64,
    pub boundary_only: bool,
}

fn theta_grid_size(phi: &LaurentQd) -> usize {
    (32 * (phi.max_abs_mode() as usize + 1)).max(128)
}

/// Golden-section maximisation of `g` on `[a, b]`.
fn golden_max<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64, tol: f64) -> (f64, f64, usize) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (g(x1), g(x2));
    let mut evals = 2;
    while b - a > tol && evals < 200 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = g(x1);
        }
        evals += 1;
    }
    if f1 > f2 {
        (x1, f1, evals)
    } else {
        (x2, f2, evals)
    }
}

/// Sup of the pointwise norm over one circle `log|z| = const`.
fn circle_sup(phi: &LaurentQd, log_modulus: f64) -> (f64, f64, usize) {
    let pre = match phi.domain.prefactor(&ModelPoint::new(log_modulus, 0.0)) {
        Ok(v) => v,
        Err(_) => return (0.0, 0.0, 0),
    };
    let m = theta_grid_size(phi);
    let dt = 2.0 * PI / m as f64;
    let vals: Vec<f64> = (0..m).map(|k| phi.f_value_at(log_modulus, k as f64 * dt).norm()).collect();
    let g = |th: f64| phi.f_value_at(log_modulus, th).norm();
    let mut best = (0.0, 0.0);
    let mut evals = m;
    for k in 0..m {
        let (prev, next) = (vals[(k + m - 1) % m], vals[(k + 1) % m]);
        if vals[k] >= prev && vals[k] >= next {
            let c = k as f64 * dt;
            let (th, v, e) = golden_max(&g, c - dt, c + dt, 1e-12);
            evals += e;
            let (th, v) = if v >= vals[k] { (th, v) } else { (c, vals[k]) };
            if v > best.1 {
                best = (th.rem_euclid(2.0 * PI), v);
            }
        }
    }
    (best.0, pre * best.1, evals)
}

// Modes grow without bound towards the edge of the cover, so a supremum
// there says nothing about the surface.
fn reject_ambient(region: Region) -> Result<()> {
    match region {
        Region::Ambient => Err(Error::InvalidQuery("supremum over the ambient cover".into())),
        _ => Ok(()),
    }
}

/// Supremum of the pointwise norm over a region.
///
/// Pure positive or pure negative collar differentials attain their sup on
/// the boundary circles, so only those are searched. Everything else uses a
/// dense grid in `(log|z|, arg z)` followed by local pattern search.
pub fn sup_norm(phi: &LaurentQd, region: Region) -> Result<SupEstimate> {
    reject_ambient(region)?;
    let ext = resolve(&phi.domain, region)?;
    if phi.is_zero() {
        let location = match ext {
            Extent::Collar { .. } => ModelPoint::new(0.0, 0.0),
            Extent::Cusp { u_min } => ModelPoint::new(-u_min, 0.0),
        };
        return Ok(SupEstimate {
            value: 0.0,
            location,
            samples: 0,
            resolution: 0.0,
            boundary_only: false,
        });
    }
    if let (Domain::Collar(g), Extent::Collar { h_star }) = (&phi.domain, ext) {
        if phi.is_pure_positive() || phi.is_pure_negative() {
            let edge = 2.0 * PI * h_star / g.length();
            let (th_p, v_p, e_p) = circle_sup(phi, edge);
            let (th_m, v_m, e_m) = circle_sup(phi, -edge);
            let (lm, th, v) = if v_p >= v_m { (edge, th_p, v_p) } else { (-edge, th_m, v_m) };
            return Ok(SupEstimate {
                value: v,
                location: ModelPoint::new(lm, th),
                samples: e_p + e_m,
                resolution: 1e-12,
                boundary_only: true,
            });
        }
    }
    sup_norm_grid(phi, region, 96)
}

/// Exhaustive grid search with refinement, ignoring the maximum principle.
pub fn sup_norm_grid(phi: &LaurentQd, region: Region, rows: usize) -> Result<SupEstimate> {
    reject_ambient(region)?;
    let ext = resolve(&phi.domain, region)?;
    // the search coordinate x maps to log|z|; collars use x = log|z| on
    // [-s*, s*], cusps use x = -1/log|z| on (0, 1/u_min]
    let (x_lo, x_hi, to_log): (f64, f64, fn(f64, f64) -> f64) = match (&phi.domain, ext) {
        (Domain::Collar(g), Extent::Collar { h_star }) => {
            let e = 2.0 * PI * h_star / g.length();
            (-e, e, |x, _| x)
        }
        (Domain::Cusp(_), Extent::Cusp { u_min }) => (0.0, 1.0 / u_min, |x, _| -1.0 / x.max(1e-300)),
        _ => unreachable!(),
    };
    let eval = |x: f64, th: f64| -> f64 {
        let x = x.clamp(x_lo, x_hi);
        if x <= 0.0 && matches!(phi.domain, Domain::Cusp(_)) {
            return 0.0;
        }
        pointwise_norm(phi, &ModelPoint::new(to_log(x, 0.0), th)).unwrap_or(0.0)
    };
    let m = theta_grid_size(phi);
    let rows = rows.max(2);
    let mut grid = Vec::with_capacity(rows * m);
    for i in 0..=rows {
        let x = x_lo + (x_hi - x_lo) * i as f64 / rows as f64;
        for k in 0..m {
            let th = 2.0 * PI * k as f64 / m as f64;
            grid.push((eval(x, th), x, th));
        }
    }
    let mut samples = grid.len();
    grid.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = grid[0];
    let mut resolution = 0.0;
    for &(v0, x0, th0) in grid.iter().take(8) {
        let (mut v, mut x, mut th) = (v0, x0, th0);
        let mut sx = (x_hi - x_lo) / rows as f64;
        let mut st = 2.0 * PI / m as f64;
        while sx > 1e-13 * (1.0 + x.abs()) || st > 1e-13 {
            let mut moved = false;
            for (dx, dt) in [(sx, 0.0), (-sx, 0.0), (0.0, st), (0.0, -st), (sx, st), (-sx, -st), (sx, -st), (-sx, st)] {
                let nx = (x + dx).clamp(x_lo, x_hi);
                let nv = eval(nx, th + dt);
                samples += 1;
                if nv > v {
                    v = nv;
                    x = nx;
                    th += dt;
                    moved = true;
                    break;
                }
            }
            if !moved {
                sx *= 0.5;
                st *= 0.5;
            }
            if samples > 2_000_000 {
                break;
            }
        }
        if v > best.0 {
            best = (v, x, th);
        }
        resolution = sx.max(st);
    }
    Ok(SupEstimate {
        value: best.0,
        location: ModelPoint::new(to_log(best.1.clamp(x_lo, x_hi), 0.0), best.2),
        samples,
        resolution,
        boundary_only: false,
    })
}

/// Pairing of `phi` with the gradient of the core length, `a_0 L`.
pub fn gardiner_pairing(phi: &LaurentQd) -> Result<Complex64> {
    match &phi.domain {
        Domain::Collar(g) => Ok(phi.normalized(0) * g.length()),
        Domain::Cusp(_) => Err(Error::NoCoreGeodesic),
    }
}

/// The same pairing evaluated as `(2/pi) (L/2pi)^4` times the integral of
/// `f (2pi/L)^3 cos^2 t` over the ambient strip.
pub fn gardiner_pairing_quadrature(phi: &LaurentQd, rel_tol: f64) -> Result<(Complex64, QuadResult)> {
    let g = match &phi.domain {
        Domain::Collar(g) => *g,
        Domain::Cusp(_) => return Err(Error::NoCoreGeodesic),
    };
    let l = g.length();
    let k = 2.0 * PI / l;
    let part = |im: bool| {
        let integrand = |t: f64, th: f64| {
            let v = phi.f_value_at(k * t, th);
            let c = t.cos();
            (if im { v.im } else { v.re }) * k.powi(3) * c * c
        };
        quadrature::integrate_2d(integrand, (-PI / 2.0, PI / 2.0), (0.0, 2.0 * PI), rel_tol, 1e-300, 50_000_000)
    };
    let (re, im) = (part(false), part(true));
    let factor = 2.0 / PI * (l / (2.0 * PI)).powi(4);
    let res = QuadResult {
        value: re.value * factor,
        error: (re.error + im.error) * factor,
        evals: re.evals + im.evals,
        converged: re.converged && im.converged,
    };
    Ok((Complex64::new(re.value, im.value) * factor, res))
}

/// Drops the zero mode, giving a differential with vanishing Gardiner
/// pairing.
pub fn project_perp(phi: &LaurentQd) -> LaurentQd {
    phi.filtered(|n| n != 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Constraint {
    All,
    Perp,
}

fn admissible_modes(dom: &Domain, n_max: u32, constraint: Constraint) -> Vec<i32> {
    let n_max = n_max as i32;
    match dom {
        Domain::Collar(_) => (-n_max..=n_max)
            .filter(|&n| !(constraint == Constraint::Perp && n == 0))
            .collect(),
        Domain::Cusp(_) => (1..=n_max).collect(),
    }
}

/// Norm of the evaluation functional `phi -> ||phi(p)||` on modes with
/// `|n| <= n_max`, with `L^2` over the ambient cover.
pub fn extremal_ratio(dom: &Domain, p: &ModelPoint, n_max: u32, constraint: Constraint) -> Result<f64> {
    extremal_ratio_in(dom, p, n_max, constraint, Region::Ambient)
}

/// As [`extremal_ratio`] with the norm taken over `region`.
pub fn extremal_ratio_in(dom: &Domain, p: &ModelPoint, n_max: u32, constraint: Constraint, region: Region) -> Result<f64> {
    let pre = dom.prefactor(p)?;
    let modes = admissible_modes(dom, n_max, constraint);
    if modes.is_empty() {
        return Err(Error::EmptyModeSet);
    }
    let mut acc = 0.0;
    for n in modes {
        let w = mode_weight(dom, n, region)?;
        let e = (2.0 * n as f64 * (p.log_modulus - dom.reference_log_modulus(n))).exp();
        acc += e / w.normalized;
    }
    Ok(pre * acc.sqrt())
}

/// `z^n dz^2/z^2 / sqrt(w_n)` for every admissible mode, orthonormal over
/// the ambient cover.
pub fn orthonormal_mode_family(dom: &Domain, n_max: u32) -> Result<Vec<LaurentQd>> {
    orthonormal_mode_family_in(dom, n_max, Region::Ambient)
}

pub fn orthonormal_mode_family_in(dom: &Domain, n_max: u32, region: Region) -> Result<Vec<LaurentQd>> {
    let modes = admissible_modes(dom, n_max, Constraint::All);
    if modes.is_empty() {
        return Err(Error::EmptyModeSet);
    }
    modes
        .into_iter()
        .map(|n| {
            let w = mode_weight(dom, n, region)?;
            LaurentQd::from_normalized(*dom, [(n, Complex64::new(1.0 / w.normalized.sqrt(), 0.0))])
        })
        .collect()
}

/// `sum_i ||mu_i(p)||^2`.
pub fn bromberg_sum(family: &[LaurentQd], p: &ModelPoint) -> Result<f64> {
    let mut acc = 0.0;
    for mu in family {
        acc += pointwise_norm(mu, p)?.powi(2);
    }
    Ok(acc)
}

/// `integral ||phi||^k dA` over a region by adaptive quadrature in native
/// coordinates.
fn power_integral(phi: &LaurentQd, region: Region, power: i32, rel_tol: f64) -> Result<QuadResult> {
    let ext = resolve(&phi.domain, region)?;
    if phi.is_zero() {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evals: 0,
            converged: true,
        });
    }
    let res = match (&phi.domain, ext) {
        (Domain::Collar(g), Extent::Collar { h_star }) => {
            let l = g.length();
            let k = 2.0 * PI / l;
            // dA = (L/2pi) / cos^2 t dt dtheta, ||phi|| = k^2 cos^2 t |f|
            let integrand = |t: f64, th: f64| {
                let c = t.cos();
                (k * k * c * c * phi.f_value_at(k * t, th).norm()).powi(power) / (k * c * c)
            };
            quadrature::integrate_2d(integrand, (-h_star, h_star), (0.0, 2.0 * PI), rel_tol, 1e-300, 50_000_000)
        }
        (Domain::Cusp(_), Extent::Cusp { u_min }) => {
            // v = 1/u with u = -log|z|: dA = dv dtheta, ||phi|| = u^2 |f|
            let integrand = |v: f64, th: f64| {
                if v <= 0.0 {
                    return 0.0;
                }
                let u = 1.0 / v;
                (u * u * phi.f_value_at(-u, th).norm()).powi(power)
            };
            let outer = quadrature::integrate_2d(
                integrand,
                (0.0, 1.0 / u_min.max(PI)),
                (0.0, 2.0 * PI),
                rel_tol,
                1e-300,
                50_000_000,
            );
            if u_min >= PI {
                outer
            } else {
                // the rest of the punctured disk, in u itself: dA = du dtheta / u^2
                let inner = |u: f64, th: f64| {
                    if u <= 0.0 {
                        return 0.0;
                    }
                    (u * u * phi.f_value_at(-u, th).norm()).powi(power) / (u * u)
                };
                let near = quadrature::integrate_2d(inner, (u_min, PI), (0.0, 2.0 * PI), rel_tol, 1e-300, 50_000_000);
                QuadResult {
                    value: outer.value + near.value,
                    error: outer.error + near.error,
                    evals: outer.evals + near.evals,
                    converged: outer.converged && near.converged,
                }
            }
        }
        _ => unreachable!(),
    };
    Ok(res)
}

/// `integral ||phi||^4 dA`.
pub fn l4_integral(phi: &LaurentQd, region: Region) -> Result<f64> {
    let r = power_integral(phi, region, 4, 1e-7)?;
    if r.converged {
        Ok(r.value)
    } else {
        Err(Error::Inconclusive {
            what: "l4_integral",
            detail: format!("quadrature reached relative error {:e}", r.error / r.value.abs()),
        })
    }
}

/// `||phi||_2^2` by quadrature, as a check on the closed form.
pub fn l2_norm_squared_quadrature(phi: &LaurentQd, region: Region, rel_tol: f64) -> Result<QuadResult> {
    power_integral(phi, region, 2, rel_tol)
}
