//! Scalar bound functions and constants for collar and cusp estimates.
//!
//! Each function exists twice: a generic form in [`expr`] used for point,
//! interval and derivative evaluation, and a checked `f64` wrapper here that
//! validates the argument domain.

use crate::error::{domain, Error, Result};
use crate::interval::Scalar;
use crate::roots;
use serde::Serialize;
use std::f64::consts::PI;

/// Margulis constant `asinh(1) = ln(1 + sqrt 2)`.
pub const EPS2: f64 = 0.881_373_587_019_543_f64;
/// Sub-collar radius `ln(3)/2 = asinh(1/sqrt 3) = atanh(1/2)`.
pub const EPS2_BAR: f64 = 0.549_306_144_334_054_8_f64;

/// Claimed upper bound for `sup m` on `(0, eps2bar]`.
pub const M0_CLAIMED: f64 = 0.9137;
/// Claimed upper bound for `sup m'` on `(0, eps2bar]`.
pub const M_PRIME0_CLAIMED: f64 = 1.2333;

/// Named constants, either as printed or as recomputed here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NamedConstants {
    pub eps2: f64,
    pub eps2bar: f64,
    pub m0: f64,
    pub mprime0: f64,
    #[serde(rename = "K0")]
    pub k0: f64,
    pub c_eps2: f64,
    pub c_eps2bar: f64,
}

impl NamedConstants {
    /// Values at their printed (four-decimal) precision.
    pub fn printed() -> Self {
        NamedConstants {
            eps2: EPS2,
            eps2bar: EPS2_BAR,
            m0: M0_CLAIMED,
            mprime0: M_PRIME0_CLAIMED,
            k0: 1.6697,
            c_eps2: 0.7439,
            c_eps2bar: 1.0917,
        }
    }

    /// Values recomputed from the defining formulas. `m0` and `mprime0` are
    /// the claimed suprema (certified elsewhere), so `K0 = 2 m0^2`.
    pub fn computed() -> Self {
        NamedConstants {
            eps2: 1f64.asinh(),
            eps2bar: 3f64.ln() / 2.0,
            m0: M0_CLAIMED,
            mprime0: M_PRIME0_CLAIMED,
            k0: 2.0 * M0_CLAIMED * M0_CLAIMED,
            c_eps2: expr::c_teo(EPS2),
            c_eps2bar: expr::c_teo(EPS2_BAR),
        }
    }
}

/// `K0 = 2 m0^2`, the thin-collar density constant.
pub fn k0() -> f64 {
    2.0 * M0_CLAIMED * M0_CLAIMED
}

/// Generic expressions. No domain checks; callers validate.
pub mod expr {
    use super::*;

    fn pi<T: Scalar>() -> T {
        T::approx(PI)
    }

    /// Teo's function, `(4pi/3 (1 - sech^6(r/2)))^(-1/2)`.
    ///
    /// Uses `1 - sech^6 = tanh^2 (1 + s + s^2)` with `s = sech^2`, which avoids
    /// cancellation for small `r`.
    pub fn c_teo<T: Scalar>(r: T) -> T {
        let half = r * T::exact(0.5);
        let t = half.tanh();
        let s = half.cosh().sqr().recip();
        let one_minus = t.sqr() * (T::exact(1.0) + s + s.sqr());
        (T::approx(4.0 * PI / 3.0) * one_minus).sqrt().recip()
    }

    pub fn sqrt_r_c<T: Scalar>(r: T) -> T {
        r.sqrt() * c_teo(r)
    }

    pub fn h_collar<T: Scalar>(l: T) -> T {
        (l * T::exact(0.5)).tanh().acos()
    }

    pub fn s_collar<T: Scalar>(l: T) -> T {
        T::approx(2.0 * PI) * h_collar(l) / l
    }

    /// `h + sin(2h)/2` with `cos h = tanh(L/2)`, `sin h = sech(L/2)`.
    pub fn c0<T: Scalar>(l: T) -> T {
        let half = l * T::exact(0.5);
        h_collar(l) + half.tanh() * half.cosh().recip()
    }

    pub fn c_eps2bar<T: Scalar>() -> T {
        c_teo(T::approx(EPS2_BAR))
    }

    pub fn c_eps2<T: Scalar>() -> T {
        c_teo(T::approx(EPS2))
    }

    pub fn f_tail<T: Scalar>(r: T) -> T {
        let sh = r.sinh();
        let expo = pi::<T>() * (T::approx(3f64.sqrt()) - sh.recip());
        c_eps2bar::<T>() * expo.exp() / (T::exact(3.0) * sh.sqr())
    }

    pub fn two_f<T: Scalar>(r: T) -> T {
        T::exact(2.0) * f_tail(r)
    }

    pub fn g_bound<T: Scalar>(r: T) -> T {
        let two_r = T::exact(2.0) * r;
        (two_r * c0(two_r)).sqrt().recip() + two_f(r)
    }

    /// `G(r) sqrt(r)`, written as `1/sqrt(2 c0(2r)) + 2 sqrt(r) F(r)`.
    pub fn h_of_g<T: Scalar>(r: T) -> T {
        let two_r = T::exact(2.0) * r;
        (T::exact(2.0) * c0(two_r)).sqrt().recip() + r.sqrt() * two_f(r)
    }

    /// `exp(-pi/sinh r) / sinh^2 r`.
    pub fn cusp_profile<T: Scalar>(r: T) -> T {
        let sh = r.sinh();
        (-pi::<T>() / sh).exp() / sh.sqr()
    }

    pub fn k_cusp<T: Scalar>(r: T) -> T {
        let sh = r.sinh();
        let expo = pi::<T>() * (T::exact(1.0) - sh.recip());
        c_eps2::<T>() * expo.exp() / sh.sqr()
    }

    pub fn m_min<T: Scalar>(r: T) -> T {
        h_of_g(r).min(sqrt_r_c(r))
    }

    pub fn m_prime_min<T: Scalar>(r: T) -> T {
        two_f(r).min(c_teo(r))
    }

    /// `tan(h(L))`, which equals `1/sinh(L/2)`.
    pub fn tan_h_collar<T: Scalar>(l: T) -> T {
        let h = h_collar(l);
        h.sin() / h.cos()
    }

    pub fn pi_over<T: Scalar>(l: T) -> T {
        pi::<T>() / l
    }

    /// `exp(2 pi t / L) cos^2 t`, the radial profile of positive modes.
    pub fn u_profile<T: Scalar>(t: T, l: f64) -> T {
        (T::approx(2.0 * PI / l) * t).exp() * t.cos().sqr()
    }
}

fn check_pos(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(what, x, "(0, inf)"))
    }
}

fn check_upto(what: &'static str, x: f64, top: f64, top_name: &str) -> Result<()> {
    if x > 0.0 && x <= top {
        Ok(())
    } else {
        Err(domain(what, x, format!("(0, {top_name}]")))
    }
}

pub fn c_teo(r: f64) -> Result<f64> {
    check_pos("c_teo", r)?;
    Ok(expr::c_teo(r))
}

pub fn h_collar(l: f64) -> Result<f64> {
    check_pos("h_collar", l)?;
    Ok(expr::h_collar(l))
}

pub fn s_collar(l: f64) -> Result<f64> {
    check_pos("s_collar", l)?;
    Ok(expr::s_collar(l))
}

pub fn c0(l: f64) -> Result<f64> {
    check_pos("c0", l)?;
    Ok(expr::c0(l))
}

pub fn f_tail(r: f64) -> Result<f64> {
    check_upto("f_tail", r, EPS2_BAR, "eps2bar")?;
    Ok(expr::f_tail(r))
}

pub fn g_bound(r: f64) -> Result<f64> {
    check_upto("g_bound", r, EPS2_BAR, "eps2bar")?;
    Ok(expr::g_bound(r))
}

pub fn h_of_g(r: f64) -> Result<f64> {
    check_upto("h_of_g", r, EPS2_BAR, "eps2bar")?;
    Ok(expr::h_of_g(r))
}

pub fn k_cusp(r: f64) -> Result<f64> {
    check_upto("k_cusp", r, EPS2, "eps2")?;
    Ok(expr::k_cusp(r))
}

pub fn m_min(r: f64) -> Result<f64> {
    check_upto("m_min", r, EPS2_BAR, "eps2bar")?;
    Ok(expr::m_min(r))
}

pub fn m_prime_min(r: f64) -> Result<f64> {
    check_upto("m_prime_min", r, EPS2_BAR, "eps2bar")?;
    Ok(expr::m_prime_min(r))
}

/// Result of inverting `H` for a given `eps`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeltaOfEps {
    pub eps: f64,
    /// Smallest `r` with `H(r) = (1 + eps)/sqrt(pi)`.
    pub h_inverse: f64,
    pub delta1: f64,
    pub delta: f64,
    /// `(12 eps / pi^2)^(1/3)`.
    pub asymptotic: f64,
}

/// Smallest `r` in `(0, eps2bar]` with `H(r) = target`.
pub fn h_inverse(target: f64) -> Result<f64> {
    let lo_r = 1e-12;
    let (h_lo, h_hi) = (expr::h_of_g(lo_r), expr::h_of_g(EPS2_BAR));
    if !(target > h_lo && target <= h_hi) {
        return Err(Error::Range {
            what: "h_inverse",
            target,
            lo: h_lo,
            hi: h_hi,
        });
    }
    roots::smallest_root_log_scan("h_inverse", |r| expr::h_of_g(r) - target, lo_r, EPS2_BAR, 400)?
        .ok_or(Error::Inconclusive {
            what: "h_inverse",
            detail: "no sign change found on the scan grid".into(),
        })
}

pub fn delta_details(eps: f64) -> Result<DeltaOfEps> {
    check_pos("delta_of_eps", eps)?;
    let r = h_inverse((1.0 + eps) / PI.sqrt())?;
    let delta1 = 2.0 / PI * r;
    Ok(DeltaOfEps {
        eps,
        h_inverse: r,
        delta1,
        delta: delta1.min(1.0 / (2.0 * PI)),
        asymptotic: (12.0 * eps / (PI * PI)).cbrt(),
    })
}

pub fn delta_of_eps(eps: f64) -> Result<f64> {
    delta_details(eps).map(|d| d.delta)
}

/// Upper bound for `H` (hence `m`) on `(0, r_min]`, using that `c0` is
/// decreasing and `F` increasing there.
pub fn h_tail_majorant<T: Scalar>(r_min: T) -> T {
    let two_r = T::exact(2.0) * r_min;
    (T::exact(2.0) * expr::c0(two_r)).sqrt().recip() + r_min.sqrt() * expr::two_f(r_min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn margulis_constants_agree_across_formulas() {
        close(EPS2, 1f64.asinh(), 1e-16);
        close(EPS2, (1.0 + 2f64.sqrt()).ln(), 2e-16);
        close(EPS2_BAR, 3f64.ln() / 2.0, 2e-16);
        close(EPS2_BAR, (1.0 / 3f64.sqrt()).asinh(), 2e-16);
        close(EPS2_BAR, 0.5f64.atanh(), 2e-16);
    }

    #[test]
    fn k0_matches_printed() {
        close(k0(), 1.6697, 5e-5);
        close(2.0 * k0(), 3.3394, 5e-5);
    }

    #[test]
    fn teo_function_printed_values() {
        close(c_teo(EPS2).unwrap(), 0.7439, 5e-5);
        close(c_teo(EPS2_BAR).unwrap(), 1.0917, 5e-5);
        close(c_teo(100.0).unwrap(), (3.0 / (4.0 * PI)).sqrt(), 1e-12);
        close(c_teo(100.0).unwrap(), 0.48860, 1e-4);
    }

    #[test]
    fn teo_function_small_r_asymptotic() {
        // C(r) r -> 1/sqrt(pi)
        for r in [1e-3, 1e-5, 1e-7] {
            close(c_teo(r).unwrap() * r * PI.sqrt(), 1.0, 1e-5);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(c_teo(0.0).is_err());
        assert!(c_teo(-1.0).is_err());
        assert!(h_collar(0.0).is_err());
        assert!(f_tail(0.6).is_err());
        assert!(g_bound(0.0).is_err());
        assert!(k_cusp(0.9).is_err());
        assert!(m_min(1.0).is_err());
        assert!(delta_of_eps(0.0).is_err());
    }

    #[test]
    fn collar_extent_exact_cases() {
        close(h_collar(3f64.ln()).unwrap(), PI / 3.0, 1e-15);
        close(h_collar(1e-9).unwrap(), PI / 2.0, 1e-9);
        close(s_collar(3f64.ln()).unwrap(), 2.0 * PI * PI / (3.0 * 3f64.ln()), 1e-13);
        close(c0(3f64.ln()).unwrap(), PI / 3.0 + 3f64.sqrt() / 4.0, 1e-15);
        close(c0(1e-6).unwrap(), PI / 2.0, 1e-15);
    }

    #[test]
    fn collar_extent_bisection_oracle() {
        // cos(h) = tanh(0.05) solved independently
        let target = 0.05f64.tanh();
        let h = roots::bisect("t", |x| x.cos() - target, 1.0, 1.6, 1e-15, 200).unwrap();
        close(h_collar(0.1).unwrap(), h, 1e-14);
        close(h_collar(0.1).unwrap(), 1.520_817_147_116_845, 1e-12);
        close(s_collar(0.1).unwrap(), 2.0 * PI * h / 0.1, 1e-11);
        close(s_collar(0.1).unwrap(), 95.558, 1e-2);
        close(c0(0.1).unwrap(), 1.57072, 1e-5);
    }

    #[test]
    fn tail_functions_frozen_values() {
        // 30-digit reference evaluations
        close(f_tail(0.1).unwrap(), 2.002_948_506_927_623e-10, 1e-22);
        close(f_tail(0.45).unwrap(), 0.453_562_027_070_844, 1e-12);
        close(g_bound(0.4).unwrap(), 1.377_798_906_918_315, 1e-12);
        close(g_bound(0.4).unwrap(), 1.37797, 1e-3);
        close(h_of_g(0.4).unwrap(), 0.871_396_540_710_440, 1e-12);
        close(h_of_g(EPS2_BAR).unwrap(), 2.199_488_206_155_386, 1e-11);
        close(h_of_g(EPS2_BAR).unwrap(), 2.199, 1e-2);
        close(k_cusp(0.2).unwrap(), 7.102_418_352_029_326e-5, 1e-17);
        close(m_min(0.45).unwrap(), 0.877, 2e-3);
    }

    #[test]
    fn distinguished_radius_identities() {
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        assert!(rel(f_tail(EPS2_BAR).unwrap(), c_teo(EPS2_BAR).unwrap()) < 1e-12);
        assert!(rel(k_cusp(EPS2).unwrap(), c_teo(EPS2).unwrap()) < 1e-12);
    }

    #[test]
    fn g_and_h_small_r_limits() {
        for r in [1e-4, 1e-6] {
            close(g_bound(r).unwrap() * (PI * r).sqrt(), 1.0, 1e-9);
            close(h_of_g(r).unwrap(), 1.0 / PI.sqrt(), 1e-9);
        }
        let r = 0.01;
        close(g_bound(r).unwrap() * (PI * r).sqrt() - 1.0, 2.0 * r.powi(3) / (3.0 * PI), 1e-8);
    }

    #[test]
    fn k_below_twice_f() {
        for k in 1..=200 {
            let r = EPS2_BAR * k as f64 / 200.0;
            assert!(k_cusp(r).unwrap() <= 2.0 * f_tail(r).unwrap());
        }
    }

    #[test]
    fn delta_matches_asymptotic() {
        let d = delta_details(1e-6).unwrap();
        close(d.delta, 1.0672e-2, 5e-4);
        close(d.delta, 0.010_673_874_730_488_6, 1e-9);
        for eps in [1e-3, 1e-4, 1e-5] {
            let d = delta_details(eps).unwrap();
            assert!((d.delta / d.asymptotic - 1.0).abs() <= 0.05);
        }
        assert!(delta_of_eps(10.0).is_err());
        assert!(delta_of_eps(2.5).unwrap() <= 1.0 / (2.0 * PI));
    }
}
