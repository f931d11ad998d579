//! CSV exports: bound-function curves and extremal-ratio sweeps.
//!
//! Floats are written with 17 significant digits, '.' as the decimal mark
//! and '\n' line endings, so files are byte-stable across platforms.

use crate::bounds::{expr, EPS2_BAR};
use crate::domains::{inj_collar, CollarGeometry, ModelPoint};
use crate::error::{Error, Result};
use crate::qd::{extremal_ratio, extremal_ratio_in, Constraint, Domain, Region};
use std::f64::consts::PI;
use std::fmt::Write;

/// Full-precision float: 17 significant digits, scientific notation.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotFn {
    H,
    SqrtRC,
    TwoF,
    C,
    K,
    G,
    M,
    MPrime,
}

impl PlotFn {
    pub const ALL: [PlotFn; 8] = [
        PlotFn::H,
        PlotFn::SqrtRC,
        PlotFn::TwoF,
        PlotFn::C,
        PlotFn::K,
        PlotFn::G,
        PlotFn::M,
        PlotFn::MPrime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlotFn::H => "H",
            PlotFn::SqrtRC => "sqrtRC",
            PlotFn::TwoF => "twoF",
            PlotFn::C => "C",
            PlotFn::K => "K",
            PlotFn::G => "G",
            PlotFn::M => "m",
            PlotFn::MPrime => "mprime",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| Error::UnknownId(name.to_string()))
    }

    pub fn eval(self, r: f64) -> f64 {
        match self {
            PlotFn::H => expr::h_of_g(r),
            PlotFn::SqrtRC => expr::sqrt_r_c(r),
            PlotFn::TwoF => expr::two_f(r),
            PlotFn::C => expr::c_teo(r),
            PlotFn::K => expr::k_cusp(r),
            PlotFn::G => expr::g_bound(r),
            PlotFn::M => expr::m_min(r),
            PlotFn::MPrime => expr::m_prime_min(r),
        }
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::InvalidQuery(format!("grid needs 0 < rmin <= rmax, got [{lo}, {hi}]")));
    }
    if n == 0 {
        return Err(Error::InvalidQuery("at least one sample".into()));
    }
    if n == 1 {
        return Ok(vec![hi]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut g: Vec<f64> = (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect();
    // pin the end points exactly
    g[0] = lo;
    g[n - 1] = hi;
    Ok(g)
}

pub const DEFAULT_PLOT_RMIN: f64 = 1e-3;
pub const DEFAULT_PLOT_RMAX: f64 = EPS2_BAR;

/// One row per sample: `r` followed by each requested function.
pub fn plotdata_csv(functions: &[PlotFn], r_min: f64, r_max: f64, samples: usize) -> Result<String> {
    if functions.is_empty() {
        return Err(Error::InvalidQuery("no functions requested".into()));
    }
    let grid = log_grid(r_min, r_max, samples)?;
    let mut out = String::from("r");
    for f in functions {
        out.push(',');
        out.push_str(f.name());
    }
    out.push('\n');
    for r in grid {
        out.push_str(&fmt17(r));
        for f in functions {
            out.push(',');
            out.push_str(&fmt17(f.eval(r)));
        }
        out.push('\n');
    }
    Ok(out)
}

/// One sample of the extremal-ratio sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SharpnessRow {
    pub log_modulus: f64,
    pub r: f64,
    /// Evaluation-functional norm against the norm over the cover.
    pub extremal_ratio: f64,
    /// Same against the collar-restricted norm.
    pub extremal_ratio_collar: f64,
    /// `G(r)` where `r <= eps2bar`, otherwise NaN.
    pub g: f64,
    pub inv_sqrt_r: f64,
    /// `sqrt(2/pi) / sqrt(L)`, the asymptotic target.
    pub wolpert_target: f64,
}

impl SharpnessRow {
    pub fn ratio_to_g(&self) -> f64 {
        self.extremal_ratio_collar / self.g
    }

    pub fn ratio_to_wolpert(&self) -> f64 {
        self.extremal_ratio / self.wolpert_target
    }
}

/// Sweeps `points` circles from the core (`log|z| = 0`) to the collar
/// boundary.
pub fn sharpness(length: f64, modes: u32, points: usize, constraint: Constraint) -> Result<Vec<SharpnessRow>> {
    let g = CollarGeometry::new(length)?;
    let dom = Domain::Collar(g);
    if points == 0 {
        return Err(Error::InvalidQuery("at least one point".into()));
    }
    let s = g.s();
    let target = (2.0 / PI).sqrt() / length.sqrt();
    (0..points)
        .map(|i| {
            let lm = if points == 1 { 0.0 } else { (s * i as f64 / (points - 1) as f64).min(s) };
            let p = ModelPoint::new(lm, 0.0);
            let r = inj_collar(&g, &p)?;
            Ok(SharpnessRow {
                log_modulus: lm,
                r,
                extremal_ratio: extremal_ratio(&dom, &p, modes, constraint)?,
                extremal_ratio_collar: extremal_ratio_in(&dom, &p, modes, constraint, Region::Full)?,
                g: if r <= EPS2_BAR { expr::g_bound(r) } else { f64::NAN },
                inv_sqrt_r: 1.0 / r.sqrt(),
                wolpert_target: target,
            })
        })
        .collect()
}

pub fn sharpness_csv(rows: &[SharpnessRow]) -> String {
    let mut out = String::from(
        "log_modulus,r,extremal_ratio,extremal_ratio_collar,G,inv_sqrt_r,wolpert_target,ratio_to_G,ratio_to_wolpert\n",
    );
    for row in rows {
        let cols = [
            row.log_modulus,
            row.r,
            row.extremal_ratio,
            row.extremal_ratio_collar,
            row.g,
            row.inv_sqrt_r,
            row.wolpert_target,
            row.ratio_to_g(),
            row.ratio_to_wolpert(),
        ];
        let line: Vec<String> = cols.iter().map(|&x| fmt17(x)).collect();
        writeln!(out, "{}", line.join(",")).expect("writing to a String");
    }
    out
}
