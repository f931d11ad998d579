//! Seeded random-differential verification of the pointwise inequalities.
//!
//! Each trial draws its own ChaCha stream keyed by `(seed, suite, trial)`, so
//! results do not depend on scheduling or on how many trials run.

use crate::bounds::{self, expr, EPS2, EPS2_BAR};
use crate::domains::{inj_collar, inj_cusp, CollarGeometry, ModelPoint};
use crate::error::{Error, Result};
use crate::exec::Execution;
pub use crate::report::Outcome;
use crate::qd::{
    bromberg_sum, decompose, extremal_ratio, l2_norm, l2_norm_squared, l2_norm_squared_quadrature, mode_weight,
    orthonormal_mode_family, pointwise_norm, project_perp, sup_norm, Constraint, Domain, LaurentQd, Region,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use std::f64::consts::PI;
use std::time::Instant;

/// Relative slack allowed before an instance counts as a violation.
pub const ERROR_BUDGET: f64 = 1e-9;
pub const DEFAULT_MODES: u32 = 16;
pub const DEFAULT_POINTS: usize = 24;
/// Tolerances for which the asymptotic pointwise bound is exercised.
const WOLPERT_EPS: [f64; 5] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Inequalities = 0,
    Parseval = 1,
    MaximumPrinciple = 2,
    ExtremalIdentity = 3,
}

/// The random stream for one trial of one suite.
fn trial_rng(seed: u64, suite: Suite, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((suite as u64) << 40) | trial as u64);
    rng
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return lo;
    }
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) / 2f64.sqrt()
}

fn unit_phase(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialKind {
    Gaussian,
    SingleMode,
    TwoModeBeat,
    EqualPhases,
}

impl TrialKind {
    fn for_trial(trial: usize) -> Self {
        match trial % 8 {
            5 => TrialKind::SingleMode,
            6 => TrialKind::TwoModeBeat,
            7 => TrialKind::EqualPhases,
            _ => TrialKind::Gaussian,
        }
    }
}

/// Draws a differential on `dom` over `modes`, with each coefficient scaled
/// by the inverse square root of its weight so every mode carries comparable
/// norm.
pub fn random_differential(dom: &Domain, modes: &[i32], kind: TrialKind, rng: &mut ChaCha8Rng) -> Result<LaurentQd> {
    if modes.is_empty() {
        return Err(Error::EmptyModeSet);
    }
    let inv_sqrt_w = |n: i32| -> Result<f64> { Ok(1.0 / mode_weight(dom, n, Region::Full)?.normalized.sqrt()) };
    let mut coeffs = Vec::new();
    match kind {
        TrialKind::Gaussian => {
            for &n in modes {
                coeffs.push((n, gaussian_complex(rng) * inv_sqrt_w(n)?));
            }
        }
        TrialKind::SingleMode => {
            let n = modes[rng.random_range(0..modes.len())];
            coeffs.push((n, unit_phase(rng) * inv_sqrt_w(n)?));
        }
        TrialKind::TwoModeBeat => {
            let i = rng.random_range(0..modes.len());
            let mut j = rng.random_range(0..modes.len());
            if modes.len() > 1 {
                while j == i {
                    j = rng.random_range(0..modes.len());
                }
            }
            for k in [i, j] {
                coeffs.push((modes[k], unit_phase(rng) * inv_sqrt_w(modes[k])?));
            }
        }
        TrialKind::EqualPhases => {
            for &n in modes {
                coeffs.push((n, Complex64::new(inv_sqrt_w(n)?, 0.0)));
            }
        }
    }
    LaurentQd::from_normalized(*dom, coeffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// Norm restricted to the collar.
    Collar,
    /// Norm over the covering annulus or punctured disk, which contains the
    /// injectivity ball of every model point.
    Global,
}

/// One evaluated inequality `lhs <= rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Instance {
    /// `(log|z|, arg z)`.
    pub point: [f64; 2],
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `(rhs - lhs) / rhs`; negative means the bound failed.
    pub margin: f64,
}

/// All instances of one inequality within one trial, summarised by the
/// tightest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialCheck {
    pub check_id: &'static str,
    pub norm: NormKind,
    pub instances: usize,
    pub violations: usize,
    pub min_margin: f64,
    pub worst: Option<Instance>,
}

impl TrialCheck {
    fn new(check_id: &'static str, norm: NormKind) -> Self {
        TrialCheck {
            check_id,
            norm,
            instances: 0,
            violations: 0,
            min_margin: f64::INFINITY,
            worst: None,
        }
    }

    fn push(&mut self, p: &ModelPoint, r: f64, lhs: f64, rhs: f64) {
        let margin = if rhs > 0.0 {
            (rhs - lhs) / rhs
        } else if lhs <= 0.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        };
        self.instances += 1;
        if lhs > rhs * (1.0 + ERROR_BUDGET) || lhs.is_nan() || rhs.is_nan() {
            self.violations += 1;
        }
        if margin < self.min_margin || self.worst.is_none() {
            self.min_margin = margin;
            self.worst = Some(Instance {
                point: [p.log_modulus, p.argument],
                r,
                lhs,
                rhs,
                margin,
            });
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub kind: TrialKind,
    pub length: f64,
    pub modes: u32,
    pub outcome: Outcome,
    pub checks: Vec<TrialCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RandomConfig {
    pub seed: u64,
    pub trials: usize,
    pub modes: u32,
    pub l_min: f64,
    pub l_max: f64,
    pub points: usize,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            seed: 0,
            trials: 1000,
            modes: DEFAULT_MODES,
            l_min: 0.01,
            l_max: 2.0 * EPS2,
            points: DEFAULT_POINTS,
            exec: Execution::default(),
        }
    }
}

impl RandomConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidQuery("trials must be at least 1".into()));
        }
        if !(self.l_min > 0.0 && self.l_min <= self.l_max && self.l_max <= 2.0 * EPS2) {
            return Err(Error::InvalidQuery(format!(
                "collar lengths must satisfy 0 < Lmin <= Lmax <= 2 eps2, got [{}, {}]",
                self.l_min, self.l_max
            )));
        }
        if self.points < 3 {
            return Err(Error::InvalidQuery("at least 3 points per trial".into()));
        }
        Ok(())
    }

    /// Trial 0 sits on the largest admissible collar; the rest are log-uniform.
    fn length_for(&self, trial: usize, rng: &mut ChaCha8Rng) -> f64 {
        if trial == 0 {
            self.l_max
        } else {
            log_uniform(rng, self.l_min, self.l_max)
        }
    }
}

fn collar_points(g: &CollarGeometry, count: usize, rng: &mut ChaCha8Rng) -> Vec<ModelPoint> {
    let s = g.s();
    let mut pts = vec![
        ModelPoint::new(0.0, rng.random_range(0.0..2.0 * PI)),
        ModelPoint::new(s, rng.random_range(0.0..2.0 * PI)),
        ModelPoint::new(-s, rng.random_range(0.0..2.0 * PI)),
    ];
    while pts.len() < count {
        pts.push(ModelPoint::new(rng.random_range(-s..=s), rng.random_range(0.0..2.0 * PI)));
    }
    pts
}

fn cusp_points(count: usize, rng: &mut ChaCha8Rng) -> Vec<ModelPoint> {
    // v = pi / u = sinh r is uniform, so the injectivity radius spreads
    // evenly over (0, eps2]
    let mut pts = vec![ModelPoint::new(-PI, rng.random_range(0.0..2.0 * PI))];
    while pts.len() < count {
        let v: f64 = rng.random_range(0.01..=1.0);
        pts.push(ModelPoint::new(-PI / v, rng.random_range(0.0..2.0 * PI)));
    }
    pts
}

/// `(eps, delta(eps))` pairs for the asymptotic bound.
fn wolpert_table() -> Vec<(f64, f64)> {
    WOLPERT_EPS
        .iter()
        .filter_map(|&e| bounds::delta_of_eps(e).ok().map(|d| (e, d)))
        .collect()
}

fn run_trial(cfg: &RandomConfig, wolpert: &[(f64, f64)], trial: usize) -> Result<TrialRecord> {
    let mut rng = trial_rng(cfg.seed, Suite::Inequalities, trial);
    let kind = TrialKind::for_trial(trial);
    let l = cfg.length_for(trial, &mut rng);
    let g = CollarGeometry::new(l)?;
    let dom = Domain::Collar(g);
    let n = cfg.modes as i32;
    let modes: Vec<i32> = (-n..=n).collect();
    let phi = random_differential(&dom, &modes, kind, &mut rng)?;
    // collar-restricted norm for the bounds proved inside the collar, the
    // norm over the cover for those resting on injectivity-ball estimates
    let norm = l2_norm(&phi, Region::Full)?;
    let global = l2_norm(&phi, Region::Ambient)?;
    let (minus, zero, plus) = decompose(&phi);
    let perp = project_perp(&phi);
    let perp_norm = l2_norm(&perp, Region::Full)?;
    let perp_global = l2_norm(&perp, Region::Ambient)?;
    let family = orthonormal_mode_family(&dom, cfg.modes)?;

    let mut zero_profile = TrialCheck::new("zero_mode_profile", NormKind::Collar);
    let mut tail_plus = TrialCheck::new("positive_modes_tail", NormKind::Collar);
    let mut tail_minus = TrialCheck::new("negative_modes_tail", NormKind::Collar);
    let mut g_bound = TrialCheck::new("collar_g_bound", NormKind::Collar);
    let mut inv_sqrt_r = TrialCheck::new("collar_inverse_sqrt_r", NormKind::Global);
    let mut systole = TrialCheck::new("systole_sup", NormKind::Global);
    let mut perp_sup = TrialCheck::new("perp_sup", NormKind::Global);
    let mut perp_tail = TrialCheck::new("perp_tail", NormKind::Collar);
    let mut ortho = TrialCheck::new("orthonormal_sum", NormKind::Global);
    let mut wolpert_check = TrialCheck::new("wolpert_asymptotic", NormKind::Global);

    let zero_scale = (l / 2.0).sinh().powi(2) / (l * expr::c0(l)).sqrt();
    let systole_factor = (2.0 / l.min(2.0 * EPS2)).sqrt();
    let wolpert_eps = wolpert.iter().filter(|(_, d)| l <= *d).map(|(e, _)| *e).fold(f64::NAN, f64::min);

    for p in collar_points(&g, cfg.points, &mut rng) {
        let r = inj_collar(&g, &p)?;
        let pn = pointwise_norm(&phi, &p)?;
        zero_profile.push(&p, r, pointwise_norm(&zero, &p)?, zero_scale / r.sinh().powi(2) * norm);
        systole.push(&p, r, pn, systole_factor * global);
        let pp = pointwise_norm(&perp, &p)?;
        perp_sup.push(&p, r, pp, 2f64.sqrt() * perp_global);
        if r <= EPS2_BAR {
            let f = expr::f_tail(r);
            tail_plus.push(&p, r, pointwise_norm(&plus, &p)?, f * norm);
            tail_minus.push(&p, r, pointwise_norm(&minus, &p)?, f * norm);
            g_bound.push(&p, r, pn, expr::g_bound(r) * norm);
            perp_tail.push(&p, r, pp, 2.0 * f * perp_norm);
        }
        if r <= EPS2 {
            inv_sqrt_r.push(&p, r, pn, global / r.sqrt());
            ortho.push(&p, r, bromberg_sum(&family, &p)?, 1.0 / r);
        }
        if wolpert_eps.is_finite() {
            let target = (1.0 + wolpert_eps) * (2.0 / PI).sqrt() / l.sqrt();
            wolpert_check.push(&p, r, pn, target * global);
        }
    }
    // the sampled supremum over the whole collar also enters the systole check
    let sup = sup_norm(&phi, Region::Full)?;
    let r_sup = inj_collar(&g, &sup.location).unwrap_or(g.half_width());
    systole.push(&sup.location, r_sup, sup.value, systole_factor * global);

    let cusp = cusp_checks(cfg, kind, &mut rng)?;
    let mut checks = vec![
        zero_profile,
        tail_plus,
        tail_minus,
        g_bound,
        inv_sqrt_r,
        systole,
        perp_sup,
        perp_tail,
        ortho,
        wolpert_check,
    ];
    checks.extend(cusp);
    checks.retain(|c| c.instances > 0);
    let outcome = if checks.iter().any(|c| c.violations > 0) {
        Outcome::Violated
    } else {
        Outcome::Pass
    };
    Ok(TrialRecord {
        trial,
        kind,
        length: l,
        modes: cfg.modes,
        outcome,
        checks,
        error: None,
    })
}

fn cusp_checks(cfg: &RandomConfig, kind: TrialKind, rng: &mut ChaCha8Rng) -> Result<Vec<TrialCheck>> {
    let dom = Domain::cusp();
    let modes: Vec<i32> = (1..=cfg.modes.max(1) as i32).collect();
    let phi = random_differential(&dom, &modes, kind, rng)?;
    let norm = l2_norm(&phi, Region::Ambient)?;
    let c_eps2 = expr::c_eps2::<f64>();
    let mut k_check = TrialCheck::new("cusp_k_bound", NormKind::Global);
    let mut c_check = TrialCheck::new("cusp_c_eps2_bound", NormKind::Global);
    for p in cusp_points(cfg.points, rng) {
        let r = inj_cusp(p.log_modulus)?;
        let pn = pointwise_norm(&phi, &p)?;
        k_check.push(&p, r, pn, expr::k_cusp(r) * norm);
        c_check.push(&p, r, pn, c_eps2 * norm);
    }
    Ok(vec![k_check, c_check])
}

/// Per-check totals over all trials.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckTally {
    pub check_id: &'static str,
    pub norm: NormKind,
    pub instances: usize,
    pub violations: usize,
    pub min_margin: f64,
    pub worst_trial: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RandomRun {
    pub config: RandomConfig,
    pub trials: Vec<TrialRecord>,
    pub tallies: Vec<CheckTally>,
}

impl RandomRun {
    pub fn violations(&self) -> usize {
        self.tallies.iter().map(|t| t.violations).sum()
    }
}

pub fn verify_random(cfg: &RandomConfig) -> Result<RandomRun> {
    cfg.validate()?;
    let wolpert = wolpert_table();
    let trials: Vec<TrialRecord> = cfg.exec.map_range(cfg.trials, |t| {
        run_trial(cfg, &wolpert, t).unwrap_or_else(|e| TrialRecord {
            trial: t,
            kind: TrialKind::for_trial(t),
            length: f64::NAN,
            modes: cfg.modes,
            outcome: Outcome::Inconclusive,
            checks: Vec::new(),
            error: Some(e.to_string()),
        })
    });
    let mut tallies: Vec<CheckTally> = Vec::new();
    for rec in &trials {
        for c in &rec.checks {
            let idx = match tallies.iter().position(|t| t.check_id == c.check_id) {
                Some(i) => i,
                None => {
                    tallies.push(CheckTally {
                        check_id: c.check_id,
                        norm: c.norm,
                        instances: 0,
                        violations: 0,
                        min_margin: f64::INFINITY,
                        worst_trial: None,
                    });
                    tallies.len() - 1
                }
            };
            let t = &mut tallies[idx];
            t.instances += c.instances;
            t.violations += c.violations;
            if c.min_margin < t.min_margin {
                t.min_margin = c.min_margin;
                t.worst_trial = Some(rec.trial);
            }
        }
    }
    Ok(RandomRun {
        config: *cfg,
        trials,
        tallies,
    })
}

/// Closed-form norm against two-dimensional quadrature for one random collar
/// differential.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParsevalRecord {
    pub trial: usize,
    pub length: f64,
    pub closed_form: f64,
    pub quadrature: f64,
    pub rel_err: f64,
    pub quad_error_estimate: f64,
    pub converged: bool,
    pub seconds: f64,
}

pub fn parseval_trial(seed: u64, trial: usize, modes: u32, l_min: f64, l_max: f64) -> Result<ParsevalRecord> {
    let mut rng = trial_rng(seed, Suite::Parseval, trial);
    let l = log_uniform(&mut rng, l_min, l_max);
    let dom = Domain::collar(l)?;
    let n = modes as i32;
    let phi = random_differential(&dom, &(-n..=n).collect::<Vec<_>>(), TrialKind::Gaussian, &mut rng)?;
    let start = Instant::now();
    let closed = l2_norm_squared(&phi, Region::Full)?;
    let quad = l2_norm_squared_quadrature(&phi, Region::Full, 1e-9)?;
    Ok(ParsevalRecord {
        trial,
        length: l,
        closed_form: closed,
        quadrature: quad.value,
        rel_err: ((quad.value - closed) / closed).abs(),
        quad_error_estimate: quad.error,
        converged: quad.converged,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Interior samples against the boundary-circle supremum for a purely
/// positive differential of unit norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MaxPrincipleRecord {
    pub trial: usize,
    pub length: f64,
    pub boundary_sup: f64,
    pub interior_sup: f64,
    pub excess: f64,
}

pub fn maximum_principle_trial(seed: u64, trial: usize, modes: u32, samples: usize) -> Result<MaxPrincipleRecord> {
    let mut rng = trial_rng(seed, Suite::MaximumPrinciple, trial);
    let l = log_uniform(&mut rng, 0.01, 2.0 * EPS2);
    let g = CollarGeometry::new(l)?;
    let dom = Domain::Collar(g);
    let positive: Vec<i32> = (1..=modes.max(1) as i32).collect();
    let phi = random_differential(&dom, &positive, TrialKind::Gaussian, &mut rng)?;
    let phi = phi.scale(Complex64::new(1.0 / l2_norm(&phi, Region::Full)?, 0.0));
    let boundary = sup_norm(&phi, Region::Full)?;
    debug_assert!(boundary.boundary_only);
    let s = g.s();
    let mut interior: f64 = 0.0;
    for _ in 0..samples {
        let p = ModelPoint::new(rng.random_range(-s..s), rng.random_range(0.0..2.0 * PI));
        interior = interior.max(pointwise_norm(&phi, &p)?);
    }
    Ok(MaxPrincipleRecord {
        trial,
        length: l,
        boundary_sup: boundary.value,
        interior_sup: interior,
        excess: interior - boundary.value,
    })
}

/// Orthonormal-family density against the squared evaluation-functional norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityRecord {
    pub trial: usize,
    pub length: f64,
    pub point: [f64; 2],
    pub bromberg: f64,
    pub extremal_sq: f64,
    pub rel_err: f64,
}

pub fn extremal_identity_trial(seed: u64, trial: usize, modes: u32) -> Result<IdentityRecord> {
    let mut rng = trial_rng(seed, Suite::ExtremalIdentity, trial);
    let l = log_uniform(&mut rng, 0.01, 2.0 * EPS2);
    let g = CollarGeometry::new(l)?;
    let dom = Domain::Collar(g);
    let p = ModelPoint::new(rng.random_range(-g.s()..=g.s()), rng.random_range(0.0..2.0 * PI));
    let family = orthonormal_mode_family(&dom, modes)?;
    let b = bromberg_sum(&family, &p)?;
    let e = extremal_ratio(&dom, &p, modes, Constraint::All)?.powi(2);
    Ok(IdentityRecord {
        trial,
        length: l,
        point: [p.log_modulus, p.argument],
        bromberg: b,
        extremal_sq: e,
        rel_err: ((b - e) / e).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(trials: usize, modes: u32) -> RandomConfig {
        RandomConfig {
            trials,
            modes,
            ..RandomConfig::default()
        }
    }

    #[test]
    fn streams_are_independent_of_trial_count() {
        let a = verify_random(&small(4, 4)).unwrap();
        let b = verify_random(&small(9, 4)).unwrap();
        assert_eq!(a.trials[..], b.trials[..4]);
    }

    #[test]
    fn sequential_matches_parallel() {
        let mut cfg = small(6, 3);
        let par = verify_random(&cfg).unwrap();
        cfg.exec = Execution::Sequential;
        let seq = verify_random(&cfg).unwrap();
        assert_eq!(par.trials, seq.trials);
    }

    #[test]
    fn zero_mode_alone_attains_the_profile_bound() {
        let run = verify_random(&small(1, 0)).unwrap();
        let rec = &run.trials[0];
        assert_eq!(rec.length, 2.0 * EPS2);
        let c = rec.checks.iter().find(|c| c.check_id == "zero_mode_profile").unwrap();
        assert!(c.min_margin.abs() < 1e-12, "{c:?}");
        assert_eq!(run.violations(), 0);
    }

    #[test]
    fn small_run_has_no_violations() {
        let run = verify_random(&small(16, 6)).unwrap();
        assert!(run.trials.iter().all(|t| t.outcome == Outcome::Pass), "{:?}", run.tallies);
        let ids: Vec<_> = run.tallies.iter().map(|t| t.check_id).collect();
        for id in ["collar_g_bound", "perp_sup", "cusp_k_bound", "orthonormal_sum", "wolpert_asymptotic"] {
            assert!(ids.contains(&id), "{id} missing from {ids:?}");
        }
    }

    #[test]
    fn invalid_ranges_rejected() {
        let mut cfg = small(0, 2);
        assert!(cfg.validate().is_err());
        cfg.trials = 1;
        cfg.l_max = 2.0;
        assert!(cfg.validate().is_err());
        cfg.l_max = 0.5;
        cfg.l_min = 0.6;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn oracles_agree() {
        let p = parseval_trial(0, 0, 4, 0.05, 1.0).unwrap();
        assert!(p.rel_err < 1e-8, "{p:?}");
        let m = maximum_principle_trial(0, 0, 6, 256).unwrap();
        assert!(m.excess <= 1e-9, "{m:?}");
        let e = extremal_identity_trial(0, 0, 16).unwrap();
        assert!(e.rel_err < 1e-10, "{e:?}");
    }
}
