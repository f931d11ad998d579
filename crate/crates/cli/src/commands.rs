use crate::{
    CertifyArgs, Command, ConstantsArgs, ConstraintArg, CurvatureArgs, DeltaArgs, PlotArgs, SharpnessArgs, VerifyArgs,
};
use serde::Serialize;
use std::fmt;
use std::path::Path;
use std::time::Instant;
use wpb_core::bounds::{delta_details, DeltaOfEps};
use wpb_core::certify::{self, CertCheck, CertOptions, CHECK_IDS};
use wpb_core::curvature::{curvature_bounds, CurvatureBounds, CurvatureQuery};
use wpb_core::export::{plotdata_csv, sharpness, sharpness_csv, PlotFn};
use wpb_core::harness::{verify_random, CheckTally, RandomConfig, TrialRecord};
use wpb_core::qd::Constraint;
use wpb_core::report::{Outcome, Report, Tallied};
use wpb_core::{Error, Execution};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Inconclusive(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Inconclusive(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Inconclusive(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconclusive { .. } => CliError::Inconclusive(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// Records with nothing to tally, for purely informational commands.
#[derive(Serialize)]
enum Nothing {}

impl Tallied for Nothing {
    fn outcome(&self) -> Outcome {
        match *self {}
    }
}

pub fn run(cmd: Command, exec: Execution) -> Result<i32, CliError> {
    match cmd {
        Command::Constants(a) => constants(a, exec),
        Command::Certify(a) => certify_cmd(a, exec),
        Command::VerifyRandom(a) => verify(a, exec),
        Command::Plotdata(a) => plotdata(a),
        Command::Sharpness(a) => sharpness_cmd(a),
        Command::Curvature(a) => curvature(a),
        Command::Delta(a) => delta(a),
    }
}

fn emit_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn status_word(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "PASS",
        Outcome::Violated => "VIOLATED",
        Outcome::Inconclusive => "INCONCLUSIVE",
        Outcome::Informational => "INFO",
    }
}

fn print_cert_checks(report: &Report<CertCheck>) {
    for c in &report.checks {
        println!(
            "{:<13} {:<26} {:<13} on [{:.6e}, {:.6e}]  enclosure [{:.10}, {:.10}]",
            status_word(c.outcome()),
            c.check_id,
            c.target,
            c.interval[0],
            c.interval[1],
            c.enclosure[0],
            c.enclosure[1]
        );
        if let Some(w) = &c.witness {
            println!("{:14}witness r = {:.17e}, value in [{:.17e}, {:.17e}]", "", w.point, w.value[0], w.value[1]);
        }
        for s in &c.segments {
            println!("{:14}{:?} on [{:.12}, {:.12}]", "", s.kind, s.lo, s.hi);
        }
        if let Some(n) = &c.note {
            println!("{:14}{n}", "");
        }
    }
    let s = report.summary;
    println!(
        "{} checks: {} pass, {} violated, {} inconclusive, {} informational ({:.2} s)",
        s.total, s.pass, s.violated, s.inconclusive, s.informational, report.wall_time
    );
}

fn constants(a: ConstantsArgs, exec: Execution) -> Result<i32, CliError> {
    if !(a.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let start = Instant::now();
    let opts = CertOptions {
        exec,
        ..CertOptions::default()
    };
    let checks = certify::constants_table(a.tol, &opts)?;
    let report: Report<CertCheck> = Report::new("constants", 0, checks, None, start.elapsed().as_secs_f64());
    if a.out.json {
        emit_json(&report)?;
    } else {
        print_cert_checks(&report);
    }
    Ok(report.exit_code())
}

fn certify_cmd(a: CertifyArgs, exec: Execution) -> Result<i32, CliError> {
    if a.list {
        for id in CHECK_IDS {
            println!("{id}");
        }
        return Ok(0);
    }
    let ids: Vec<&str> = if a.checks.iter().any(|c| c == "all") {
        CHECK_IDS.to_vec()
    } else {
        a.checks.iter().map(String::as_str).collect()
    };
    if let Some(bad) = ids.iter().find(|id| !CHECK_IDS.contains(id)) {
        return Err(CliError::Usage(format!("unknown check id `{bad}` (see --list)")));
    }
    if !(a.rmin > 0.0) {
        return Err(CliError::Usage("--rmin must be positive".into()));
    }
    let start = Instant::now();
    let opts = CertOptions {
        depth: a.depth,
        exec,
        ..CertOptions::default()
    };
    let checks = certify::run_suite(&ids, a.rmin, &opts)?;
    let report: Report<CertCheck> = Report::new("certify", 0, checks, None, start.elapsed().as_secs_f64());
    if a.out.json {
        emit_json(&report)?;
    } else {
        print_cert_checks(&report);
    }
    Ok(report.exit_code())
}

#[derive(Serialize)]
struct VerifyDetails {
    config: RandomConfig,
    tallies: Vec<CheckTally>,
}

fn verify(a: VerifyArgs, exec: Execution) -> Result<i32, CliError> {
    let cfg = RandomConfig {
        seed: a.seed,
        trials: a.trials,
        modes: a.modes,
        l_min: a.l_min,
        l_max: a.l_max,
        points: a.points,
        exec,
    };
    let start = Instant::now();
    let run = verify_random(&cfg)?;
    let details = VerifyDetails {
        config: run.config,
        tallies: run.tallies,
    };
    let report: Report<TrialRecord, VerifyDetails> =
        Report::new("verify-random", a.seed, run.trials, Some(details), start.elapsed().as_secs_f64());
    if a.out.json {
        emit_json(&report)?;
    } else {
        let d = report.details.as_ref().expect("set above");
        println!("{:<22} {:>6} {:>9} {:>10} {:>14}", "check", "norm", "instances", "violations", "min margin");
        for t in &d.tallies {
            let norm = match t.norm {
                wpb_core::harness::NormKind::Collar => "collar",
                wpb_core::harness::NormKind::Global => "global",
            };
            println!(
                "{:<22} {:>6} {:>9} {:>10} {:>14.6e}",
                t.check_id, norm, t.instances, t.violations, t.min_margin
            );
        }
        for t in report.checks.iter().filter(|t| t.error.is_some()) {
            println!("trial {} inconclusive: {}", t.trial, t.error.as_deref().unwrap_or(""));
        }
        let s = report.summary;
        println!(
            "seed {} trials {}: {} pass, {} violated, {} inconclusive ({:.2} s)",
            a.seed, s.total, s.pass, s.violated, s.inconclusive, report.wall_time
        );
    }
    Ok(report.exit_code())
}

fn plotdata(a: PlotArgs) -> Result<i32, CliError> {
    let fns = a
        .functions
        .iter()
        .map(|n| PlotFn::parse(n.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let csv = plotdata_csv(&fns, a.rmin, a.rmax, a.samples)?;
    write_output(a.out.as_deref(), &csv)?;
    Ok(0)
}

fn sharpness_cmd(a: SharpnessArgs) -> Result<i32, CliError> {
    let constraint = match a.constraint {
        ConstraintArg::All => Constraint::All,
        ConstraintArg::Perp => Constraint::Perp,
    };
    let rows = sharpness(a.length, a.modes, a.points, constraint)?;
    write_output(a.out.as_deref(), &sharpness_csv(&rows))?;
    Ok(0)
}

fn curvature(a: CurvatureArgs) -> Result<i32, CliError> {
    let q = CurvatureQuery::new(a.genus, a.punctures, a.systole)?;
    let start = Instant::now();
    let bounds = curvature_bounds(&q);
    let report: Report<Nothing, CurvatureBounds> =
        Report::new("curvature", 0, Vec::new(), Some(bounds), start.elapsed().as_secs_f64());
    if a.out.json {
        emit_json(&report)?;
    } else {
        let b = report.details.as_ref().expect("set above");
        let opt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{x:.6}"));
        println!("genus {} punctures {} systole {} ({:?})", q.genus, q.punctures, q.systole, b.regime);
        println!("ric_lo (sharp)    {:.6}", b.ric_lo);
        println!("ric_lo (rounded)  {:.6}", b.ric_lo_rounded);
        println!("sca_lo            {}", opt(b.sca_lo));
        println!("sca_hi            {}", opt(b.sca_hi));
        println!("sec_lo            {}", opt(b.sec_lo));
        println!("sec_perp_lo       {}", opt(b.sec_perp_lo));
        for s in b.constants_used.iter().filter(|s| s.selected) {
            println!("  {:<15} {:>12.6}  {}", s.quantity, s.value, s.source);
        }
        for n in &b.notes {
            println!("note: {n}");
        }
    }
    Ok(0)
}

fn delta(a: DeltaArgs) -> Result<i32, CliError> {
    let start = Instant::now();
    let rows = a.eps.iter().map(|&e| delta_details(e)).collect::<Result<Vec<DeltaOfEps>, _>>()?;
    let report: Report<Nothing, Vec<DeltaOfEps>> =
        Report::new("delta", 0, Vec::new(), Some(rows), start.elapsed().as_secs_f64());
    if a.out.json {
        emit_json(&report)?;
    } else {
        println!("{:>10} {:>20} {:>20} {:>20} {:>10}", "eps", "delta", "H^-1", "(12eps/pi^2)^(1/3)", "ratio");
        for d in report.details.as_ref().expect("set above") {
            println!(
                "{:>10.3e} {:>20.15} {:>20.15} {:>20.15} {:>10.6}",
                d.eps,
                d.delta,
                d.h_inverse,
                d.asymptotic,
                d.delta / d.asymptotic
            );
        }
    }
    Ok(0)
}
