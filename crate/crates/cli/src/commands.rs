use std::path::PathBuf;
use std::time::Instant;

use clap::ValueEnum;
use isoball::analysis::{self, claim_alpha, claim_roots, default_alphas, sweep_claims, verify_aux_chain, ExpansionParams};
use isoball::bounds::{
    hypergeometric_max_ratio, hypergeometric_pmf, lemma7_check, local_expansion_check, nm_bounds, thm1_bound_check,
};
use isoball::constructions as cons;
use isoball::exactmath::{
    ball_size, binom, check_ratio_monotone, check_slice_lower_bound, fmt_rational, rat, slice_size, Rational,
};
use isoball::search::{self, Ambient, SampleConfig, SearchReport};
use isoball::Family;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{BoundsCmd, Cli, Command, ConstructArgs, ConstructionName, EvalArgs, SearchCmd, VerifyCmd, Which};
use crate::report::{float15, RunReport, Table};
use crate::CliError;

/// A finished run: the report, plus a CSV table if one was requested.
pub struct Execution {
    pub report: RunReport,
    pub csv: Option<(PathBuf, Table)>,
}

impl From<RunReport> for Execution {
    fn from(report: RunReport) -> Self {
        Execution { report, csv: None }
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    Ok(serde_json::to_value(x)?)
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> Result<T, CliError> {
    v.clone().ok_or_else(|| CliError::Usage(format!("missing required flag --{flag}")))
}

/// The spelling a value enum has on the command line.
fn flag_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn decimal(x: &Rational) -> String {
    float15(x.to_f64().unwrap_or(f64::NAN))
}

pub fn execute(cli: &Cli) -> Result<Execution, CliError> {
    let start = Instant::now();
    let mut exec = match &cli.command {
        Command::Verify(v) => verify(v, cli.workers)?,
        Command::Search(s) => search_cmd(s, cli.workers)?,
        Command::Construct(c) => construct(c)?.into(),
        Command::Bounds(BoundsCmd::Eval(e)) => eval(e)?.into(),
    };
    if exec.report.timing_secs == 0.0 {
        exec.report.timing_secs = start.elapsed().as_secs_f64();
    }
    Ok(exec)
}

/// Embeds a search report; its wall time moves to the run timing so that
/// verdicts stay reproducible.
fn from_search(mut report: RunReport, search: &SearchReport) -> Result<RunReport, CliError> {
    report.timing_secs = search.wall_time_secs;
    report.verdicts = to_value(&search.without_timing())?;
    for (k, s) in &search.statistics {
        report.stat(k, &s.decimal);
    }
    report.stat("examined", &search.examined);
    report.stat("violations", search.violations);
    report.passed = search.violations == 0;
    Ok(report)
}

fn verify(cmd: &VerifyCmd, workers: usize) -> Result<Execution, CliError> {
    Ok(match cmd {
        VerifyCmd::Lemma6 { n, csv } => lemma6(*n, csv)?,
        VerifyCmd::Nm { n, r } => {
            let rep = search::exhaustive_verify_nm(*n, *r, workers)?;
            from_search(RunReport::new("verify nm").param("n", n).param("r", r), &rep)?.into()
        }
        VerifyCmd::LocalExpansion { n, r } => {
            let rep = search::exhaustive_verify_local_expansion(*n, *r, workers)?;
            from_search(RunReport::new("verify local-expansion").param("n", n).param("r", r), &rep)?.into()
        }
        VerifyCmd::Interlace { r, s, alpha, grid } => interlace(*r, *s, alpha.clone(), *grid, workers)?.into(),
        VerifyCmd::Appendix => {
            let first = analysis::verify_ineq17()?;
            let second = analysis::verify_ineq18()?;
            let mut report = RunReport::new("verify appendix");
            report.passed = first.holds && second.holds;
            report.stat("first_exact_match", first.exact_match);
            report.stat("second_exact_match", second.exact_match);
            report.verdicts = json!({ "first": to_value(&first)?, "second": to_value(&second)? });
            report.into()
        }
        VerifyCmd::Prop9 { n, csv } => prop9(*n, csv)?,
    })
}

fn lemma6(max_n: u64, csv: &Option<PathBuf>) -> Result<Execution, CliError> {
    let mut table = Table::new(&["n", "r", "size", "ball", "ratio", "ratio_decimal", "monotone_step", "slice_bound"]);
    let mut monotone_failures = Vec::new();
    let mut slice_failures = Vec::new();
    let mut checks = 0u64;
    for n in 1..=max_n {
        let mono = check_ratio_monotone(n);
        checks += 1;
        for step in &mono.steps {
            if !step.holds {
                monotone_failures.push(json!({ "n": n, "r": step.r }));
            }
        }
        for r in 0..=n {
            let slice = if n >= 3 && 2 * r <= n {
                checks += 1;
                let v = check_slice_lower_bound(n, r)?;
                if !v.holds {
                    slice_failures.push(json!({ "n": n, "r": r }));
                }
                v.holds.to_string()
            } else {
                String::new()
            };
            if csv.is_some() {
                let size = slice_size(n, r);
                let ball = ball_size(n, r);
                let ratio = Rational::new(size.clone().into(), ball.clone().into());
                let step = mono.steps.get(r as usize).map(|s| s.holds.to_string()).unwrap_or_default();
                table.rows.push(vec![
                    n.to_string(),
                    r.to_string(),
                    size.to_string(),
                    ball.to_string(),
                    fmt_rational(&ratio),
                    decimal(&ratio),
                    step,
                    slice,
                ]);
            }
        }
    }
    let mut report = RunReport::new("verify lemma6").param("n", max_n);
    report.passed = monotone_failures.is_empty() && slice_failures.is_empty();
    report.stat("checks", checks);
    report.verdicts = json!({
        "checks": checks,
        "ratio_monotone_failures": monotone_failures,
        "slice_bound_failures": slice_failures,
    });
    Ok(Execution { report, csv: csv.clone().map(|p| (p, table)) })
}

fn prop9(max_n: u32, csv: &Option<PathBuf>) -> Result<Execution, CliError> {
    let mut table = Table::new(&["n", "r", "size", "max_ratio", "max_ratio_decimal"]);
    let one = rat(1, 1);
    let mut above = Vec::new();
    let mut worst: Option<(Rational, u32, u32)> = None;
    let mut pairs = 0u64;
    for n in 2..=max_n {
        for r in 1..n {
            let v = hypergeometric_max_ratio(r, n)?;
            pairs += 1;
            if v > one {
                above.push(json!({ "n": n, "r": r, "value": fmt_rational(&v) }));
            }
            if csv.is_some() {
                table.rows.push(vec![
                    n.to_string(),
                    r.to_string(),
                    binom(n as u64, r as u64).to_string(),
                    fmt_rational(&v),
                    decimal(&v),
                ]);
            }
            if worst.as_ref().is_none_or(|w| v > w.0) {
                worst = Some((v, r, n));
            }
        }
    }
    let mut report = RunReport::new("verify prop9").param("n", max_n);
    report.passed = above.is_empty();
    report.stat("pairs", pairs);
    let largest = worst.map(|(v, r, n)| {
        report.stat("max_ratio", decimal(&v));
        json!({ "value": fmt_rational(&v), "r": r, "n": n })
    });
    report.verdicts = json!({ "pairs": pairs, "above_one": above, "largest": largest });
    Ok(Execution { report, csv: csv.clone().map(|p| (p, table)) })
}

fn interlace(
    r: Option<u64>,
    s: Option<u64>,
    alpha: Option<Rational>,
    grid: Option<u64>,
    workers: usize,
) -> Result<RunReport, CliError> {
    if let Some(max) = grid {
        let sweep = sweep_claims(max, &default_alphas(), workers)?;
        let mut report = RunReport::new("verify interlace").param("grid", max);
        report.passed = sweep.passed();
        report.stat("checked", sweep.checked);
        report.stat("min_margin", float15(sweep.min_margin));
        report.verdicts = to_value(&sweep)?;
        return Ok(report);
    }
    let (r, s, alpha) = (need(&r, "r")?, need(&s, "s")?, need(&alpha, "alpha")?);
    let params = ExpansionParams::new(r, s, alpha.clone())?;
    let roots = claim_roots(&params)?;
    let alpha_claim = claim_alpha(&params);
    let aux = if s >= r { Some(verify_aux_chain(r, s)?) } else { None };
    let mut report =
        RunReport::new("verify interlace").param("r", r).param("s", s).param("alpha", fmt_rational(&alpha));
    report.passed =
        roots.holds() && !roots.inconclusive() && alpha_claim.holds && aux.as_ref().is_none_or(|a| a.holds);
    report.stat("q", float15(roots.q));
    report.stat("xstar", float15(roots.xstar));
    if let Some(d) = &roots.detail {
        report.stat("x2_minus", float15(d.x2_minus));
        report.stat("x1_plus", float15(d.x1_plus));
    }
    report.verdicts = json!({
        "roots": to_value(&roots)?,
        "alpha": to_value(&alpha_claim)?,
        "constants": to_value(&aux)?,
    });
    Ok(report)
}

fn search_cmd(cmd: &SearchCmd, workers: usize) -> Result<Execution, CliError> {
    Ok(match cmd {
        SearchCmd::MinBoundary { n, size, radius, budget } => {
            let ambient = radius.map_or(Ambient::Cube, Ambient::Ball);
            let rep = search::exhaustive_min_boundary(*n, *size, ambient, *budget, workers)?;
            let report = RunReport::new("search min-boundary")
                .param("n", n)
                .param("size", size)
                .param_opt("R", *radius)
                .param("budget", budget);
            from_search(report, &rep)?.into()
        }
        SearchCmd::Sample(a) => {
            let cfg = SampleConfig {
                generator: a.generator.into(),
                bound: a.bound.into(),
                n: a.n,
                radius: a.radius,
                rho: a.rho.clone(),
                samples: a.samples,
                seed: a.seed,
                assume_n0: a.assume_n0,
                workers,
            };
            let rep = search::sampled_verify(&cfg)?;
            let mut report = RunReport::new("search sample")
                .param("generator", flag_name(&a.generator))
                .param("bound", flag_name(&a.bound))
                .param("n", a.n)
                .param("R", a.radius)
                .param("rho", fmt_rational(&a.rho))
                .param("samples", a.samples)
                .param_opt("assume_n0", a.assume_n0);
            report.seed = Some(a.seed);
            from_search(report, &rep)?.into()
        }
        SearchCmd::Local { n, radius, size, seed, steps } => {
            let rep = search::local_search_minimizer(*n, *radius, *size, *seed, *steps)?;
            let mut report = RunReport::new("search local")
                .param("n", n)
                .param("R", radius)
                .param("size", size)
                .param("steps", steps);
            report.seed = Some(*seed);
            from_search(report, &rep)?.into()
        }
    })
}

fn family_report<F: Family + Serialize>(report: RunReport, family: &F) -> Result<RunReport, CliError> {
    let mut report = report;
    let size = family.size();
    report.stat("size", &size);
    report.verdicts = json!({ "size": size.to_string(), "family": to_value(family)? });
    Ok(report)
}

fn construct(a: &ConstructArgs) -> Result<RunReport, CliError> {
    let name = flag_name(&a.name);
    let report = RunReport::new("construct")
        .param("name", &name)
        .param("n", a.n)
        .param_opt("r", a.r)
        .param_opt("R", a.radius)
        .param_opt("k", a.k)
        .param_opt("size", a.size.as_ref());
    let n = a.n;
    match a.name {
        ConstructionName::Star => family_report(report.param("e", a.e), &cons::star(n, need(&a.r, "r")?, a.e)?),
        ConstructionName::Costar => family_report(report.param("e", a.e), &cons::costar(n, need(&a.r, "r")?, a.e)?),
        ConstructionName::BallHalfspace => {
            family_report(report, &cons::ball_halfspace(n, need(&a.radius, "R")?, need(&a.k, "k")?)?)
        }
        ConstructionName::SliceHalfspace => {
            family_report(report, &cons::slice_halfspace(n, need(&a.r, "r")?, need(&a.k, "k")?)?)
        }
        ConstructionName::Cplus => family_report(report, &cons::cplus(n, need(&a.r, "r")?, need(&a.k, "k")?)?),
        ConstructionName::SizedBallHalfspace => {
            family_report(report, &cons::sized_ball_halfspace(n, need(&a.radius, "R")?, &need(&a.size, "size")?)?)
        }
        ConstructionName::SizedSliceHalfspace => {
            family_report(report, &cons::sized_slice_halfspace(n, need(&a.r, "r")?, &need(&a.size, "size")?)?)
        }
    }
}

fn eval(a: &EvalArgs) -> Result<RunReport, CliError> {
    let report = RunReport::new("bounds eval")
        .param("which", flag_name(&a.which))
        .param("n", a.n)
        .param_opt("r", a.r)
        .param_opt("R", a.radius)
        .param_opt("size", a.size.as_ref())
        .param_opt("boundary", a.boundary.as_ref())
        .param_opt("rho", a.rho.as_ref().map(fmt_rational))
        .param_opt("assume_n0", a.assume_n0)
        .param_opt("m", a.m)
        .param_opt("k", a.k);
    let mut report = report;
    let n = a.n;
    match a.which {
        Which::Nm => {
            let (lower, upper) = nm_bounds(n, need(&a.r, "r")?, &need(&a.size, "size")?)?;
            report.stat("lower", decimal(&lower));
            report.stat("upper", decimal(&upper));
            report.verdicts = json!({ "lower": fmt_rational(&lower), "upper": fmt_rational(&upper) });
        }
        Which::Eq4 => {
            let v = local_expansion_check(n, need(&a.r, "r")?, &need(&a.size, "size")?, &need(&a.boundary, "boundary")?)?;
            report.passed = v.holds;
            report.stat("slack", v.slack.to_decimal(15));
            report.verdicts = to_value(&v)?;
        }
        Which::Thm1 => {
            let v = thm1_bound_check(
                n,
                need(&a.radius, "R")?,
                &need(&a.rho, "rho")?,
                &need(&a.size, "size")?,
                &need(&a.boundary, "boundary")?,
                a.assume_n0,
            )?;
            // below the theorem's threshold a failure is not a counterexample
            report.passed = v.holds || v.exploratory;
            report.stat("slack", v.slack.to_decimal(15));
            report.verdicts = to_value(&v)?;
        }
        Which::Lemma7 => {
            let v = lemma7_check(n, need(&a.radius, "R")?, &need(&a.size, "size")?, &need(&a.boundary, "boundary")?)?;
            report.passed = v.holds || !v.in_scope;
            report.verdicts = to_value(&v)?;
        }
        Which::Hypergeom => {
            let r = need(&a.r, "r")?;
            match (a.m, a.k) {
                (Some(m), Some(k)) => {
                    let p = hypergeometric_pmf(r, m, n, k)?;
                    report.stat("pmf", decimal(&p));
                    report.verdicts = json!({ "pmf": fmt_rational(&p) });
                }
                (None, None) => {
                    let v = hypergeometric_max_ratio(r, n)?;
                    report.passed = v <= rat(1, 1);
                    report.stat("max_ratio", decimal(&v));
                    report.verdicts = json!({ "max_ratio": fmt_rational(&v) });
                }
                _ => return Err(CliError::Usage("--m and --k go together".into())),
            }
        }
    }
    Ok(report)
}
