//! Command-line front end. [`run`] does all the work and returns the exit code
//! with the captured output, so the binary is a thin wrapper and tests can call
//! it in-process.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 configuration error,
//! 3 integrator or runtime failure.

mod args;
mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;

use clap::Parser;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

pub use args::*;
pub use report::{Report, ResultEntry};

use crate::brackets::{verify_commuting_family, BracketMode, ConstraintKind, ConstraintPair};
use crate::dynamics::{
    constraint_violation, drift_report, halving_ratio, integrate_constrained, integrate_flat, quartic_exact,
    DriftReport, QuarticParams, Trajectory,
};
use crate::error::Error;
use crate::families::{self, FamilyKind, HamiltonianKind};
use crate::observable::Observable;
use crate::operators::{self, Expectation, OperatorReport};
use crate::params::{cyclic_identity_exact, Parameters};
use crate::parse::{format_rational, parse_f64_list, parse_rational, parse_rational_list};
use crate::phase::PhasePoint;
use crate::sampling;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Constraint residual bound for constrained runs.
const CONSTRAINT_TOL: f64 = 1e-10;
/// Agreement bound between the integrated and closed-form quartic solution.
const QUARTIC_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

fn config(e: Error) -> Failure {
    Failure { code: EXIT_CONFIG, message: e.to_string() }
}

fn runtime(e: Error) -> Failure {
    Failure { code: EXIT_RUNTIME, message: e.to_string() }
}

#[derive(Default)]
struct Output {
    stdout: String,
    stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_CONFIG, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_PASS, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut out = Output::default();
    let result = match &cli.command {
        Command::Verify(VerifyCommand::Brackets(a)) => cmd_verify_brackets(a, &mut out),
        Command::Verify(VerifyCommand::Operators(a)) => cmd_verify_operators(a, &mut out),
        Command::Simulate(a) => cmd_simulate(a, &mut out),
        Command::Identity(IdentityCommand::Cyclic(a)) => cmd_identity(a, &mut out),
    };
    match result {
        Ok(code) => Outcome { code, stdout: out.stdout, stderr: out.stderr },
        Err(f) => {
            let _ = writeln!(out.stderr, "error: {}", f.message);
            Outcome { code: f.code, stdout: out.stdout, stderr: out.stderr }
        }
    }
}

fn default_alphas(n: usize) -> Vec<BigRational> {
    (0..n).map(|i| BigRational::from_integer(num_bigint::BigInt::from(1u64) << i)).collect()
}

fn resolve_params(a: &ParamArgs) -> Result<Parameters, Failure> {
    let alpha = parse_rational(&a.alpha).map_err(config)?;
    let alphas = match (&a.alphas, a.n) {
        (Some(text), n) => {
            let list = parse_rational_list(text).map_err(config)?;
            if let Some(n) = n.filter(|&n| n != list.len()) {
                return Err(config(Error::DimensionMismatch { expected: n, found: list.len() }));
            }
            list
        }
        (None, Some(n)) => default_alphas(n),
        (None, None) => return Err(config(Error::InvalidArgument("give --n or --alphas".into()))),
    };
    Parameters::new(alphas, alpha).map_err(config)
}

fn resolve_n(a: &ParamArgs) -> Result<usize, Failure> {
    match (&a.alphas, a.n) {
        (_, Some(n)) => Ok(n),
        (Some(text), None) => Ok(parse_rational_list(text).map_err(config)?.len()),
        (None, None) => Err(config(Error::InvalidArgument("give --n or --alphas".into()))),
    }
}

fn params_config(p: &Parameters) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("n".into(), json!(p.n()));
    m.insert("alphas".into(), json!(p.alphas_text()));
    m.insert("alpha".into(), json!(p.alpha_text()));
    m
}

fn emit(report: &Report, output: Option<&Path>, out: &mut Output) -> Result<i32, Failure> {
    let text = report.to_json();
    if let Some(path) = output {
        std::fs::write(path, &text).map_err(|e| runtime(e.into()))?;
    }
    out.stdout.push_str(&text);
    Ok(if report.passed { EXIT_PASS } else { EXIT_FAIL })
}

fn parse_member(token: &str, params: &Parameters) -> crate::Result<Observable> {
    let token = token.trim();
    let split = token.find(|c: char| c.is_ascii_digit()).ok_or_else(|| Error::Parse(format!("missing index in '{token}'")))?;
    let (name, digits) = token.split_at(split);
    let index: usize = digits.parse().map_err(|_| Error::Parse(format!("invalid index in '{token}'")))?;
    if index == 0 {
        return Err(Error::IndexOutOfRange { index, n: params.n() });
    }
    let i = index - 1;
    match name {
        "F" => families::make_f(i, params),
        "G" => families::make_g(i, params),
        "Jalpha" => families::make_jalpha(i, params),
        "Htilde" => families::make_htilde(i, params),
        "H" => families::make_h(i, params),
        "Ltail" => families::make_sqrt_l_tail(i, params),
        _ => Err(Error::Parse(format!("unknown family member '{token}'"))),
    }
}

fn resolve_family(spec: &str, params: &Parameters) -> crate::Result<Vec<Observable>> {
    if let Some(list) = spec.strip_prefix("mixed:") {
        return list.split(',').map(|t| parse_member(t, params)).collect();
    }
    let kind = match spec {
        "F" => FamilyKind::F,
        "G" => FamilyKind::G,
        "Jalpha" => FamilyKind::Jalpha,
        "Htilde" => FamilyKind::Htilde,
        "H" => FamilyKind::H,
        "sqrtL-tails" => FamilyKind::SqrtLTail,
        "J" => FamilyKind::AngularJ,
        "L" => FamilyKind::SqrtL,
        _ => return Err(Error::Parse(format!("unknown family '{spec}'"))),
    };
    families::family(kind, params)
}

fn cmd_verify_brackets(a: &BracketArgs, out: &mut Output) -> Result<i32, Failure> {
    let params = resolve_params(&a.params)?;
    if !(a.tol > 0.0) {
        return Err(config(Error::InvalidArgument("--tol must be positive".into())));
    }
    let family = resolve_family(&a.family, &params).map_err(config)?;
    let mode = match a.bracket {
        BracketChoice::Poisson => BracketMode::Poisson,
        BracketChoice::DiracSphere => BracketMode::Dirac(ConstraintPair::sphere(params.n())),
        BracketChoice::DiracEllipsoid => BracketMode::Dirac(ConstraintPair::ellipsoid(&params).map_err(config)?),
    };
    let reports = verify_commuting_family(&family, &mode, a.trials, a.seed, a.tol).map_err(config)?;
    let mut results = Vec::new();
    for i in 0..family.len() {
        for k in i + 1..family.len() {
            let pair: Vec<_> = reports.iter().filter(|r| r.i == i && r.k == k).collect();
            let worst = pair.iter().map(|r| r.residual.abs()).fold(0.0, |m: f64, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) });
            let passed = pair.iter().all(|r| r.passed);
            if let Some(err) = pair.iter().find_map(|r| r.error.as_ref()) {
                let _ = writeln!(out.stderr, "{{{},{}}}: {err}", family[i].name(), family[k].name());
            }
            results.push(ResultEntry::residual(format!("{{{},{}}}", family[i].name(), family[k].name()), worst, passed));
        }
    }
    let mut cfg = params_config(&params);
    cfg.insert("family".into(), json!(a.family));
    cfg.insert("bracket".into(), json!(mode.label()));
    cfg.insert("trials".into(), json!(a.trials));
    cfg.insert("tol".into(), json!(a.tol));
    cfg.insert("seed".into(), json!(a.seed));
    let report = Report::new("verify brackets", cfg, results);
    let failed = report.results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(
        out.stderr,
        "{} {} pair(s) under the {} bracket: {}",
        a.family,
        report.results.len(),
        mode.label(),
        if failed == 0 { "all commute".to_string() } else { format!("{failed} failing") }
    );
    emit(&report, a.output.as_deref(), out)
}

fn operator_summary(report: &OperatorReport) -> String {
    let vanishing = |c: &&crate::operators::OperatorCheck| c.expectation == Expectation::Zero && c.passed;
    let brackets: Vec<&str> =
        report.checks.iter().filter(vanishing).filter(|c| c.id.starts_with('[')).map(|c| c.id.as_str()).collect();
    let mut text = String::new();
    if !brackets.is_empty() {
        let _ = writeln!(text, "{}=0 (exact)", brackets.join("="));
    }
    for c in report.checks.iter().filter(vanishing).filter(|c| !c.id.starts_with('[')) {
        let _ = writeln!(text, "{} = 0 (exact)", c.id);
    }
    for c in report.checks.iter().filter(|c| !vanishing(c)) {
        let verdict = if c.passed { "ok" } else { "FAILED" };
        let _ = writeln!(text, "{}: {} term(s), {verdict}", c.id, c.term_count);
    }
    text
}

fn cmd_verify_operators(a: &OperatorArgs, out: &mut Output) -> Result<i32, Failure> {
    let (report, cfg) = match a.relation {
        Relation::Son | Relation::Aux => {
            let n = resolve_n(&a.params)?;
            let report = if a.relation == Relation::Son {
                operators::verify_son(n)
            } else {
                operators::verify_aux_relations(n)
            }
            .map_err(config)?;
            let mut cfg = Map::new();
            cfg.insert("n".into(), json!(n));
            (report, cfg)
        }
        rel => {
            let params = resolve_params(&a.params)?;
            let report = match rel {
                Relation::Hk => operators::verify_hk(&params),
                Relation::Xpj => operators::verify_xpj_symmetry(&params),
                Relation::Dilation => operators::verify_dilation_identity(&params),
                _ => operators::verify_naive_noncommute(&params),
            }
            .map_err(config)?;
            (report, params_config(&params))
        }
    };
    let mut cfg = cfg;
    cfg.insert("relation".into(), json!(report.relation));
    let results = report
        .checks
        .iter()
        .map(|c| ResultEntry::terms(c.id.clone(), c.term_count, c.passed))
        .collect();
    let mut json_report = Report::new("verify operators", cfg, results);
    json_report.notes = report.notes.clone();
    out.stderr.push_str(&operator_summary(&report));
    emit(&json_report, a.output.as_deref(), out)
}

fn start_point(a: &SimulateArgs, n: usize) -> Result<PhasePoint, Failure> {
    match (&a.x0, &a.p0) {
        (None, None) => Ok(sampling::sample_point(&mut sampling::rng(a.seed), n)),
        (x0, p0) => {
            let x = match x0 {
                Some(t) => parse_f64_list(t).map_err(config)?,
                None => vec![0.0; n],
            };
            let p = match p0 {
                Some(t) => parse_f64_list(t).map_err(config)?,
                None => vec![0.0; n],
            };
            if x.len() != n || p.len() != n {
                return Err(config(Error::DimensionMismatch { expected: n, found: x.len().max(p.len()) }));
            }
            Ok(PhasePoint { x, p })
        }
    }
}

fn drift_results(drift: &DriftReport, tol: f64) -> Vec<ResultEntry> {
    drift
        .entries
        .iter()
        .map(|e| ResultEntry::residual(format!("drift:{}", e.name), e.relative_drift, e.relative_drift <= tol))
        .collect()
}

struct Run {
    traj: Trajectory,
    monitored: Vec<Observable>,
    constraint: Option<ConstraintKind>,
    params: Option<Parameters>,
    quartic: Option<QuarticParams>,
}

fn integrate(a: &SimulateArgs, h: f64, steps: usize, out: &mut Output) -> Result<Run, Failure> {
    match a.system {
        SystemChoice::Neumann | SystemChoice::Ellipsoid => {
            let params = resolve_params(&a.params)?;
            let (kind, ham, fam) = if a.system == SystemChoice::Neumann {
                (ConstraintKind::Sphere, HamiltonianKind::Neumann, FamilyKind::G)
            } else {
                (ConstraintKind::Ellipsoid, HamiltonianKind::EllipsoidGeodesic, FamilyKind::F)
            };
            let pair = ConstraintPair::new(kind, &params).map_err(config)?;
            let raw = start_point(a, params.n())?;
            let start = pair.project(&raw).map_err(config)?;
            let moved = raw.x.iter().chain(&raw.p).zip(start.x.iter().chain(&start.p)).any(|(u, v)| (u - v).abs() > 1e-12);
            if moved && (a.x0.is_some() || a.p0.is_some()) {
                let _ = writeln!(
                    out.stderr,
                    "warning: start point is off the constraint surface (phi = {:e}, Pi = {:e}); projected",
                    pair.phi_value(&raw.x),
                    pair.pi_value(&raw.x, &raw.p)
                );
            }
            let traj = integrate_constrained(kind, &params, &start, h, steps).map_err(runtime)?;
            let mut monitored = vec![families::make_hamiltonian(ham, &params).map_err(config)?];
            monitored.extend(families::family(fam, &params).map_err(config)?);
            Ok(Run { traj, monitored, constraint: Some(kind), params: Some(params), quartic: None })
        }
        SystemChoice::Quartic => {
            let qp = match (&a.x0, &a.p0) {
                (None, None) => {
                    let sign = if a.negative_branch { -1.0 } else { 1.0 };
                    QuarticParams::new(a.big_p, a.mu, a.energy, a.q0, 0.0, sign).map_err(config)?
                }
                _ => QuarticParams::from_state(a.mu, &start_point(a, 2)?, 0.0).map_err(config)?,
            };
            let ham = families::quartic_observable(qp.mu);
            let start = match (&a.x0, &a.p0) {
                (None, None) => qp.initial_state(),
                _ => start_point(a, 2)?,
            };
            let traj = integrate_flat(&ham, &start, h, steps).map_err(runtime)?;
            Ok(Run { traj, monitored: vec![ham], constraint: None, params: None, quartic: Some(qp) })
        }
        SystemChoice::Hk => {
            let params = resolve_params(&a.params)?;
            let ham = match a.k {
                Some(k) if k >= 1 => families::make_h(k - 1, &params),
                Some(k) => Err(Error::IndexOutOfRange { index: k, n: params.n() }),
                None => families::make_h_over_alpha_sum(&params),
            }
            .map_err(config)?;
            let start = start_point(a, params.n())?;
            let traj = integrate_flat(&ham, &start, h, steps).map_err(runtime)?;
            let mut monitored = vec![ham];
            monitored.extend(families::family(FamilyKind::H, &params).map_err(config)?);
            Ok(Run { traj, monitored, constraint: None, params: Some(params), quartic: None })
        }
    }
}

fn quartic_error(traj: &Trajectory, qp: &QuarticParams) -> Result<f64, Failure> {
    let mut worst: f64 = 0.0;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let exact = quartic_exact(qp, *t).map_err(runtime)?;
        worst = worst.max((s.x[1] - s.x[0] - exact).abs());
    }
    Ok(worst)
}

fn cmd_simulate(a: &SimulateArgs, out: &mut Output) -> Result<i32, Failure> {
    if !(a.h > 0.0) || !a.h.is_finite() {
        return Err(config(Error::InvalidArgument("--h must be positive".into())));
    }
    let run = integrate(a, a.h, a.steps, out)?;
    let mut drift = drift_report(&run.traj, &run.monitored).map_err(runtime)?;
    let mut results = drift_results(&drift, a.drift_tol);
    if let (Some(kind), Some(params)) = (run.constraint, &run.params) {
        let v = constraint_violation(kind, params, &run.traj).map_err(runtime)?;
        drift.constraint_violation = Some(v);
        results.push(ResultEntry::residual("constraint", v, v <= CONSTRAINT_TOL));
    }
    if let Some(qp) = &run.quartic {
        let err = quartic_error(&run.traj, qp)?;
        results.push(ResultEntry::residual("q-vs-exact", err, err <= QUARTIC_TOL));
    }
    if let Some(path) = &a.csv {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path).map_err(|e| runtime(e.into()))?);
        run.traj.write_csv(&mut file, &run.monitored).map_err(runtime)?;
        std::io::Write::flush(&mut file).map_err(|e| runtime(e.into()))?;
    }
    let mut cfg = match &run.params {
        Some(p) => params_config(p),
        None => Map::new(),
    };
    cfg.insert("system".into(), json!(format!("{:?}", a.system).to_lowercase()));
    cfg.insert("h".into(), json!(a.h));
    cfg.insert("steps".into(), json!(a.steps));
    cfg.insert("seed".into(), json!(a.seed));
    cfg.insert("start".into(), json!(run.traj.states[0]));
    if let Some(qp) = &run.quartic {
        cfg.insert("quartic".into(), json!(qp));
    }
    if let Some(k) = a.k {
        cfg.insert("k".into(), json!(k));
    }
    let mut report = Report::new("simulate", cfg, results);
    if let Some(cut) = &run.traj.truncated {
        report.notes.push(format!("escaped at step {} (t = {}, max |coordinate| = {:e})", cut.step, cut.t, cut.max_abs));
    }
    let _ = writeln!(
        out.stderr,
        "{} steps of h = {}: max relative drift {:e}",
        run.traj.len() - 1,
        a.h,
        drift.max_relative_drift()
    );
    if a.order_check {
        let (_, _, order) = order_study(a).map_err(|message| Failure { code: EXIT_RUNTIME, message })?;
        drift.order_estimate = Some(order);
    }
    report.drift = Some(drift);
    emit(&report, a.output.as_deref(), out)
}

/// Worst relative drift at `h` and at `h/2` over the same time span, and the
/// implied order `log2(ratio)`.
pub fn order_study(a: &SimulateArgs) -> Result<(f64, f64, f64), String> {
    let mut sink = Output::default();
    let coarse = integrate(a, a.h, a.steps, &mut sink).map_err(|f| f.message)?;
    let fine = integrate(a, a.h / 2.0, a.steps * 2, &mut sink).map_err(|f| f.message)?;
    let dc = drift_report(&coarse.traj, &coarse.monitored).map_err(|e| e.to_string())?;
    let df = drift_report(&fine.traj, &fine.monitored).map_err(|e| e.to_string())?;
    let ratio = halving_ratio(&dc, &df);
    Ok((dc.max_relative_drift(), df.max_relative_drift(), ratio.log2()))
}

fn cmd_identity(a: &CyclicArgs, out: &mut Output) -> Result<i32, Failure> {
    let alphas = parse_rational_list(&a.alphas).map_err(config)?;
    let params = Parameters::new(alphas, BigRational::zero()).map_err(config)?;
    let n = params.n();
    if n < 3 {
        return Err(config(Error::TooFewCoordinates { needed: 3, found: n }));
    }
    let mut results = Vec::new();
    for i in 0..n {
        for k in i + 1..n {
            for l in k + 1..n {
                let value = cyclic_identity_exact(&params, i, k, l).map_err(config)?;
                let id = format!("({},{},{})", i + 1, k + 1, l + 1);
                if !value.is_zero() {
                    let _ = writeln!(out.stderr, "{id}: {}", format_rational(&value));
                }
                results.push(ResultEntry::residual(id, crate::parse::rational_to_f64(&value), value.is_zero()));
            }
        }
    }
    let mut cfg = Map::new();
    cfg.insert("alphas".into(), json!(params.alphas_text()));
    let report = Report::new("identity cyclic", cfg, results);
    let _ = writeln!(
        out.stderr,
        "{} triple(s): {}",
        report.results.len(),
        if report.passed { "all exactly 0" } else { "nonzero residual" }
    );
    emit(&report, a.output.as_deref(), out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("involution").chain(args.iter().copied()))
    }

    #[test]
    fn default_alphas_are_powers_of_two() {
        assert_eq!(default_alphas(4).iter().map(format_rational).collect::<Vec<_>>(), ["1", "2", "4", "8"]);
    }

    #[test]
    fn identity_exit_codes() {
        assert_eq!(go(&["identity", "cyclic", "--alphas", "1,2,4"]).code, EXIT_PASS);
        assert_eq!(go(&["identity", "cyclic", "--alphas", "1/3,2/7,5"]).code, EXIT_PASS);
        assert_eq!(go(&["identity", "cyclic", "--alphas", "1,2"]).code, EXIT_CONFIG);
        assert_eq!(go(&["identity", "cyclic", "--alphas", "1,1,2"]).code, EXIT_CONFIG);
    }

    #[test]
    fn usage_errors_are_config_errors() {
        assert_eq!(go(&["verify"]).code, EXIT_CONFIG);
        assert_eq!(go(&["simulate", "--system", "nope"]).code, EXIT_CONFIG);
        let help = go(&["--help"]);
        assert_eq!(help.code, EXIT_PASS);
        assert!(help.stdout.contains("simulate"));
    }

    #[test]
    fn member_parsing() {
        let p = Parameters::from_ints(&[1, 2, 4], 0).unwrap();
        let fam = resolve_family("mixed:F1,G1", &p).unwrap();
        assert_eq!(fam.iter().map(|o| o.name().to_string()).collect::<Vec<_>>(), ["F1", "G1"]);
        assert!(resolve_family("mixed:F0", &p).is_err());
        assert!(resolve_family("mixed:Q1", &p).is_err());
        assert!(resolve_family("mixed:F9", &p).is_err());
        assert!(resolve_family("nope", &p).is_err());
    }
}
