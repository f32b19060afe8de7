//! The subcommands, each producing text, a JSON value and a verdict.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use motbiv_core::genus::{multiplicative_class, unnormalized_ty_class, GenusSeries, SeriesName};
use motbiv_core::harness::{
    blowup_model_oracles, blowup_suite, bundle_catalogue, bundle_specialization_checks,
    riemann_roch_seeds, run_seeds_with, run_suite, CheckKind, RiemannRochReport, SuiteReport,
    Summary, DEFAULT_BUDGET, MIN_CATALOGUE_BUNDLES,
};
use motbiv_core::report::CheckReport;
use motbiv_core::varmodel::{BundleClass, Variety};
use motbiv_core::{GradedClass, Rational};

use crate::{expr, scenario};

pub const SERIES_ORDER_VAR: &str = "MOTBIV_SERIES_ORDER";
/// Bundles drawn for the catalogue section of `check`.
pub const CATALOGUE_SIZE: usize = MIN_CATALOGUE_BUNDLES + 14;
/// Blow-up models validated and checked when `--n/--m` are not given.
pub const DEFAULT_BLOWUPS: [(usize, usize); 2] = [(2, 0), (3, 1)];

/// A usage, parse or schema problem; exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::error::Error> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub pass: bool,
}

impl Outcome {
    fn value(text: String, json: Value) -> Self {
        Outcome {
            text,
            json,
            pass: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassName {
    Chern,
    Todd,
    LClass,
    Ty,
    UnnormalizedTy,
}

impl ClassName {
    pub const NAMES: [&'static str; 5] = ["chern", "todd", "lclass", "ty", "unnormalized-ty"];

    pub fn parse(s: &str) -> Result<Self, UsageError> {
        match s {
            "chern" => Ok(ClassName::Chern),
            "todd" => Ok(ClassName::Todd),
            "lclass" => Ok(ClassName::LClass),
            "ty" => Ok(ClassName::Ty),
            "unnormalized-ty" => Ok(ClassName::UnnormalizedTy),
            _ => Err(UsageError(format!(
                "unknown class {s:?}; expected one of {}",
                Self::NAMES.join(", ")
            ))),
        }
    }

    fn series(self) -> Option<SeriesName> {
        match self {
            ClassName::Chern => Some(SeriesName::Chern),
            ClassName::Todd => Some(SeriesName::Todd),
            ClassName::LClass => Some(SeriesName::LClass),
            ClassName::Ty => Some(SeriesName::Hirzebruch),
            ClassName::UnnormalizedTy => None,
        }
    }
}

/// The series order: the environment override, or one more than the dimension.
pub fn series_order(x: &Variety) -> Result<usize, UsageError> {
    match std::env::var(SERIES_ORDER_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| UsageError(format!("{SERIES_ORDER_VAR}={v:?} is not a natural number"))),
        Err(_) => Ok(x.dim() + 1),
    }
}

fn tangent_class(x: &Variety, name: ClassName) -> Result<GradedClass, UsageError> {
    let t = BundleClass::tangent(x);
    match name.series() {
        Some(s) => {
            let order = series_order(x)?;
            Ok(multiplicative_class(&GenusSeries::named(s, order), &t)?)
        }
        None => Ok(unnormalized_ty_class(&t)),
    }
}

pub fn cmd_class(variety: &str, class: &str, y: Option<&str>) -> Result<Outcome, UsageError> {
    let x = expr::variety(variety)?;
    let name = ClassName::parse(class)?;
    let mut c = tangent_class(&x, name)?;
    if let Some(y) = y {
        let v: Rational = y
            .trim()
            .parse()
            .map_err(|_| UsageError(format!("--y {y:?} is not a rational number")))?;
        c = c.eval_y(&v);
    }
    let value = c.to_string();
    let json = json!({ "variety": x.key(), "class": class, "y": y, "value": value });
    Ok(Outcome::value(value, json))
}

pub fn cmd_genus(variety: &str) -> Result<Outcome, UsageError> {
    let x = expr::variety(variety)?;
    let chi = x.integrate(&tangent_class(&x, ClassName::Ty)?)?.to_string();
    let json = json!({ "variety": x.key(), "chi_y": chi });
    Ok(Outcome::value(chi, json))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckCommand {
    Axioms,
    Blowup,
    Rr,
    All,
}

impl CheckCommand {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckCommand::Axioms => "axioms",
            CheckCommand::Blowup => "blowup",
            CheckCommand::Rr => "rr",
            CheckCommand::All => "all",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub seed: u64,
    pub cases: usize,
    pub n: Option<usize>,
    pub m: Option<usize>,
}

#[derive(Serialize)]
struct Section<T: Serialize> {
    executed: usize,
    failed: usize,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
struct CatalogueSection {
    bundles: usize,
    summary: Summary,
}

#[derive(Serialize)]
struct BlowupSection {
    n: usize,
    m: usize,
    summary: Summary,
}

fn summarize_reports(reports: &[CheckReport]) -> (usize, usize) {
    (reports.len(), reports.iter().filter(|r| !r.pass).count())
}

fn line(out: &mut String, name: &str, executed: usize, failed: usize, extra: &str) {
    let verdict = if failed == 0 { "pass" } else { "FAIL" };
    let _ = writeln!(
        out,
        "{verdict} {name}: {executed} checks, {failed} failed{extra}"
    );
}

fn failures<'a>(out: &mut String, reports: impl IntoIterator<Item = &'a CheckReport>) {
    for r in reports.into_iter().filter(|r| !r.pass) {
        let _ = writeln!(out, "  {}", r.to_string().replace('\n', "\n  "));
    }
}

fn blowup_pairs(
    opts: &CheckOptions,
    kind: CheckCommand,
) -> Result<Vec<(usize, usize)>, UsageError> {
    match (opts.n, opts.m) {
        (Some(n), Some(m)) => {
            if m >= n {
                return Err(UsageError(format!("--m {m} must be below --n {n}")));
            }
            let mut pairs = vec![(n, m)];
            if kind == CheckCommand::All {
                pairs.extend(DEFAULT_BLOWUPS.iter().filter(|p| **p != (n, m)));
                pairs.sort_unstable();
            }
            Ok(pairs)
        }
        (None, None) => Ok(DEFAULT_BLOWUPS.to_vec()),
        _ => Err(UsageError("--n and --m go together".into())),
    }
}

pub fn cmd_check(kind: CheckCommand, opts: &CheckOptions) -> Result<Outcome, UsageError> {
    if opts.cases == 0 {
        return Err(UsageError("--cases must be positive".into()));
    }
    let end = opts
        .seed
        .checked_add(opts.cases as u64)
        .ok_or_else(|| UsageError("--seed plus --cases overflows".into()))?;
    let seeds: Vec<u64> = (opts.seed..end).collect();
    let pairs = blowup_pairs(opts, kind)?;
    let mut text = String::new();
    let mut sections = serde_json::Map::new();
    let mut pass = true;

    let with_blowups = matches!(kind, CheckCommand::Blowup | CheckCommand::All);
    if with_blowups {
        let mut oracles = Vec::new();
        for &(n, m) in &pairs {
            oracles.extend(blowup_model_oracles(n, m)?);
        }
        let (executed, failed) = summarize_reports(&oracles);
        line(&mut text, "oracles", executed, failed, "");
        failures(&mut text, &oracles);
        sections.insert(
            "oracles".into(),
            json!(Section {
                executed,
                failed,
                body: json!({ "reports": oracles })
            }),
        );
        if failed > 0 {
            let _ = writeln!(text, "skipped: the blow-up model failed its oracles");
            sections.insert("pass".into(), json!(false));
            return Ok(Outcome {
                text: finish(text, false),
                json: wrap(kind, opts, sections),
                pass: false,
            });
        }
        let mut blowups = Vec::new();
        for &(n, m) in &pairs {
            let summary = blowup_suite(n, m);
            line(
                &mut text,
                &format!("blowup P({m}) in P({n})"),
                summary.executed,
                summary.failed,
                "",
            );
            failures(&mut text, &summary.failures);
            pass &= summary.ok();
            blowups.push(BlowupSection { n, m, summary });
        }
        let executed = blowups.iter().map(|b| b.summary.executed).sum();
        let failed = blowups.iter().map(|b| b.summary.failed).sum();
        sections.insert(
            "blowup".into(),
            json!(Section {
                executed,
                failed,
                body: json!({ "diagrams": blowups })
            }),
        );
    }

    if matches!(kind, CheckCommand::Axioms | CheckCommand::All) {
        let script = if kind == CheckCommand::All {
            CheckKind::all()
        } else {
            let mut s = CheckKind::axioms();
            s.push(CheckKind::Laws);
            s
        };
        let report = run_seeds_with(&seeds, DEFAULT_BUDGET, &script);
        suite_text(&mut text, &report);
        pass &= report.ok();
        sections.insert(
            "suite".into(),
            json!(Section {
                executed: report.executed,
                failed: report.failed,
                body: &report
            }),
        );
    }

    if kind == CheckCommand::All {
        let catalogue = bundle_catalogue(opts.seed, CATALOGUE_SIZE)?;
        let mut summary = Summary {
            seed: opts.seed,
            ..Summary::default()
        };
        for b in &catalogue {
            for r in bundle_specialization_checks(b) {
                summary.tally("catalogue", r);
            }
        }
        line(
            &mut text,
            "catalogue specializations",
            summary.executed,
            summary.failed,
            &format!(", {} bundles", catalogue.len()),
        );
        failures(&mut text, &summary.failures);
        pass &= summary.ok();
        let body = CatalogueSection {
            bundles: catalogue.len(),
            summary,
        };
        sections.insert(
            "catalogue".into(),
            json!(Section {
                executed: body.summary.executed,
                failed: body.summary.failed,
                body: &body
            }),
        );
    }

    if matches!(kind, CheckCommand::Rr | CheckCommand::All) {
        let rr: RiemannRochReport = riemann_roch_seeds(&seeds, DEFAULT_BUDGET);
        let extra = format!(
            ", {} projections, {} module pairs",
            rr.projections, rr.module_pairs
        );
        line(
            &mut text,
            "riemann-roch",
            rr.summary.executed,
            rr.summary.failed,
            &extra,
        );
        failures(&mut text, &rr.summary.failures);
        pass &= rr.summary.ok();
        sections.insert(
            "rr".into(),
            json!(Section {
                executed: rr.summary.executed,
                failed: rr.summary.failed,
                body: &rr
            }),
        );
    }

    sections.insert("pass".into(), json!(pass));
    Ok(Outcome {
        text: finish(text, pass),
        json: wrap(kind, opts, sections),
        pass,
    })
}

fn suite_text(text: &mut String, report: &SuiteReport) {
    let extra = format!(
        ", {} scenarios, {} unsupported",
        report.scenarios, report.unsupported
    );
    line(text, "suite", report.executed, report.failed, &extra);
    for (k, v) in &report.coverage {
        let _ = writeln!(text, "  {k}: {v}");
    }
    for w in &report.warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    for s in report.summaries.iter().filter(|s| !s.ok()) {
        let _ = writeln!(text, "  seed {}:", s.seed);
        failures(text, &s.failures);
    }
}

fn finish(mut text: String, pass: bool) -> String {
    text.push_str(if pass { "PASS" } else { "FAIL" });
    text
}

fn wrap(
    kind: CheckCommand,
    opts: &CheckOptions,
    sections: serde_json::Map<String, Value>,
) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("command".into(), json!(format!("check {}", kind.as_str())));
    out.insert("seed".into(), json!(opts.seed));
    out.insert("cases".into(), json!(opts.cases));
    out.extend(sections);
    Value::Object(out)
}

pub fn cmd_scenario(path: &Path) -> Result<Outcome, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let s = scenario::load(&text)?;
    let summary = run_suite(&s);
    let mut out = String::new();
    let extra = format!(", {} unsupported", summary.unsupported);
    line(
        &mut out,
        &format!("scenario {}", path.display()),
        summary.executed,
        summary.failed,
        &extra,
    );
    failures(&mut out, &summary.failures);
    let pass = summary.ok();
    let json = json!({ "scenario": path.display().to_string(), "summary": summary, "pass": pass });
    Ok(Outcome {
        text: finish(out, pass),
        json,
        pass,
    })
}
