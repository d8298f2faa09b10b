//! Command-line front end for the q-series laboratory.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage, parameter or
//! I/O error, 3 precision guard.

pub mod args;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use qlab::catalog::{expand, SeriesId};
use qlab::identities::{find_qzeta_relation, run_suite_with};
use qlab::radial::{
    collapsing_residue, decomposed_radial_check_at, for1_value, for2_value, for3_value, quotient_limit_check,
    radial_diff_report, theta_multiplier, ForParams, RadialMode, RadialPath, RootSpec,
};
use qlab::QlabError;

use args::{Cli, Command, Format, Mode, ParamArgs, PathArgs, Theorem};
use report::{
    CoeffsOut, CycloOut, DecomposedOut, IdentityOut, LimitOut, RadialOut, RelationOut, Render,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

enum Failure {
    Usage(String),
    Lib(QlabError),
}

impl From<QlabError> for Failure {
    fn from(e: QlabError) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = std::result::Result<(String, bool, bool), Failure>;

fn render<R: Render>(r: &R, format: Format) -> std::result::Result<String, Failure> {
    let s = match format {
        Format::Text => r.text(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).map_err(|e| Failure::Usage(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => r.csv().map_err(|e| Failure::Usage(e.to_string()))?,
    };
    Ok(s)
}

fn for_params(p: &ParamArgs) -> std::result::Result<ForParams, Failure> {
    match (p.a, p.b, p.h, p.m) {
        (Some(a), Some(b), Some(h), Some(m)) => Ok(ForParams::new(a, b, h, m)?),
        _ => Err(Failure::Usage("this command needs --a, --b, --h and --m".into())),
    }
}

/// `ζ_{2k}^h` from `--k` and optional `--h`.
fn even_root(p: &ParamArgs) -> std::result::Result<(u64, RootSpec), Failure> {
    let k = p.k.ok_or_else(|| Failure::Usage("this command needs --k".into()))?;
    if k == 0 {
        return Err(Failure::Usage("--k must be positive".into()));
    }
    Ok((k, RootSpec::new(p.h.unwrap_or(1), 2 * k)?))
}

fn path(p: &PathArgs) -> std::result::Result<RadialPath, Failure> {
    Ok(RadialPath::new(p.tmin, p.tmax, p.digits)?)
}

fn tolerance(t: f64) -> std::result::Result<f64, Failure> {
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(Failure::Usage(format!("tolerance must be positive, got {t}")))
    }
}

/// Returns the rendered report, whether every verification passed, and
/// whether some radial sample hit the precision cap.
fn execute(cli: &Cli) -> Outcome {
    let f = cli.format;
    match &cli.command {
        Command::Identities(a) => {
            let reports = run_suite_with(a.order, &a.w, a.only, a.perturb)?;
            let out: Vec<IdentityOut> = reports.iter().map(IdentityOut::from).collect();
            let ok = reports.iter().all(|r| r.passed());
            Ok((render(&out, f)?, ok, false))
        }
        Command::Coeffs(a) => {
            let id = SeriesId::new(a.series, a.w.clone(), a.s)?;
            let e = expand(&id, a.order)?;
            let out = CoeffsOut { series: id.to_string(), order: a.order, coefficients: e.coefficient_strings() };
            Ok((render(&out, f)?, true, false))
        }
        Command::Limit(a) => {
            let out = if a.params.a.is_some() || a.params.b.is_some() || a.params.m.is_some() {
                if a.params.k.is_some() {
                    return Err(Failure::Usage("give either --a --b --h --m or --k [--h], not both".into()));
                }
                let p = for_params(&a.params)?;
                LimitOut {
                    quantity: format!("-(1 - w)(1 - 1/w) U(w; ζ) at {p}"),
                    value: CycloOut::new(&for3_value(&p)?, a.digits),
                    theta_multiplier: Some(CycloOut::new(&theta_multiplier(&p), a.digits)),
                    collapsing_residue: Some(collapsing_residue(&p)),
                }
            } else {
                let (k, root) = even_root(&a.params)?;
                let (name, v) = match a.theorem {
                    Theorem::One => ("-4u(ζ)", for1_value(k, &root)?),
                    Theorem::Two if k % 2 == 0 => ("-4ψ(-ζ)", for2_value(k, &root)?),
                    Theorem::Two => ("2φ(-ζ)", for2_value(k, &root)?),
                };
                LimitOut {
                    quantity: format!("{name} at ζ = {root}"),
                    value: CycloOut::new(&v, a.digits),
                    theta_multiplier: None,
                    collapsing_residue: None,
                }
            };
            Ok((render(&out, f)?, true, false))
        }
        Command::Radial(a) => {
            let tol = tolerance(a.tolerance)?;
            let path = path(&a.path)?;
            match a.mode {
                Mode::For1 => {
                    let (k, root) = even_root(&a.params)?;
                    let r = radial_diff_report(RadialMode::For1 { k, root }, &path)?;
                    let out = RadialOut::new(&r, tol);
                    Ok((render(&out, f)?, out.passed(), !r.complete()))
                }
                Mode::For3 => {
                    let r = radial_diff_report(RadialMode::For3(for_params(&a.params)?), &path)?;
                    let out = RadialOut::new(&r, tol);
                    Ok((render(&out, f)?, out.passed(), !r.complete()))
                }
                Mode::Decomposed => {
                    let (k, root) = even_root(&a.params)?;
                    let r = decomposed_radial_check_at(k, &root, &path)?;
                    let out = DecomposedOut::new(&r, tol);
                    Ok((render(&out, f)?, out.status == "pass", !r.composed.complete()))
                }
            }
        }
        Command::Quotient(a) => {
            let tol = tolerance(a.tolerance)?;
            let r = quotient_limit_check(&for_params(&a.params)?, &path(&a.path)?)?;
            let out = RadialOut::new(&r, tol);
            Ok((render(&out, f)?, out.passed(), !r.complete()))
        }
        Command::Qzeta(a) => {
            let r = find_qzeta_relation(a.s, a.order)?;
            Ok((render(&RelationOut::from(&r), f)?, true, false))
        }
    }
}

fn exit_code_for(e: &QlabError) -> i32 {
    match e {
        QlabError::PrecisionGuard { .. } | QlabError::NonConvergence { .. } => EXIT_PRECISION,
        _ => EXIT_USAGE,
    }
}

/// Runs the command line `args` (program name first), writing the report to
/// `out` (or the `--output` file) and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (body, ok, incomplete) = match execute(&cli) {
        Ok(x) => x,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            return EXIT_USAGE;
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code_for(&e);
        }
    };
    let written = match &cli.output {
        Some(p) => std::fs::write(p, body.as_bytes()),
        None => out.write_all(body.as_bytes()).and_then(|_| out.flush()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    if !ok {
        EXIT_FAILED
    } else if incomplete {
        let _ = writeln!(err, "warning: some radii exceeded the precision cap and were skipped");
        EXIT_PRECISION
    } else {
        EXIT_OK
    }
}
