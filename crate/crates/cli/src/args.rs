use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qlab::catalog::SeriesTag;
use qlab::identities::{IdentityTag, Perturbation};
use qlab::Cyclo;

#[derive(Debug, Parser)]
#[command(name = "qlab", version, about = "Exact and high-precision q-series laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the identity suite coefficient by coefficient.
    Identities(IdentitiesArgs),
    /// Exact coefficients of a catalogue series.
    Coeffs(CoeffsArgs),
    /// Exact radial limit at a root of unity.
    Limit(LimitArgs),
    /// Sample a radial difference and extrapolate.
    Radial(RadialArgs),
    /// Sample the Appell–Lerch quotient and compare with the theta multiplier.
    Quotient(QuotientArgs),
    /// Search for a polynomial relation between ζ_q(s) and Q, R.
    Qzeta(QzetaArgs),
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    #[arg(long, default_value_t = 200)]
    pub order: usize,
    /// Comma-separated values of w, e.g. `-1,z3,z4,z6`.
    #[arg(long, value_delimiter = ',', value_parser = parse_root, default_value = "-1,z3,z4,z6", allow_hyphen_values = true)]
    pub w: Vec<Cyclo>,
    /// Check only this identity.
    #[arg(long, value_parser = parse_identity)]
    pub only: Option<IdentityTag>,
    /// Add a defect `INDEX[:DELTA]` (delta defaults to 1) to every right-hand side.
    #[arg(long, value_parser = parse_perturbation)]
    pub perturb: Option<Perturbation>,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, value_parser = parse_series)]
    pub series: SeriesTag,
    #[arg(long, value_parser = parse_root, allow_hyphen_values = true)]
    pub w: Option<Cyclo>,
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long, default_value_t = 20)]
    pub order: usize,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub b: Option<u64>,
    #[arg(long)]
    pub h: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    /// Half the order of the approach root `ζ_{2k}^h`.
    #[arg(long)]
    pub k: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    /// `-4u(ζ)`.
    #[value(name = "1")]
    One,
    /// `-4ψ(-ζ)` or `2φ(-ζ)`.
    #[value(name = "2")]
    Two,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// For `--k`: which closed form to evaluate.
    #[arg(long, value_enum, default_value_t = Theorem::One)]
    pub theorem: Theorem,
    #[arg(long, default_value_t = 50)]
    pub digits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    For1,
    For3,
    Decomposed,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    #[arg(long, default_value_t = 4)]
    pub tmin: u32,
    #[arg(long, default_value_t = 10)]
    pub tmax: u32,
    #[arg(long, default_value_t = 60)]
    pub digits: usize,
}

#[derive(Debug, Args)]
pub struct RadialArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub path: PathArgs,
    /// Largest accepted distance between the extrapolated and exact limits.
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct QuotientArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub path: PathArgs,
    #[arg(long, default_value_t = 1e-2)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct QzetaArgs {
    #[arg(long)]
    pub s: u32,
    #[arg(long, default_value_t = 200)]
    pub order: usize,
}

/// `zK` or `zK^j` for `ζ_K^j`, `-1` for `ζ_2`, `i` for `ζ_4`, `1` for one.
pub fn parse_root(s: &str) -> Result<Cyclo, String> {
    let s = s.trim();
    match s {
        "-1" => return Ok(Cyclo::root(2, 1)),
        "1" => return Ok(Cyclo::one(1)),
        "i" => return Ok(Cyclo::root(4, 1)),
        _ => {}
    }
    let body = s.strip_prefix('z').ok_or_else(|| format!("expected zK, zK^j, -1, i or 1; got `{s}`"))?;
    let (k, j) = match body.split_once('^') {
        Some((k, j)) => (k, j.parse::<i64>().map_err(|e| format!("bad exponent in `{s}`: {e}"))?),
        None => (body, 1),
    };
    let k: u64 = k.parse().map_err(|e| format!("bad order in `{s}`: {e}"))?;
    if k == 0 {
        return Err("root order must be positive".into());
    }
    Ok(Cyclo::root(k, j))
}

fn parse_identity(s: &str) -> Result<IdentityTag, String> {
    s.parse().map_err(|e: qlab::QlabError| e.to_string())
}

fn parse_series(s: &str) -> Result<SeriesTag, String> {
    s.parse().map_err(|e: qlab::QlabError| e.to_string())
}

fn parse_perturbation(s: &str) -> Result<Perturbation, String> {
    let (i, d) = s.split_once(':').unwrap_or((s, "1"));
    let index = i.parse().map_err(|e| format!("bad index `{i}`: {e}"))?;
    let delta = d.parse().map_err(|e| format!("bad delta `{d}`: {e}"))?;
    if delta == 0 {
        return Err("a zero delta is not a defect".into());
    }
    Ok(Perturbation { index, delta })
}
