//! Numerical radial sampling at `q = ζ·r_t`, `r_t = 1 - 2^{-t}`.

use rayon::prelude::*;

use crate::approx::{Approx, SumControl, Summation};
use crate::bigcomplex::BigComplex;
use crate::catalog::{
    appell_bilateral, b_value, cyclo_approx, euler_product, minus_q_product, mock_f_value, tr1_sum_value,
    tr2_sum_value, u_big_value, u_small_value, with_adaptive_precision, Accuracy, AppellKind, MAX_WORKING_DIGITS,
};
use crate::error::{invalid, QlabError, Result};
use crate::exactnum::Cyclo;
use crate::extrapolate::iterated_aitken;

use super::{exact_u_at_root, for1_value, for3_value, theta_multiplier, ForParams, RootSpec};

/// Aitken levels applied to the samples.
pub const AITKEN_DEPTH: usize = 2;
/// Largest `t` accepted; beyond it the required precision is out of reach.
pub const MAX_T: u32 = 24;

/// The radii `r_t = 1 - 2^{-t}` for `t_min ≤ t ≤ t_max`, each sampled to
/// `digits` digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadialPath {
    t_min: u32,
    t_max: u32,
    digits: usize,
}

impl RadialPath {
    pub fn new(t_min: u32, t_max: u32, digits: usize) -> Result<Self> {
        if t_min < 2 || t_min >= t_max {
            return invalid(format!("need 2 ≤ t_min < t_max, got t_min = {t_min}, t_max = {t_max}"));
        }
        if t_max > MAX_T {
            return invalid(format!("t_max = {t_max} exceeds the supported maximum {MAX_T}"));
        }
        if digits == 0 {
            return invalid("digits must be positive");
        }
        Ok(RadialPath { t_min, t_max, digits })
    }

    pub fn t_min(&self) -> u32 {
        self.t_min
    }

    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn ts(&self) -> impl Iterator<Item = u32> + Clone {
        self.t_min..=self.t_max
    }

    pub fn radius(t: u32, digits: usize) -> BigComplex {
        BigComplex::one_minus_pow2(t, digits)
    }
}

#[derive(Debug, Clone)]
pub struct RadialSample {
    pub t: u32,
    pub r: BigComplex,
    pub value: BigComplex,
    /// Working precision the sample needed.
    pub working_digits: usize,
    /// `log10` of the tracked absolute error.
    pub error_log10: f64,
}

/// A radius whose sample could not be computed within the precision cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedSample {
    pub t: u32,
    pub required_digits: usize,
}

#[derive(Debug, Clone)]
pub struct RadialReport {
    pub label: String,
    pub digits: usize,
    pub samples: Vec<RadialSample>,
    pub skipped: Vec<SkippedSample>,
    pub extrapolated: BigComplex,
    /// Aitken levels actually applied.
    pub levels: usize,
    /// Gap between the last two extrapolants; empirical, not a bound.
    pub error_estimate: f64,
    pub exact_target: Option<Cyclo>,
    /// `|extrapolated - exact_target|`.
    pub agreement: Option<f64>,
}

impl RadialReport {
    /// No sample was skipped.
    pub fn complete(&self) -> bool {
        self.skipped.is_empty()
    }

    pub fn within(&self, tol: f64) -> bool {
        self.agreement.is_some_and(|a| a < tol)
    }

    fn build(
        label: String,
        digits: usize,
        outcomes: Vec<(u32, Result<(Approx, usize)>)>,
        exact_target: Option<Cyclo>,
    ) -> Result<Self> {
        let mut samples = Vec::new();
        let mut skipped = Vec::new();
        for (t, out) in outcomes {
            match out {
                Ok((v, working)) => samples.push(RadialSample {
                    t,
                    r: RadialPath::radius(t, digits + 5),
                    value: v.value.with_digits(digits + 5),
                    working_digits: working,
                    error_log10: v.err,
                }),
                Err(QlabError::PrecisionGuard { required_digits, .. }) => {
                    skipped.push(SkippedSample { t, required_digits })
                }
                Err(e) => return Err(e),
            }
        }
        let Some(ex) = iterated_aitken(&samples.iter().map(|s| s.value.clone()).collect::<Vec<_>>(), AITKEN_DEPTH)
        else {
            let required = skipped.iter().map(|s| s.required_digits).max().unwrap_or(0);
            return Err(QlabError::PrecisionGuard { working_digits: MAX_WORKING_DIGITS, required_digits: required });
        };
        let agreement = exact_target.as_ref().map(|c| {
            let d = ex.value.dist_log10(&c.embed(digits + 5));
            if d == f64::NEG_INFINITY {
                0.0
            } else {
                10f64.powf(d)
            }
        });
        Ok(RadialReport {
            label,
            digits,
            samples,
            skipped,
            extrapolated: ex.value,
            levels: ex.levels.len() - 1,
            error_estimate: ex.error_estimate,
            exact_target,
            agreement,
        })
    }
}

/// `ζ·r_t` at the working precision of `ctl`.
pub fn radial_point(root: &RootSpec, t: u32, ctl: &SumControl) -> Approx {
    let w = ctl.working_digits;
    let z = cyclo_approx(&root.exact(), w);
    z.mul(&Approx::exact(RadialPath::radius(t, w)))
}

/// Evaluates `f` at every radius of the path in parallel, each to the
/// path's accuracy with its own working precision.
fn sample_path<F>(path: &RadialPath, accuracy: Accuracy, f: F) -> Vec<(u32, Result<(Approx, usize)>)>
where
    F: Fn(u32, &SumControl) -> Result<Approx> + Sync,
{
    let ts: Vec<u32> = path.ts().collect();
    ts.par_iter()
        .map(|&t| {
            let start = path.digits + 20;
            (t, with_adaptive_precision(accuracy, start, MAX_WORKING_DIGITS, |ctl| f(t, ctl)))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialMode {
    /// `f(q) - (-1)^k b(q)` towards a primitive root of order `2k`.
    For1 { k: u64, root: RootSpec },
    /// `R(w;q) - μ C(w;q)` with `w = ζ_b^a` and `μ` the theta multiplier.
    For3(ForParams),
}

impl RadialMode {
    pub fn for1(k: u64) -> Result<Self> {
        Ok(RadialMode::For1 { k, root: RootSpec::even(k)? })
    }

    pub fn root(&self) -> RootSpec {
        match self {
            RadialMode::For1 { root, .. } => *root,
            RadialMode::For3(p) => p.root(),
        }
    }

    pub fn exact_target(&self) -> Result<Cyclo> {
        match self {
            RadialMode::For1 { k, root } => for1_value(*k, root),
            RadialMode::For3(p) => for3_value(p),
        }
    }

    fn label(&self) -> String {
        match self {
            RadialMode::For1 { k, root } => format!("f - (-1)^{k} b at {root}"),
            RadialMode::For3(p) => format!("R - mu C at {p}"),
        }
    }
}

/// `f(q) - (-1)^k b(q)`.
pub fn for1_difference(k: u64, q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let f = mock_f_value(q, ctl)?;
    let b = b_value(q, ctl)?;
    Ok(if k.is_multiple_of(2) { f.sub(&b) } else { f.add(&b) })
}

/// `R(w;q) - μ C(w;q)` through the Appell–Lerch forms:
/// `(1 - w⁻¹)/(q;q)_∞ · (S₁ - μ S₂) - (1 - w)(1 - w⁻¹) U(w;q)`.
pub fn for3_difference(p: &ForParams, q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let wd = ctl.working_digits;
    let w = cyclo_approx(&p.w(), wd);
    let winv = cyclo_approx(&p.w().inv()?, wd);
    let mu = cyclo_approx(&theta_multiplier(p), wd);
    let one = ctl.int(1);
    let s1 = appell_bilateral(AppellKind::First, &w, q, ctl)?;
    let s2 = appell_bilateral(AppellKind::Second, &w, q, ctl)?;
    let e = euler_product(q, ctl)?;
    let kf = one.sub(&w).mul(&one.sub(&winv));
    let u = u_big_value(&w, q, ctl)?;
    Ok(one.sub(&winv).mul(&s1.sub(&mu.mul(&s2))).div(&e)?.sub(&kf.mul(&u)))
}

/// Samples the difference of the chosen theorem along the path and
/// extrapolates; radii whose precision requirement exceeds the cap are
/// listed in `skipped`.
pub fn radial_diff_report(mode: RadialMode, path: &RadialPath) -> Result<RadialReport> {
    if let RadialMode::For1 { k, root } = mode {
        if root.m() != 2 * k {
            return invalid(format!("root {root} does not have order 2k = {}", 2 * k));
        }
    }
    let target = mode.exact_target()?;
    let root = mode.root();
    let outcomes = sample_path(path, Accuracy::Mixed(path.digits), |t, ctl| {
        let q = radial_point(&root, t, ctl);
        match &mode {
            RadialMode::For1 { k, .. } => for1_difference(*k, &q, ctl),
            RadialMode::For3(p) => for3_difference(p, &q, ctl),
        }
    });
    RadialReport::build(mode.label(), path.digits, outcomes, Some(target))
}

/// `S₁/S₂`, the quotient of the two bilateral Appell–Lerch sums; the common
/// factor `(1 - w⁻¹)/(q;q)_∞` cancels.
pub fn appell_quotient(p: &ForParams, q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let w = cyclo_approx(&p.w(), ctl.working_digits);
    let s1 = appell_bilateral(AppellKind::First, &w, q, ctl)?;
    let s2 = appell_bilateral(AppellKind::Second, &w, q, ctl)?;
    s1.div(&s2)
}

/// Samples `(R + (1-w)(1-w⁻¹)U) / C` towards `ζ_m^h` and compares the
/// extrapolated limit with the theta multiplier.
pub fn quotient_limit_check(p: &ForParams, path: &RadialPath) -> Result<RadialReport> {
    let root = p.root();
    let outcomes = sample_path(path, Accuracy::Mixed(path.digits), |t, ctl| {
        appell_quotient(p, &radial_point(&root, t, ctl), ctl)
    });
    RadialReport::build(format!("Appell-Lerch quotient at {p}"), path.digits, outcomes, Some(theta_multiplier(p)))
}

/// Residue-class parts of both bilateral sums at one point.
#[derive(Debug, Clone)]
pub struct AppellSplit {
    /// `first[c]` collects the indices `n ≡ c (mod m)` of `S₁`.
    pub first: Vec<BigComplex>,
    pub second: Vec<BigComplex>,
    pub collapsing_residue: u64,
    pub working_digits: usize,
}

fn split_one(
    kind: AppellKind,
    m: usize,
    w: &Approx,
    q: &Approx,
    ctl: &SumControl,
) -> Result<(Vec<Approx>, Approx)> {
    let ctl = &ctl.adapted_to(q);
    let one = ctl.int(1);
    let winv = one.div(w)?;
    let start = one.div(&one.sub(&winv))?;
    let (c_step, d_start, d_step) = match kind {
        AppellKind::First => (w.neg(), one.clone(), winv.neg()),
        AppellKind::Second => (ctl.int(-1), w.clone(), ctl.int(-1)),
    };
    let mut parts = vec![ctl.int(0); m];
    parts[0] = start.clone();
    let (mut c, mut d, mut tri, mut qn) = (one.clone(), d_start, one.clone(), one.clone());
    let mut sum = Summation::new(*ctl, start);
    for n in 1usize.. {
        qn = qn.mul(q);
        tri = tri.mul(&qn);
        c = c.mul(&c_step);
        if n > 1 {
            d = d.mul(&d_step);
        }
        let pos = c.mul(&tri).div(&one.sub(&winv.mul(&qn)))?;
        let neg = d.mul(&tri).div(&one.sub(&w.mul(&qn)))?;
        parts[n % m] = parts[n % m].add(&pos);
        let r = (m - n % m) % m;
        parts[r] = parts[r].add(&neg);
        if sum.push(&pos.add(&neg))? {
            break;
        }
    }
    Ok((parts, sum.finish()))
}

/// Splits `S₁` and `S₂` at `q = ζ_m^h·r` into `m` subsums by `n mod m`.
pub fn split_appell_numeric(p: &ForParams, r: &BigComplex, digits: usize) -> Result<AppellSplit> {
    if !(r.im_f64() == 0.0 && r.re_f64() > 0.0 && r.re_f64() < 1.0) {
        return invalid("radius must satisfy 0 < r < 1");
    }
    if digits == 0 {
        return invalid("digits must be positive");
    }
    let m = p.root().m() as usize;
    let mut working = digits + 20;
    loop {
        let ctl = SumControl::new(working);
        let q = cyclo_approx(&p.root().exact(), working).mul(&Approx::exact(r.with_digits(working)));
        let w = cyclo_approx(&p.w(), working);
        let (first, total1) = split_one(AppellKind::First, m, &w, &q, &ctl)?;
        let (second, total2) = split_one(AppellKind::Second, m, &w, &q, &ctl)?;
        let verdict = ctl.guard(&total1, digits).and_then(|_| ctl.guard(&total2, digits));
        for part in first.iter().chain(&second) {
            ctl.guard(part, digits).or_else(|e| if verdict.is_err() { Ok(()) } else { Err(e) })?;
        }
        match verdict {
            Ok(()) => {
                let out = |v: Vec<Approx>| v.into_iter().map(|a| a.value.with_digits(digits + 5)).collect();
                return Ok(AppellSplit {
                    first: out(first),
                    second: out(second),
                    collapsing_residue: super::collapsing_residue(p),
                    working_digits: working,
                });
            }
            Err(QlabError::PrecisionGuard { required_digits, .. }) => {
                let next = required_digits.max(working + working / 4 + 8);
                if next > MAX_WORKING_DIGITS {
                    return Err(QlabError::PrecisionGuard { working_digits: working, required_digits });
                }
                working = next;
            }
            Err(e) => return Err(e),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DecomposedSample {
    pub t: u32,
    pub r: BigComplex,
    /// `log10 |(-q;q)_∞²|`.
    pub prefactor_log10: f64,
    /// The TR1 sum for even `k`, TR2 for odd `k`.
    pub tr_sum: BigComplex,
    pub u_value: BigComplex,
    /// `|u(ζ r_t) - u(ζ)|`.
    pub u_distance: f64,
    /// `-4u + c·(-q;q)_∞²·TR`, equal to `f - (-1)^k b`.
    pub composed: BigComplex,
}

/// The cancellation-free route: the prefactor `(-q;q)_∞²` vanishes at the
/// root, the TR sums stay bounded, and `u(q) → u(ζ)`.
#[derive(Debug, Clone)]
pub struct DecomposedReport {
    pub k: u64,
    pub root: RootSpec,
    pub samples: Vec<DecomposedSample>,
    pub u_target: Cyclo,
    /// Extrapolation of the composed difference against `-4u(ζ)`.
    pub composed: RadialReport,
}

impl DecomposedReport {
    /// `|(-q;q)_∞²|` strictly decreases in `t`.
    pub fn prefactor_decreasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].prefactor_log10 < w[0].prefactor_log10)
    }

    /// `log10 |(-q;q)_∞²|` at the largest sampled radius (the value itself
    /// underflows `f64` quickly).
    pub fn final_prefactor_log10(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.prefactor_log10)
    }

    /// Largest `|TR|` seen.
    pub fn tr_box(&self) -> f64 {
        self.samples.iter().map(|s| s.tr_sum.abs_f64()).fold(0.0, f64::max)
    }

    /// Every `|TR|` lies within `10·max(1, |TR(t_min)|)`.
    pub fn tr_bounded(&self) -> bool {
        let Some(first) = self.samples.first() else { return false };
        let bound = 10.0 * first.tr_sum.abs_f64().max(1.0);
        self.samples.iter().all(|s| s.tr_sum.abs_f64().is_finite() && s.tr_sum.abs_f64() <= bound)
    }

    pub fn u_distance_decreasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].u_distance < w[0].u_distance)
    }

    pub fn final_u_distance(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.u_distance)
    }
}

struct DecomposedPoint {
    prefactor: Approx,
    tr: Approx,
    u: Approx,
}

fn decomposed_point(k: u64, root: &RootSpec, t: u32, digits: usize) -> Result<DecomposedPoint> {
    let at = |ctl: &SumControl| radial_point(root, t, ctl);
    let start = digits + 20;
    let (prefactor, _) = with_adaptive_precision(Accuracy::Relative(digits), start, MAX_WORKING_DIGITS, |ctl| {
        Ok(minus_q_product(&at(ctl), ctl)?.square())
    })?;
    let (tr, _) = with_adaptive_precision(Accuracy::Mixed(digits), start, MAX_WORKING_DIGITS, |ctl| {
        if k.is_multiple_of(2) {
            tr1_sum_value(&at(ctl), ctl)
        } else {
            tr2_sum_value(&at(ctl), ctl)
        }
    })?;
    let (u, _) = with_adaptive_precision(Accuracy::Mixed(digits), start, MAX_WORKING_DIGITS, |ctl| {
        u_small_value(&at(ctl), ctl)
    })?;
    Ok(DecomposedPoint { prefactor, tr, u })
}

/// The decomposed route towards the standard root `ζ_{2k}`.
pub fn decomposed_radial_check(k: u64, path: &RadialPath) -> Result<DecomposedReport> {
    decomposed_radial_check_at(k, &RootSpec::even(k)?, path)
}

pub fn decomposed_radial_check_at(k: u64, root: &RootSpec, path: &RadialPath) -> Result<DecomposedReport> {
    let u_target = exact_u_at_root(k, root)?;
    let target = for1_value(k, root)?;
    let digits = path.digits;
    let u_embedded = u_target.embed(digits + 5);
    let ts: Vec<u32> = path.ts().collect();
    let points: Vec<(u32, Result<DecomposedPoint>)> =
        ts.par_iter().map(|&t| (t, decomposed_point(k, root, t, digits))).collect();
    let mut samples = Vec::new();
    let mut outcomes = Vec::new();
    for (t, pt) in points {
        match pt {
            Ok(pt) => {
                let c = if k.is_multiple_of(2) { 8 } else { 2 };
                let composed = pt.u.mul_i64(-4).add(&pt.prefactor.mul(&pt.tr).mul_i64(c));
                let d = pt.u.value.dist_log10(&u_embedded);
                samples.push(DecomposedSample {
                    t,
                    r: RadialPath::radius(t, digits + 5),
                    prefactor_log10: pt.prefactor.log10_abs(),
                    tr_sum: pt.tr.value.with_digits(digits + 5),
                    u_value: pt.u.value.with_digits(digits + 5),
                    u_distance: if d == f64::NEG_INFINITY { 0.0 } else { 10f64.powf(d) },
                    composed: composed.value.with_digits(digits + 5),
                });
                let w = composed.value.digits();
                outcomes.push((t, Ok((composed, w))));
            }
            Err(e @ QlabError::PrecisionGuard { .. }) => outcomes.push((t, Err(e))),
            Err(e) => return Err(e),
        }
    }
    let composed =
        RadialReport::build(format!("-4u + prefactor·TR at {root}"), digits, outcomes, Some(target))?;
    Ok(DecomposedReport { k, root: *root, samples, u_target, composed })
}
