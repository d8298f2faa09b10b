//! Complex values with a running first-order bound on their absolute error.
//!
//! Near the unit circle the interesting quantities are small differences of
//! astronomically large ones, so the working precision has to be chosen from
//! the magnitudes that actually occur. Each [`Approx`] carries
//! `err = log10` of an absolute error bound, propagated through every
//! operation together with the rounding of the operation itself, and `peak`,
//! the largest magnitude that entered an addition on the way.

use crate::bigcomplex::BigComplex;
use crate::error::{QlabError, Result};

const LOG10_2: f64 = std::f64::consts::LOG10_2;
/// Allowance for the few roundings inside one complex operation.
const OP_SLACK: f64 = 0.7;

/// `log10(10^a + 10^b)`.
pub fn log10_sum(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    if hi == f64::INFINITY {
        return hi;
    }
    hi + (1.0 + 10f64.powf(lo - hi)).log10()
}

#[derive(Debug, Clone)]
pub struct Approx {
    pub value: BigComplex,
    /// `log10` of the absolute error bound (`-inf` for exact values).
    pub err: f64,
    /// `log10` of the largest magnitude added or subtracted so far.
    pub peak: f64,
}

fn precision_log10(v: &BigComplex) -> f64 {
    v.bits() as f64 * LOG10_2
}

fn rounding(v: &BigComplex) -> f64 {
    v.log10_abs() - precision_log10(v) + OP_SLACK
}

impl Approx {
    /// A value known exactly (e.g. a dyadic rational or an integer).
    pub fn exact(value: BigComplex) -> Self {
        let peak = value.log10_abs();
        Approx { value, err: f64::NEG_INFINITY, peak }
    }

    /// A value correct to the last bit of its precision.
    pub fn rounded(value: BigComplex) -> Self {
        let err = rounding(&value);
        let peak = value.log10_abs();
        Approx { value, err, peak }
    }

    pub fn log10_abs(&self) -> f64 {
        self.value.log10_abs()
    }

    /// `log10` of the relative error bound.
    pub fn rel_err(&self) -> f64 {
        self.err - self.log10_abs()
    }

    pub fn digits(&self) -> usize {
        self.value.digits()
    }

    pub fn add(&self, o: &Approx) -> Approx {
        let value = &self.value + &o.value;
        let err = log10_sum(log10_sum(self.err, o.err), rounding(&value));
        let peak = self.peak.max(o.peak).max(self.log10_abs()).max(o.log10_abs());
        Approx { value, err, peak }
    }

    pub fn sub(&self, o: &Approx) -> Approx {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Approx {
        Approx { value: -&self.value, err: self.err, peak: self.peak }
    }

    pub fn mul(&self, o: &Approx) -> Approx {
        let value = &self.value * &o.value;
        let e1 = self.log10_abs() + o.err;
        let e2 = o.log10_abs() + self.err;
        let err = log10_sum(log10_sum(e1, e2), rounding(&value));
        Approx { value, err, peak: self.peak.max(o.peak) }
    }

    pub fn square(&self) -> Approx {
        self.mul(self)
    }

    /// Multiplication by an exact small integer.
    pub fn mul_i64(&self, k: i64) -> Approx {
        let value = self.value.mul_i64(k);
        let lk = (k.unsigned_abs() as f64).log10();
        Approx { err: log10_sum(self.err + lk, rounding(&value)), value, peak: self.peak }
    }

    pub fn div(&self, o: &Approx) -> Result<Approx> {
        let value = self.value.checked_div(&o.value).ok_or(QlabError::DivisionByZero)?;
        let rel_o = o.rel_err();
        let err = if rel_o > -1.0 {
            // divisor not even known to one digit
            f64::INFINITY
        } else {
            let e1 = self.err - o.log10_abs();
            let e2 = value.log10_abs() + rel_o;
            log10_sum(log10_sum(e1, e2), rounding(&value))
        };
        Ok(Approx { value, err, peak: self.peak.max(o.peak) })
    }

    pub fn powi(&self, mut e: u64) -> Approx {
        let mut base = self.clone();
        let mut acc = Approx::exact(BigComplex::one(self.digits()));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Declares extra absolute uncertainty (a truncated tail, say).
    pub fn widen(&self, extra_err: f64) -> Approx {
        Approx { err: log10_sum(self.err, extra_err), ..self.clone() }
    }

    /// The error target `target` (log10, absolute) is met?
    pub fn meets(&self, target: f64) -> bool {
        self.err <= target
    }
}

/// Precision policy for one evaluation at a fixed working precision.
#[derive(Debug, Clone, Copy)]
pub struct SumControl {
    /// Terms below `10^-(working + 10)` times the running maximum are negligible.
    pub working_digits: usize,
    pub term_cap: usize,
    /// Consecutive negligible terms needed to stop.
    pub window: usize,
}

impl SumControl {
    pub fn new(working_digits: usize) -> Self {
        SumControl { working_digits, term_cap: 4_000_000, window: 3 }
    }

    pub fn with_term_cap(self, term_cap: usize) -> Self {
        SumControl { term_cap, ..self }
    }

    /// Fresh exact constant at the working precision.
    pub fn int(&self, n: i64) -> Approx {
        Approx::exact(BigComplex::from_i64(n, self.working_digits))
    }

    /// Error target for a value of magnitude `log_mag` asked to `digits`
    /// digits: relative for large values, absolute below 1.
    pub fn target(log_mag: f64, digits: usize) -> f64 {
        log_mag.max(0.0) - digits as f64
    }

    /// Precision guard: `Err(PrecisionGuard)` when `v` misses `digits`,
    /// either by its tracked error or because the largest magnitude that was
    /// cancelled leaves too little room (`W ≥ log10 M + digits + 10`).
    /// Accuracy is relative for values above 1 and absolute below.
    pub fn guard(&self, v: &Approx, digits: usize) -> Result<()> {
        self.guard_scaled(v, digits, v.log10_abs().max(0.0))
    }

    /// As [`SumControl::guard`] but always relative to `|v|`.
    pub fn guard_relative(&self, v: &Approx, digits: usize) -> Result<()> {
        self.guard_scaled(v, digits, v.log10_abs())
    }

    fn guard_scaled(&self, v: &Approx, digits: usize, scale: f64) -> Result<()> {
        let target = scale - digits as f64;
        let w = precision_log10(&v.value).max(self.working_digits as f64);
        let by_peak = v.peak - scale + digits as f64 + 10.0;
        let short_by = (v.err - target).max(by_peak - w);
        if v.err.is_finite() && short_by <= 0.0 && v.value.is_finite() {
            return Ok(());
        }
        let required = if v.err.is_finite() && short_by.is_finite() {
            (w + short_by.max(0.0) + 12.0).ceil() as usize
        } else {
            self.working_digits * 2
        };
        Err(QlabError::PrecisionGuard { working_digits: self.working_digits, required_digits: required })
    }

    /// Stopping window adapted to `q`: near the unit circle summands can dip
    /// and recover over about `1/(1 - |q|)` indices, so at least that many
    /// consecutive negligible terms are required.
    pub fn adapted_to(&self, q: &Approx) -> SumControl {
        let gap = 1.0 - 10f64.powf(q.log10_abs());
        let span = if gap > 0.0 { (2.0 / gap).ceil() } else { f64::INFINITY };
        let window = if span.is_finite() { (span as usize).clamp(3, 1 << 24) } else { 1 << 24 };
        SumControl { window: window.max(self.window), ..*self }
    }
}

/// Running sum with the stopping rule of [`SumControl`].
pub struct Summation {
    ctl: SumControl,
    acc: Approx,
    max_log: f64,
    small_run: usize,
    terms: usize,
    last_log: f64,
}

impl Summation {
    pub fn new(ctl: SumControl, start: Approx) -> Self {
        let max_log = start.log10_abs();
        Summation { ctl, acc: start, max_log, small_run: 0, terms: 0, last_log: f64::NEG_INFINITY }
    }

    /// Adds a term; `Ok(true)` once the sum has converged.
    pub fn push(&mut self, term: &Approx) -> Result<bool> {
        self.acc = self.acc.add(term);
        let lt = term.log10_abs();
        self.last_log = lt;
        self.max_log = self.max_log.max(self.acc.log10_abs()).max(lt);
        let negligible = lt < self.max_log - (self.ctl.working_digits as f64 + 10.0);
        self.small_run = if negligible { self.small_run + 1 } else { 0 };
        self.terms += 1;
        if self.small_run >= self.ctl.window {
            return Ok(true);
        }
        if self.terms >= self.ctl.term_cap {
            return Err(QlabError::NonConvergence { terms: self.terms });
        }
        Ok(false)
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    /// The sum, with the last few terms counted as a tail allowance.
    pub fn finish(self) -> Approx {
        self.acc.widen(self.last_log + 1.0)
    }
}
