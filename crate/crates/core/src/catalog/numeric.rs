//! Numerical values of the catalogue at a point `|q| < 1`.
//!
//! Infinite products are never multiplied out factor by factor: near the
//! unit circle that would take millions of factors. Instead
//! `(q;q)_∞ = Σ_k (-1)^k q^{k(3k-1)/2}` and the Jacobi triple product
//! `(w;q)_∞ (q/w;q)_∞ (q;q)_∞ = Σ_n (-1)^n w^n q^{n(n-1)/2}` are used, whose
//! exponents grow quadratically. Sums are run by ratio recurrences.

use crate::approx::{Approx, SumControl, Summation};
use crate::bigcomplex::BigComplex;
use crate::error::{invalid, QlabError, Result};
use crate::exactnum::Cyclo;

use super::{AppellKind, Eisenstein, SeriesId, SeriesTag};

/// Working precision never exceeds this many digits.
pub const MAX_WORKING_DIGITS: usize = 40_000;

fn one(ctl: &SumControl) -> Approx {
    ctl.int(1)
}

/// `(q;q)_∞` by the pentagonal number theorem.
pub fn euler_product(q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let q3 = q.powi(3);
    let mut qk = q.clone();
    let mut a = one(ctl);
    let mut step = q.clone();
    let mut sum = Summation::new(*ctl, one(ctl));
    for k in 1.. {
        a = a.mul(&step);
        step = step.mul(&q3);
        let b = a.mul(&qk);
        qk = qk.mul(q);
        let pair = a.add(&b);
        let term = if k % 2 == 1 { pair.neg() } else { pair };
        if sum.push(&term)? {
            break;
        }
    }
    Ok(sum.finish())
}

/// `(-q;q)_∞ = (q²;q²)_∞ / (q;q)_∞`.
pub fn minus_q_product(q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    euler_product(&q.square(), ctl)?.div(&euler_product(q, ctl)?)
}

/// `f(q) = Σ q^{n²}/(-q;q)_n²`.
pub fn mock_f_value(q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let q2 = q.square();
    let mut qn = one(ctl);
    let mut qodd = q.clone();
    let mut t = one(ctl);
    let mut sum = Summation::new(*ctl, one(ctl));
    loop {
        qn = qn.mul(q);
        let den = one(ctl).add(&qn).square();
        t = t.mul(&qodd).div(&den)?;
        qodd = qodd.mul(&q2);
        if sum.push(&t)? {
            break;
        }
    }
    Ok(sum.finish())
}

/// `b(q) = (q;q)_∞³ / (q²;q²)_∞²`, which equals `(q;q)_∞/(-q;q)_∞²`.
pub fn b_value(q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let e1 = euler_product(q, ctl)?;
    let e2 = euler_product(&q.square(), ctl)?;
    e1.powi(3).div(&e2.square())
}

/// `u(q) = Σ (-q;q)_n² q^{n+1}`.
pub fn u_small_value(q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let mut qn = one(ctl);
    let mut t = q.clone();
    let mut sum = Summation::new(*ctl, t.clone());
    loop {
        qn = qn.mul(q);
        t = t.mul(&one(ctl).add(&qn).square()).mul(q);
        if sum.push(&t)? {
            break;
        }
    }
    Ok(sum.finish())
}

/// `ψ(q) = Σ (-q²;q²)_n q^{n+1}`.
pub fn psi_value(q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let q2 = q.square();
    let mut q2n = one(ctl);
    let mut t = q.clone();
    let mut sum = Summation::new(*ctl, t.clone());
    loop {
        q2n = q2n.mul(&q2);
        t = t.mul(&one(ctl).add(&q2n)).mul(q);
        if sum.push(&t)? {
            break;
        }
    }
    Ok(sum.finish())
}

/// `φ(q) = 1 + Σ (-1)^n (q;q²)_n q^{2n+1}`.
pub fn phi_value(q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let q2 = q.square();
    let mut qodd = q.clone();
    let mut t = q.clone();
    let mut sum = Summation::new(*ctl, one(ctl).add(&t));
    loop {
        t = t.mul(&one(ctl).sub(&qodd)).mul(&q2).neg();
        qodd = qodd.mul(&q2);
        if sum.push(&t)? {
            break;
        }
    }
    Ok(sum.finish())
}

/// `R(w;q) = Σ q^{n²}/((wq;q)_n (w⁻¹q;q)_n)`.
pub fn rank_value(w: &Approx, q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let winv = one(ctl).div(w)?;
    let q2 = q.square();
    let mut qn = one(ctl);
    let mut qodd = q.clone();
    let mut t = one(ctl);
    let mut sum = Summation::new(*ctl, one(ctl));
    loop {
        qn = qn.mul(q);
        let den = one(ctl).sub(&w.mul(&qn)).mul(&one(ctl).sub(&winv.mul(&qn)));
        t = t.mul(&qodd).div(&den)?;
        qodd = qodd.mul(&q2);
        if sum.push(&t)? {
            break;
        }
    }
    Ok(sum.finish())
}

/// `U(w;q) = Σ (wq;q)_n (w⁻¹q;q)_n q^{n+1}`.
pub fn u_big_value(w: &Approx, q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let winv = one(ctl).div(w)?;
    let mut qn = one(ctl);
    let mut t = q.clone();
    let mut sum = Summation::new(*ctl, t.clone());
    loop {
        qn = qn.mul(q);
        let fac = one(ctl).sub(&w.mul(&qn)).mul(&one(ctl).sub(&winv.mul(&qn)));
        t = t.mul(&fac).mul(q);
        if sum.push(&t)? {
            break;
        }
    }
    Ok(sum.finish())
}

/// `Σ_{n∈Z} (-1)^n w^n q^{n(n-1)/2} = (w;q)_∞ (q/w;q)_∞ (q;q)_∞`.
pub fn triple_product(w: &Approx, q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let winv = one(ctl).div(w)?;
    let mut pos = one(ctl);
    let mut neg = one(ctl);
    let mut qn = one(ctl);
    let mut sum = Summation::new(*ctl, one(ctl));
    loop {
        // pos: (-w)^n q^{n(n-1)/2}, neg: (-w⁻¹)^n q^{n(n+1)/2}
        pos = pos.mul(w).mul(&qn).neg();
        qn = qn.mul(q);
        neg = neg.mul(&winv).mul(&qn).neg();
        if sum.push(&pos.add(&neg))? {
            break;
        }
    }
    Ok(sum.finish())
}

/// `C(w;q) = (1 - w)(q;q)_∞² / Σ_n (-1)^n w^n q^{n(n-1)/2}`; `1/(q;q)_∞` at `w = 1`.
pub fn crank_value(w: &Approx, w_is_one: bool, q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let e = euler_product(q, ctl)?;
    if w_is_one {
        return one(ctl).div(&e);
    }
    let theta = triple_product(w, q, ctl)?;
    one(ctl).sub(w).mul(&e.square()).div(&theta)
}

/// The bilateral sum `Σ_{n∈Z} c_n q^{n(n+1)/2}/(1 - w⁻¹q^n)` of an
/// Appell–Lerch sum, with the negative half rewritten as in the exact case.
pub fn appell_bilateral(kind: AppellKind, w: &Approx, q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let winv = one(ctl).div(w)?;
    let start = one(ctl).div(&one(ctl).sub(&winv))?;
    let (c_step, d_start, d_step) = match kind {
        AppellKind::First => (w.neg(), one(ctl), winv.neg()),
        AppellKind::Second => (ctl.int(-1), w.clone(), ctl.int(-1)),
    };
    // after step n: c = c_n, d = (-w)·c_{-n}, tri = q^{n(n+1)/2}, qn = q^n
    let mut c = one(ctl);
    let mut d = d_start.clone();
    let mut tri = one(ctl);
    let mut qn = one(ctl);
    let mut sum = Summation::new(*ctl, start);
    for n in 1usize.. {
        qn = qn.mul(q);
        tri = tri.mul(&qn);
        c = c.mul(&c_step);
        if n > 1 {
            d = d.mul(&d_step);
        }
        let pos = c.mul(&tri).div(&one(ctl).sub(&winv.mul(&qn)))?;
        let neg = d.mul(&tri).div(&one(ctl).sub(&w.mul(&qn)))?;
        if sum.push(&pos.add(&neg))? {
            break;
        }
    }
    Ok(sum.finish())
}

/// `(1 - w⁻¹)/(q;q)_∞ · Σ_{n∈Z} c_n q^{n(n+1)/2}/(1 - w⁻¹q^n)`.
pub fn appell_value(kind: AppellKind, w: &Approx, q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let s = appell_bilateral(kind, w, q, ctl)?;
    let winv = one(ctl).div(w)?;
    one(ctl).sub(&winv).mul(&s).div(&euler_product(q, ctl)?)
}

/// `ζ_q(s) = Σ_{m≥1} m^{s-1} q^m / (1 - q^m)`.
pub fn qzeta_value(s: u32, q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let mut qm = one(ctl);
    let mut sum = Summation::new(*ctl, ctl.int(0));
    for m in 1i64.. {
        qm = qm.mul(q);
        let mut coef = one(ctl);
        for _ in 1..s {
            coef = coef.mul_i64(m);
        }
        let t = coef.mul(&qm).div(&one(ctl).sub(&qm))?;
        if sum.push(&t)? {
            break;
        }
    }
    Ok(sum.finish())
}

pub fn eisenstein_value(which: Eisenstein, q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let (s, c) = match which {
        Eisenstein::P => (2, -24),
        Eisenstein::Q => (4, 240),
        Eisenstein::R => (6, -504),
    };
    Ok(one(ctl).add(&qzeta_value(s, q, ctl)?.mul_i64(c)))
}

/// `Σ_{n≥1} (-1)^{n-1} (q;q²)_{n-1} q^{n²} / (-q;q²)_n²`.
pub fn tr1_sum_value(q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let q2 = q.square();
    let first = q.div(&one(ctl).add(q).square())?;
    let mut t = first.clone();
    let mut qodd = q.clone(); // q^{2n-3} at step n
    let mut sum = Summation::new(*ctl, first);
    loop {
        let prev_odd = qodd.clone();
        qodd = qodd.mul(&q2); // q^{2n-1}
        let num = one(ctl).sub(&prev_odd).mul(&qodd);
        let den = one(ctl).add(&qodd).square();
        t = t.mul(&num).div(&den)?.neg();
        if sum.push(&t)? {
            break;
        }
    }
    Ok(sum.finish())
}

/// `Σ_{n≥0} (-1)^n (q;q²)_n q^{n²} / (-q²;q²)_n²`.
pub fn tr2_sum_value(q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    let q2 = q.square();
    let mut t = one(ctl);
    let mut qodd = q.clone(); // q^{2n-1}
    let mut q2n = one(ctl);
    let mut sum = Summation::new(*ctl, one(ctl));
    loop {
        q2n = q2n.mul(&q2);
        let num = one(ctl).sub(&qodd).mul(&qodd);
        let den = one(ctl).add(&q2n).square();
        t = t.mul(&num).div(&den)?.neg();
        qodd = qodd.mul(&q2);
        if sum.push(&t)? {
            break;
        }
    }
    Ok(sum.finish())
}

/// A catalogue series at fixed working precision.
pub fn eval_at(id: &SeriesId, q: &Approx, ctl: &SumControl) -> Result<Approx> {
    let ctl = &ctl.adapted_to(q);
    use SeriesTag::*;
    let w = || -> Approx {
        let w = id.w().expect("validated");
        cyclo_approx(w, ctl.working_digits)
    };
    match id.tag() {
        F => mock_f_value(q, ctl),
        B => b_value(q, ctl),
        USmall => u_small_value(q, ctl),
        Psi => psi_value(q, ctl),
        Phi => phi_value(q, ctl),
        Rank => rank_value(&w(), q, ctl),
        Crank => crank_value(&w(), id.w().is_some_and(Cyclo::is_one), q, ctl),
        UBig => u_big_value(&w(), q, ctl),
        Appell1 => appell_value(AppellKind::First, &w(), q, ctl),
        Appell2 => appell_value(AppellKind::Second, &w(), q, ctl),
        Qzeta => qzeta_value(id.s().expect("validated"), q, ctl),
        EisP => eisenstein_value(Eisenstein::P, q, ctl),
        EisQ => eisenstein_value(Eisenstein::Q, q, ctl),
        EisR => eisenstein_value(Eisenstein::R, q, ctl),
    }
}

/// Embedding of an exact cyclotomic number, correctly rounded.
pub fn cyclo_approx(c: &Cyclo, digits: usize) -> Approx {
    match c.as_rational() {
        Some(r) if r.is_integer() => Approx::exact(BigComplex::from_rat(r, digits)),
        _ => Approx::rounded(c.embed(digits)),
    }
}

#[derive(Debug, Clone)]
pub struct NumericValue {
    pub value: BigComplex,
    /// `log10` of the tracked absolute error bound.
    pub error_log10: f64,
    pub working_digits: usize,
}

/// How the result of an adaptive evaluation is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Accuracy {
    /// `digits` significant digits above 1, `digits` decimals below.
    Mixed(usize),
    /// `digits` significant digits regardless of size.
    Relative(usize),
}

/// Runs `f` at increasing working precision until the result meets the
/// accuracy request (see [`SumControl::guard`]) or the cap is hit.
pub fn with_adaptive_precision(
    accuracy: Accuracy,
    start: usize,
    cap: usize,
    f: impl Fn(&SumControl) -> Result<Approx>,
) -> Result<(Approx, usize)> {
    let digits = match accuracy {
        Accuracy::Mixed(d) | Accuracy::Relative(d) => d,
    };
    let mut working = start.max(digits + 10);
    loop {
        let ctl = SumControl::new(working);
        let v = f(&ctl)?;
        let verdict = match accuracy {
            Accuracy::Mixed(d) => ctl.guard(&v, d),
            Accuracy::Relative(d) => ctl.guard_relative(&v, d),
        };
        match verdict {
            Ok(()) => return Ok((v, working)),
            Err(QlabError::PrecisionGuard { required_digits, .. }) => {
                let next = required_digits.max(working + working / 4 + 8);
                if next > cap {
                    return Err(QlabError::PrecisionGuard { working_digits: working, required_digits });
                }
                working = next;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Numerical value of a catalogue series at `q`, accurate to about
/// `digits` significant digits (absolute digits when the value is below 1).
pub fn eval_numeric(id: &SeriesId, q: &BigComplex, digits: usize) -> Result<NumericValue> {
    if digits == 0 {
        return invalid("digits must be positive");
    }
    if !q.is_finite() || q.log10_abs() >= 0.0 {
        return Err(QlabError::OutsideUnitDisc);
    }
    let (v, working) = with_adaptive_precision(Accuracy::Mixed(digits), digits + 20, MAX_WORKING_DIGITS, |ctl| {
        let qa = Approx::exact(q.with_digits(ctl.working_digits.max(q.digits())));
        eval_at(id, &qa, ctl)
    })?;
    Ok(NumericValue { value: v.value.with_digits(digits + 5), error_log10: v.err, working_digits: working })
}
