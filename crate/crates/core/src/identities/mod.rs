//! Coefficient-wise certification of q-series identities, and the graded
//! relation finder for q-zeta values.

mod qzeta;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::catalog::{
    appell_lerch, b_series, bilateral_even_sum, bilateral_odd_sum, crank, minus_q_infinite, mock_f, rank, u_big,
    u_small, AppellKind,
};
use crate::error::{invalid, QlabError, Result};
use crate::exactnum::{rat, rat_int, Cyclo, FieldElem, Rat};
use crate::series::{pochhammer, PochSpec, Series};

pub use qzeta::{find_qzeta_relation, RelationResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IdentityTag {
    Rama1,
    Rama2,
    CombinedMinus,
    CombinedPlus,
    Tr1,
    Tr2,
    AltTr1,
    PartialTheta,
    BilateralOdd,
    BilateralEvenWeighted,
}

impl IdentityTag {
    pub const ALL: [IdentityTag; 10] = [
        IdentityTag::Rama1,
        IdentityTag::Rama2,
        IdentityTag::CombinedMinus,
        IdentityTag::CombinedPlus,
        IdentityTag::Tr1,
        IdentityTag::Tr2,
        IdentityTag::AltTr1,
        IdentityTag::PartialTheta,
        IdentityTag::BilateralOdd,
        IdentityTag::BilateralEvenWeighted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityTag::Rama1 => "RAMA1",
            IdentityTag::Rama2 => "RAMA2",
            IdentityTag::CombinedMinus => "COMBINED_MINUS",
            IdentityTag::CombinedPlus => "COMBINED_PLUS",
            IdentityTag::Tr1 => "TR1",
            IdentityTag::Tr2 => "TR2",
            IdentityTag::AltTr1 => "ALT_TR1",
            IdentityTag::PartialTheta => "PARTIAL_THETA",
            IdentityTag::BilateralOdd => "BILATERAL_ODD",
            IdentityTag::BilateralEvenWeighted => "BILATERAL_EVEN_WEIGHTED",
        }
    }

    pub fn takes_w(self) -> bool {
        matches!(self, IdentityTag::Rama1 | IdentityTag::Rama2)
    }
}

impl fmt::Display for IdentityTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityTag {
    type Err = QlabError;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase();
        IdentityTag::ALL
            .into_iter()
            .find(|t| t.name() == up)
            .ok_or_else(|| QlabError::InvalidParameter(format!("unknown identity `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub n: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: IdentityTag,
    pub order: usize,
    #[serde(serialize_with = "display_opt")]
    pub w: Option<Cyclo>,
    pub status: Status,
    pub first_mismatch: Option<Mismatch>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn display_opt<S: Serializer, T: fmt::Display>(v: &Option<T>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

/// A deliberate defect: `delta` is added to right-hand-side coefficient `index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Perturbation {
    pub index: usize,
    pub delta: i64,
}

/// Both sides of an identity, truncated at the same order.
#[derive(Debug, Clone, PartialEq)]
pub enum Sides {
    Rational(Series<Rat>, Series<Rat>),
    Cyclotomic(Series<Cyclo>, Series<Cyclo>),
}

fn validate(tag: IdentityTag, order: usize, w: Option<&Cyclo>) -> Result<()> {
    if order < 1 {
        return invalid("order must be ≥ 1");
    }
    match (tag.takes_w(), w) {
        (true, None) => invalid(format!("{tag} needs a parameter w")),
        (false, Some(_)) => invalid(format!("{tag} takes no parameter w")),
        (true, Some(w)) if w.is_one() => invalid(format!("{tag} is singular at w = 1")),
        (true, Some(w)) if w.is_zero() => invalid("w must be nonzero"),
        _ => Ok(()),
    }
}

/// Builds both sides exactly.
pub fn sides(tag: IdentityTag, order: usize, w: Option<&Cyclo>) -> Result<Sides> {
    validate(tag, order, w)?;
    let n = order;
    let euler = || pochhammer(&PochSpec::infinite(rat_int(1), 1, 1), n).expect("valid spec");
    Ok(match tag {
        IdentityTag::Rama1 => {
            let w = w.expect("validated");
            let m = w.order();
            let one = Cyclo::one(m);
            let winv = w.inv()?;
            let k = (one.clone() - w) * &(one - &winv);
            let lhs = &rank(w, n)? + &u_big(w, n)?.scale(&k);
            Sides::Cyclotomic(lhs, appell_lerch(AppellKind::First, w, n)?)
        }
        IdentityTag::Rama2 => {
            let w = w.expect("validated");
            Sides::Cyclotomic(crank(w, n)?, appell_lerch(AppellKind::Second, w, n)?)
        }
        IdentityTag::CombinedMinus => {
            let lhs = &(&mock_f(n) + &u_small(n).scale_int(4)) - &b_series(n);
            let rhs = bilateral_even_sum(n).scale_int(4).try_div(&euler())?;
            Sides::Rational(lhs, rhs)
        }
        IdentityTag::CombinedPlus => {
            let lhs = &(&mock_f(n) + &u_small(n).scale_int(4)) + &b_series(n);
            let rhs = bilateral_odd_sum(n).scale_int(4).try_div(&euler())?;
            Sides::Rational(lhs, rhs)
        }
        IdentityTag::Tr1 => {
            let lhs = bilateral_even_sum(n).try_div(&euler())?;
            let rhs = minus_q_squared(n).try_mul(&tr1_sum(n))?.scale_int(2);
            Sides::Rational(lhs, rhs)
        }
        IdentityTag::Tr2 => {
            let lhs = bilateral_odd_sum(n).try_div(&euler())?;
            let rhs = minus_q_squared(n).try_mul(&tr2_sum(n))?.scale(&rat(1, 2));
            Sides::Rational(lhs, rhs)
        }
        IdentityTag::AltTr1 => {
            let lhs = bilateral_even_sum(n).try_div(&euler())?;
            let rhs = minus_q_squared(n).try_mul(&alt_tr1_sum(n))?.scale_int(2);
            Sides::Rational(lhs, rhs)
        }
        IdentityTag::PartialTheta => Sides::Rational(partial_theta_lhs(n), partial_theta(n)),
        IdentityTag::BilateralOdd => {
            let pref = minus_q_infinite(n).try_mul(&pochhammer(&PochSpec::infinite(rat_int(-1), 1, 2), n)?)?;
            Sides::Rational(bilateral_odd_sum(n), pref.try_mul(&bilateral_odd_rhs_sum(n))?)
        }
        IdentityTag::BilateralEvenWeighted => {
            Sides::Rational(bilateral_even_sum(n), even_weighted_prefactor(n).try_mul(&even_weighted_sum(n))?)
        }
    })
}

fn minus_q_squared(n: usize) -> Series<Rat> {
    let p = minus_q_infinite(n);
    &p * &p
}

/// `Σ_{n≥1} (-1)^{n-1} (q;q²)_{n-1} q^{n²} / (-q;q²)_n²`.
pub fn tr1_sum(order: usize) -> Series<Rat> {
    let (one, m1) = (rat_int(1), rat_int(-1));
    let mut total = Series::zero(order, &());
    // after step k: (q;q²)_{k-1} / (-q;q²)_k²
    let mut ratio = Series::one(order, &());
    let mut k = 1;
    while k * k <= order {
        if k > 1 {
            ratio.mul_binomial_in_place(&one, 2 * k - 3);
        }
        ratio.div_binomial_in_place(&m1, 2 * k - 1);
        ratio.div_binomial_in_place(&m1, 2 * k - 1);
        let sign = if k % 2 == 1 { None } else { Some(&m1) };
        total.add_shifted(&ratio, k * k, sign).expect("same order");
        k += 1;
    }
    total
}

/// `Σ_{n≥0} (-1)^n (q;q²)_n q^{n²} / (-q²;q²)_n²`.
pub fn tr2_sum(order: usize) -> Series<Rat> {
    let (one, m1) = (rat_int(1), rat_int(-1));
    let mut total = Series::zero(order, &());
    let mut ratio = Series::one(order, &());
    let mut k = 0;
    while k * k <= order {
        if k > 0 {
            ratio.mul_binomial_in_place(&one, 2 * k - 1);
            ratio.div_binomial_in_place(&m1, 2 * k);
            ratio.div_binomial_in_place(&m1, 2 * k);
        }
        let sign = if k % 2 == 0 { None } else { Some(&m1) };
        total.add_shifted(&ratio, k * k, sign).expect("same order");
        k += 1;
    }
    total
}

/// `Σ_{n≥1} (-1)^{n-1} (-q²;q²)_{n-1} q^n / (-q;q²)_n`.
pub fn alt_tr1_sum(order: usize) -> Series<Rat> {
    let m1 = rat_int(-1);
    let mut total = Series::zero(order, &());
    let mut ratio = Series::one(order, &());
    for k in 1..=order {
        if k > 1 {
            ratio.mul_binomial_in_place(&m1, 2 * k - 2);
        }
        ratio.div_binomial_in_place(&m1, 2 * k - 1);
        let sign = if k % 2 == 1 { None } else { Some(&m1) };
        total.add_shifted(&ratio, k, sign).expect("same order");
    }
    total
}

/// `Σ_{n≥0} (-1)^n (-q;q²)_n q^n / (-q²;q²)_n`.
fn partial_theta_lhs(order: usize) -> Series<Rat> {
    let m1 = rat_int(-1);
    let mut total = Series::zero(order, &());
    let mut ratio = Series::one(order, &());
    for k in 0..=order {
        if k > 0 {
            ratio.mul_binomial_in_place(&m1, 2 * k - 1);
            ratio.div_binomial_in_place(&m1, 2 * k);
        }
        let sign = if k % 2 == 0 { None } else { Some(&m1) };
        total.add_shifted(&ratio, k, sign).expect("same order");
    }
    total
}

/// `Σ_{n≥0} (-1)^n q^{n(n+1)/2}`.
pub fn partial_theta(order: usize) -> Series<Rat> {
    let mut s = Series::zero(order, &());
    let mut k = 0;
    while k * (k + 1) / 2 <= order {
        s.set_coefficient(k * (k + 1) / 2, rat_int(if k % 2 == 0 { 1 } else { -1 })).expect("in range");
        k += 1;
    }
    s
}

/// `(-q)^e` as a sign.
fn minus_q_sign(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `Σ_{n∈Z} (-q)^{n(n+1)/2} / (1 + q^{2n})`, pairing `n` with `-1-n`:
/// `1/(1 + q^{-2k-2}) = q^{2k+2}/(1 + q^{2k+2})`.
fn bilateral_odd_rhs_sum(order: usize) -> Series<Rat> {
    let m1 = rat_int(-1);
    let mut total = Series::zero(order, &());
    let mut k = 0;
    while k * (k + 1) / 2 <= order {
        let e = k * (k + 1) / 2;
        let c = rat_int(minus_q_sign(e));
        if k == 0 {
            total.add_shifted(&Series::monomial(rat(1, 2), 0, order), 0, None).expect("same order");
        } else {
            let mut t = Series::monomial(c.clone(), e, order);
            t.div_binomial_in_place(&m1, 2 * k);
            total.add_shifted(&t, 0, None).expect("same order");
        }
        let mut t = Series::monomial(c, e + 2 * k + 2, order);
        t.div_binomial_in_place(&m1, 2 * k + 2);
        total.add_shifted(&t, 0, None).expect("same order");
        k += 1;
    }
    total
}

/// `Σ_{n∈Z} (-1)^n n (-q)^{n(n+1)/2} / (1 + q^{2n})`; the `n = 0` summand
/// vanishes and `n = -1-k` contributes `(-1)^k (k+1) (-q)^{k(k+1)/2} q^{2k+2}/(1 + q^{2k+2})`.
fn even_weighted_sum(order: usize) -> Series<Rat> {
    let m1 = rat_int(-1);
    let mut total = Series::zero(order, &());
    let mut k = 0i64;
    loop {
        let ku = k as usize;
        let e = ku * (ku + 1) / 2;
        if e > order {
            break;
        }
        let sign_k = if k % 2 == 0 { 1 } else { -1 };
        if k > 0 {
            let mut t = Series::monomial(rat_int(sign_k * k * minus_q_sign(e)), e, order);
            t.div_binomial_in_place(&m1, 2 * ku);
            total.add_shifted(&t, 0, None).expect("same order");
        }
        let mut t = Series::monomial(rat_int(sign_k * (k + 1) * minus_q_sign(e)), e + 2 * ku + 2, order);
        t.div_binomial_in_place(&m1, 2 * ku + 2);
        total.add_shifted(&t, 0, None).expect("same order");
        k += 1;
    }
    total
}

/// `2 (-q²;q²)_∞² (q;q²)_∞ / ((-q;q²)_∞ (q²;q²)_∞²)`.
fn even_weighted_prefactor(order: usize) -> Series<Rat> {
    let (one, m1) = (rat_int(1), rat_int(-1));
    let a = pochhammer(&PochSpec::infinite(m1.clone(), 2, 2), order).expect("valid spec");
    let b = pochhammer(&PochSpec::infinite(one.clone(), 1, 2), order).expect("valid spec");
    let mut s = (&(&a * &a) * &b).scale_int(2);
    let mut j = 1;
    while j <= order {
        s.div_binomial_in_place(&m1, j);
        j += 2;
    }
    let mut j = 2;
    while j <= order {
        s.div_binomial_in_place(&one, j);
        s.div_binomial_in_place(&one, j);
        j += 2;
    }
    s
}

fn compare<F: FieldElem>(
    lhs: &Series<F>,
    rhs: &mut Series<F>,
    perturb: Option<Perturbation>,
) -> Result<Option<Mismatch>> {
    if let Some(p) = perturb {
        let c = rhs.coefficient(p.index)?.clone() + &F::from_int_in(p.delta, rhs.ctx());
        rhs.set_coefficient(p.index, c)?;
    }
    Ok(lhs.first_difference(rhs)?.map(|n| Mismatch {
        n,
        lhs: lhs.coefficients_at(n),
        rhs: rhs.coefficients_at(n),
    }))
}

trait CoeffString {
    fn coefficients_at(&self, n: usize) -> String;
}

impl<F: FieldElem> CoeffString for Series<F> {
    fn coefficients_at(&self, n: usize) -> String {
        self.coeffs()[n].to_string()
    }
}

/// Compares both sides on `q^0 … q^N`.
pub fn check_identity(tag: IdentityTag, order: usize, w: Option<&Cyclo>) -> Result<IdentityReport> {
    check_identity_perturbed(tag, order, w, None)
}

/// As [`check_identity`], with an optional defect injected into the
/// right-hand side (used to show that failures are detected).
pub fn check_identity_perturbed(
    tag: IdentityTag,
    order: usize,
    w: Option<&Cyclo>,
    perturb: Option<Perturbation>,
) -> Result<IdentityReport> {
    let first_mismatch = match sides(tag, order, w)? {
        Sides::Rational(l, mut r) => compare(&l, &mut r, perturb)?,
        Sides::Cyclotomic(l, mut r) => compare(&l, &mut r, perturb)?,
    };
    Ok(IdentityReport {
        identity: tag,
        order,
        w: w.cloned(),
        status: if first_mismatch.is_none() { Status::Pass } else { Status::Fail },
        first_mismatch,
    })
}

/// The parameter-free identities once, then RAMA1 and RAMA2 for each `w`,
/// in that order. Checks run in parallel; the output order is fixed.
pub fn run_suite(order: usize, w_list: &[Cyclo]) -> Result<Vec<IdentityReport>> {
    run_suite_with(order, w_list, None, None)
}

/// [`run_suite`] restricted to one identity and/or with a defect injected
/// into every checked right-hand side.
pub fn run_suite_with(
    order: usize,
    w_list: &[Cyclo],
    only: Option<IdentityTag>,
    perturb: Option<Perturbation>,
) -> Result<Vec<IdentityReport>> {
    if w_list.is_empty() {
        return invalid("the list of w values is empty");
    }
    for w in w_list {
        if w.is_one() || w.is_zero() {
            return invalid(format!("w = {w} is not allowed"));
        }
    }
    let mut jobs: Vec<(IdentityTag, Option<&Cyclo>)> =
        IdentityTag::ALL.iter().filter(|t| !t.takes_w()).map(|&t| (t, None)).collect();
    for w in w_list {
        jobs.push((IdentityTag::Rama1, Some(w)));
        jobs.push((IdentityTag::Rama2, Some(w)));
    }
    if let Some(t) = only {
        jobs.retain(|(tag, _)| *tag == t);
    }
    jobs.par_iter().map(|(t, w)| check_identity_perturbed(*t, order, *w, perturb)).collect()
}
