//! Arbitrary-precision complex numbers.
//!
//! A thin layer over `astro_float::BigFloat` pairs. Precision is given in
//! decimal digits at the API and carried internally in bits. Comparisons are
//! always tolerance-based: use [`BigComplex::dist_log10`] or
//! [`BigComplex::log10_abs`].

use std::cell::RefCell;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{QlabError, Result};
use crate::exactnum::Rat;

const RM: RoundingMode = RoundingMode::ToEven;
const LOG2_10: f64 = std::f64::consts::LOG2_10;
const LOG10_2: f64 = std::f64::consts::LOG10_2;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Bits needed to carry `digits` decimal digits, rounded up to whole words.
pub fn digits_to_bits(digits: usize) -> usize {
    let bits = (digits as f64 * LOG2_10).ceil() as usize + 8;
    bits.div_ceil(64) * 64
}

pub fn bits_to_digits(bits: usize) -> usize {
    ((bits.saturating_sub(8)) as f64 * LOG10_2).floor() as usize
}

/// `log2 |x|`, or `-inf` for zero.
fn log2_abs(x: &BigFloat) -> f64 {
    match x.as_raw_parts() {
        Some((words, _, _, e, _)) if !words.is_empty() && !x.is_zero() => {
            let top = words[words.len() - 1] as f64 / 2f64.powi(64);
            e as f64 + top.log2()
        }
        _ => f64::NEG_INFINITY,
    }
}

fn to_f64(x: &BigFloat) -> f64 {
    let l = log2_abs(x);
    if l == f64::NEG_INFINITY {
        return 0.0;
    }
    let mag = l.exp2();
    if x.is_negative() {
        -mag
    } else {
        mag
    }
}

fn bigint_to_float(n: &BigInt, bits: usize) -> BigFloat {
    match n.to_i64() {
        Some(v) => BigFloat::from_i64(v, bits),
        None => with_consts(|cc| BigFloat::parse(&n.to_string(), Radix::Dec, bits, RM, cc)),
    }
}

fn rat_to_float(r: &Rat, bits: usize) -> BigFloat {
    let num = bigint_to_float(r.numer(), bits + 64);
    let den = bigint_to_float(r.denom(), bits + 64);
    num.div(&den, bits, RM)
}

/// Decimal rendering with `sig` significant digits, round-half-up on the
/// digit string, trailing zeros after the point removed.
fn float_to_decimal(x: &BigFloat, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let raw = with_consts(|cc| x.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
    let (mant, exp) = match raw.split_once('e') {
        Some((m, e)) => (m.to_string(), e.parse::<i64>().unwrap_or(0)),
        None => (raw.clone(), 0),
    };
    let neg = mant.starts_with('-');
    let digits_only: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    // mantissa is d.ddd…; locate the first nonzero digit
    let lead = digits_only.find(|c| c != '0').unwrap_or(0);
    let mut exp10 = exp - lead as i64;
    let mut ds: Vec<u8> = digits_only[lead..].bytes().map(|b| b - b'0').collect();
    let sig = sig.max(1);
    if ds.len() > sig {
        let round_up = ds[sig] >= 5;
        ds.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.truncate(sig);
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() > 1 && ds.last() == Some(&0) {
        ds.pop();
    }
    let body: String = ds.iter().map(|d| (b'0' + d) as char).collect();
    let sign = if neg { "-" } else { "" };
    if (-8..60).contains(&exp10) {
        let e = exp10;
        if e < 0 {
            format!("{sign}0.{}{}", "0".repeat((-e - 1) as usize), body)
        } else if (e as usize) + 1 >= body.len() {
            format!("{sign}{}{}", body, "0".repeat(e as usize + 1 - body.len()))
        } else {
            let (int, frac) = body.split_at(e as usize + 1);
            format!("{sign}{int}.{frac}")
        }
    } else {
        let (first, rest) = body.split_at(1);
        if rest.is_empty() {
            format!("{sign}{first}e{exp10}")
        } else {
            format!("{sign}{first}.{rest}e{exp10}")
        }
    }
}

#[derive(Debug)]
pub struct BigComplex {
    re: BigFloat,
    im: BigFloat,
    bits: usize,
}

impl Clone for BigComplex {
    fn clone(&self) -> Self {
        BigComplex { re: self.re.clone(), im: self.im.clone(), bits: self.bits }
    }
}

impl BigComplex {
    fn from_floats(re: BigFloat, im: BigFloat, bits: usize) -> Self {
        BigComplex { re, im, bits }
    }

    pub fn zero(digits: usize) -> Self {
        let bits = digits_to_bits(digits);
        Self::from_floats(BigFloat::from_i64(0, bits), BigFloat::from_i64(0, bits), bits)
    }

    pub fn one(digits: usize) -> Self {
        Self::from_i64(1, digits)
    }

    pub fn i(digits: usize) -> Self {
        let bits = digits_to_bits(digits);
        Self::from_floats(BigFloat::from_i64(0, bits), BigFloat::from_i64(1, bits), bits)
    }

    pub fn from_i64(n: i64, digits: usize) -> Self {
        let bits = digits_to_bits(digits);
        Self::from_floats(BigFloat::from_i64(n, bits), BigFloat::from_i64(0, bits), bits)
    }

    /// Exact binary image of two doubles.
    pub fn from_f64(re: f64, im: f64, digits: usize) -> Self {
        let bits = digits_to_bits(digits);
        Self::from_floats(BigFloat::from_f64(re, bits), BigFloat::from_f64(im, bits), bits)
    }

    pub fn from_rat(re: &Rat, digits: usize) -> Self {
        let bits = digits_to_bits(digits);
        Self::from_floats(rat_to_float(re, bits), BigFloat::from_i64(0, bits), bits)
    }

    pub fn from_rats(re: &Rat, im: &Rat, digits: usize) -> Self {
        let bits = digits_to_bits(digits);
        Self::from_floats(rat_to_float(re, bits), rat_to_float(im, bits), bits)
    }

    /// `1 - 2^{-t}`, exactly.
    pub fn one_minus_pow2(t: u32, digits: usize) -> Self {
        let bits = digits_to_bits(digits).max(t as usize + 64);
        let mut eps = BigFloat::from_i64(1, bits);
        if let Some(e) = eps.exponent() {
            eps.set_exponent(e - t as i32);
        }
        let one = BigFloat::from_i64(1, bits);
        Self::from_floats(one.sub(&eps, bits, RM), BigFloat::from_i64(0, bits), bits)
    }

    /// Parses decimal strings for the real and imaginary parts.
    pub fn parse(re: &str, im: &str, digits: usize) -> Result<Self> {
        let bits = digits_to_bits(digits);
        let p = |s: &str| {
            let v = with_consts(|cc| BigFloat::parse(s.trim(), Radix::Dec, bits, RM, cc));
            if v.is_nan() || v.is_inf() {
                Err(QlabError::InvalidParameter(format!("not a decimal number: {s:?}")))
            } else {
                Ok(v)
            }
        };
        Ok(Self::from_floats(p(re)?, p(im)?, bits))
    }

    /// `e^{2πij/m}`; the four axis points are produced exactly.
    pub fn root_of_unity(m: u64, j: i64, digits: usize) -> Self {
        let bits = digits_to_bits(digits);
        let m = m.max(1) as i64;
        let j = j.rem_euclid(m);
        if (4 * j) % m == 0 {
            let (re, im) = match 4 * j / m {
                0 => (1, 0),
                1 => (0, 1),
                2 => (-1, 0),
                _ => (0, -1),
            };
            return Self::from_floats(BigFloat::from_i64(re, bits), BigFloat::from_i64(im, bits), bits);
        }
        let work = bits + 64;
        let (re, im) = with_consts(|cc| {
            let pi = cc.pi(work, RM);
            let angle = pi
                .mul(&BigFloat::from_i64(2 * j, work), work, RM)
                .div(&BigFloat::from_i64(m, work), work, RM);
            (angle.cos(work, RM, cc), angle.sin(work, RM, cc))
        });
        let mut z = Self::from_floats(re, im, work);
        z.round_to(bits);
        z
    }

    fn round_to(&mut self, bits: usize) {
        // set_precision only fails on allocation errors
        let _ = self.re.set_precision(bits, RM);
        let _ = self.im.set_precision(bits, RM);
        self.bits = bits;
    }

    /// Copy carried at a different precision.
    pub fn with_digits(&self, digits: usize) -> Self {
        let mut z = self.clone();
        z.round_to(digits_to_bits(digits));
        z
    }

    pub fn digits(&self) -> usize {
        bits_to_digits(self.bits)
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.im.is_nan() || self.re.is_inf() || self.im.is_inf())
    }

    pub fn conj(&self) -> Self {
        Self::from_floats(self.re.clone(), -self.im.clone(), self.bits)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        let kf = BigFloat::from_i64(k, 64);
        Self::from_floats(self.re.mul(&kf, self.bits, RM), self.im.mul(&kf, self.bits, RM), self.bits)
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        let f = rat_to_float(r, self.bits);
        Self::from_floats(self.re.mul(&f, self.bits, RM), self.im.mul(&f, self.bits, RM), self.bits)
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Self::from_floats(-self.im.clone(), self.re.clone(), self.bits)
    }

    pub fn norm_sqr_f64(&self) -> f64 {
        (2.0 * self.log2_abs()).exp2()
    }

    fn log2_abs(&self) -> f64 {
        let a = log2_abs(&self.re);
        let b = log2_abs(&self.im);
        let mx = a.max(b);
        if mx == f64::NEG_INFINITY {
            return mx;
        }
        mx + 0.5 * ((2.0 * (a - mx)).exp2() + (2.0 * (b - mx)).exp2()).log2()
    }

    /// `log10 |z|` (accurate to f64 rounding), `-inf` for zero. Works far
    /// outside the f64 exponent range.
    pub fn log10_abs(&self) -> f64 {
        self.log2_abs() * LOG10_2
    }

    pub fn abs_f64(&self) -> f64 {
        self.log2_abs().exp2()
    }

    /// `log10 |self - other|`.
    pub fn dist_log10(&self, other: &Self) -> f64 {
        (self - other).log10_abs()
    }

    pub fn re_f64(&self) -> f64 {
        to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        to_f64(&self.im)
    }

    pub fn re_string(&self, sig: usize) -> String {
        float_to_decimal(&self.re, sig)
    }

    pub fn im_string(&self, sig: usize) -> String {
        float_to_decimal(&self.im, sig)
    }

    /// Division; `None` if the divisor is zero.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let p = self.bits.max(rhs.bits);
        // exact-ish products before the final rounding
        #[allow(clippy::suspicious_arithmetic_impl)]
        let w = p + 64;
        let den = rhs.re.mul(&rhs.re, w, RM).add(&rhs.im.mul(&rhs.im, w, RM), w, RM);
        let re = self.re.mul(&rhs.re, w, RM).add(&self.im.mul(&rhs.im, w, RM), w, RM);
        let im = self.im.mul(&rhs.re, w, RM).sub(&self.re.mul(&rhs.im, w, RM), w, RM);
        Some(Self::from_floats(re.div(&den, p, RM), im.div(&den, p, RM), p))
    }

    pub fn square(&self) -> Self {
        self * self
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(20);
        let im = self.im_string(sig);
        match im.strip_prefix('-') {
            Some(abs) => write!(f, "{} - {}i", self.re_string(sig), abs),
            None => write!(f, "{} + {}i", self.re_string(sig), im),
        }
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.bits.max(rhs.bits);
        BigComplex::from_floats(self.re.add(&rhs.re, p, RM), self.im.add(&rhs.im, p, RM), p)
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.bits.max(rhs.bits);
        BigComplex::from_floats(self.re.sub(&rhs.re, p, RM), self.im.sub(&rhs.im, p, RM), p)
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.bits.max(rhs.bits);
        // exact-ish products before the final rounding
        #[allow(clippy::suspicious_arithmetic_impl)]
        let w = p + 64;
        let re = self.re.mul(&rhs.re, w, RM).sub(&self.im.mul(&rhs.im, w, RM), p, RM);
        let im = self.re.mul(&rhs.im, w, RM).add(&self.im.mul(&rhs.re, w, RM), p, RM);
        BigComplex::from_floats(re, im, p)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::from_floats(-self.re.clone(), -self.im.clone(), self.bits)
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}
