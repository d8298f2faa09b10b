use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly;
use super::{rat_int, FieldElem, Rat};
use crate::bigcomplex::BigComplex;
use crate::error::{invalid, QlabError, Result};

pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut phi = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// `Φ_m` with integer coefficients, lowest degree first, obtained by dividing
/// `x^m - 1` by `Φ_d` for every proper divisor `d` of `m`.
pub fn cyclotomic_polynomial(m: u64) -> Vec<Rat> {
    assert!(m >= 1, "cyclotomic order must be positive");
    let mut p = vec![Rat::zero(); m as usize + 1];
    p[0] = -Rat::one();
    p[m as usize] = Rat::one();
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        let (q, r) = poly::divrem(&p, &CycloField::get(d).phi);
        debug_assert!(r.is_empty());
        p = q;
    }
    p
}

/// Arithmetic context for `Q(ζ_m)`: the modulus `Φ_m` and the reductions of
/// `x^φ(m) … x^{2φ(m)-2}` used after schoolbook multiplication.
#[derive(Debug)]
pub struct CycloField {
    order: u64,
    degree: usize,
    phi: Vec<Rat>,
    high_powers: Vec<Vec<Rat>>,
}

static FIELDS: OnceLock<Mutex<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();

impl CycloField {
    /// Shared field for order `m`; `Φ_m` is computed once per process.
    pub fn get(m: u64) -> Arc<CycloField> {
        assert!(m >= 1, "cyclotomic order must be positive");
        let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&m) {
            return f.clone();
        }
        // Built outside the lock: cyclotomic_polynomial recurses into get().
        let field = Arc::new(Self::build(m));
        cache.lock().unwrap().entry(m).or_insert(field).clone()
    }

    fn build(m: u64) -> Self {
        let phi = cyclotomic_polynomial(m);
        let degree = phi.len() - 1;
        let mut high_powers = Vec::with_capacity(degree.saturating_sub(1));
        // x^d = -(phi_0 + ... + phi_{d-1} x^{d-1})
        let mut cur: Vec<Rat> = phi[..degree].iter().map(|c| -c.clone()).collect();
        for _ in 0..degree.saturating_sub(1) {
            high_powers.push(cur.clone());
            // multiply by x, fold the overflowing x^d term back in
            let top = cur.pop().unwrap_or_else(Rat::zero);
            cur.insert(0, Rat::zero());
            for (c, p) in cur.iter_mut().zip(&phi) {
                *c -= &top * p;
            }
        }
        CycloField { order: m, degree, phi, high_powers }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[Rat] {
        &self.phi
    }

    fn reduce(&self, mut prod: Vec<Rat>) -> Vec<Rat> {
        let d = self.degree;
        if prod.len() <= d {
            prod.resize(d, Rat::zero());
            return prod;
        }
        let (low, high) = prod.split_at_mut(d);
        for (i, c) in high.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (l, r) in low.iter_mut().zip(&self.high_powers[i]) {
                if !r.is_zero() {
                    *l += c * r;
                }
            }
        }
        prod.truncate(d);
        prod
    }
}

/// Exact element of `Q(ζ_m)` in the power basis `1, ζ_m, …, ζ_m^{φ(m)-1}`,
/// reduced modulo `Φ_m`; equal elements have equal coefficient vectors.
#[derive(Clone)]
pub struct Cyclo {
    field: Arc<CycloField>,
    coeffs: Vec<Rat>,
}

impl Cyclo {
    pub fn zero(m: u64) -> Self {
        let field = CycloField::get(m);
        let coeffs = vec![Rat::zero(); field.degree];
        Cyclo { field, coeffs }
    }

    pub fn one(m: u64) -> Self {
        Self::from_rat(m, &Rat::one())
    }

    pub fn from_rat(m: u64, r: &Rat) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = r.clone();
        z
    }

    pub fn from_int(m: u64, n: i64) -> Self {
        Self::from_rat(m, &rat_int(n))
    }

    /// `ζ_m^j` for any integer `j` (reduced mod `m`).
    pub fn root(m: u64, j: i64) -> Self {
        let field = CycloField::get(m);
        let e = j.rem_euclid(m as i64) as usize;
        let d = field.degree;
        let coeffs = if e < d {
            let mut v = vec![Rat::zero(); d];
            v[e] = Rat::one();
            v
        } else if e - d < field.high_powers.len() {
            field.high_powers[e - d].clone()
        } else {
            let mut mono = vec![Rat::zero(); e + 1];
            mono[e] = Rat::one();
            let (_, mut r) = poly::divrem(&mono, &field.phi);
            r.resize(d, Rat::zero());
            r
        };
        Cyclo { field, coeffs }
    }

    /// Builds an element from power-basis coefficients; longer vectors are
    /// reduced modulo `Φ_m`.
    pub fn from_coeffs(m: u64, coeffs: Vec<Rat>) -> Self {
        let field = CycloField::get(m);
        let coeffs = if coeffs.len() > field.degree {
            let (_, mut r) = poly::divrem(&coeffs, &field.phi);
            r.resize(field.degree, Rat::zero());
            r
        } else {
            let mut c = coeffs;
            c.resize(field.degree, Rat::zero());
            c
        };
        Cyclo { field, coeffs }
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rat> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(QlabError::OrderMismatch { left: self.order(), right: other.order() })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Cyclo { field: self.field.clone(), coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Cyclo { field: self.field.clone(), coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let d = self.field.degree;
        let mut prod = vec![Rat::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Cyclo { field: self.field.clone(), coeffs: self.field.reduce(prod) })
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Φ_m`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(QlabError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rat(self.order(), &r.recip()));
        }
        let inv = poly::inv_mod(&self.coeffs, &self.field.phi).ok_or(QlabError::DivisionByZero)?;
        Ok(Self::from_coeffs(self.order(), inv))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Image under `ζ_m ↦ ζ_m^{-1}` (complex conjugation).
    pub fn conj(&self) -> Self {
        let m = self.order();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Self::zero(m), |acc, (j, c)| {
                acc + &Self::root(m, -(j as i64)).scale_rat(c)
            })
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * r).collect();
        Cyclo { field: self.field.clone(), coeffs }
    }

    /// Embeds `Q(ζ_m)` into `Q(ζ_target)` via `ζ_m ↦ ζ_target^{target/m}`.
    pub fn lift(&self, target: u64) -> Result<Self> {
        let m = self.order();
        if target == 0 || !target.is_multiple_of(m) {
            return invalid(format!("cannot lift Q(ζ_{m}) into Q(ζ_{target})"));
        }
        if target == m {
            return Ok(self.clone());
        }
        let step = (target / m) as i64;
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Self::zero(target), |acc, (j, c)| {
                acc + &Self::root(target, j as i64 * step).scale_rat(c)
            }))
    }

    /// Lifts both operands to `Q(ζ_lcm)`.
    pub fn common_lift(&self, other: &Self) -> (Self, Self) {
        let l = self.order().lcm(&other.order());
        (self.lift(l).unwrap(), other.lift(l).unwrap())
    }

    /// Complex value `Σ c_j e^{2πij/m}` carrying `digits` decimal digits,
    /// computed with 15 guard digits.
    pub fn embed(&self, digits: usize) -> BigComplex {
        let m = self.order();
        let work = digits + 15;
        let mut acc = BigComplex::zero(work);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = BigComplex::root_of_unity(m, j as i64, work).mul_rat(c);
            acc = &acc + &term;
        }
        acc.with_digits(digits)
    }

    fn basis_name(&self, j: usize) -> String {
        match (self.order(), j) {
            (_, 0) => String::new(),
            (4, 1) => "i".to_string(),
            (m, 1) => format!("z{m}"),
            (m, j) => format!("z{m}^{j}"),
        }
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclo {}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]({})", self.order(), self)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rat::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            let body = match (j, abs.is_one()) {
                (0, _) => abs.to_string(),
                (_, true) => self.basis_name(j),
                (_, false) => format!("{}·{}", abs, self.basis_name(j)),
            };
            match (out.is_empty(), neg) {
                (true, false) => out.push_str(&body),
                (true, true) => {
                    out.push('-');
                    out.push_str(&body)
                }
                (false, false) => {
                    out.push_str(" + ");
                    out.push_str(&body)
                }
                (false, true) => {
                    out.push_str(" - ");
                    out.push_str(&body)
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

// Operator impls panic on mismatched orders; the `try_*` methods report it.

impl<'a> Add<&'a Cyclo> for Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &'a Cyclo) -> Cyclo {
        self.try_add(rhs).expect("Cyclo add")
    }
}

impl<'a> Add<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &'a Cyclo) -> Cyclo {
        self.try_add(rhs).expect("Cyclo add")
    }
}

impl<'a> Sub<&'a Cyclo> for Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &'a Cyclo) -> Cyclo {
        self.try_sub(rhs).expect("Cyclo sub")
    }
}

impl<'a> Sub<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &'a Cyclo) -> Cyclo {
        self.try_sub(rhs).expect("Cyclo sub")
    }
}

impl<'a> Mul<&'a Cyclo> for Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &'a Cyclo) -> Cyclo {
        self.try_mul(rhs).expect("Cyclo mul")
    }
}

impl<'a> Mul<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &'a Cyclo) -> Cyclo {
        self.try_mul(rhs).expect("Cyclo mul")
    }
}

impl<'a> AddAssign<&'a Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &'a Cyclo) {
        self.check_order(rhs).expect("Cyclo add");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl<'a> SubAssign<&'a Cyclo> for Cyclo {
    fn sub_assign(&mut self, rhs: &'a Cyclo) {
        self.check_order(rhs).expect("Cyclo sub");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        let coeffs = self.coeffs.into_iter().map(|c| -c).collect();
        Cyclo { field: self.field, coeffs }
    }
}

impl FieldElem for Cyclo {
    type Ctx = u64;

    fn context(&self) -> u64 {
        self.order()
    }

    fn zero_in(m: &u64) -> Self {
        Cyclo::zero(*m)
    }

    fn from_rat_in(r: &Rat, m: &u64) -> Self {
        Cyclo::from_rat(*m, r)
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }

    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }

    fn scale_int(&self, n: i64) -> Self {
        self.scale_rat(&rat_int(n))
    }
}
