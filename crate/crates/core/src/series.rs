//! Truncated formal power series `Σ_{n≤N} c_n q^n` over an exact field.
//!
//! Every series carries its truncation order `N`; binary operations on series
//! of different orders are errors, never silent re-truncations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;

use crate::bigcomplex::BigComplex;
use crate::error::{invalid, QlabError, Result};
use crate::exactnum::{Cyclo, FieldElem, Rat};

/// Products below this order are computed sequentially.
const PAR_THRESHOLD: usize = 96;

#[derive(Clone, PartialEq)]
pub struct Series<F: FieldElem> {
    order: usize,
    coeffs: Vec<F>,
    ctx: F::Ctx,
}

impl<F: FieldElem> fmt::Debug for Series<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series(N={}, {})", self.order, self)
    }
}

impl<F: FieldElem> fmt::Display for Series<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero_elem() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})q")?,
                _ => write!(f, "({c})q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

impl<F: FieldElem> Series<F> {
    pub fn zero(order: usize, ctx: &F::Ctx) -> Self {
        Series { order, coeffs: vec![F::zero_in(ctx); order + 1], ctx: ctx.clone() }
    }

    pub fn one(order: usize, ctx: &F::Ctx) -> Self {
        Self::monomial(F::one_in(ctx), 0, order)
    }

    /// `c·q^k`; vanishes if `k > order`.
    pub fn monomial(c: F, k: usize, order: usize) -> Self {
        let ctx = c.context();
        let mut s = Self::zero(order, &ctx);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Coefficients beyond `order` are dropped, missing ones are zero.
    pub fn from_coeffs(mut coeffs: Vec<F>, order: usize, ctx: &F::Ctx) -> Self {
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, F::zero_in(ctx));
        Series { order, coeffs, ctx: ctx.clone() }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coefficient(&self, n: usize) -> Result<&F> {
        self.coeffs.get(n).ok_or(QlabError::IndexOutOfRange { index: n, order: self.order })
    }

    pub fn set_coefficient(&mut self, n: usize, c: F) -> Result<()> {
        let order = self.order;
        let slot = self.coeffs.get_mut(n).ok_or(QlabError::IndexOutOfRange { index: n, order })?;
        *slot = c;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_zero_elem)
    }

    /// The same series seen at a lower order `n ≤ N`.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.order {
            return invalid(format!("cannot raise truncation order {} to {n}", self.order));
        }
        Ok(Series { order: n, coeffs: self.coeffs[..=n].to_vec(), ctx: self.ctx.clone() })
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(QlabError::OrderMismatch { left: self.order as u64, right: other.order as u64 });
        }
        if self.ctx != other.ctx {
            return invalid(format!("coefficient fields differ: {:?} vs {:?}", self.ctx, other.ctx));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b).collect();
        Ok(Series { order: self.order, coeffs, ctx: self.ctx.clone() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b).collect();
        Ok(Series { order: self.order, coeffs, ctx: self.ctx.clone() })
    }

    /// Cauchy product truncated at `N`. Large products are split over output
    /// indices with rayon; each coefficient is an exact sum so the result
    /// does not depend on scheduling.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.order;
        let a_nz: Vec<usize> = (0..=n).filter(|&i| !self.coeffs[i].is_zero_elem()).collect();
        let coeff = |k: usize| {
            let mut acc = F::zero_in(&self.ctx);
            for &i in a_nz.iter().take_while(|&&i| i <= k) {
                let b = &other.coeffs[k - i];
                if !b.is_zero_elem() {
                    acc += &(self.coeffs[i].clone() * b);
                }
            }
            acc
        };
        let coeffs: Vec<F> = if n >= PAR_THRESHOLD {
            (0..=n).into_par_iter().map(coeff).collect()
        } else {
            (0..=n).map(coeff).collect()
        };
        Ok(Series { order: n, coeffs, ctx: self.ctx.clone() })
    }

    pub fn scale(&self, c: &F) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.clone() * c).collect();
        Series { order: self.order, coeffs, ctx: self.ctx.clone() }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.scale_int(k)).collect();
        Series { order: self.order, coeffs, ctx: self.ctx.clone() }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut s = Self::zero(self.order, &self.ctx);
        for i in k..=self.order {
            s.coeffs[i] = self.coeffs[i - k].clone();
        }
        s
    }

    /// `self += scale · q^k · other`, without materialising the shifted series.
    pub fn add_shifted(&mut self, other: &Self, k: usize, scale: Option<&F>) -> Result<()> {
        self.check(other)?;
        for i in k..=self.order {
            let src = &other.coeffs[i - k];
            if src.is_zero_elem() {
                continue;
            }
            match scale {
                Some(c) => {
                    let t = src.clone() * c;
                    self.coeffs[i] += &t;
                }
                None => self.coeffs[i] += src,
            }
        }
        Ok(())
    }

    /// `self · (1 - a·q^k)` in `O(N)`.
    pub fn mul_binomial(&self, a: &F, k: usize) -> Self {
        let mut s = self.clone();
        s.mul_binomial_in_place(a, k);
        s
    }

    pub fn mul_binomial_in_place(&mut self, a: &F, k: usize) {
        if k == 0 {
            let factor = F::one_in(&self.ctx) - a;
            for c in self.coeffs.iter_mut() {
                *c = c.clone() * &factor;
            }
            return;
        }
        for i in (k..=self.order).rev() {
            if !self.coeffs[i - k].is_zero_elem() {
                let t = self.coeffs[i - k].clone() * a;
                self.coeffs[i] -= &t;
            }
        }
    }

    /// `self / (1 - a·q^k)` for `k ≥ 1`, i.e. multiplication by the geometric
    /// series `Σ a^j q^{jk}`, in `O(N)`.
    pub fn div_binomial(&self, a: &F, k: usize) -> Self {
        let mut s = self.clone();
        s.div_binomial_in_place(a, k);
        s
    }

    pub fn div_binomial_in_place(&mut self, a: &F, k: usize) {
        assert!(k >= 1, "div_binomial needs a positive exponent");
        for i in k..=self.order {
            if !self.coeffs[i - k].is_zero_elem() {
                let t = self.coeffs[i - k].clone() * a;
                self.coeffs[i] += &t;
            }
        }
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn invert(&self) -> Result<Self> {
        let c0_inv = self.coeffs[0].try_inv().map_err(|_| {
            QlabError::InvalidParameter("series with zero constant term is not invertible".into())
        })?;
        let mut out = Self::zero(self.order, &self.ctx);
        out.coeffs[0] = c0_inv.clone();
        let nz: Vec<usize> = (1..=self.order).filter(|&i| !self.coeffs[i].is_zero_elem()).collect();
        for n in 1..=self.order {
            let mut acc = F::zero_in(&self.ctx);
            for &i in nz.iter().take_while(|&&i| i <= n) {
                let prev = &out.coeffs[n - i];
                if !prev.is_zero_elem() {
                    acc += &(self.coeffs[i].clone() * prev);
                }
            }
            out.coeffs[n] = -(acc * &c0_inv);
        }
        Ok(out)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.invert()?)
    }

    /// Substitution `q ↦ q^d`.
    pub fn dilate(&self, d: usize) -> Result<Self> {
        if d == 0 {
            return invalid("dilation factor must be positive");
        }
        let mut s = Self::zero(self.order, &self.ctx);
        for i in 0..=self.order / d {
            s.coeffs[i * d] = self.coeffs[i].clone();
        }
        Ok(s)
    }

    /// Substitution `q ↦ -q`.
    pub fn negate_variable(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        Series { order: self.order, coeffs, ctx: self.ctx.clone() }
    }

    /// First index where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Result<Option<usize>> {
        self.check(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).position(|(a, b)| a != b))
    }

    pub fn map_field<G: FieldElem>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> Series<G> {
        Series { order: self.order, coeffs: self.coeffs.iter().map(f).collect(), ctx: ctx.clone() }
    }
}

impl Series<Rat> {
    pub fn from_ints(v: &[i64], order: usize) -> Self {
        let coeffs = v.iter().map(|&x| crate::exactnum::rat_int(x)).collect();
        Self::from_coeffs(coeffs, order, &())
    }

    pub fn to_cyclo(&self, m: u64) -> Series<Cyclo> {
        self.map_field(&m, |c| Cyclo::from_rat(m, c))
    }

    pub fn eval(&self, q: &BigComplex) -> BigComplex {
        horner(&self.coeffs, q, |c| BigComplex::from_rat(c, q.digits()))
    }
}

impl Series<Cyclo> {
    /// `Some` when every coefficient lies in `Q`.
    pub fn to_rational(&self) -> Option<Series<Rat>> {
        let coeffs: Option<Vec<Rat>> = self.coeffs.iter().map(|c| c.as_rational().cloned()).collect();
        coeffs.map(|c| Series::from_coeffs(c, self.order, &()))
    }

    pub fn lift(&self, target: u64) -> Result<Series<Cyclo>> {
        let coeffs = self.coeffs.iter().map(|c| c.lift(target)).collect::<Result<Vec<_>>>()?;
        Ok(Series { order: self.order, coeffs, ctx: target })
    }

    pub fn eval(&self, q: &BigComplex) -> BigComplex {
        horner(&self.coeffs, q, |c| c.embed(q.digits()))
    }
}

fn horner<F>(coeffs: &[F], q: &BigComplex, to_c: impl Fn(&F) -> BigComplex) -> BigComplex {
    coeffs.iter().rev().fold(BigComplex::zero(q.digits()), |acc, c| &(&acc * q) + &to_c(c))
}

impl<F: FieldElem> Add for &Series<F> {
    type Output = Series<F>;
    fn add(self, rhs: &Series<F>) -> Series<F> {
        self.try_add(rhs).expect("series add")
    }
}

impl<F: FieldElem> Sub for &Series<F> {
    type Output = Series<F>;
    fn sub(self, rhs: &Series<F>) -> Series<F> {
        self.try_sub(rhs).expect("series sub")
    }
}

impl<F: FieldElem> Mul for &Series<F> {
    type Output = Series<F>;
    fn mul(self, rhs: &Series<F>) -> Series<F> {
        self.try_mul(rhs).expect("series mul")
    }
}

impl<F: FieldElem> Neg for &Series<F> {
    type Output = Series<F>;
    fn neg(self) -> Series<F> {
        self.scale_int(-1)
    }
}

/// Number of factors of a q-Pochhammer product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Count {
    Finite(usize),
    Infinite,
}

/// `Π_j (1 - scale·q^{offset + j·step})` over `j < count`.
///
/// `(a;q)_n` is `PochSpec::new(a, 0, 1, Finite(n))`, `(wq;q)_n` has offset 1,
/// `(q;q²)_∞` is offset 1 step 2.
#[derive(Debug, Clone, PartialEq)]
pub struct PochSpec<F: FieldElem> {
    pub scale: F,
    pub offset: usize,
    pub step: usize,
    pub count: Count,
}

impl<F: FieldElem> PochSpec<F> {
    pub fn new(scale: F, offset: usize, step: usize, count: Count) -> Self {
        PochSpec { scale, offset, step, count }
    }

    pub fn infinite(scale: F, offset: usize, step: usize) -> Self {
        Self::new(scale, offset, step, Count::Infinite)
    }

    pub fn finite(scale: F, offset: usize, step: usize, n: usize) -> Self {
        Self::new(scale, offset, step, Count::Finite(n))
    }
}

/// Truncated q-Pochhammer product. Factors whose exponent exceeds `order`
/// are `1 + O(q^{N+1})` and are skipped, so infinite products stop after
/// finitely many steps.
pub fn pochhammer<F: FieldElem>(spec: &PochSpec<F>, order: usize) -> Result<Series<F>> {
    if spec.step == 0 {
        return invalid("Pochhammer step must be positive");
    }
    if spec.count == Count::Infinite && spec.offset == 0 {
        return invalid("infinite Pochhammer product needs offset ≥ 1");
    }
    let ctx = spec.scale.context();
    let mut s = Series::one(order, &ctx);
    let limit = match spec.count {
        Count::Finite(n) => n,
        Count::Infinite => usize::MAX,
    };
    for j in 0..limit {
        let e = spec.offset + j * spec.step;
        if e > order {
            break;
        }
        s.mul_binomial_in_place(&spec.scale, e);
    }
    Ok(s)
}

/// `1 / (1 - scale·q^d) = Σ_k scale^k q^{kd}`, truncated.
pub fn geometric_frac<F: FieldElem>(scale: &F, d: usize, order: usize) -> Result<Series<F>> {
    if d == 0 {
        return invalid("geometric ratio exponent must be ≥ 1");
    }
    let ctx = scale.context();
    Ok(Series::one(order, &ctx).div_binomial(scale, d))
}
