//! Exact truncations. Every product is built incrementally with sparse
//! binomial multiplications and divisions, so a term of a sum costs `O(N)`.

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::error::Result;
use crate::exactnum::{rat_int, FieldElem, Rat};
use crate::series::{pochhammer, PochSpec, Series};

fn neg_one<F: FieldElem>(ctx: &F::Ctx) -> F {
    F::from_int_in(-1, ctx)
}

/// `f(q) = Σ_{n≥0} q^{n²} / (-q;q)_n²`.
pub fn mock_f(order: usize) -> Series<Rat> {
    let m1 = rat_int(-1);
    let mut inv_den = Series::one(order, &());
    let mut total = Series::zero(order, &());
    let mut k = 0;
    while k * k <= order {
        if k > 0 {
            inv_den.div_binomial_in_place(&m1, k);
            inv_den.div_binomial_in_place(&m1, k);
        }
        total.add_shifted(&inv_den, k * k, None).expect("same order");
        k += 1;
    }
    total
}

/// `b(q) = (q;q)_∞ / (-q;q)_∞²`.
pub fn b_series(order: usize) -> Series<Rat> {
    let m1 = rat_int(-1);
    let mut s = pochhammer(&PochSpec::infinite(rat_int(1), 1, 1), order).expect("valid spec");
    for j in 1..=order {
        s.div_binomial_in_place(&m1, j);
        s.div_binomial_in_place(&m1, j);
    }
    s
}

/// `b(q)` in its theta form `(q;q²)_∞ Σ_{n∈Z} (-1)^n q^{n²}`.
pub fn b_series_theta_form(order: usize) -> Series<Rat> {
    let mut theta = Series::one(order, &());
    let mut n = 1usize;
    while n * n <= order {
        let c = if n.is_multiple_of(2) { 2 } else { -2 };
        theta.set_coefficient(n * n, rat_int(c)).expect("in range");
        n += 1;
    }
    let odd = pochhammer(&PochSpec::infinite(rat_int(1), 1, 2), order).expect("valid spec");
    &odd * &theta
}

/// `u(q) = Σ_{n≥0} (-q;q)_n² q^{n+1}`.
pub fn u_small(order: usize) -> Series<Rat> {
    let m1 = rat_int(-1);
    let mut prod = Series::one(order, &());
    let mut total = Series::zero(order, &());
    for n in 0..order {
        if n > 0 {
            prod.mul_binomial_in_place(&m1, n);
            prod.mul_binomial_in_place(&m1, n);
        }
        total.add_shifted(&prod, n + 1, None).expect("same order");
    }
    total
}

/// `ψ(q) = Σ_{n≥0} (-q²;q²)_n q^{n+1}`.
pub fn psi(order: usize) -> Series<Rat> {
    let m1 = rat_int(-1);
    let mut prod = Series::one(order, &());
    let mut total = Series::zero(order, &());
    for n in 0..order {
        if n > 0 {
            prod.mul_binomial_in_place(&m1, 2 * n);
        }
        total.add_shifted(&prod, n + 1, None).expect("same order");
    }
    total
}

/// `φ(q) = 1 + Σ_{n≥0} (-1)^n (q;q²)_n q^{2n+1}`.
pub fn phi(order: usize) -> Series<Rat> {
    let one = rat_int(1);
    let m1 = rat_int(-1);
    let mut prod = Series::one(order, &());
    let mut total = Series::one(order, &());
    let mut n = 0;
    while 2 * n < order {
        if n > 0 {
            prod.mul_binomial_in_place(&one, 2 * n - 1);
        }
        let sign = if n % 2 == 0 { None } else { Some(&m1) };
        total.add_shifted(&prod, 2 * n + 1, sign).expect("same order");
        n += 1;
    }
    total
}

/// Rank generating function `R(w;q) = Σ_{n≥0} q^{n²} / ((wq;q)_n (w⁻¹q;q)_n)`.
pub fn rank<F: FieldElem>(w: &F, order: usize) -> Result<Series<F>> {
    let ctx = w.context();
    let winv = w.try_inv()?;
    let mut inv_den = Series::one(order, &ctx);
    let mut total = Series::zero(order, &ctx);
    let mut k = 0;
    while k * k <= order {
        if k > 0 {
            inv_den.div_binomial_in_place(w, k);
            inv_den.div_binomial_in_place(&winv, k);
        }
        total.add_shifted(&inv_den, k * k, None)?;
        k += 1;
    }
    Ok(total)
}

/// Crank generating function `C(w;q) = (q;q)_∞ / ((wq;q)_∞ (w⁻¹q;q)_∞)`.
pub fn crank<F: FieldElem>(w: &F, order: usize) -> Result<Series<F>> {
    let ctx = w.context();
    let winv = w.try_inv()?;
    let mut s = pochhammer(&PochSpec::infinite(F::one_in(&ctx), 1, 1), order)?;
    for j in 1..=order {
        s.div_binomial_in_place(w, j);
        s.div_binomial_in_place(&winv, j);
    }
    Ok(s)
}

/// `U(w;q) = Σ_{n≥0} (wq;q)_n (w⁻¹q;q)_n q^{n+1}`.
pub fn u_big<F: FieldElem>(w: &F, order: usize) -> Result<Series<F>> {
    let ctx = w.context();
    let winv = w.try_inv()?;
    let mut prod = Series::one(order, &ctx);
    let mut total = Series::zero(order, &ctx);
    for n in 0..order {
        if n > 0 {
            prod.mul_binomial_in_place(w, n);
            prod.mul_binomial_in_place(&winv, n);
        }
        total.add_shifted(&prod, n + 1, None)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AppellKind {
    /// Summand weight `(-w)^n`.
    First,
    /// Summand weight `(-1)^n`.
    Second,
}

/// Appell–Lerch sum
/// `(1 - w⁻¹)/(q;q)_∞ · Σ_{n∈Z} c_n q^{n(n+1)/2} / (1 - w⁻¹ q^n)`
/// with `c_n = (-w)^n` or `(-1)^n`.
///
/// The `n = 0` summand is the scalar `1/(1 - w⁻¹)`. For `n = -m < 0` the
/// numerator and denominator are multiplied by `-w q^m`, which turns the
/// summand into `q^{m(m+1)/2} (-w) c_{-m} / (1 - w q^m)`, a power series.
pub fn appell_lerch<F: FieldElem>(kind: AppellKind, w: &F, order: usize) -> Result<Series<F>> {
    let ctx = w.context();
    let one = F::one_in(&ctx);
    let winv = w.try_inv()?;
    let pref = one.clone() - &winv;
    let mut bilateral = Series::monomial(pref.try_inv()?, 0, order);

    let neg_w = -w.clone();
    let neg_winv = -winv.clone();
    let mut n = 1usize;
    while n * (n + 1) / 2 <= order {
        let e = n * (n + 1) / 2;
        // n > 0: weight c_n
        let c_pos = match kind {
            AppellKind::First => pow(&neg_w, n),
            AppellKind::Second => sign::<F>(n, &ctx),
        };
        let mut term = Series::monomial(c_pos, e, order);
        term.div_binomial_in_place(&winv, n);
        bilateral.add_shifted(&term, 0, None)?;
        // n = -m: weight (-w) c_{-m}
        let c_neg = match kind {
            AppellKind::First => pow(&neg_winv, n - 1),
            AppellKind::Second => sign::<F>(n + 1, &ctx) * w,
        };
        let mut term = Series::monomial(c_neg, e, order);
        term.div_binomial_in_place(w, n);
        bilateral.add_shifted(&term, 0, None)?;
        n += 1;
    }
    let euler = pochhammer(&PochSpec::infinite(one, 1, 1), order)?;
    bilateral.scale(&pref).try_div(&euler)
}

fn pow<F: FieldElem>(x: &F, e: usize) -> F {
    let mut acc = F::one_in(&x.context());
    for _ in 0..e {
        acc = acc * x;
    }
    acc
}

fn sign<F: FieldElem>(e: usize, ctx: &F::Ctx) -> F {
    if e.is_multiple_of(2) {
        F::one_in(ctx)
    } else {
        neg_one(ctx)
    }
}

/// `ζ_q(s) = Σ_{n≥1} σ_{s-1}(n) q^n`.
pub fn qzeta(s: u32, order: usize) -> Series<Rat> {
    let mut sigma = vec![BigInt::from(0); order + 1];
    for d in 1..=order {
        let p: BigInt = BigInt::from(d).pow(s - 1);
        for m in (d..=order).step_by(d) {
            sigma[m] += &p;
        }
    }
    let coeffs = sigma.into_iter().map(Rat::from_integer).collect();
    Series::from_coeffs(coeffs, order, &())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eisenstein {
    /// `1 - 24 ζ_q(2)`
    P,
    /// `1 + 240 ζ_q(4)`
    Q,
    /// `1 - 504 ζ_q(6)`
    R,
}

pub fn eisenstein(which: Eisenstein, order: usize) -> Series<Rat> {
    let (s, c) = match which {
        Eisenstein::P => (2, -24),
        Eisenstein::Q => (4, 240),
        Eisenstein::R => (6, -504),
    };
    let mut e = qzeta(s, order).scale_int(c);
    let c0 = e.coefficient(0).expect("order ≥ 0") + Rat::one();
    e.set_coefficient(0, c0).expect("order ≥ 0");
    e
}

/// `(-q;q)_∞` truncated.
pub fn minus_q_infinite(order: usize) -> Series<Rat> {
    pochhammer(&PochSpec::infinite(rat_int(-1), 1, 1), order).expect("valid spec")
}

/// `Σ_{j∈Z} q^{j(2j+1)} / (1 + q^{2j})`. The `j = 0` summand is `1/2` and
/// the summands at `±j` coincide.
pub fn bilateral_odd_sum(order: usize) -> Series<Rat> {
    let m1 = rat_int(-1);
    let mut total = Series::monomial(Rat::new(1.into(), 2.into()), 0, order);
    let mut j = 1;
    while j * (2 * j - 1) <= order {
        let mut t = Series::monomial(rat_int(1), j * (2 * j + 1), order);
        t.div_binomial_in_place(&m1, 2 * j);
        total.add_shifted(&t, 0, None).expect("same order");
        // j → -j: q^{j(2j-1)} / (1 + q^{-2j}) = q^{j(2j+1)} / (1 + q^{2j})
        total.add_shifted(&t, 0, None).expect("same order");
        j += 1;
    }
    total
}

/// `Σ_{j∈Z} q^{j(2j-1)} / (1 + q^{2j-1})`. For `j = -i` the summand is
/// `q^{i(2i+1)} / (1 + q^{-(2i+1)}) = q^{i(2i+1) + 2i+1} / (1 + q^{2i+1})`.
pub fn bilateral_even_sum(order: usize) -> Series<Rat> {
    let m1 = rat_int(-1);
    let mut total = Series::zero(order, &());
    let mut j = 1;
    while j * (2 * j - 1) <= order {
        let mut t = Series::monomial(rat_int(1), j * (2 * j - 1), order);
        t.div_binomial_in_place(&m1, 2 * j - 1);
        total.add_shifted(&t, 0, None).expect("same order");
        j += 1;
    }
    // j = -i for i ≥ 0; i = 0 gives 1/(1 + q^{-1}) = q/(1 + q)
    let mut i = 0;
    while i * (2 * i + 1) + 2 * i < order {
        let d = 2 * i + 1;
        let mut t = Series::monomial(rat_int(1), i * (2 * i + 1) + d, order);
        t.div_binomial_in_place(&m1, d);
        total.add_shifted(&t, 0, None).expect("same order");
        i += 1;
    }
    total
}
