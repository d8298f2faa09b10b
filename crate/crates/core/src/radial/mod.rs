//! Radial limits at roots of unity: exact terminating values in cyclotomic
//! fields, and numerical sampling along `q = ζ·r_t`, `r_t = 1 - 2^{-t}`.

mod numeric;

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{invalid, QlabError, Result};
use crate::exactnum::{Cyclo, FieldElem};

pub use numeric::*;

/// The root of unity `ζ_m^h` with `gcd(h, m) = 1`, `1 ≤ h < m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RootSpec {
    h: u64,
    m: u64,
}

impl RootSpec {
    pub fn new(h: u64, m: u64) -> Result<Self> {
        if m < 2 || h < 1 || h >= m {
            return invalid(format!("root ζ_{m}^{h} needs 1 ≤ h < m"));
        }
        if h.gcd(&m) != 1 {
            return invalid(format!("root ζ_{m}^{h} is not primitive: gcd({h}, {m}) ≠ 1"));
        }
        Ok(RootSpec { h, m })
    }

    /// The standard primitive root `ζ_{2k}` of even order `2k`.
    pub fn even(k: u64) -> Result<Self> {
        Self::new(1, 2 * k)
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn exact(&self) -> Cyclo {
        Cyclo::root(self.m, self.h as i64)
    }
}

impl fmt::Display for RootSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}^{}", self.m, self.h)
    }
}

/// Inverse of `h` modulo `m` by the extended Euclidean algorithm.
pub fn inverse_mod(h: u64, m: u64) -> Option<u64> {
    let e = (h as i64).extended_gcd(&(m as i64));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i64) as u64)
}

/// Parameters `(a, b, h, m)` of the rank/crank radial limit: `w = ζ_b^a`
/// and the approach root `ζ_m^h`, with `b | m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ForParams {
    a: u64,
    b: u64,
    root: RootSpec,
    hprime: u64,
}

impl ForParams {
    pub fn new(a: u64, b: u64, h: u64, m: u64) -> Result<Self> {
        if !(1 <= a && a < b) {
            return invalid(format!("need 1 ≤ a < b, got a = {a}, b = {b}"));
        }
        if a.gcd(&b) != 1 {
            return invalid(format!("gcd(a, b) = gcd({a}, {b}) ≠ 1"));
        }
        let root = RootSpec::new(h, m)?;
        if !m.is_multiple_of(b) {
            return invalid(format!("b = {b} does not divide m = {m}"));
        }
        let hprime = inverse_mod(h, m).expect("gcd(h, m) = 1 was checked");
        Ok(ForParams { a, b, root, hprime })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn root(&self) -> RootSpec {
        self.root
    }

    pub fn hprime(&self) -> u64 {
        self.hprime
    }

    /// `w = ζ_b^a` in `Q(ζ_b)`.
    pub fn w(&self) -> Cyclo {
        Cyclo::root(self.b, self.a as i64)
    }

    /// `w = ζ_m^{am/b}` inside `Q(ζ_m)`.
    pub fn w_in_root_field(&self) -> Cyclo {
        let m = self.root.m;
        Cyclo::root(m, (self.a * (m / self.b)) as i64)
    }
}

impl fmt::Display for ForParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a={}, b={}, h={}, m={})", self.a, self.b, self.root.h, self.root.m)
    }
}

/// Partial sums of `Σ_n P_n · x_n` where `P_n = P_{n-1} · factor(n)`; stops
/// at the first `n` with `P_n = 0` and returns that index with the sum.
/// Once one factor vanishes all later summands vanish, so the sum terminates.
fn terminating_sum(
    limit: u64,
    mut factor: impl FnMut(u64) -> Cyclo,
    mut weight: impl FnMut(u64) -> Cyclo,
    start: Cyclo,
    what: &str,
) -> Result<(Cyclo, u64)> {
    let mut p = start;
    let mut total = Cyclo::zero(p.order());
    for n in 0..=limit {
        if n > 0 {
            p = p * &factor(n);
        }
        if p.is_zero() {
            return Ok((total, n));
        }
        total += &(p.clone() * &weight(n));
    }
    Err(QlabError::NonTerminating(format!("{what}: no vanishing factor within {limit} terms")))
}

/// `u(ζ) = Σ_{n<k} (-ζ;ζ)_n² ζ^{n+1}` for a primitive root of order `2k`,
/// together with the index at which the summands start to vanish.
pub fn exact_u_with_index(k: u64, root: &RootSpec) -> Result<(Cyclo, u64)> {
    if root.m % 2 == 1 {
        return Err(QlabError::NonTerminating(format!("u(q) does not terminate at the odd-order root {root}")));
    }
    if root.m != 2 * k {
        return invalid(format!("root {root} does not have order 2k = {}", 2 * k));
    }
    let z = root.exact();
    let m = root.m;
    let one = Cyclo::one(m);
    let (val, n0) = terminating_sum(
        2 * m,
        |n| {
            let f = one.clone() + &z.pow(n as i64).expect("root is invertible");
            f.clone() * &f
        },
        |n| z.pow(n as i64 + 1).expect("root is invertible"),
        Cyclo::one(m),
        "u at an even root",
    )?;
    Ok((val, n0))
}

pub fn exact_u_at_root(k: u64, root: &RootSpec) -> Result<Cyclo> {
    exact_u_with_index(k, root).map(|(v, _)| v)
}

/// `-4 u(ζ)`, the limit of `f(q) - (-1)^k b(q)`.
pub fn for1_value(k: u64, root: &RootSpec) -> Result<Cyclo> {
    Ok(exact_u_at_root(k, root)?.scale_int(-4))
}

/// `-4ψ(-ζ)` for even `k`, `2φ(-ζ)` for odd `k`, each as a terminating sum
/// whose termination is checked, not assumed.
pub fn for2_value(k: u64, root: &RootSpec) -> Result<Cyclo> {
    for2_value_with_index(k, root).map(|(v, _)| v)
}

pub fn for2_value_with_index(k: u64, root: &RootSpec) -> Result<(Cyclo, u64)> {
    if root.m != 2 * k {
        return invalid(format!("root {root} does not have order 2k = {}", 2 * k));
    }
    let m = root.m;
    let x = -root.exact(); // evaluate at -ζ
    let one = Cyclo::one(m);
    let pw = |e: u64| x.pow(e as i64).expect("root is invertible");
    if k.is_multiple_of(2) {
        // ψ(x) = Σ (-x²;x²)_n x^{n+1}
        let (psi, n0) = terminating_sum(
            2 * m,
            |n| one.clone() + &pw(2 * n),
            |n| pw(n + 1),
            Cyclo::one(m),
            "ψ(-ζ)",
        )?;
        Ok((psi.scale_int(-4), n0))
    } else {
        // φ(x) = 1 + Σ (-1)^n (x;x²)_n x^{2n+1}
        let (tail, n0) = terminating_sum(
            2 * m,
            |n| one.clone() - &pw(2 * n - 1),
            |n| {
                let s = if n % 2 == 0 { 1 } else { -1 };
                pw(2 * n + 1).scale_int(s)
            },
            Cyclo::one(m),
            "φ(-ζ)",
        )?;
        Ok(((one + &tail).scale_int(2), n0))
    }
}

/// `U(ζ_b^a; ζ_m^h)` in `Q(ζ_m)` with the index from which summands vanish.
pub fn exact_big_u_with_index(p: &ForParams) -> Result<(Cyclo, u64)> {
    let m = p.root.m;
    let w = p.w_in_root_field();
    let winv = w.inv()?;
    let q = p.root.exact();
    let one = Cyclo::one(m);
    terminating_sum(
        m,
        |n| {
            let qn = q.pow(n as i64).expect("root is invertible");
            (one.clone() - &(w.clone() * &qn)) * &(one.clone() - &(winv.clone() * &qn))
        },
        |n| q.pow(n as i64 + 1).expect("root is invertible"),
        Cyclo::one(m),
        "U at a root of unity",
    )
}

pub fn exact_big_u_at_root(p: &ForParams) -> Result<Cyclo> {
    exact_big_u_with_index(p).map(|(v, _)| v)
}

/// `-(1 - ζ_b^a)(1 - ζ_b^{-a}) U(ζ_b^a; ζ_m^h)`.
pub fn for3_value(p: &ForParams) -> Result<Cyclo> {
    let m = p.root.m;
    let w = p.w_in_root_field();
    let one = Cyclo::one(m);
    let k = (one.clone() - &w) * &(one - &w.inv()?);
    Ok(-(k * &exact_big_u_at_root(p)?))
}

/// `ζ_{b²}^{h' a² m}` in `Q(ζ_{b²})`.
pub fn theta_multiplier(p: &ForParams) -> Cyclo {
    let b2 = p.b * p.b;
    let e = (p.hprime as u128 * (p.a * p.a) as u128 * p.root.m as u128) % b2 as u128;
    Cyclo::root(b2, e as i64)
}

/// The residue `c₀ ∈ [0, m)` with `ζ_b^{-a} ζ_m^{h c₀} = 1`.
pub fn collapsing_residue(p: &ForParams) -> u64 {
    let m = p.root.m;
    (p.hprime as u128 * p.a as u128 * (m / p.b) as u128 % m as u128) as u64
}
