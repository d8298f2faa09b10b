//! Dense univariate polynomials over Q, lowest degree first.

use num_traits::{One, Zero};

use super::Rat;

pub(crate) fn trim(p: &mut Vec<Rat>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[Rat]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rat> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rat::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let db = degree(b).expect("polynomial division by zero");
    let lead_inv = b[db].recip();
    let mut rem: Vec<Rat> = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rat::zero(); rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] * &lead_inv;
        let shift = dr - db;
        for (j, bj) in b[..=db].iter().enumerate() {
            if !bj.is_zero() {
                rem[shift + j] -= &c * bj;
            }
        }
        quot[shift] = c;
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// Inverse of `a` modulo `modulus` by the extended Euclidean algorithm.
/// Returns `None` when `gcd(a, modulus) != 1`.
pub(crate) fn inv_mod(a: &[Rat], modulus: &[Rat]) -> Option<Vec<Rat>> {
    let (mut r0, mut r1) = (modulus.to_vec(), a.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut t0, mut t1): (Vec<Rat>, Vec<Rat>) = (Vec::new(), vec![Rat::one()]);
    while degree(&r1).is_some() {
        let (q, r) = divrem(&r0, &r1);
        let t2 = sub(&t0, &mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t2);
    }
    // r0 is the gcd; it must be a nonzero constant.
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = r0[0].recip();
    let mut inv: Vec<Rat> = t0.iter().map(|x| x * &c).collect();
    let (_, rem) = divrem(&inv, modulus);
    inv = rem;
    Some(inv)
}
