//! Graded polynomial relations `Σ λ_ij Q^i R^j = 1 + c·ζ_q(s)` with
//! `4i + 6j = s`, found by exact linear algebra over `Q`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::catalog::{eisenstein, qzeta, Eisenstein};
use crate::error::{invalid, QlabError, Result};
use crate::exactnum::Rat;
use crate::series::Series;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationResult {
    pub weight: u32,
    pub found: bool,
    /// `c` in `1 + c·ζ_q(s)`.
    #[serde(serialize_with = "opt_rat")]
    pub normalizing_constant: Option<Rat>,
    /// `(i, j, λ)` meaning `λ·Q^i R^j`.
    #[serde(serialize_with = "monomials")]
    pub monomials: Vec<(u32, u32, Rat)>,
    pub verified_order: usize,
    /// Rank of the coefficient matrix and number of unknowns; equal rank
    /// means the relation is unique.
    pub rank: usize,
    pub unknowns: usize,
}

impl RelationResult {
    pub fn unique(&self) -> bool {
        self.rank == self.unknowns
    }
}

fn opt_rat<S: serde::Serializer>(v: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

fn monomials<S: serde::Serializer>(v: &[(u32, u32, Rat)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (i, j, c) in v {
        seq.serialize_element(&(i, j, c.to_string()))?;
    }
    seq.end()
}

/// Monomials `Q^i R^j` of weight `4i + 6j = s`.
pub fn graded_monomials(s: u32) -> Vec<(u32, u32)> {
    (0..=s / 4).filter(|i| (s - 4 * i).is_multiple_of(6)).map(|i| (i, (s - 4 * i) / 6)).collect()
}

fn monomial_series(i: u32, j: u32, order: usize) -> Series<Rat> {
    let q = eisenstein(Eisenstein::Q, order);
    let r = eisenstein(Eisenstein::R, order);
    let mut acc = Series::one(order, &());
    for _ in 0..i {
        acc = &acc * &q;
    }
    for _ in 0..j {
        acc = &acc * &r;
    }
    acc
}

/// Row reduction of the augmented matrix `[A | b]`. Returns the rank of `A`,
/// whether the system is consistent, and a solution with free unknowns zero.
fn solve(mut rows: Vec<Vec<Rat>>, cols: usize) -> (usize, bool, Vec<Rat>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let consistent = rows[r..].iter().all(|row| row[cols].is_zero());
    let mut x = vec![Rat::zero(); cols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = rows[row][cols].clone();
    }
    (r, consistent, x)
}

pub fn find_qzeta_relation(s: u32, order: usize) -> Result<RelationResult> {
    if s % 2 == 1 {
        return Err(QlabError::Unsupported(format!(
            "odd weight s = {s}: no relations are expected and none is searched for"
        )));
    }
    if s < 2 {
        return invalid("weight s must be ≥ 2");
    }
    let monos = graded_monomials(s);
    let unknowns = monos.len() + 1;
    if order < 2 * unknowns {
        return invalid(format!("order {order} is below twice the number of unknowns ({unknowns})"));
    }
    let zeta = qzeta(s, order);
    let basis: Vec<Series<Rat>> = monos.iter().map(|&(i, j)| monomial_series(i, j, order)).collect();
    // Σ λ_ij [Q^i R^j]_n - c [ζ]_n = [n = 0]
    let rows: Vec<Vec<Rat>> = (0..=order)
        .map(|n| {
            let mut row: Vec<Rat> = basis.iter().map(|b| b.coeffs()[n].clone()).collect();
            row.push(-zeta.coeffs()[n].clone());
            row.push(if n == 0 { Rat::one() } else { Rat::zero() });
            row
        })
        .collect();
    let (rank, consistent, x) = solve(rows, unknowns);
    let not_found = RelationResult {
        weight: s,
        found: false,
        normalizing_constant: None,
        monomials: Vec::new(),
        verified_order: order,
        rank,
        unknowns,
    };
    if !consistent || monos.is_empty() {
        return Ok(not_found);
    }
    let c = x[monos.len()].clone();
    let terms: Vec<(u32, u32, Rat)> =
        monos.iter().zip(&x).map(|(&(i, j), l)| (i, j, l.clone())).filter(|t| !t.2.is_zero()).collect();

    // independent re-verification at twice the order
    let n2 = 2 * order;
    let mut lhs = Series::zero(n2, &());
    for (i, j, l) in &terms {
        lhs = &lhs + &monomial_series(*i, *j, n2).scale(l);
    }
    let mut rhs = qzeta(s, n2).scale(&c);
    let c0 = rhs.coeffs()[0].clone() + Rat::one();
    rhs.set_coefficient(0, c0)?;
    if lhs != rhs {
        return Ok(RelationResult { verified_order: n2, ..not_found });
    }
    Ok(RelationResult {
        weight: s,
        found: true,
        normalizing_constant: Some(c),
        monomials: terms,
        verified_order: n2,
        rank,
        unknowns,
    })
}
