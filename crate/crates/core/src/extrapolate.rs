//! Sequence acceleration by iterated Aitken Δ².
//!
//! For samples at `r_t = 1 - 2^{-t}` a radial value behaves like
//! `L + c₁ε + c₂ε² + …` with `ε = 2^{-t}`; each Aitken level removes the
//! leading geometric component. The error estimate is empirical: the gap
//! between the last two extrapolants.

use crate::bigcomplex::BigComplex;

#[derive(Debug, Clone)]
pub struct Extrapolation {
    /// `levels[0]` is the input sequence, `levels[j]` the `j`-fold transform.
    pub levels: Vec<Vec<BigComplex>>,
    pub value: BigComplex,
    pub error_estimate: f64,
}

/// One Aitken Δ² pass: `x_i - (Δx_i)² / Δ²x_i`. Where the second
/// difference vanishes the sequence is already stationary and `x_{i+2}` is
/// kept.
pub fn aitken(seq: &[BigComplex]) -> Vec<BigComplex> {
    seq.windows(3)
        .map(|w| {
            let d1 = &w[1] - &w[0];
            let d2 = &(&w[2] - &w[1]) - &d1;
            match (&d1 * &d1).checked_div(&d2) {
                Some(corr) if !d2.is_zero() && corr.is_finite() => &w[0] - &corr,
                _ => w[2].clone(),
            }
        })
        .collect()
}

/// Up to `depth` Aitken levels, stopping early when a level would have
/// fewer than two entries.
pub fn iterated_aitken(seq: &[BigComplex], depth: usize) -> Option<Extrapolation> {
    if seq.is_empty() {
        return None;
    }
    let mut levels = vec![seq.to_vec()];
    for _ in 0..depth {
        let last = levels.last().expect("non-empty");
        if last.len() < 4 {
            break;
        }
        levels.push(aitken(last));
    }
    let top = levels.last().expect("non-empty");
    let value = top[top.len() - 1].clone();
    let error_estimate = match top.len() {
        0 | 1 => 0.0,
        n => 10f64.powf(top[n - 1].dist_log10(&top[n - 2])),
    };
    Some(Extrapolation { levels, value, error_estimate })
}
