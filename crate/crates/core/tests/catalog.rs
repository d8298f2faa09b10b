use num_bigint::BigInt;
use qlab::catalog::{
    b_series, b_series_theta_form, eval_numeric, expand, minus_q_infinite, Expansion, SeriesId, SeriesTag,
};
use qlab::exactnum::{rat_int, Cyclo, Rat};
use qlab::series::Series;
use qlab::BigComplex;

fn rational(id: &SeriesId, n: usize) -> Series<Rat> {
    expand(id, n).unwrap().as_rational().expect("rational coefficients")
}

fn ints(s: &Series<Rat>) -> Vec<i64> {
    s.coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect()
}

/// Partition numbers by the coin-change recurrence.
fn partitions(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::from(0); n + 1];
    p[0] = BigInt::from(1);
    for part in 1..=n {
        for m in part..=n {
            let add = p[m - part].clone();
            p[m] += add;
        }
    }
    p
}

/// Partitions counted by Durfee square: the number of partitions of `n`
/// with a `k×k` square is the number of pairs of partitions into parts
/// `≤ k` of total `n - k²`.
fn partitions_by_durfee(n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); n + 1];
    let mut k = 0;
    while k * k <= n {
        let mut bounded = vec![BigInt::from(0); n + 1];
        bounded[0] = BigInt::from(1);
        for part in 1..=k {
            for m in part..=n {
                let add = bounded[m - part].clone();
                bounded[m] += add;
            }
        }
        for a in 0..=n - k * k {
            for b in 0..=n - k * k - a {
                out[k * k + a + b] += &bounded[a] * &bounded[b];
            }
        }
        k += 1;
    }
    out
}

#[test]
fn mock_theta_f_coefficients() {
    let f = rational(&SeriesId::plain(SeriesTag::F).unwrap(), 10);
    assert_eq!(ints(&f), vec![1, 1, -2, 3, -3, 3, -5, 7, -6, 6, -10]);
}

#[test]
fn rank_at_one_counts_partitions() {
    let n = 50;
    let r = rational(&SeriesId::with_w(SeriesTag::Rank, Cyclo::one(1)).unwrap(), n);
    let p = partitions(n);
    assert_eq!(p, partitions_by_durfee(n));
    let got: Vec<BigInt> = r.coeffs().iter().map(|c| c.to_integer()).collect();
    assert_eq!(got, p);
    assert_eq!(p[50], BigInt::from(204226));
}

#[test]
fn rank_at_minus_one_is_f() {
    let n = 120;
    let r = rational(&SeriesId::with_w(SeriesTag::Rank, Cyclo::from_int(2, -1)).unwrap(), n);
    assert_eq!(r, rational(&SeriesId::plain(SeriesTag::F).unwrap(), n));
}

#[test]
fn crank_at_one_is_partition_generating_function() {
    let n = 60;
    let c = rational(&SeriesId::with_w(SeriesTag::Crank, Cyclo::one(1)).unwrap(), n);
    let got: Vec<BigInt> = c.coeffs().iter().map(|c| c.to_integer()).collect();
    assert_eq!(got, partitions(n));
}

#[test]
fn qzeta_and_eisenstein() {
    assert_eq!(ints(&rational(&SeriesId::qzeta(2).unwrap(), 4)), vec![0, 1, 3, 4, 7]);
    assert_eq!(ints(&rational(&SeriesId::qzeta(4).unwrap(), 4)), vec![0, 1, 9, 28, 73]);
    assert_eq!(ints(&rational(&SeriesId::plain(SeriesTag::EisP).unwrap(), 3)), vec![1, -24, -72, -96]);
    assert_eq!(ints(&rational(&SeriesId::plain(SeriesTag::EisQ).unwrap(), 3)), vec![1, 240, 2160, 6720]);
    assert_eq!(ints(&rational(&SeriesId::plain(SeriesTag::EisR).unwrap(), 3)), vec![1, -504, -16632, -122976]);
}

#[test]
fn small_catalogue_prefixes() {
    let u = rational(&SeriesId::plain(SeriesTag::USmall).unwrap(), 4);
    // q + (1+q)^2 q^2 + (1+q)^2(1+q^2)^2 q^3 + …
    assert_eq!(ints(&u), vec![0, 1, 1, 3, 4]);
    let psi = rational(&SeriesId::plain(SeriesTag::Psi).unwrap(), 5);
    assert_eq!(ints(&psi), vec![0, 1, 1, 1, 2, 2]);
    let phi = rational(&SeriesId::plain(SeriesTag::Phi).unwrap(), 5);
    // 1 + q - (1-q) q^3 + (1-q)(1-q^3) q^5
    assert_eq!(ints(&phi), vec![1, 1, 0, -1, 1, 1]);
}

#[test]
fn three_forms_of_b_agree() {
    let n = 200;
    let direct = b_series(n);
    let theta = b_series_theta_form(n);
    // φ(-q)/(-q;q)_∞ with φ(-q) = Σ (-1)^n q^{n²}
    let mut phi_minus = Series::one(n, &());
    let mut k = 1;
    while k * k <= n {
        phi_minus.set_coefficient(k * k, rat_int(if k % 2 == 0 { 2 } else { -2 })).unwrap();
        k += 1;
    }
    let via_division = phi_minus.try_div(&minus_q_infinite(n)).unwrap();
    assert_eq!(direct, theta);
    assert_eq!(direct, via_division);
    assert_eq!(rational(&SeriesId::plain(SeriesTag::B).unwrap(), n), direct);
}

/// Brute-force Appell–Lerch expansion: every `1/(1 - y)` is expanded in the
/// region where it converges (`|y| < 1` for `n ≥ 0`, `|y| > 1` for `n < 0`)
/// and monomials are accumulated one by one.
fn appell_oracle(first: bool, w: &Cyclo, n: usize) -> Vec<Cyclo> {
    let m = w.order();
    let winv = w.inv().unwrap();
    let pow = |x: &Cyclo, e: i64| x.pow(e).unwrap();
    let minus_one = Cyclo::from_int(m, -1);
    let c = |k: i64| if first { pow(&(-w.clone()), k) } else { pow(&minus_one, k) };
    let mut acc = vec![Cyclo::zero(m); n + 1];
    // n = 0: the scalar 1/(1 - w⁻¹)
    acc[0] = acc[0].clone() + &(Cyclo::one(m) - &winv).inv().unwrap();
    for k in 1..=n {
        let e0 = k * (k + 1) / 2;
        if e0 > n {
            break;
        }
        // n = k > 0: c_k q^{k(k+1)/2} Σ_{j≥0} w^{-j} q^{kj}
        let mut j = 0;
        while e0 + k * j <= n {
            let t = c(k as i64) * &pow(&winv, j as i64);
            acc[e0 + k * j] = acc[e0 + k * j].clone() + &t;
            j += 1;
        }
        // n = -k: c_{-k} q^{k(k-1)/2} · (-Σ_{j≥1} w^j q^{kj})
        let base = k * (k - 1) / 2;
        let mut j = 1;
        while base + k * j <= n {
            let t = -(c(-(k as i64)) * &pow(w, j as i64));
            acc[base + k * j] = acc[base + k * j].clone() + &t;
            j += 1;
        }
    }
    // times (1 - w⁻¹) / (q;q)_∞, the latter via partition numbers
    let pref = Cyclo::one(m) - &winv;
    let p = partitions(n);
    (0..=n)
        .map(|i| {
            let mut s = Cyclo::zero(m);
            for j in 0..=i {
                s += &(acc[j].clone() * &Cyclo::from_rat(m, &Rat::from_integer(p[i - j].clone())));
            }
            s * &pref
        })
        .collect()
}

#[test]
fn appell_lerch_against_brute_force() {
    let n = 45;
    for w in [Cyclo::from_int(2, -1), Cyclo::root(3, 1), Cyclo::root(4, 1), Cyclo::root(6, 5), Cyclo::root(5, 2)] {
        for (first, tag) in [(true, SeriesTag::Appell1), (false, SeriesTag::Appell2)] {
            let got = match expand(&SeriesId::with_w(tag, w.clone()).unwrap(), n).unwrap() {
                Expansion::Cyclotomic(s) => s,
                other => panic!("unexpected {other:?}"),
            };
            let want = appell_oracle(first, &w, n);
            assert_eq!(got.coeffs(), &want[..], "{tag} at w = {w}");
        }
    }
}

#[test]
fn parameter_validation() {
    assert!(SeriesId::with_w(SeriesTag::Appell1, Cyclo::one(1)).is_err());
    assert!(SeriesId::with_w(SeriesTag::Appell2, Cyclo::one(3)).is_err());
    assert!(SeriesId::with_w(SeriesTag::Rank, Cyclo::one(1)).is_ok());
    assert!(SeriesId::new(SeriesTag::F, Some(Cyclo::root(3, 1)), None).is_err());
    assert!(SeriesId::plain(SeriesTag::Rank).is_err());
    assert!(SeriesId::plain(SeriesTag::Qzeta).is_err());
    assert!(SeriesId::qzeta(0).is_err());
    assert_eq!("u_small".parse::<SeriesTag>().unwrap(), SeriesTag::USmall);
    assert!("nope".parse::<SeriesTag>().is_err());
}

fn all_ids() -> Vec<SeriesId> {
    let w = Cyclo::root(3, 1);
    SeriesTag::ALL
        .iter()
        .map(|&t| {
            if t.takes_w() {
                SeriesId::with_w(t, w.clone()).unwrap()
            } else if t.takes_s() {
                SeriesId::qzeta(4).unwrap()
            } else {
                SeriesId::plain(t).unwrap()
            }
        })
        .collect()
}

#[test]
fn numeric_values_match_truncated_polynomials() {
    let digits = 50;
    for (re, im) in [("0.35", "0"), ("0.2", "0.25"), ("-0.3", "0.1")] {
        let q = BigComplex::parse(re, im, 80).unwrap();
        for id in all_ids() {
            let poly = match expand(&id, 180).unwrap() {
                Expansion::Rational(s) => s.eval(&q),
                Expansion::Cyclotomic(s) => s.eval(&q),
            };
            let num = eval_numeric(&id, &q, digits).unwrap();
            let d = num.value.dist_log10(&poly);
            let scale = poly.log10_abs().max(0.0);
            assert!(d < scale - 40.0, "{id} at q = {re}+{im}i: log10 diff {d}");
            assert!(num.error_log10 < scale - digits as f64 + 1.0);
        }
    }
}

#[test]
fn numeric_rejects_points_outside_disc() {
    let id = SeriesId::plain(SeriesTag::F).unwrap();
    assert!(eval_numeric(&id, &BigComplex::from_i64(1, 30), 20).is_err());
    assert!(eval_numeric(&id, &BigComplex::parse("0.8", "0.7", 30).unwrap(), 20).is_err());
}
