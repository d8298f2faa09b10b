use num_traits::{One, Zero};
use proptest::prelude::*;
use qlab::exactnum::{rat, rat_int, Cyclo, Rat};
use qlab::series::{geometric_frac, pochhammer, Count, PochSpec, Series};

fn ints(s: &Series<Rat>) -> Vec<i64> {
    s.coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect()
}

/// Generalised pentagonal numbers with their signs, built independently.
fn pentagonal_oracle(n: usize) -> Vec<i64> {
    let mut v = vec![0i64; n + 1];
    v[0] = 1;
    for k in 1i64.. {
        let a = (k * (3 * k - 1) / 2) as usize;
        if a > n {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        v[a] += sign;
        let b = (k * (3 * k + 1) / 2) as usize;
        if b <= n {
            v[b] += sign;
        }
    }
    v
}

#[test]
fn euler_product_matches_pentagonal_numbers() {
    let e = pochhammer(&PochSpec::infinite(rat_int(1), 1, 1), 500).unwrap();
    assert_eq!(ints(&e), pentagonal_oracle(500));
}

#[test]
fn finite_products() {
    let qq3 = pochhammer(&PochSpec::finite(rat_int(1), 1, 1, 3), 10).unwrap();
    assert_eq!(ints(&qq3), vec![1, -1, -1, 0, 1, 1, -1, 0, 0, 0, 0]);
    let mq2 = pochhammer(&PochSpec::finite(rat_int(-1), 1, 1, 2), 6).unwrap();
    assert_eq!(ints(&mq2), vec![1, 1, 1, 1, 0, 0, 0]);
}

#[test]
fn inverse_of_euler_product_is_partition_function() {
    let n = 200;
    let e = pochhammer(&PochSpec::infinite(rat_int(1), 1, 1), n).unwrap();
    let inv = e.invert().unwrap();
    assert_eq!(&inv * &e, Series::one(n, &()));
    // p(200) = 3972999029388
    assert_eq!(inv.coefficient(200).unwrap(), &Rat::from_integer("3972999029388".parse().unwrap()));
}

#[test]
fn cyclotomic_pochhammer_against_naive_product() {
    let n = 40;
    let z = Cyclo::root(5, 2);
    let spec = PochSpec::new(z.clone(), 1, 3, Count::Finite(6));
    let fast = pochhammer(&spec, n).unwrap();
    let mut naive = Series::one(n, &5);
    for j in 0..6 {
        let mut factor = Series::one(n, &5);
        let e = 1 + 3 * j;
        if e <= n {
            factor.set_coefficient(e, -z.clone()).unwrap();
        }
        naive = &naive * &factor;
    }
    assert_eq!(fast, naive);
}

#[test]
fn geometric_series_inverts_binomial() {
    let n = 30;
    let a = rat(3, 7);
    let g = geometric_frac(&a, 4, n).unwrap();
    assert_eq!(g.mul_binomial(&a, 4), Series::one(n, &()));
}

#[test]
fn coefficient_out_of_range() {
    let s = Series::<Rat>::one(5, &());
    assert!(s.coefficient(6).is_err());
    assert!(s.coefficient(5).unwrap().is_zero());
    assert!(s.coefficient(0).unwrap().is_one());
}

fn series_strategy(n: usize) -> impl Strategy<Value = Series<Rat>> {
    prop::collection::vec((-20i64..20, 1i64..6), n + 1)
        .prop_map(move |v| Series::from_coeffs(v.into_iter().map(|(a, b)| rat(a, b)).collect(), n, &()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in series_strategy(12), b in series_strategy(12), c in series_strategy(12)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
    }

    #[test]
    fn inverse_property(a in series_strategy(20)) {
        prop_assume!(!a.coefficient(0).unwrap().is_zero());
        let inv = a.invert().unwrap();
        prop_assert_eq!(&a * &inv, Series::one(20, &()));
    }

    #[test]
    fn truncation_commutes_with_products(a in series_strategy(16), b in series_strategy(16), m in 0usize..16) {
        let full = (&a * &b).truncate(m).unwrap();
        let cut = &a.truncate(m).unwrap() * &b.truncate(m).unwrap();
        prop_assert_eq!(full, cut);
    }

    #[test]
    fn binomial_division_undoes_multiplication(a in series_strategy(15), k in 1usize..6, num in -5i64..5) {
        let c = rat_int(num);
        prop_assert_eq!(a.mul_binomial(&c, k).div_binomial(&c, k), a);
    }

    #[test]
    fn pochhammer_matches_naive(offset in 1usize..4, step in 1usize..4, count in 0usize..8, num in -3i64..4) {
        let n = 25;
        let a = rat_int(num);
        let fast = pochhammer(&PochSpec::finite(a.clone(), offset, step, count), n).unwrap();
        let mut naive = Series::one(n, &());
        for j in 0..count {
            let mut f = vec![Rat::zero(); n + 1];
            f[0] = Rat::one();
            let e = offset + j * step;
            if e <= n {
                f[e] = -a.clone();
            }
            naive = &naive * &Series::from_coeffs(f, n, &());
        }
        prop_assert_eq!(fast, naive);
    }
}
