use proptest::prelude::*;
use qlab::bigcomplex::BigComplex;
use qlab::exactnum::Cyclo;
use qlab::extrapolate::iterated_aitken;
use qlab::radial::*;
use qlab::{FieldElem, QlabError};

fn int(m: u64, n: i64) -> Cyclo {
    Cyclo::from_int(m, n)
}

fn primitive_residues(m: u64) -> Vec<u64> {
    (1..m).filter(|h| num_integer::Integer::gcd(h, &m) == 1).collect()
}

#[test]
fn exact_u_examples() {
    assert_eq!(exact_u_at_root(1, &RootSpec::even(1).unwrap()).unwrap(), int(2, -1));
    let i = Cyclo::root(4, 1);
    assert_eq!(exact_u_at_root(2, &RootSpec::even(2).unwrap()).unwrap(), -i.clone());
    assert_eq!(for1_value(1, &RootSpec::even(1).unwrap()).unwrap(), int(2, 4));
    assert_eq!(for1_value(2, &RootSpec::even(2).unwrap()).unwrap(), i.scale_int(4));
    assert!(matches!(
        exact_u_at_root(3, &RootSpec::new(1, 3).unwrap()),
        Err(QlabError::NonTerminating(_))
    ));
}

#[test]
fn u_summands_vanish_from_k() {
    for k in 1..=6u64 {
        for h in primitive_residues(2 * k) {
            let root = RootSpec::new(h, 2 * k).unwrap();
            let (_, n0) = exact_u_with_index(k, &root).unwrap();
            assert!(n0 <= k, "k = {k}, h = {h}: vanishes only from {n0}");
            // (-ζ;ζ)_k contains 1 + ζ^k = 0
            let z = root.exact();
            assert!((Cyclo::one(2 * k) + &z.pow(k as i64).unwrap()).is_zero());
        }
    }
}

#[test]
fn theorem_values_agree_exactly() {
    for k in 1..=6u64 {
        let root = RootSpec::even(k).unwrap();
        assert_eq!(for2_value(k, &root).unwrap(), for1_value(k, &root).unwrap(), "k = {k}");
    }
    for k in 1..=5u64 {
        for h in primitive_residues(2 * k) {
            let root = RootSpec::new(h, 2 * k).unwrap();
            let p = ForParams::new(1, 2, h, 2 * k).unwrap();
            assert_eq!(for3_value(&p).unwrap(), for1_value(k, &root).unwrap(), "k = {k}, h = {h}");
        }
    }
}

#[test]
fn for2_examples_and_termination() {
    assert_eq!(for2_value(2, &RootSpec::even(2).unwrap()).unwrap(), Cyclo::root(4, 1).scale_int(4));
    assert_eq!(for2_value(1, &RootSpec::even(1).unwrap()).unwrap(), int(2, 4));
    // termination is found, not assumed, for every primitive root
    for k in 1..=8u64 {
        for h in primitive_residues(2 * k) {
            let (_, n0) = for2_value_with_index(k, &RootSpec::new(h, 2 * k).unwrap()).unwrap();
            assert!(n0 <= 2 * k);
        }
    }
    assert!(for2_value(2, &RootSpec::even(3).unwrap()).is_err());
}

#[test]
fn big_u_and_for3_examples() {
    let p = ForParams::new(1, 2, 1, 2).unwrap();
    assert_eq!(exact_big_u_at_root(&p).unwrap(), int(2, -1));
    assert_eq!(for3_value(&p).unwrap(), int(2, 4));
    let p = ForParams::new(1, 2, 1, 4).unwrap();
    assert_eq!(exact_big_u_at_root(&p).unwrap(), -Cyclo::root(4, 1));
    assert_eq!(for3_value(&p).unwrap(), Cyclo::root(4, 1).scale_int(4));
}

#[test]
fn big_u_summands_vanish_from_m() {
    let p = ForParams::new(1, 3, 5, 6).unwrap();
    let m = 6;
    let q = p.root().exact();
    let w = Cyclo::root(3, 1).lift(m).unwrap();
    let winv = w.inv().unwrap();
    let one = Cyclo::one(m);
    let mut poch = one.clone();
    for n in 1..=m + 5 {
        let qn = q.pow(n as i64).unwrap();
        poch = poch * &((one.clone() - &(w.clone() * &qn)) * &(one.clone() - &(winv.clone() * &qn)));
        if n >= m {
            assert!(poch.is_zero(), "summand {n} survives");
        }
    }
    let (_, n0) = exact_big_u_with_index(&p).unwrap();
    assert!(n0 <= m);
}

#[test]
fn theta_multiplier_examples() {
    let tm = |a, b, h, m| theta_multiplier(&ForParams::new(a, b, h, m).unwrap());
    assert_eq!(tm(1, 2, 1, 2), int(4, -1));
    assert_eq!(tm(1, 2, 1, 4), int(4, 1));
    assert_eq!(tm(2, 3, 1, 6), Cyclo::root(3, 2).lift(9).unwrap());
    assert_eq!(tm(1, 3, 5, 6), Cyclo::root(3, 1).lift(9).unwrap());
    for k in 1..=6u64 {
        for h in primitive_residues(2 * k) {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(tm(1, 2, h, 2 * k), int(4, sign), "k = {k}, h = {h}");
        }
    }
}

#[test]
fn collapsing_residue_examples() {
    let c0 = |a, b, h, m| collapsing_residue(&ForParams::new(a, b, h, m).unwrap());
    assert_eq!(c0(1, 2, 1, 2), 1);
    assert_eq!(c0(1, 2, 1, 4), 2);
    assert_eq!(c0(1, 3, 5, 6), 4);
}

#[test]
fn parameter_validation() {
    assert!(RootSpec::new(2, 4).is_err());
    assert!(RootSpec::new(0, 4).is_err());
    assert!(RootSpec::new(4, 4).is_err());
    assert!(ForParams::new(2, 4, 1, 4).is_err());
    assert!(ForParams::new(1, 3, 1, 4).is_err());
    assert!(ForParams::new(3, 2, 1, 4).is_err());
    assert_eq!(ForParams::new(1, 3, 5, 6).unwrap().hprime(), 5);
    // b = m is allowed
    assert!(ForParams::new(1, 4, 1, 4).is_ok());
    assert!(RadialPath::new(1, 5, 30).is_err());
    assert!(RadialPath::new(5, 5, 30).is_err());
    assert!(RadialPath::new(2, 5, 0).is_err());
}

fn valid_tuple() -> impl Strategy<Value = ForParams> {
    (2u64..=24, 1u64..24, 1u64..24, 1u64..24).prop_filter_map("invalid tuple", |(m, bsel, a, h)| {
        let divisors: Vec<u64> = (2..=m).filter(|d| m % d == 0).collect();
        let b = divisors[(bsel as usize) % divisors.len()];
        ForParams::new(a % b, b, h % m, m).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn collapsing_residue_cancels_w(p in valid_tuple()) {
        let m = p.root().m();
        let c0 = collapsing_residue(&p);
        prop_assert!(c0 < m);
        let winv = Cyclo::root(p.b(), -(p.a() as i64)).lift(m).unwrap();
        let zc = Cyclo::root(m, (p.root().h() * c0) as i64);
        prop_assert!((winv * &zc).is_one());
    }

    #[test]
    fn theta_multiplier_is_a_b2_root(p in valid_tuple()) {
        let mu = theta_multiplier(&p);
        prop_assert_eq!(mu.order(), p.b() * p.b());
        prop_assert!(mu.pow((p.b() * p.b()) as i64).unwrap().is_one());
    }
}

#[test]
fn aitken_recovers_synthetic_limit() {
    let d = 40;
    let l = BigComplex::parse("2.5", "0.75", d).unwrap();
    let alpha = BigComplex::parse("-1.25", "3", d).unwrap();
    let seq: Vec<BigComplex> = (4..=12)
        .map(|t| &l + &alpha.checked_div(&BigComplex::from_i64(1 << t, d)).unwrap())
        .collect();
    let ex = iterated_aitken(&seq, 2).unwrap();
    assert!(ex.value.dist_log10(&l) < -10.0);
}

#[test]
fn appell_split_parts_sum_to_full() {
    let digits = 80;
    let p = ForParams::new(1, 2, 1, 2).unwrap();
    let r = BigComplex::parse("0.9", "0", digits + 10).unwrap();
    let split = split_appell_numeric(&p, &r, digits).unwrap();
    assert_eq!(split.first.len(), 2);
    let sum = |v: &[BigComplex]| v.iter().fold(BigComplex::zero(digits + 10), |a, b| &a + b);
    // independent full evaluations
    let ctl = qlab::approx::SumControl::new(digits + 30);
    let z = qlab::catalog::cyclo_approx(&p.root().exact(), digits + 30);
    let q = z.mul(&qlab::approx::Approx::exact(r.with_digits(digits + 30)));
    let w = qlab::catalog::cyclo_approx(&p.w(), digits + 30);
    for (kind, parts) in [(qlab::catalog::AppellKind::First, &split.first), (qlab::catalog::AppellKind::Second, &split.second)] {
        let full = qlab::catalog::appell_bilateral(kind, &w, &q, &ctl).unwrap();
        assert!(sum(parts).dist_log10(&full.value) < -(digits as f64) / 2.0);
    }
}

#[test]
fn appell_split_collapsing_part_dominates() {
    let p = ForParams::new(1, 2, 1, 4).unwrap();
    let r = RadialPath::radius(8, 60);
    let split = split_appell_numeric(&p, &r, 40).unwrap();
    let c0 = split.collapsing_residue as usize;
    assert_eq!(c0, 2);
    for parts in [&split.first, &split.second] {
        let big = parts[c0].abs_f64();
        for (c, v) in parts.iter().enumerate() {
            if c != c0 {
                assert!(v.abs_f64() < big, "part {c} is {} vs {big}", v.abs_f64());
            }
        }
    }
    let r = BigComplex::parse("0.5", "0", 40).unwrap();
    let split = split_appell_numeric(&ForParams::new(1, 3, 5, 6).unwrap(), &r, 30).unwrap();
    assert!(split.first.iter().chain(&split.second).all(BigComplex::is_finite));
    assert!(split_appell_numeric(&p, &BigComplex::one(30), 30).is_err());
}

#[test]
fn for3_samples_match_for1_at_minus_one() {
    let digits = 60;
    let path = RadialPath::new(4, 7, digits).unwrap();
    let a = radial_diff_report(RadialMode::for1(1).unwrap(), &path).unwrap();
    let b = radial_diff_report(RadialMode::For3(ForParams::new(1, 2, 1, 2).unwrap()), &path).unwrap();
    assert_eq!(a.samples.len(), b.samples.len());
    for (x, y) in a.samples.iter().zip(&b.samples) {
        assert_eq!(x.t, y.t);
        assert!(x.value.dist_log10(&y.value) < -(digits as f64) / 2.0, "t = {}", x.t);
    }
}

#[test]
fn direct_route_k2_modest() {
    let r = radial_diff_report(RadialMode::for1(2).unwrap(), &RadialPath::new(4, 11, 60).unwrap()).unwrap();
    assert!(r.complete());
    assert_eq!(r.samples.len(), 8);
    assert_eq!(r.exact_target, Some(Cyclo::root(4, 1).scale_int(4)));
    assert!(r.within(1e-4), "agreement {:?}", r.agreement);
    // stopping at t = 10 leaves the two-level extrapolant just above 1e-4
    let r = radial_diff_report(RadialMode::for1(2).unwrap(), &RadialPath::new(4, 10, 60).unwrap()).unwrap();
    let a = r.agreement.unwrap();
    assert!(a > 0.9e-4 && a < 1.1e-4, "agreement {a}");
    assert!(r.error_estimate > a);
}

#[test]
fn quotient_small_runs() {
    let path = RadialPath::new(4, 8, 40).unwrap();
    for (p, target) in [
        ((1, 2, 1, 2), int(4, -1)),
        ((1, 3, 5, 6), Cyclo::root(3, 1).lift(9).unwrap()),
    ] {
        let p = ForParams::new(p.0, p.1, p.2, p.3).unwrap();
        let r = quotient_limit_check(&p, &path).unwrap();
        assert_eq!(r.exact_target, Some(target));
        assert!(r.within(1e-2));
    }
}

#[test]
fn decomposed_route_k1() {
    let r = decomposed_radial_check(1, &RadialPath::new(4, 10, 60).unwrap()).unwrap();
    assert!(r.prefactor_decreasing());
    assert!(r.final_prefactor_log10() < -3.0);
    assert!(r.tr_bounded());
    assert!(r.u_distance_decreasing());
    assert_eq!(r.u_target, int(2, -1));
    assert!(r.composed.within(1e-5));
}
