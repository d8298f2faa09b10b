use qlab::catalog::{expand, SeriesId, SeriesTag};
use qlab::exactnum::{rat, rat_int, Cyclo, Rat};
use qlab::identities::{
    check_identity, check_identity_perturbed, find_qzeta_relation, partial_theta, run_suite, run_suite_with,
    IdentityTag, Perturbation, Status,
};
use qlab::series::Series;
use qlab::QlabError;

fn standard_ws() -> Vec<Cyclo> {
    vec![Cyclo::from_int(2, -1), Cyclo::root(3, 1), Cyclo::root(4, 1), Cyclo::root(6, 1)]
}

#[test]
fn full_suite_passes_at_order_200() {
    let reports = run_suite(200, &standard_ws()).unwrap();
    assert_eq!(reports.len(), 16);
    for r in &reports {
        assert_eq!(r.status, Status::Pass, "{r:?}");
        assert!(r.first_mismatch.is_none());
    }
    // parameter-free identities first, then RAMA1/RAMA2 per w
    assert_eq!(reports[0].identity, IdentityTag::CombinedMinus);
    assert_eq!(reports[8].identity, IdentityTag::Rama1);
    assert_eq!(reports[9].identity, IdentityTag::Rama2);
    assert_eq!(reports[9].w, Some(Cyclo::from_int(2, -1)));
}

#[test]
fn suite_at_order_one() {
    assert!(run_suite(1, &standard_ws()).unwrap().iter().all(|r| r.passed()));
}

#[test]
fn empty_w_list_is_rejected() {
    assert!(matches!(run_suite(10, &[]), Err(QlabError::InvalidParameter(_))));
}

#[test]
fn rama_at_every_primitive_root() {
    for b in [2u64, 3, 4, 6] {
        for a in 1..b as i64 {
            if num_integer::gcd(a, b as i64) != 1 {
                continue;
            }
            let w = Cyclo::root(b, a);
            for tag in [IdentityTag::Rama1, IdentityTag::Rama2] {
                let r = check_identity(tag, 120, Some(&w)).unwrap();
                assert!(r.passed(), "{tag} at w = {w}: {:?}", r.first_mismatch);
            }
        }
    }
    // also a root of order 5, beyond the cases the theorems need
    assert!(check_identity(IdentityTag::Rama1, 60, Some(&Cyclo::root(5, 2))).unwrap().passed());
}

#[test]
fn named_examples() {
    assert!(check_identity(IdentityTag::Rama1, 60, Some(&Cyclo::from_int(2, -1))).unwrap().passed());
    assert!(check_identity(IdentityTag::Tr2, 100, None).unwrap().passed());
    assert!(check_identity(IdentityTag::PartialTheta, 200, None).unwrap().passed());
    let pt = partial_theta(30);
    let support: Vec<usize> = (0..=30).filter(|&n| pt.coeffs()[n] != rat_int(0)).collect();
    assert_eq!(support, vec![0, 1, 3, 6, 10, 15, 21, 28]);
}

#[test]
fn injected_defect_is_reported() {
    let r = check_identity_perturbed(IdentityTag::Tr2, 100, None, Some(Perturbation { index: 0, delta: 1 })).unwrap();
    assert_eq!(r.status, Status::Fail);
    let m = r.first_mismatch.unwrap();
    assert_eq!((m.n, m.lhs.as_str(), m.rhs.as_str()), (0, "1/2", "3/2"));

    for tag in IdentityTag::ALL {
        let w = tag.takes_w().then(|| Cyclo::root(3, 1));
        for index in [0, 7, 40] {
            let r = check_identity_perturbed(tag, 40, w.as_ref(), Some(Perturbation { index, delta: -3 })).unwrap();
            assert_eq!(r.first_mismatch.map(|m| m.n), Some(index), "{tag}");
        }
    }
}

#[test]
fn suite_with_filter_and_defect() {
    let reports =
        run_suite_with(30, &standard_ws(), Some(IdentityTag::Rama2), Some(Perturbation { index: 5, delta: 1 }))
            .unwrap();
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| r.first_mismatch.as_ref().map(|m| m.n) == Some(5)));
}

#[test]
fn parameter_errors() {
    assert!(check_identity(IdentityTag::Rama1, 10, None).is_err());
    assert!(check_identity(IdentityTag::Tr1, 10, Some(&Cyclo::root(3, 1))).is_err());
    assert!(check_identity(IdentityTag::Rama2, 10, Some(&Cyclo::one(1))).is_err());
    assert!(check_identity(IdentityTag::Tr1, 0, None).is_err());
}

#[test]
fn monotone_in_the_order() {
    for n in [1, 2, 5, 17, 60] {
        for tag in IdentityTag::ALL.into_iter().filter(|t| !t.takes_w()) {
            assert!(check_identity(tag, n, None).unwrap().passed(), "{tag} at N = {n}");
        }
    }
}

fn eis(tag: SeriesTag, n: usize) -> Series<Rat> {
    expand(&SeriesId::plain(tag).unwrap(), n).unwrap().as_rational().unwrap()
}

fn one_plus(c: Rat, s: u32, n: usize) -> Series<Rat> {
    let z = expand(&SeriesId::qzeta(s).unwrap(), n).unwrap().as_rational().unwrap().scale(&c);
    &z + &Series::one(n, &())
}

#[test]
fn qzeta_relations_of_low_weight() {
    let n = 50;
    let (q, r) = (eis(SeriesTag::EisQ, n), eis(SeriesTag::EisR, n));

    let rel = find_qzeta_relation(8, 40).unwrap();
    assert!(rel.found && rel.unique());
    assert_eq!(rel.normalizing_constant, Some(rat_int(480)));
    assert_eq!(rel.monomials, vec![(2, 0, rat_int(1))]);
    assert_eq!(&q * &q, one_plus(rat_int(480), 8, n));

    let rel = find_qzeta_relation(10, 40).unwrap();
    assert!(rel.found && rel.unique());
    assert_eq!(rel.normalizing_constant, Some(rat_int(-264)));
    assert_eq!(rel.monomials, vec![(1, 1, rat_int(1))]);
    assert_eq!(&q * &r, one_plus(rat_int(-264), 10, n));

    let rel = find_qzeta_relation(14, 40).unwrap();
    assert!(rel.found && rel.unique());
    assert_eq!(rel.normalizing_constant, Some(rat_int(-24)));

    let rel = find_qzeta_relation(12, 40).unwrap();
    assert!(rel.found && rel.unique());
    assert_eq!(rel.normalizing_constant, Some(rat(65520, 691)));
    assert_eq!(rel.monomials, vec![(0, 2, rat(250, 691)), (3, 0, rat(441, 691))]);

    let rel = find_qzeta_relation(2, 40).unwrap();
    assert!(!rel.found);
    assert!(matches!(find_qzeta_relation(7, 40), Err(QlabError::Unsupported(_))));
    assert!(find_qzeta_relation(8, 3).is_err());
}

#[test]
fn qzeta_relations_reverify_at_order_400() {
    for s in [8, 10, 14] {
        let rel = find_qzeta_relation(s, 200).unwrap();
        assert!(rel.found && rel.unique(), "s = {s}");
        assert_eq!(rel.verified_order, 400);
    }
}
