use proptest::prelude::*;
use psa_audit::linkage::{CourtCase, Race};
use psa_audit::stats::{
    bonferroni, race_consistency, rank_sum_variance, two_proportion_test, wilcoxon_rank_sum,
};

#[test]
fn two_proportion_closed_form() {
    // pooled p = 0.2, se = sqrt(0.2 * 0.8 * 0.02), z = 0.2 / se = 2.5 * sqrt(2),
    // two-sided p = erfc(2.5)
    let r = two_proportion_test(30, 100, 10, 100).unwrap();
    let z = 2.5 * std::f64::consts::SQRT_2;
    let erfc_2_5 = 4.069_520_174_449_59e-4;
    assert!((r.statistic - z).abs() < 1e-10, "{}", r.statistic);
    assert!((r.p_value - erfc_2_5).abs() < 1e-10, "{}", r.p_value);
}

#[test]
fn tie_correction_shrinks_variance() {
    let a = [1.0, 1.0, 2.0, 2.0, 2.0, 3.0];
    let b = [1.0, 2.0, 2.0, 3.0, 3.0, 4.0];
    let tied = wilcoxon_rank_sum(&a, &b).unwrap().variance;
    let untied = rank_sum_variance(6, 6, &[1; 12]);
    assert!(tied < untied);
    assert_eq!(untied, 6.0 * 6.0 * 13.0 / 12.0);
}

fn case(n: usize, sfid: &str, race: Race) -> CourtCase {
    CourtCase {
        court_number: format!("C{n}"),
        sfid: sfid.into(),
        name: String::new(),
        dob: None,
        arrest_date: chrono::NaiveDate::from_ymd_opt(2016, 1, 1).unwrap(),
        race,
        booking_charges: vec![],
        filed_charges: vec![],
    }
}

#[test]
fn consistency_two_person_fixture() {
    let cases = vec![
        case(1, "p1", Race::B),
        case(2, "p1", Race::B),
        case(3, "p1", Race::W),
        case(4, "p2", Race::B),
        case(5, "p2", Race::B),
    ];
    let m = race_consistency(&cases);
    assert!((m.get(Race::B, Race::B).unwrap() - 100.0 * (2.0 / 3.0 + 1.0) / 2.0).abs() < 1e-12);
    assert!((m.get(Race::B, Race::W).unwrap() - 100.0 * (1.0 / 3.0) / 2.0).abs() < 1e-12);
    assert!((m.get(Race::W, Race::B).unwrap() - 200.0 / 3.0).abs() < 1e-12);
    assert_eq!(m.individuals, 2);

    let mut more = cases.clone();
    more.push(case(6, "p3", Race::W));
    assert_eq!(race_consistency(&more), m);
}

#[test]
fn consistency_diagonal_on_stable_labels() {
    let mut cases = Vec::new();
    let mut n = 0;
    for person in 0..50 {
        for k in 0..50 {
            n += 1;
            let race = if k == 0 { Race::W } else { Race::B };
            cases.push(case(n, &format!("p{person}"), race));
        }
    }
    let m = race_consistency(&cases);
    assert!((m.get(Race::B, Race::B).unwrap() - 98.0).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn proportion_test_is_symmetric(n1 in 1u64..200, n2 in 1u64..200, f1 in 0.0..1.0f64, f2 in 0.0..1.0f64) {
        let x1 = (f1 * n1 as f64) as u64;
        let x2 = (f2 * n2 as f64) as u64;
        match (two_proportion_test(x1, n1, x2, n2), two_proportion_test(x2, n2, x1, n1)) {
            (Ok(a), Ok(b)) => {
                prop_assert!((a.statistic + b.statistic).abs() < 1e-12);
                prop_assert!((a.p_value - b.p_value).abs() < 1e-12);
                prop_assert!((0.0..=1.0).contains(&a.p_value));
            }
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            _ => prop_assert!(false, "asymmetric failure"),
        }
    }

    #[test]
    fn rank_sum_is_symmetric(
        a in proptest::collection::vec(1u8..=4, 1..30),
        b in proptest::collection::vec(1u8..=4, 1..30),
    ) {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        match (wilcoxon_rank_sum(&a, &b), wilcoxon_rank_sum(&b, &a)) {
            (Ok(x), Ok(y)) => {
                prop_assert!((x.z + y.z).abs() < 1e-9);
                prop_assert!((x.p_value - y.p_value).abs() < 1e-12);
            }
            (Err(x), Err(y)) => prop_assert_eq!(x, y),
            _ => prop_assert!(false, "asymmetric failure"),
        }
    }

    #[test]
    fn bonferroni_monotone_in_alpha(
        ps in proptest::collection::vec(0.0..1.0f64, 1..10),
        lo in 0.0001..0.5f64,
        extra in 0.0..0.49f64,
    ) {
        let small = bonferroni(&ps, lo).unwrap();
        let large = bonferroni(&ps, lo + extra).unwrap();
        for (s, l) in small.iter().zip(&large) {
            prop_assert!(!s || *l);
        }
    }
}
