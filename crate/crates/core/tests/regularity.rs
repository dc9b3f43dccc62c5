mod common;

use common::heat_pair;
use parabolic_core::hormander::FunctionParameter;
use parabolic_core::regularity::{
    check_hypotheses_for, check_theorem_hypotheses, classify_for, classify_solution, derivative_budget,
    derivative_budget_for, sigma_from_f64, sigma_thresholds, thresholds_for, Overall, ProblemOrders, RegionTag,
    RegularityClaim, Sigma, Target,
};
use parabolic_core::Error;
use proptest::prelude::*;

fn s(v: f64) -> Sigma {
    sigma_from_f64(v).unwrap()
}

fn phi(text: &str) -> FunctionParameter {
    FunctionParameter::parse(text).unwrap()
}

/// Claims exactly at the theorem's thresholds, with `phis` for the
/// interior, lateral and bottom groups.
fn threshold_claims(orders: &ProblemOrders, phis: [&FunctionParameter; 3]) -> Vec<RegularityClaim> {
    let th = thresholds_for(orders);
    let mut claims = Vec::new();
    for j in 0..orders.kappa.len() {
        claims.push(RegularityClaim::new(Target::F(j), RegionTag::Interior, th.sigma1, phis[0].clone()));
        claims.push(RegularityClaim::new(Target::F(j), RegionTag::LateralCollar, th.sigma2, phis[1].clone()));
        claims.push(RegularityClaim::new(Target::F(j), RegionTag::BottomCollar, th.sigma3, phis[2].clone()));
    }
    for (j, &l) in orders.ell.iter().enumerate() {
        let sigma = th.sigma2 - Sigma::from_integer(l) - Sigma::new(1, 2);
        claims.push(RegularityClaim::new(Target::G(j), RegionTag::LateralBoundary, sigma, phis[1].clone()));
    }
    claims
}

fn uniform(orders: &ProblemOrders, p: &FunctionParameter) -> Vec<RegularityClaim> {
    threshold_claims(orders, [p, p, p])
}

fn orders(n: usize, b: u32, kappa: Vec<u32>, ell: Vec<i64>) -> ProblemOrders {
    ProblemOrders { n, b, kappa, ell }
}

#[test]
fn threshold_examples() {
    let th = sigma_thresholds(&heat_pair(4));
    assert_eq!((th.sigma0, th.sigma1, th.sigma2, th.sigma3), (s(0.0), s(3.0), s(1.0), s(1.0)));
    assert!(th.sigma2_gt_sigma0 && th.sigma3_gt_sigma0);

    let th = sigma_thresholds(&heat_pair(2));
    assert_eq!((th.sigma2, th.sigma3), (s(0.0), s(0.0)));
    assert!(!th.sigma2_gt_sigma0 && !th.sigma3_gt_sigma0);

    let th = thresholds_for(&orders(2, 2, vec![1], vec![0, 0]));
    assert_eq!((th.sigma0, th.sigma1, th.sigma2, th.sigma3), (s(1.0), s(3.0), s(3.0), s(-1.0)));
    assert!(!th.sigma3_gt_sigma0);
}

#[test]
fn hypothesis_examples() {
    let log = phi("1 + ln(r)");
    let problem = heat_pair(4);
    let o = ProblemOrders::of(&problem);
    assert!(check_theorem_hypotheses(&problem, &uniform(&o, &log)).unwrap().passed);

    let report = check_theorem_hypotheses(&problem, &uniform(&o, &FunctionParameter::one())).unwrap();
    assert!(!report.passed);
    assert!(report.failures.iter().any(|f| f.contains("Dini integral diverges")), "{:?}", report.failures);

    let problem2 = heat_pair(2);
    let report = check_theorem_hypotheses(&problem2, &uniform(&ProblemOrders::of(&problem2), &log)).unwrap();
    assert!(!report.passed);
    assert!(report.failures.iter().any(|f| f.contains("σ₂ > σ₀ violated")));
}

#[test]
fn missing_and_malformed_claims() {
    let o = ProblemOrders::of(&heat_pair(4));
    let mut claims = uniform(&o, &phi("1 + ln(r)"));
    claims.pop();
    assert!(matches!(check_hypotheses_for(&o, &claims), Err(Error::Incomplete(m)) if m.contains("g2 on lateral_boundary")));

    let mut claims = uniform(&o, &phi("1 + ln(r)"));
    claims[0].region = RegionTag::LateralBoundary;
    assert!(matches!(classify_for(&o, &claims), Err(Error::Input(_))));

    let mut claims = uniform(&o, &phi("1 + ln(r)"));
    claims.push(claims[0].clone());
    assert!(matches!(classify_for(&o, &claims), Err(Error::Input(m)) if m.contains("duplicate")));
}

#[test]
fn budget_examples() {
    let problem = heat_pair(4);
    let o = ProblemOrders::of(&problem);
    let claims = uniform(&o, &phi("1 + ln(r)"));
    assert_eq!(derivative_budget(&problem, 0, RegionTag::Interior, &claims).unwrap(), Some(2));
    assert_eq!(derivative_budget(&problem, 0, RegionTag::LateralCollar, &claims).unwrap(), Some(0));
    assert_eq!(derivative_budget(&problem, 1, RegionTag::BottomCollar, &claims).unwrap(), Some(0));
    assert!(derivative_budget(&problem, 0, RegionTag::LateralBoundary, &claims).is_err());
}

#[test]
fn classification_examples() {
    let problem = heat_pair(4);
    let o = ProblemOrders::of(&problem);
    let log = phi("1 + ln(r)");
    let verdict = classify_solution(&problem, &uniform(&o, &log)).unwrap();
    assert_eq!(verdict.overall, Overall::GuaranteedClassical);
    assert_eq!(verdict.details.len(), 6);

    let mut lowered = uniform(&o, &log);
    for c in lowered.iter_mut().filter(|c| c.region == RegionTag::Interior) {
        c.sigma = s(2.5);
    }
    let verdict = classify_solution(&problem, &lowered).unwrap();
    assert_eq!(verdict.overall, Overall::NotGuaranteed);
    for k in 0..2 {
        let a = verdict.details.iter().find(|d| d.component == k && d.condition == 'a').unwrap();
        assert!(!a.passed);
        assert_eq!(a.budget, Some(1));
        assert_eq!(a.required, 2);
    }
    assert!(verdict.failed.iter().any(|f| f.contains("condition (a)") && f.contains("p_max = 1 < 2")));

    let mut high = uniform(&o, &FunctionParameter::one());
    for c in high.iter_mut() {
        c.sigma += Sigma::from_integer(10);
    }
    assert_eq!(classify_solution(&problem, &high).unwrap().overall, Overall::GuaranteedClassical);
}

#[test]
fn non_class_m_parameters_never_dominate() {
    let o = ProblemOrders::of(&heat_pair(4));
    let mut claims = uniform(&o, &phi("r^0.1"));
    for c in claims.iter_mut() {
        c.sigma += Sigma::from_integer(1);
    }
    let verdict = classify_for(&o, &claims).unwrap();
    assert_eq!(verdict.overall, Overall::NotGuaranteed);
    assert!(verdict.failed[0].contains("class-M"));
}

#[test]
fn equality_claims_share_the_weakest_parameter() {
    let o = ProblemOrders::of(&heat_pair(4));
    let strong = phi("(1 + ln(r))^2");
    let weak = phi("(1 + ln(r))^0.75");
    let mut claims = uniform(&o, &strong);
    claims[0].phi = weak.clone();
    let report = check_hypotheses_for(&o, &claims).unwrap();
    assert!(report.passed, "{:?}", report.failures);
    assert_eq!(report.phi_choices[0], Some(parabolic_core::regularity::PhiChoice::Claimed(weak)));
}

fn orders_strategy() -> impl Strategy<Value = ProblemOrders> {
    (1u32..4, 1usize..7, prop::collection::vec(1u32..4, 1..3)).prop_flat_map(|(b, n, kappa)| {
        let m = (b * kappa.iter().sum::<u32>()) as usize;
        let kmax = *kappa.iter().max().unwrap() as i64;
        let lo = -2 * b as i64 * kmax;
        (Just(b), Just(n), Just(kappa), prop::collection::vec(lo..4i64, m))
    })
    .prop_map(|(b, n, kappa, ell)| ProblemOrders { n, b, kappa, ell })
}

fn phi_strategy() -> impl Strategy<Value = FunctionParameter> {
    prop::sample::select(vec![0.3, 0.6, 1.0, 2.0]).prop_map(FunctionParameter::log_power)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn threshold_identities(o in orders_strategy()) {
        let th = thresholds_for(&o);
        prop_assert_eq!(th.sigma2, th.sigma1 + Sigma::from_integer(th.l0));
        prop_assert_eq!(th.sigma1 - th.sigma3, Sigma::from_integer(2 * o.b as i64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn threshold_claims_are_consistent(o in orders_strategy(), p in phi_strategy()) {
        let claims = uniform(&o, &p);
        let hyp = check_hypotheses_for(&o, &claims).unwrap();
        let verdict = classify_for(&o, &claims).unwrap();
        prop_assert_eq!(hyp.passed, verdict.overall == Overall::GuaranteedClassical, "{:?} {:?}", hyp.failures, verdict.failed);
    }

    #[test]
    fn raising_a_claim_never_hurts(
        o in orders_strategy(),
        phis in prop::collection::vec(phi_strategy(), 3),
        shifts in prop::collection::vec(-2i64..3, 64),
        pick in 0usize..64,
        raise in 1i64..4,
    ) {
        let mut claims = threshold_claims(&o, [&phis[0], &phis[1], &phis[2]]);
        for (c, &d) in claims.iter_mut().zip(&shifts) {
            c.sigma += Sigma::new(d, 2);
        }
        let before = classify_for(&o, &claims).unwrap().overall;
        let i = pick % claims.len();
        claims[i].sigma += Sigma::new(raise, 2);
        let after = classify_for(&o, &claims).unwrap().overall;
        prop_assert!(!(before == Overall::GuaranteedClassical && after == Overall::NotGuaranteed));
    }

    #[test]
    fn budget_shifts_with_kappa(
        o in orders_strategy(),
        p in phi_strategy(),
        k in 0usize..2,
        region in prop::sample::select(vec![RegionTag::Interior, RegionTag::LateralCollar, RegionTag::BottomCollar]),
    ) {
        let k = k % o.kappa.len();
        let claims = uniform(&o, &p);
        let mut bigger = o.clone();
        bigger.kappa[k] += 1;
        // Keep m = b * sum(kappa) consistent by repeating the last order.
        for _ in 0..o.b {
            bigger.ell.push(*o.ell.last().unwrap());
        }
        let mut claims_big = claims.clone();
        let th = thresholds_for(&bigger);
        for j in o.ell.len()..bigger.ell.len() {
            let sigma = th.sigma2 - Sigma::from_integer(bigger.ell[j]) - Sigma::new(1, 2);
            claims_big.push(RegularityClaim::new(Target::G(j), RegionTag::LateralBoundary, sigma, p.clone()));
        }
        let small = derivative_budget_for(&o, k, region, &claims).unwrap();
        let large = derivative_budget_for(&bigger, k, region, &claims_big).unwrap();
        // With the claims fixed, the margin over the order 2b kappa_k that
        // condition (a) consumes never grows with kappa_k.
        let two_b = 2 * o.b as i64;
        let kk = o.kappa[k] as i64;
        if let (Some(a), Some(c)) = (small, large) {
            prop_assert!(c as i64 - two_b * (kk + 1) <= a as i64 - two_b * kk);
        }
        if small.is_some() {
            prop_assert!(large.is_some());
        }
    }
}
