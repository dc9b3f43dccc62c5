use std::f64::consts::PI;

use parabolic_core::hormander::{
    check_class_m, dini_integral, embedding_order, norm_full_space, weight_r_gamma, AnisoGridFunction,
    ClassMConfig, DiniVerdict, FunctionParameter, SpaceTag, TimeSupport,
};
use parabolic_core::{Complex64, Error};
use proptest::prelude::*;

fn gaussian_grid() -> AnisoGridFunction {
    AnisoGridFunction::from_fn(1, vec![0.1, 0.1], vec![128, 128], vec![-6.4, -6.4], TimeSupport::Unknown, |c| {
        Complex64::new((-c[0] * c[0] - c[1] * c[1]).exp(), 0.0)
    })
    .unwrap()
}

fn tag(s: f64, gamma: f64, phi: &str) -> SpaceTag {
    SpaceTag::new(s, gamma, FunctionParameter::parse(phi).unwrap()).unwrap()
}

/// Trapezoidal quadrature of `|F w|^2 r^{2s}` for the Gaussian, whose
/// transform is `exp(-(xi^2 + eta^2)/4) / 2`, with `gamma = 1/2`.
fn gaussian_spectrum_oracle(s: f64) -> f64 {
    let (l, h) = (14.0, 0.01);
    let n = (2.0 * l / h) as i64;
    let mut acc = 0.0;
    for i in 0..=n {
        let xi = -l + i as f64 * h;
        let wi = if i == 0 || i == n { 0.5 } else { 1.0 };
        for j in 0..=n {
            let eta = -l + j as f64 * h;
            let wj = if j == 0 || j == n { 0.5 } else { 1.0 };
            let spectrum = 0.25 * (-(xi * xi + eta * eta) / 2.0).exp();
            acc += wi * wj * spectrum * (1.0 + xi * xi + eta.abs()).powf(s);
        }
    }
    (acc * h * h).sqrt()
}

#[test]
fn weight_examples() {
    assert_eq!(weight_r_gamma(&[0.0], 0.0, 0.7), 1.0);
    assert!((weight_r_gamma(&[1.0, 0.0], 0.0, 0.5) - 2f64.sqrt()).abs() < 1e-15);
    assert!((weight_r_gamma(&[0.0, 0.0], 4.0, 0.5) - 5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn class_m_examples() {
    let config = ClassMConfig::default();
    let log_power = check_class_m(&FunctionParameter::parse("(1 + ln(r))^0.6").unwrap(), &config).unwrap();
    assert!(log_power.consistent);
    assert_eq!(log_power.verdict_label(), "consistent with M (heuristic)");
    let power = check_class_m(&FunctionParameter::parse("r^0.1").unwrap(), &config).unwrap();
    assert!(!power.consistent);
    let doubling = power.probes.iter().find(|p| p.lambda == 2.0).unwrap();
    assert!((doubling.ratio_at_last - 1.0718).abs() < 1e-4);
    assert!(check_class_m(&FunctionParameter::one(), &config).unwrap().consistent);
}

#[test]
fn dini_examples() {
    let first = dini_integral(&FunctionParameter::parse("(1 + ln(r))^1").unwrap()).unwrap();
    assert_eq!(first.verdict, DiniVerdict::Converges);
    assert!((first.value.unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(dini_integral(&FunctionParameter::one()).unwrap().verdict, DiniVerdict::Diverges);
    let low = dini_integral(&FunctionParameter::parse("(1 + ln(r))^0.4").unwrap()).unwrap();
    assert_eq!(low.verdict, DiniVerdict::Diverges);
}

#[test]
fn gaussian_l2_norm() {
    let norm = norm_full_space(&gaussian_grid(), &tag(0.0, 0.5, "1")).unwrap();
    let exact = (PI / 2.0).sqrt();
    assert!((norm / exact - 1.0).abs() < 0.01, "{norm} vs {exact}");
}

#[test]
fn gaussian_weighted_norm_matches_spectral_quadrature() {
    let norm = norm_full_space(&gaussian_grid(), &tag(1.0, 0.5, "1")).unwrap();
    let oracle = gaussian_spectrum_oracle(1.0);
    assert!((norm / oracle - 1.0).abs() < 0.01, "{norm} vs {oracle}");
    // Closed form of the same integral: pi + sqrt(2 pi)/2.
    let closed = (PI + (2.0 * PI).sqrt() / 2.0).sqrt();
    assert!((oracle - closed).abs() < 1e-4, "{oracle} vs {closed}");
}

#[test]
fn norm_is_nondecreasing_in_s() {
    let grid = gaussian_grid();
    let norms: Vec<f64> = [0.0, 0.5, 1.0, 2.0]
        .iter()
        .map(|&s| norm_full_space(&grid, &tag(s, 0.5, "1")).unwrap())
        .collect();
    assert!(norms.windows(2).all(|w| w[1] >= w[0]), "{norms:?}");
}

#[test]
fn zero_function_has_zero_norm() {
    let zero = AnisoGridFunction::from_fn(1, vec![0.5, 0.5], vec![8, 8], vec![0.0, 0.0], TimeSupport::Unknown, |_| {
        Complex64::new(0.0, 0.0)
    })
    .unwrap();
    assert_eq!(norm_full_space(&zero, &tag(2.0, 0.5, "(1 + ln(r))^2")).unwrap(), 0.0);
}

#[test]
fn truncated_support_is_reported() {
    let narrow = AnisoGridFunction::from_fn(1, vec![0.1, 0.1], vec![40, 40], vec![-2.0, -2.0], TimeSupport::Unknown, |c| {
        Complex64::new((-c[0] * c[0] - c[1] * c[1]).exp(), 0.0)
    })
    .unwrap();
    match norm_full_space(&narrow, &tag(0.0, 0.5, "1")) {
        Err(Error::Truncation(msg)) => assert!(msg.contains("|w| =")),
        other => panic!("expected truncation error, got {other:?}"),
    }
}

#[test]
fn embedding_examples() {
    assert!(embedding_order(&tag(2.0, 0.5, "1"), &tag(1.0, 0.5, "(1 + ln(r))^3")).unwrap().embeds);
    let a = tag(1.5, 0.25, "(1 + ln(r))^0.6");
    assert!(embedding_order(&a, &a).unwrap().embeds);
    assert!(!embedding_order(&tag(1.0, 0.5, "1"), &tag(1.0, 0.5, "1 + ln(r)")).unwrap().embeds);
}

fn random_grid() -> impl Strategy<Value = AnisoGridFunction> {
    (0usize..3).prop_flat_map(|k| {
        let extents = prop::collection::vec(3usize..9, k + 1);
        let spacing = prop::collection::vec(0.05..2.0f64, k + 1);
        (Just(k), extents, spacing).prop_flat_map(|(k, extents, spacing)| {
            let count: usize = extents.iter().product();
            let values = prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), count);
            (Just(k), Just(extents), Just(spacing), values)
        })
    })
    .prop_map(|(k, extents, spacing, values)| {
        let probe = AnisoGridFunction::new(
            k,
            spacing.clone(),
            extents.clone(),
            vec![0.0; k + 1],
            TimeSupport::Unknown,
            values.iter().map(|&(a, b)| Complex64::new(a, b)).collect(),
        )
        .unwrap();
        // Zero the boundary so the edge-decay precondition holds.
        let samples = (0..values.len())
            .map(|i| {
                let on_edge = probe.index(i).iter().zip(&extents).any(|(&j, &n)| j == 0 || j + 1 == n);
                if on_edge {
                    Complex64::new(0.0, 0.0)
                } else {
                    probe.samples()[i]
                }
            })
            .collect();
        AnisoGridFunction::new(k, spacing, extents, vec![0.0; k + 1], TimeSupport::Unknown, samples).unwrap()
    })
}

fn tag_strategy() -> impl Strategy<Value = SpaceTag> {
    (0u8..3, prop::sample::select(vec![-1.0, 0.0, 0.5, 0.6, 1.0, 2.0])).prop_map(|(s, theta)| {
        SpaceTag::new(s as f64, 0.5, FunctionParameter::log_power(theta)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval_at_s_zero(grid in random_grid()) {
        let discrete: f64 = (grid.cell_volume() * grid.samples().iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
        let norm = norm_full_space(&grid, &tag(0.0, 0.5, "1")).unwrap();
        if discrete == 0.0 {
            prop_assert_eq!(norm, 0.0);
        } else {
            prop_assert!((norm / discrete - 1.0).abs() < 1e-9, "{} vs {}", norm, discrete);
        }
    }

    #[test]
    fn dini_verdict_is_scale_invariant(
        base in prop::sample::select(vec![
            "(1 + ln(r))^0.3", "(1 + ln(r))^0.8", "1 + ln(r)", "ln(e - 1 + r)", "ln(e - 1 + r)^0.5", "1",
        ]),
        c in prop::sample::select(vec![0.1, 10.0]),
    ) {
        let phi = FunctionParameter::parse(base).unwrap();
        let scaled = FunctionParameter::parse(&format!("{c}*({base})")).unwrap();
        let a = dini_integral(&phi).unwrap();
        let b = dini_integral(&scaled).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        if let (Some(va), Some(vb)) = (a.value, b.value) {
            prop_assert!((vb * c * c / va - 1.0).abs() < 1e-6, "{} vs {}", va, vb);
        }
    }

    #[test]
    fn embedding_is_transitive(a in tag_strategy(), b in tag_strategy(), c in tag_strategy()) {
        let ab = embedding_order(&a, &b).unwrap().embeds;
        let bc = embedding_order(&b, &c).unwrap().embeds;
        if ab && bc {
            prop_assert!(embedding_order(&a, &c).unwrap().embeds);
        }
    }
}
