mod common;

use common::*;
use num_complex::Complex64;
use parabolic_core::geometry::Domain;
use parabolic_core::parabolicity::{
    check_condition_i, check_condition_ii, check_condition_iii, check_parabolicity, compute_zeta_split,
    CheckConfig,
};
use parabolic_core::symbolic::{det_poly_matrix, RootSet};
use parabolic_core::Error;

fn has_root(set: &RootSet, z: Complex64, mult: usize, tol: f64) -> bool {
    set.roots.iter().any(|&(r, m)| m == mult && (r - z).norm() < tol)
}

#[test]
fn heat_pair_condition_i_delta_is_one() {
    let res = check_condition_i(&heat_pair(2), &CheckConfig::default()).unwrap();
    assert!(res.passed);
    assert!((res.delta_estimate - 1.0).abs() < 1e-6, "{}", res.delta_estimate);
}

#[test]
fn backward_heat_fails_with_positive_root() {
    let res = check_condition_i(&backward_heat(2), &CheckConfig::default()).unwrap();
    assert!(!res.passed);
    assert!((res.worst_witness.root.re - 1.0).abs() < 1e-9);
    let xi_norm: f64 = res.worst_witness.xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!((xi_norm - 1.0).abs() < 1e-12);
}

#[test]
fn quartic_condition_i() {
    let res = check_condition_i(&quartic(2), &CheckConfig::default()).unwrap();
    assert!(res.passed);
    assert!((res.delta_estimate - 1.0).abs() < 1e-9);
}

#[test]
fn normalization_checks() {
    assert!(check_condition_ii(&heat_pair(2)).unwrap().passed);

    let n = 2;
    let mut coupled = heat_terms(n, "1");
    coupled.truncate(1);
    coupled[0] = term(&[0, 0], 1, "0.1", n);
    let problem = build(
        n,
        1,
        vec![1, 1],
        vec![-2, -2],
        vec![vec![heat_terms(n, "1"), coupled], vec![vec![], heat_terms(n, "1")]],
        vec![vec![dirichlet(n), vec![]], vec![vec![], dirichlet(n)]],
        Domain::UnitBall,
    );
    let res = check_condition_ii(&problem).unwrap();
    assert!(!res.passed);
    assert_eq!(res.violations.len(), 1);
    assert_eq!((res.violations[0].row, res.violations[0].col), (1, 2));

    let mut scaled = heat_terms(n, "1");
    scaled[0] = term(&[0, 0], 1, "2", n);
    let problem = build(n, 1, vec![1], vec![-2], vec![vec![scaled]], vec![vec![dirichlet(n)]], Domain::UnitBall);
    let report = check_parabolicity(&problem, &CheckConfig::default(), None).unwrap();
    assert!(report.condition_i.passed);
    assert!(!report.condition_ii.passed);
    assert!(report.condition_iii.as_ref().unwrap().passed);
    assert!(!report.passed);
}

#[test]
fn zeta_split_examples() {
    let config = CheckConfig::default();
    let problem = heat_pair(2);
    let sample = &problem.boundary_samples()[0];
    let tangent = sample.tangents[0].clone();
    let i = Complex64::new(0.0, 1.0);

    let split = compute_zeta_split(&problem, sample, &tangent, Complex64::default(), &config).unwrap();
    assert!(has_root(&split.zeta_plus, i, 2, 1e-7));
    assert!(has_root(&split.zeta_minus, -i, 2, 1e-7));

    let split = compute_zeta_split(&problem, sample, &[0.0, 0.0], Complex64::new(1.0, 0.0), &config).unwrap();
    assert!(has_root(&split.zeta_plus, i, 2, 1e-7));

    let scalar = scalar_heat(2, dirichlet(2));
    let sample = &scalar.boundary_samples()[0];
    let split = compute_zeta_split(&scalar, sample, &sample.tangents[0], Complex64::new(-0.5, 0.0), &config).unwrap();
    assert!(has_root(&split.zeta_plus, i * 0.5f64.sqrt(), 1, 1e-12));
    assert_eq!(split.zeta_plus.total_multiplicity(), 1);
}

#[test]
fn zeta_split_rejects_bad_inputs() {
    let config = CheckConfig::default();
    let problem = scalar_heat(2, dirichlet(2));
    let sample = &problem.boundary_samples()[0];
    let err = compute_zeta_split(&problem, sample, &sample.normal, Complex64::default(), &config).unwrap_err();
    assert!(matches!(err, Error::Input(_)));
    let err = compute_zeta_split(&problem, sample, &[0.0, 0.0], Complex64::default(), &config).unwrap_err();
    assert!(matches!(err, Error::Input(_)));
    // p = -1 with |xi| = 1 puts a root on the real axis.
    let err = compute_zeta_split(&problem, sample, &sample.tangents[0], Complex64::new(-1.0, 0.0), &config)
        .unwrap_err();
    assert!(matches!(err, Error::Separation(_)), "{err:?}");
}

#[test]
fn covering_examples() {
    let config = CheckConfig::default();
    let res = check_condition_iii(&heat_pair(2), 0.5, &config).unwrap();
    assert!(res.passed);
    assert!(res.min_rank_margin > 1e-3);

    assert!(check_condition_iii(&scalar_heat(2, dirichlet(2)), 0.5, &config).unwrap().passed);

    let res = check_condition_iii(&scalar_heat(2, vec![]), 0.5, &config).unwrap();
    assert!(!res.passed);
    assert_eq!(res.worst_witness.rank, 0);

    assert!(check_condition_iii(&quartic(2), 0.5, &config).unwrap().passed);

    assert!(matches!(
        check_condition_iii(&heat_pair(2), 0.0, &config),
        Err(Error::Input(_))
    ));
}

#[test]
fn neumann_row_covers_heat() {
    // Normal derivative on the unit circle: nu = -x, D_nu = -x1 D_1 - x2 D_2.
    let n = 2;
    let row = vec![term(&[1, 0], 0, "-x1", n), term(&[0, 1], 0, "-x2", n)];
    let problem = build(n, 1, vec![1], vec![-1], vec![vec![heat_terms(n, "1")]], vec![vec![row]], Domain::UnitBall);
    assert!(check_parabolicity(&problem, &CheckConfig::default(), None).unwrap().passed);
}

#[test]
fn tangential_derivative_does_not_cover() {
    // D_tau u with tau tangent: the remainder is xi_tau, which vanishes at xi = 0.
    let n = 2;
    let problem = build(
        n,
        1,
        vec![1],
        vec![-1],
        vec![vec![heat_terms(n, "1")]],
        vec![vec![vec![term(&[1, 0], 0, "1", n)]]],
        Domain::HalfSpace,
    );
    let res = check_condition_iii(&problem, 0.5, &CheckConfig::default()).unwrap();
    assert!(!res.passed);
}

#[test]
fn full_pipeline_verdicts() {
    let config = CheckConfig::default();
    for domain in [Domain::UnitBall, Domain::HalfSpace, Domain::SmoothedSquare] {
        let report = check_parabolicity(&heat_pair_on(3, domain), &config, None).unwrap();
        assert!(report.passed, "{domain:?}");
    }
    let report = check_parabolicity(&backward_heat(2), &config, None).unwrap();
    assert!(!report.passed);
    assert!(report.condition_iii.is_none());
    assert!(matches!(
        check_parabolicity(&heat_pair(2), &config, Some(1.5)),
        Err(Error::Input(_))
    ));
}

#[test]
fn delta_is_scale_invariant() {
    // Roots at |xi| = 2 are 2^{2b} times those at |xi| = 1.
    let problem = heat_pair(2);
    let x = &problem.interior_samples()[0];
    let det = det_poly_matrix(&problem.principal_matrix_a(&x.x, x.t).unwrap()).unwrap();
    let config = CheckConfig::default();
    for dir in parabolic_core::geometry::unit_directions(2, 12) {
        let scaled: Vec<f64> = dir.iter().map(|v| 2.0 * v).collect();
        let r1 = parabolic_core::symbolic::poly_roots(&det.specialize_to_p(&dir, Complex64::default()).unwrap(), config.cluster_tol).unwrap();
        let r2 = parabolic_core::symbolic::poly_roots(&det.specialize_to_p(&scaled, Complex64::default()).unwrap(), config.cluster_tol).unwrap();
        let d1 = r1.roots.iter().map(|(z, _)| -z.re).fold(f64::INFINITY, f64::min);
        let d2 = r2.roots.iter().map(|(z, _)| -z.re / 4.0).fold(f64::INFINITY, f64::min);
        assert!((d1 - d2).abs() < 1e-8);
    }
}

#[test]
fn zeta_roots_scale_with_lambda() {
    let config = CheckConfig::default();
    let problem = scalar_heat(2, dirichlet(2));
    let sample = &problem.boundary_samples()[1];
    let xi: Vec<f64> = sample.tangents[0].iter().map(|v| 0.7 * v).collect();
    let p = Complex64::new(0.2, 0.3);
    let base = compute_zeta_split(&problem, sample, &xi, p, &config).unwrap();
    for lambda in [0.5, 2.0, 3.0] {
        let xs: Vec<f64> = xi.iter().map(|v| lambda * v).collect();
        let scaled = compute_zeta_split(&problem, sample, &xs, p * lambda * lambda, &config).unwrap();
        for (a, b) in base.zeta_plus.roots.iter().zip(&scaled.zeta_plus.roots) {
            assert!((a.0 * lambda - b.0).norm() < 1e-7);
        }
    }
}

#[test]
fn covering_invariant_under_row_scaling() {
    let config = CheckConfig::default();
    let n = 2;
    for c in ["2", "i", "-3"] {
        let rows = vec![
            vec![vec![term(&[0, 0], 0, c, n)], vec![]],
            vec![vec![], dirichlet(n)],
        ];
        let problem = build(
            n,
            1,
            vec![1, 1],
            vec![-2, -2],
            vec![vec![heat_terms(n, "1"), vec![]], vec![vec![], heat_terms(n, "1")]],
            rows,
            Domain::UnitBall,
        );
        assert!(check_condition_iii(&problem, 0.5, &config).unwrap().passed, "{c}");
    }
}

#[test]
fn real_coefficients_give_conjugate_symmetric_roots() {
    let config = CheckConfig::default();
    let problem = heat_pair(3);
    let sample = &problem.boundary_samples()[2];
    for p in [-0.1, -0.3] {
        let xi = sample.tangents[0].clone();
        let split = compute_zeta_split(&problem, sample, &xi, Complex64::new(p, 0.0), &config).unwrap();
        for (&(z, m), &(w, mw)) in split.zeta_plus.roots.iter().zip(split.zeta_minus.roots.iter()) {
            assert_eq!(m, mw);
            assert!((z.conj() - w).norm() < 1e-7);
        }
    }
}

