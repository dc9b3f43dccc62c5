#![allow(dead_code)]

use parabolic_core::geometry::{generate, Domain, SamplingDensity};
use parabolic_core::problem::{Coefficient, ParabolicProblem, PdoTerm, ProblemDefinition};

pub fn term(alpha: &[u32], beta: u32, coeff: &str, n: usize) -> PdoTerm {
    PdoTerm::new(alpha.to_vec(), beta, Coefficient::parse(coeff, n).unwrap())
}

/// `d_t + sign * sum D_i^2` (so `sign = 1` is the heat operator).
pub fn heat_terms(n: usize, sign: &str) -> Vec<PdoTerm> {
    let mut terms = vec![term(&vec![0; n], 1, "1", n)];
    for i in 0..n {
        let mut a = vec![0; n];
        a[i] = 2;
        terms.push(term(&a, 0, sign, n));
    }
    terms
}

/// `d_t + (sum D_i^2)^2`.
pub fn quartic_terms(n: usize) -> Vec<PdoTerm> {
    let mut terms = vec![term(&vec![0; n], 1, "1", n)];
    for i in 0..n {
        for j in 0..n {
            let mut a = vec![0; n];
            a[i] += 2;
            a[j] += 2;
            terms.push(term(&a, 0, "1", n));
        }
    }
    terms
}

pub fn dirichlet(n: usize) -> Vec<PdoTerm> {
    vec![term(&vec![0; n], 0, "1", n)]
}

pub fn build(
    n: usize,
    b: u32,
    kappa: Vec<u32>,
    ell: Vec<i64>,
    a_terms: Vec<Vec<Vec<PdoTerm>>>,
    b_terms: Vec<Vec<Vec<PdoTerm>>>,
    domain: Domain,
) -> ParabolicProblem {
    let (interior, boundary) = generate(domain, n, 1.0, SamplingDensity::default()).unwrap();
    ParabolicProblem::new(ProblemDefinition {
        n,
        unknowns: kappa.len(),
        b,
        tau: 1.0,
        kappa,
        ell,
        a_terms,
        b_terms,
        interior,
        boundary,
    })
    .unwrap()
}

/// Two decoupled heat equations with Dirichlet rows.
pub fn heat_pair(n: usize) -> ParabolicProblem {
    heat_pair_on(n, Domain::UnitBall)
}

pub fn heat_pair_on(n: usize, domain: Domain) -> ParabolicProblem {
    build(
        n,
        1,
        vec![1, 1],
        vec![-2, -2],
        vec![
            vec![heat_terms(n, "1"), vec![]],
            vec![vec![], heat_terms(n, "1")],
        ],
        vec![vec![dirichlet(n), vec![]], vec![vec![], dirichlet(n)]],
        domain,
    )
}

pub fn scalar_heat(n: usize, boundary: Vec<PdoTerm>) -> ParabolicProblem {
    build(
        n,
        1,
        vec![1],
        vec![-2],
        vec![vec![heat_terms(n, "1")]],
        vec![vec![boundary]],
        Domain::UnitBall,
    )
}

pub fn backward_heat(n: usize) -> ParabolicProblem {
    build(
        n,
        1,
        vec![1],
        vec![-2],
        vec![vec![heat_terms(n, "-1")]],
        vec![vec![dirichlet(n)]],
        Domain::UnitBall,
    )
}

/// `d_t + Delta^2` on the half-space collar with `u` and `D_n u` on the
/// boundary.
pub fn quartic(n: usize) -> ParabolicProblem {
    let mut normal = vec![0; n];
    normal[n - 1] = 1;
    build(
        n,
        2,
        vec![1],
        vec![-4, -3],
        vec![vec![quartic_terms(n)]],
        vec![vec![dirichlet(n)], vec![vec![term(&normal, 0, "1", n)]]],
        Domain::HalfSpace,
    )
}
