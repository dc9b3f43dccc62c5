//! Sampled checks of the three parabolicity conditions: root condition on
//! `det A^(0)` in `p`, the normalization of pure time derivatives, and the
//! covering condition for the boundary operators.
//!
//! Every verdict here is evidence gathered at finitely many sample points,
//! never a proof over the continuum.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{dot, norm, unit_directions, BoundarySample};
use crate::problem::ParabolicProblem;
use crate::symbolic::{
    adjugate_poly_matrix, det_poly_matrix, numeric_rank, poly_mod, poly_roots, singular_values,
    PolyMatrix, PolySymbol, RootSet, DEFAULT_CLUSTER_TOL,
};

const NORMALIZATION_TOL: f64 = 1e-10;
const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Sampling densities and tolerances shared by the three checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckConfig {
    /// Unit `xi` directions per interior sample for condition (i).
    pub xi_directions: usize,
    /// Unit tangent directions per boundary sample for condition (iii).
    pub tangent_directions: usize,
    /// Points on the admissible arc of the anisotropic sphere per tangent
    /// direction, the `p = 0` point included.
    pub arc_points: usize,
    /// Points `xi = 0`, `|p| = 1`, `Re p >= 0` per boundary sample.
    pub pure_p_points: usize,
    pub delta_floor: f64,
    pub im_floor: f64,
    pub rank_tol: f64,
    pub cluster_tol: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            xi_directions: 24,
            tangent_directions: 4,
            arc_points: 16,
            pure_p_points: 5,
            delta_floor: 1e-9,
            im_floor: 1e-7,
            rank_tol: 1e-8,
            cluster_tol: DEFAULT_CLUSTER_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootWitness {
    pub x: Vec<f64>,
    pub t: f64,
    pub xi: Vec<f64>,
    pub root: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition1Result {
    pub passed: bool,
    /// Largest `delta` with `Re p <= -delta |xi|^{2b}` over all samples.
    pub delta_estimate: f64,
    pub delta_floor: f64,
    pub worst_witness: RootWitness,
    pub samples_checked: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationViolation {
    /// 1-based row and column of the offending entry.
    pub row: usize,
    pub col: usize,
    pub x: Vec<f64>,
    pub t: f64,
    pub value: Complex64,
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition2Result {
    pub passed: bool,
    pub tolerance: f64,
    /// First offending sample for each entry, in row-major order.
    pub violations: Vec<NormalizationViolation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringWitness {
    pub x: Vec<f64>,
    pub t: f64,
    pub xi: Vec<f64>,
    pub p: Complex64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringResult {
    pub passed: bool,
    pub delta1: f64,
    pub samples_checked: usize,
    /// Smallest ratio of the m-th to the largest singular value.
    pub min_rank_margin: f64,
    pub worst_witness: CoveringWitness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaSplit {
    pub zeta_plus: RootSet,
    pub zeta_minus: RootSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicityReport {
    pub condition_i: Condition1Result,
    pub condition_ii: Condition2Result,
    /// `None` when condition (i) failed and the covering check was skipped.
    pub condition_iii: Option<CoveringResult>,
    pub passed: bool,
}

/// Roots in `p` of `det A^(0)(x, t, xi, p)` over unit `xi`; homogeneity
/// `p(x, t, lambda xi) = lambda^{2b} p(x, t, xi)` makes the unit sphere
/// sufficient.
pub fn check_condition_i(problem: &ParabolicProblem, config: &CheckConfig) -> Result<Condition1Result> {
    let directions = unit_directions(problem.n(), config.xi_directions.max(1));
    let expected_degree: usize = problem.kappa().iter().map(|&k| k as usize).sum();
    let mut delta = f64::INFINITY;
    let mut worst = None;
    let mut checked = 0;
    for sample in problem.interior_samples() {
        let det = det_poly_matrix(&problem.principal_matrix_a(&sample.x, sample.t)?)?;
        for xi in &directions {
            let q = det.specialize_to_p(xi, Complex64::default())?;
            if q.degree() != Some(expected_degree) {
                return Err(Error::degenerate(format!(
                    "det A^(0) has degree {:?} in p at x = {:?}, t = {}, xi = {:?} (expected {expected_degree})",
                    q.degree(),
                    sample.x,
                    sample.t,
                    xi
                )));
            }
            let roots = poly_roots(&q, config.cluster_tol).map_err(|e| {
                Error::degenerate(format!(
                    "degree collapse at x = {:?}, t = {}, xi = {:?}: {e}",
                    sample.x, sample.t, xi
                ))
            })?;
            checked += 1;
            for &(root, _) in &roots.roots {
                let local = -root.re;
                if local < delta {
                    delta = local;
                    worst = Some(RootWitness {
                        x: sample.x.clone(),
                        t: sample.t,
                        xi: xi.clone(),
                        root,
                    });
                }
            }
        }
    }
    let worst_witness = worst.ok_or_else(|| Error::input("no samples for condition (i)"))?;
    Ok(Condition1Result {
        passed: delta > config.delta_floor,
        delta_estimate: delta,
        delta_floor: config.delta_floor,
        worst_witness,
        samples_checked: checked,
    })
}

/// The coefficient of `d_t^{kappa_k}` in `A_{j,k}` must be the Kronecker
/// delta at every interior sample.
pub fn check_condition_ii(problem: &ParabolicProblem) -> Result<Condition2Result> {
    let nn = problem.unknowns();
    let mut violations = Vec::new();
    for j in 0..nn {
        for k in 0..nn {
            let expected = if j == k { 1.0 } else { 0.0 };
            for sample in problem.interior_samples() {
                let value = problem.pure_time_coefficient(j, k, &sample.x, sample.t)?;
                if (value - Complex64::new(expected, 0.0)).norm() > NORMALIZATION_TOL {
                    violations.push(NormalizationViolation {
                        row: j + 1,
                        col: k + 1,
                        x: sample.x.clone(),
                        t: sample.t,
                        value,
                        expected,
                    });
                    break;
                }
            }
        }
    }
    Ok(Condition2Result {
        passed: violations.is_empty(),
        tolerance: NORMALIZATION_TOL,
        violations,
    })
}

/// Symbols needed at one boundary point: `det A^(0)` and
/// `B^(0) * adj(A^(0))`.
#[derive(Debug, Clone)]
struct BoundarySymbols {
    det: PolySymbol,
    rows: PolyMatrix,
    m: usize,
}

impl BoundarySymbols {
    fn new(problem: &ParabolicProblem, sample: &BoundarySample) -> Result<Self> {
        let a = problem.principal_matrix_a(&sample.x, sample.t)?;
        let det = det_poly_matrix(&a)?;
        let adj = adjugate_poly_matrix(&a)?;
        let rows = problem.principal_matrix_b(&sample.x, sample.t)?.mul(&adj)?;
        Ok(BoundarySymbols {
            det,
            rows,
            m: problem.boundary_rows(),
        })
    }

    fn split(&self, normal: &[f64], xi: &[f64], p: Complex64, config: &CheckConfig) -> Result<ZetaSplit> {
        let q = self.det.specialize_to_zeta(xi, normal, p)?;
        let expected = 2 * self.m;
        if q.degree() != Some(expected) {
            return Err(Error::degenerate(format!(
                "det A^(0)(xi + zeta nu, p) has degree {:?} in zeta, expected 2m = {expected}",
                q.degree()
            )));
        }
        let roots = poly_roots(&q, config.cluster_tol)?;
        if let Some(&(z, _)) = roots.roots.iter().find(|(z, _)| z.im.abs() < config.im_floor) {
            return Err(Error::Separation(format!(
                "root zeta = {z} lies within {:e} of the real axis",
                config.im_floor
            )));
        }
        let (plus, minus): (Vec<_>, Vec<_>) = roots.roots.iter().partition(|(z, _)| z.im > 0.0);
        let zeta_plus = RootSet {
            roots: plus,
            residual: roots.residual,
        };
        let zeta_minus = RootSet {
            roots: minus,
            residual: roots.residual,
        };
        if zeta_plus.total_multiplicity() != self.m || zeta_minus.total_multiplicity() != self.m {
            return Err(Error::Separation(format!(
                "expected {m} roots in each half-plane, found {} with Im > 0 and {} with Im < 0",
                zeta_plus.total_multiplicity(),
                zeta_minus.total_multiplicity(),
                m = self.m
            )));
        }
        Ok(ZetaSplit {
            zeta_plus,
            zeta_minus,
        })
    }

    /// Rank and singular-value margin of the reduced boundary rows.
    fn covering_rank(&self, normal: &[f64], xi: &[f64], p: Complex64, config: &CheckConfig) -> Result<(usize, f64)> {
        let split = self.split(normal, xi, p, config)?;
        let modulus = split.zeta_plus.monic_polynomial();
        let m = self.m;
        let cols = self.rows.cols();
        let mut matrix = Vec::with_capacity(m);
        for j in 0..m {
            let mut row = Vec::with_capacity(m * cols);
            for k in 0..cols {
                let entry = self.rows.get(j, k).specialize_to_zeta(xi, normal, p)?;
                let rem = poly_mod(&entry, &modulus)?;
                let coeffs = rem.coefficients();
                row.extend((0..m).map(|d| coeffs.get(d).copied().unwrap_or_default()));
            }
            matrix.push(row);
        }
        let rank = numeric_rank(&matrix, config.rank_tol);
        let sv = singular_values(&matrix);
        let margin = match (sv.first(), sv.get(m - 1)) {
            (Some(&largest), Some(&mth)) if largest > 0.0 => mth / largest,
            _ => 0.0,
        };
        Ok((rank, margin))
    }
}

/// Roots of `det A^(0)(x, t, xi + zeta nu, p)` in `zeta`, split by the sign
/// of their imaginary part.
pub fn compute_zeta_split(
    problem: &ParabolicProblem,
    sample: &BoundarySample,
    xi_tangent: &[f64],
    p_value: Complex64,
    config: &CheckConfig,
) -> Result<ZetaSplit> {
    check_tangent(sample, xi_tangent)?;
    if norm(xi_tangent) + p_value.norm() == 0.0 {
        return Err(Error::input("xi and p must not both vanish"));
    }
    BoundarySymbols::new(problem, sample)?.split(&sample.normal, xi_tangent, p_value, config)
}

fn check_tangent(sample: &BoundarySample, xi: &[f64]) -> Result<()> {
    if xi.len() != sample.normal.len() {
        return Err(Error::input("tangent vector has the wrong dimension"));
    }
    let d = dot(xi, &sample.normal);
    if d.abs() > ORTHOGONALITY_TOL * norm(xi).max(1.0) {
        return Err(Error::input(format!(
            "xi = {xi:?} is not tangent at x = {:?} (xi . nu = {d:e})",
            sample.x
        )));
    }
    Ok(())
}

/// `(|xi|, p)` points on `|xi|^{2b} + |p| = 1` with
/// `Re p >= -delta1 |xi|^{2b}`, for a fixed unit tangent direction.
fn arc_points(b: u32, delta1: f64, count: usize) -> Vec<(f64, Complex64)> {
    let mut out = vec![(1.0, Complex64::default())];
    if count <= 1 {
        return out;
    }
    let per_level = ((count - 1) / 3).max(1);
    for rho in [0.85, 0.6, 0.35f64] {
        let xi_weight = rho.powi(2 * b as i32);
        let modulus = 1.0 - xi_weight;
        let bound = (-delta1 * xi_weight / modulus).max(-1.0);
        let theta_max = bound.acos();
        let full_circle = bound <= -1.0;
        for i in 0..per_level {
            let theta = if per_level == 1 {
                0.0
            } else if full_circle {
                -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / per_level as f64
            } else {
                -theta_max + 2.0 * theta_max * i as f64 / (per_level - 1) as f64
            };
            out.push((rho, Complex64::from_polar(modulus, theta)));
        }
    }
    out
}

fn pure_p_points(count: usize) -> Vec<Complex64> {
    let half = std::f64::consts::FRAC_PI_2;
    (0..count)
        .map(|i| {
            let theta = if count == 1 {
                0.0
            } else {
                -half + 2.0 * half * i as f64 / (count - 1) as f64
            };
            Complex64::from_polar(1.0, theta)
        })
        .collect()
}

fn tangent_directions(sample: &BoundarySample, count: usize) -> Vec<Vec<f64>> {
    let dim = sample.tangents.len();
    let count = if dim == 1 { count.min(2) } else { count };
    unit_directions(dim, count.max(1))
        .into_iter()
        .map(|c| {
            let mut v = vec![0.0; sample.normal.len()];
            for (coef, tv) in c.iter().zip(&sample.tangents) {
                for (vi, ti) in v.iter_mut().zip(tv) {
                    *vi += coef * ti;
                }
            }
            v
        })
        .collect()
}

/// Covering condition: rows of `B^(0) adj(A^(0))`, reduced modulo
/// `prod (zeta - zeta_j^+)`, must have rank `m` at every sampled
/// `(x, t, xi, p)`.
pub fn check_condition_iii(problem: &ParabolicProblem, delta1: f64, config: &CheckConfig) -> Result<CoveringResult> {
    if !(delta1 > 0.0 && delta1.is_finite()) {
        return Err(Error::input(format!("delta1 must be positive, got {delta1}")));
    }
    let m = problem.boundary_rows();
    let arc = arc_points(problem.b(), delta1, config.arc_points);
    let pure = pure_p_points(config.pure_p_points);
    let mut checked = 0;
    let mut min_margin = f64::INFINITY;
    let mut worst: Option<CoveringWitness> = None;
    let mut all_full_rank = true;
    for sample in problem.boundary_samples() {
        let symbols = BoundarySymbols::new(problem, sample)?;
        let zero = vec![0.0; problem.n()];
        let mut points: Vec<(Vec<f64>, Complex64)> = pure.iter().map(|&p| (zero.clone(), p)).collect();
        for dir in tangent_directions(sample, config.tangent_directions) {
            for &(rho, p) in &arc {
                points.push((dir.iter().map(|v| rho * v).collect(), p));
            }
        }
        for (xi, p) in points {
            let (rank, margin) = symbols
                .covering_rank(&sample.normal, &xi, p, config)
                .map_err(|e| match e {
                    Error::Separation(msg) => Error::Separation(format!(
                        "{msg} at x = {:?}, t = {}, xi = {xi:?}, p = {p}",
                        sample.x, sample.t
                    )),
                    Error::Degenerate(msg) => Error::Degenerate(format!(
                        "{msg} at x = {:?}, t = {}, xi = {xi:?}, p = {p}",
                        sample.x, sample.t
                    )),
                    other => other,
                })?;
            checked += 1;
            if rank < m {
                all_full_rank = false;
            }
            let worse = match &worst {
                None => true,
                Some(w) => (rank < w.rank) || (rank == w.rank && margin < min_margin),
            };
            if worse {
                min_margin = margin;
                worst = Some(CoveringWitness {
                    x: sample.x.clone(),
                    t: sample.t,
                    xi,
                    p,
                    rank,
                });
            }
        }
    }
    let worst_witness = worst.ok_or_else(|| Error::input("no boundary samples for condition (iii)"))?;
    Ok(CoveringResult {
        passed: all_full_rank,
        delta1,
        samples_checked: checked,
        min_rank_margin: min_margin,
        worst_witness,
    })
}

/// Runs (i), (ii) and, when (i) passes, (iii) with `delta1` defaulting to
/// half the estimated `delta`.
pub fn check_parabolicity(
    problem: &ParabolicProblem,
    config: &CheckConfig,
    delta1: Option<f64>,
) -> Result<ParabolicityReport> {
    let condition_i = check_condition_i(problem, config)?;
    let condition_ii = check_condition_ii(problem)?;
    let condition_iii = if condition_i.passed {
        let delta = condition_i.delta_estimate;
        let d1 = delta1.unwrap_or(delta / 2.0);
        if !(d1 > 0.0 && d1 < delta) {
            return Err(Error::input(format!(
                "delta1 = {d1} must lie in (0, delta_estimate = {delta})"
            )));
        }
        Some(check_condition_iii(problem, d1, config)?)
    } else {
        None
    };
    let passed = condition_i.passed
        && condition_ii.passed
        && condition_iii.as_ref().is_some_and(|c| c.passed);
    Ok(ParabolicityReport {
        condition_i,
        condition_ii,
        condition_iii,
        passed,
    })
}
