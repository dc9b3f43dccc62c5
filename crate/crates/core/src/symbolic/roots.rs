use num_complex::Complex64;

use super::univariate::UniPoly;
use crate::error::{Error, Result};

/// Roots closer than this are merged into one root of higher multiplicity.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

const MAX_ITERATIONS: usize = 500;

/// Complex roots with multiplicities, plus the coefficientwise error of
/// the monic polynomial rebuilt from them.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<(Complex64, usize)>,
    pub residual: f64,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    /// Every root repeated according to its multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|&(z, m)| std::iter::repeat_n(z, m))
            .collect()
    }

    pub fn monic_polynomial(&self) -> UniPoly {
        UniPoly::from_roots(self.expanded().iter())
    }

    pub(crate) fn from_parts(roots: Vec<(Complex64, usize)>, residual: f64) -> Self {
        RootSet { roots, residual }
    }
}

/// All complex roots of `q` by Aberth-Ehrlich simultaneous iteration on the
/// monic normalization.
///
/// A leading coefficient at or below `tol` relative to the largest
/// coefficient is treated as a degree collapse. Converged roots within `tol`
/// of each other are clustered.
pub fn poly_roots(q: &UniPoly, tol: f64) -> Result<RootSet> {
    let degree = match q.degree() {
        None => return Err(Error::degenerate("zero polynomial has no roots")),
        Some(0) => return Err(Error::degenerate("constant polynomial has no roots")),
        Some(d) => d,
    };
    let scale = q.max_coefficient_magnitude();
    if q.leading().norm() <= tol * scale {
        return Err(Error::degenerate(format!(
            "leading coefficient {:.3e} vanishes relative to coefficient scale {:.3e}",
            q.leading().norm(),
            scale
        )));
    }
    let monic = q.monic()?;
    let raw = aberth(&monic, degree);
    let roots = polish(&monic, cluster(raw, tol), tol);
    let set = RootSet::from_parts(roots, 0.0);
    let rebuilt = set.monic_polynomial();
    let residual = monic
        .coefficients()
        .iter()
        .zip(rebuilt.coefficients())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(RootSet::from_parts(set.roots, residual))
}

fn aberth(monic: &UniPoly, degree: usize) -> Vec<Complex64> {
    let coeffs = monic.coefficients();
    if degree == 1 {
        return vec![-coeffs[0]];
    }
    let deriv = monic.derivative();

    // Initial guesses on a circle whose radius bounds the root moduli
    // (Fujiwara), shifted by the root centroid.
    let centroid = -coeffs[degree - 1] / degree as f64;
    let radius = (0..degree)
        .map(|i| {
            let k = degree - i;
            let c = coeffs[i].norm();
            if i == 0 {
                (c / 2.0).powf(1.0 / k as f64)
            } else {
                c.powf(1.0 / k as f64)
            }
        })
        .fold(0.0, f64::max)
        * 2.0;
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.4;
            centroid + Complex64::from_polar(radius, angle)
        })
        .collect();

    for _ in 0..MAX_ITERATIONS {
        let mut max_step: f64 = 0.0;
        for k in 0..degree {
            let zk = z[k];
            let value = monic.eval(zk);
            if value == Complex64::default() {
                continue;
            }
            let ratio = value / deriv.eval(zk);
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = zk - z[j];
                    if d == Complex64::default() {
                        Complex64::new(1e300, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] = zk - step;
                max_step = max_step.max(step.norm() / zk.norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// A root of multiplicity `k` is a simple root of the `(k-1)`-th
/// derivative, where Newton converges quadratically. Steps that leave the
/// cluster radius are rejected.
fn polish(monic: &UniPoly, roots: Vec<(Complex64, usize)>, tol: f64) -> Vec<(Complex64, usize)> {
    roots
        .into_iter()
        .map(|(z0, mult)| {
            if mult == 1 {
                return (z0, mult);
            }
            let mut d = monic.clone();
            for _ in 1..mult {
                d = d.derivative();
            }
            let dd = d.derivative();
            let mut z = z0;
            for _ in 0..8 {
                let slope = dd.eval(z);
                if slope == Complex64::default() {
                    break;
                }
                let step = d.eval(z) / slope;
                if !step.is_finite() {
                    break;
                }
                z -= step;
                if step.norm() <= 1e-16 * z.norm().max(1.0) {
                    break;
                }
            }
            if (z - z0).norm() <= tol {
                (z, mult)
            } else {
                (z0, mult)
            }
        })
        .collect()
}

/// Single-linkage clustering in input order; cluster value is the mean.
fn cluster(raw: Vec<Complex64>, tol: f64) -> Vec<(Complex64, usize)> {
    let n = raw.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (raw[i] - raw[j]).norm() <= tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for (i, z) in raw.iter().enumerate() {
        let root = find(&mut label, i);
        match groups.iter_mut().find(|g| g.0 == root) {
            Some(g) => {
                g.1 += z;
                g.2 += 1;
            }
            None => groups.push((root, *z, 1)),
        }
    }
    let mut out: Vec<(Complex64, usize)> = groups
        .into_iter()
        .map(|(_, sum, m)| (sum / m as f64, m))
        .collect();
    // Deterministic order: by real part, then imaginary part.
    out.sort_by(|a, b| {
        a.0.re
            .total_cmp(&b.0.re)
            .then(a.0.im.total_cmp(&b.0.im))
    });
    out
}
