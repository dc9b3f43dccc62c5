//! Sample points for the abstract smooth domain `G` and its boundary.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

const DIRECTION_SEED: u64 = 0x5eed_0001;

/// A point `(x, t)` of the closed cylinder.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorSample {
    pub x: Vec<f64>,
    pub t: f64,
}

/// A point on the lateral boundary with its inward unit normal and an
/// orthonormal frame of the tangent space.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySample {
    pub x: Vec<f64>,
    pub t: f64,
    pub normal: Vec<f64>,
    pub tangents: Vec<Vec<f64>>,
}

impl BoundarySample {
    /// Checks `|normal| = 1`, unit tangents, and mutual orthogonality within
    /// `tol`.
    pub fn validate(&self, n: usize, tol: f64) -> Result<()> {
        if self.x.len() != n || self.normal.len() != n {
            return Err(Error::input(format!(
                "boundary sample must have {n} coordinates and normal components"
            )));
        }
        if self.tangents.len() != n - 1 {
            return Err(Error::input(format!(
                "boundary sample needs {} tangent vectors, got {}",
                n - 1,
                self.tangents.len()
            )));
        }
        if (norm(&self.normal) - 1.0).abs() > tol {
            return Err(Error::input(format!(
                "normal at {:?} is not a unit vector",
                self.x
            )));
        }
        for (i, tv) in self.tangents.iter().enumerate() {
            if tv.len() != n {
                return Err(Error::input("tangent vector has wrong length"));
            }
            if dot(tv, &self.normal).abs() > tol {
                return Err(Error::input(format!(
                    "tangent {} at {:?} is not orthogonal to the normal (dot = {:e})",
                    i + 1,
                    self.x,
                    dot(tv, &self.normal)
                )));
            }
            if (norm(tv) - 1.0).abs() > tol {
                return Err(Error::input(format!(
                    "tangent {} at {:?} is not a unit vector",
                    i + 1,
                    self.x
                )));
            }
            for other in &self.tangents[..i] {
                if dot(tv, other).abs() > tol {
                    return Err(Error::input(format!(
                        "tangent frame at {:?} is not orthogonal",
                        self.x
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Built-in domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Collar of the half-space `x_n > 0` near `x_n = 0`.
    HalfSpace,
    UnitBall,
    /// The superellipse `x_1^4 + ... + x_n^4 = 1`, a square with smoothed
    /// corners when `n = 2`.
    SmoothedSquare,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::HalfSpace => "half_space",
            Domain::UnitBall => "unit_ball",
            Domain::SmoothedSquare => "smoothed_square",
        }
    }

    pub fn from_name(name: &str) -> Option<Domain> {
        match name {
            "half_space" => Some(Domain::HalfSpace),
            "unit_ball" => Some(Domain::UnitBall),
            "smoothed_square" => Some(Domain::SmoothedSquare),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingDensity {
    pub interior_points: usize,
    pub boundary_points: usize,
    pub boundary_times: usize,
}

impl Default for SamplingDensity {
    fn default() -> Self {
        SamplingDensity {
            interior_points: 5,
            boundary_points: 8,
            boundary_times: 3,
        }
    }
}

/// Generates interior and boundary samples for a built-in domain.
pub fn generate(
    domain: Domain,
    n: usize,
    tau: f64,
    density: SamplingDensity,
) -> Result<(Vec<InteriorSample>, Vec<BoundarySample>)> {
    if n < 2 {
        return Err(Error::input("spatial dimension must be at least 2"));
    }
    if density.interior_points == 0 || density.boundary_points == 0 || density.boundary_times == 0 {
        return Err(Error::input("sampling densities must be positive"));
    }
    let times = |count: usize| -> Vec<f64> {
        if count == 1 {
            vec![0.0]
        } else {
            (0..count).map(|i| tau * i as f64 / (count - 1) as f64).collect()
        }
    };

    let interior_dirs = unit_directions(n, density.interior_points);
    let interior_times = times(density.interior_points);
    let interior = interior_dirs
        .iter()
        .zip(&interior_times)
        .enumerate()
        .map(|(i, (d, &t))| {
            let level = (i + 1) as f64 / (density.interior_points + 1) as f64;
            let x = match domain {
                Domain::HalfSpace => {
                    let mut x: Vec<f64> = d.iter().map(|v| 0.5 * v).collect();
                    x[n - 1] = 0.1 + 0.9 * level;
                    x
                }
                Domain::UnitBall | Domain::SmoothedSquare => d.iter().map(|v| 0.9 * level * v).collect(),
            };
            InteriorSample { x, t }
        })
        .collect();

    let mut boundary = Vec::new();
    let points: Vec<(Vec<f64>, Vec<f64>)> = match domain {
        Domain::HalfSpace => {
            let spread = if n == 2 {
                (0..density.boundary_points)
                    .map(|i| vec![-1.0 + 2.0 * i as f64 / density.boundary_points.max(2) as f64])
                    .collect()
            } else {
                unit_directions(n - 1, density.boundary_points)
            };
            spread
                .into_iter()
                .map(|s| {
                    let mut x = s;
                    x.push(0.0);
                    let mut normal = vec![0.0; n];
                    normal[n - 1] = 1.0;
                    (x, normal)
                })
                .collect()
        }
        Domain::UnitBall => unit_directions(n, density.boundary_points)
            .into_iter()
            .map(|d| {
                let normal = d.iter().map(|v| -v).collect();
                (d, normal)
            })
            .collect(),
        Domain::SmoothedSquare => unit_directions(n, density.boundary_points)
            .into_iter()
            .map(|d| {
                let scale = d.iter().map(|v| v.powi(4)).sum::<f64>().powf(0.25);
                let x: Vec<f64> = d.iter().map(|v| v / scale).collect();
                let grad: Vec<f64> = x.iter().map(|v| 4.0 * v.powi(3)).collect();
                let g = norm(&grad);
                let normal = grad.iter().map(|v| -v / g).collect();
                (x, normal)
            })
            .collect(),
    };
    for (x, normal) in points {
        let tangents = tangent_frame(&normal);
        for &t in &times(density.boundary_times) {
            boundary.push(BoundarySample {
                x: x.clone(),
                t,
                normal: normal.clone(),
                tangents: tangents.clone(),
            });
        }
    }
    Ok((interior, boundary))
}

/// Deterministic unit vectors in `R^n`: evenly spaced angles for `n = 2`,
/// otherwise the signed coordinate axes followed by seeded Gaussian
/// directions.
pub fn unit_directions(n: usize, count: usize) -> Vec<Vec<f64>> {
    if n == 1 {
        return (0..count)
            .map(|i| vec![if i % 2 == 0 { 1.0 } else { -1.0 }])
            .collect();
    }
    if n == 2 {
        return (0..count)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
    }
    let mut out = Vec::with_capacity(count);
    for axis in 0..n {
        for sign in [1.0, -1.0] {
            if out.len() < count {
                let mut v = vec![0.0; n];
                v[axis] = sign;
                out.push(v);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DIRECTION_SEED ^ n as u64);
    while out.len() < count {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let len = norm(&v);
        if len > 1e-3 {
            out.push(v.into_iter().map(|c| c / len).collect());
        }
    }
    out
}

/// Orthonormal basis of the complement of a unit `normal`, by Gram-Schmidt
/// over the coordinate axes least aligned with it.
pub fn tangent_frame(normal: &[f64]) -> Vec<Vec<f64>> {
    let n = normal.len();
    let mut axes: Vec<usize> = (0..n).collect();
    axes.sort_by(|&a, &b| normal[a].abs().total_cmp(&normal[b].abs()));
    let mut basis: Vec<Vec<f64>> = vec![normal.to_vec()];
    for axis in axes {
        if basis.len() == n {
            break;
        }
        let mut v = vec![0.0; n];
        v[axis] = 1.0;
        // Two passes keep the frame orthogonal to machine precision.
        for _ in 0..2 {
            for b in &basis {
                let d = dot(&v, b);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= d * bi;
                }
            }
        }
        let len = norm(&v);
        if len > 1e-6 {
            basis.push(v.into_iter().map(|c| c / len).collect());
        }
    }
    basis.split_off(1)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
