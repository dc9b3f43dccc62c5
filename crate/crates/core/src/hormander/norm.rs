use std::f64::consts::PI;

use rustfft::FftPlanner;

use super::class_m::{check_class_m, ClassMConfig};
use super::grid::AnisoGridFunction;
use super::phi::FunctionParameter;
use crate::error::{Error, Result};
use crate::Complex64;

/// Largest boundary sample, relative to the largest sample, for which the
/// grid is taken to enclose the support.
pub const EDGE_DECAY_TOLERANCE: f64 = 1e-10;

/// Index `(s, gamma, phi)` of the space `H^{s, s gamma; phi}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTag {
    pub s: f64,
    pub gamma: f64,
    pub phi: FunctionParameter,
}

impl SpaceTag {
    /// Validates `0 < gamma <= 1` and screens `phi` for class M.
    pub fn new(s: f64, gamma: f64, phi: FunctionParameter) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::input(format!("smoothness s = {s} is not finite")));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::input(format!("gamma = {gamma} must lie in (0, 1]")));
        }
        let screen = check_class_m(&phi, &ClassMConfig::default())?;
        if !screen.consistent {
            return Err(Error::input(format!(
                "`{phi}` is not a class-M function parameter: {}",
                screen.witness.unwrap_or_default()
            )));
        }
        Ok(SpaceTag { s, gamma, phi })
    }
}

/// Spectral norm `|| r_gamma^s phi(r_gamma) F w ||_{L2}` of a grid
/// function over `R^{k+1}`.
///
/// The Fourier transform is approximated by the unitary-normalized DFT
/// (cell volume times `(2 pi)^{-(k+1)/2}`), at angular frequencies
/// `2 pi j / (N h)` with `j` in `[-N/2, N/2)`. With `s = 0` and `phi = 1`
/// this is exactly the cell-weighted discrete L2 norm.
///
/// The grid must enclose the support: samples on the grid boundary above
/// [`EDGE_DECAY_TOLERANCE`] relative to the maximum are a truncation error.
pub fn norm_full_space(w: &AnisoGridFunction, tag: &SpaceTag) -> Result<f64> {
    let samples = w.samples();
    let peak = samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let extents = w.extents();
    let edge = (0..samples.len())
        .filter(|&i| w.index(i).iter().zip(extents).any(|(&j, &n)| j == 0 || j + 1 == n))
        .max_by(|&a, &b| samples[a].norm().total_cmp(&samples[b].norm()));
    if let Some(i) = edge {
        let rel = samples[i].norm() / peak;
        if rel > EDGE_DECAY_TOLERANCE {
            return Err(Error::Truncation(format!(
                "grid does not enclose the support: |w| = {:e} at {:?} ({rel:e} of the maximum)",
                samples[i].norm(),
                w.coordinates(i)
            )));
        }
    }

    let spectrum = fft_all_axes(samples, extents);
    let d = extents.len();
    let scale = w.cell_volume() * (2.0 * PI).powf(-(d as f64) / 2.0);
    let dfreq: Vec<f64> = extents
        .iter()
        .zip(w.spacing())
        .map(|(&n, &h)| 2.0 * PI / (n as f64 * h))
        .collect();
    let freq_volume: f64 = dfreq.iter().product();

    let mut terms = Vec::with_capacity(spectrum.len());
    for (flat, z) in spectrum.iter().enumerate() {
        let idx = w.index(flat);
        let omega: Vec<f64> = idx
            .iter()
            .zip(extents)
            .zip(&dfreq)
            .map(|((&j, &n), &df)| signed_bin(j, n) as f64 * df)
            .collect();
        let (xi, eta) = omega.split_at(d - 1);
        let ln_r = 0.5 * (1.0 + xi.iter().map(|v| v * v).sum::<f64>() + eta[0].abs().powf(2.0 * tag.gamma)).ln();
        let ln_weight = 2.0 * (tag.s * ln_r + tag.phi.ln_at_log(ln_r)?);
        terms.push((z.norm() * scale).powi(2) * ln_weight.exp());
    }
    Ok((pairwise_sum(&terms) * freq_volume).sqrt())
}

fn signed_bin(j: usize, n: usize) -> i64 {
    if j < n.div_ceil(2) {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

fn fft_all_axes(samples: &[Complex64], extents: &[usize]) -> Vec<Complex64> {
    let mut data = samples.to_vec();
    let mut planner = FftPlanner::<f64>::new();
    let d = extents.len();
    for axis in 0..d {
        let n = extents[axis];
        if n == 1 {
            continue;
        }
        let stride: usize = extents[axis + 1..].iter().product();
        let outer: usize = extents[..axis].iter().product();
        let fft = planner.plan_fft_forward(n);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * n * stride + inner;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * stride];
                }
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
    data
}

fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let (a, b) = values.split_at(values.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}
