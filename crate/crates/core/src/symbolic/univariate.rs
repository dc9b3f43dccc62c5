use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// Trailing exact zeros are trimmed so the last stored coefficient is the
/// leading one; the zero polynomial stores nothing.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::default()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// Monic polynomial with the given roots, each listed once per
    /// multiplicity.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Complex64>) -> Self {
        let mut out = Self::one();
        for r in roots {
            out = &out * &UniPoly::new(vec![-*r, Complex64::new(1.0, 0.0)]);
        }
        out
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn max_coefficient_magnitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::default(), |acc, c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    /// Multiplies by `z^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Complex64::default(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    /// Drops leading coefficients whose magnitude is at most
    /// `tol * max|c_i|`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let scale = self.max_coefficient_magnitude();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= tol * scale) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    pub fn monic(&self) -> Result<Self> {
        let lead = self.leading();
        if lead == Complex64::default() {
            return Err(Error::degenerate("zero polynomial has no monic form"));
        }
        Ok(self.scale(lead.inv()))
    }

    /// Euclidean division; returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let d = divisor
            .degree()
            .ok_or_else(|| Error::input("division by the zero polynomial"))?;
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut quot = vec![Complex64::default(); rem.len() - d];
        for i in (0..quot.len()).rev() {
            let q = rem[i + d] / lead;
            quot[i] = q;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= q * dc;
            }
            rem[i + d] = Complex64::default();
        }
        rem.truncate(d);
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }
}

/// Remainder of `row` modulo a monic `modulus` of degree at least one.
pub fn poly_mod(row: &UniPoly, modulus: &UniPoly) -> Result<UniPoly> {
    match modulus.degree() {
        None | Some(0) => {
            return Err(Error::input("modulus must have degree at least 1"));
        }
        _ => {}
    }
    if (modulus.leading() - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::input(format!(
            "modulus must be monic, leading coefficient is {}",
            modulus.leading()
        )));
    }
    Ok(row.div_rem(modulus)?.1)
}

impl Add for &UniPoly {
    type Output = UniPoly;

    fn add(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or_default();
        UniPoly::new(
            (0..len)
                .map(|i| get(&self.coeffs, i) + get(&rhs.coeffs, i))
                .collect(),
        )
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;

    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &rhs.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;

    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Complex64::default(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}
