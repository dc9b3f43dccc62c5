use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::univariate::UniPoly;
use crate::error::{Error, Result};

/// Coefficients at or below this magnitude are dropped after every ring
/// operation.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Exponents of one monomial `xi_1^a_1 ... xi_n^a_n p^b zeta^c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentKey {
    pub xi: Vec<u32>,
    pub p: u32,
    pub zeta: u32,
}

impl ExponentKey {
    pub fn new(xi: Vec<u32>, p: u32, zeta: u32) -> Self {
        ExponentKey { xi, p, zeta }
    }

    pub fn constant(n: usize) -> Self {
        ExponentKey {
            xi: vec![0; n],
            p: 0,
            zeta: 0,
        }
    }

    /// Total degree in the spatial frequencies.
    pub fn xi_degree(&self) -> u32 {
        self.xi.iter().sum()
    }

    /// Anisotropic order `|alpha| + 2b*beta`, with zeta counted as a spatial
    /// frequency.
    pub fn anisotropic_order(&self, b: u32) -> u32 {
        self.xi_degree() + self.zeta + 2 * b * self.p
    }

    fn combine(&self, other: &ExponentKey) -> ExponentKey {
        ExponentKey {
            xi: self.xi.iter().zip(&other.xi).map(|(a, b)| a + b).collect(),
            p: self.p + other.p,
            zeta: self.zeta + other.zeta,
        }
    }
}

/// Multivariate polynomial in `(xi_1..xi_n, p, zeta)` with complex
/// coefficients, kept in normalized form (no stored coefficient is below
/// [`PRUNE_THRESHOLD`] in magnitude).
#[derive(Debug, Clone, PartialEq)]
pub struct PolySymbol {
    terms: BTreeMap<ExponentKey, Complex64>,
    n: usize,
}

impl PolySymbol {
    pub fn zero(n: usize) -> Self {
        PolySymbol {
            terms: BTreeMap::new(),
            n,
        }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        Self::monomial(ExponentKey::constant(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(key: ExponentKey, c: Complex64) -> Self {
        let n = key.xi.len();
        let mut poly = PolySymbol::zero(n);
        poly.add_term(key, c);
        poly.prune();
        poly
    }

    /// The spatial frequency `xi_i` (0-based).
    pub fn xi(n: usize, i: usize) -> Self {
        let mut key = ExponentKey::constant(n);
        key.xi[i] = 1;
        Self::monomial(key, Complex64::new(1.0, 0.0))
    }

    pub fn p(n: usize) -> Self {
        let mut key = ExponentKey::constant(n);
        key.p = 1;
        Self::monomial(key, Complex64::new(1.0, 0.0))
    }

    pub fn zeta(n: usize) -> Self {
        let mut key = ExponentKey::constant(n);
        key.zeta = 1;
        Self::monomial(key, Complex64::new(1.0, 0.0))
    }

    /// Builds a polynomial from raw terms; repeated keys are summed.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (ExponentKey, Complex64)>,
    ) -> Result<Self> {
        let mut poly = PolySymbol::zero(n);
        for (key, c) in terms {
            if key.xi.len() != n {
                return Err(Error::input(format!(
                    "monomial has {} spatial exponents, expected {n}",
                    key.xi.len()
                )));
            }
            poly.add_term(key, c);
        }
        poly.prune();
        Ok(poly)
    }

    pub fn num_spatial_vars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentKey, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, key: &ExponentKey) -> Complex64 {
        self.terms.get(key).copied().unwrap_or_default()
    }

    pub fn max_coefficient_magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = PolySymbol {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            n: self.n,
        };
        out.prune();
        out
    }

    pub fn eval(&self, xi: &[Complex64], p: Complex64, zeta: Complex64) -> Complex64 {
        debug_assert_eq!(xi.len(), self.n);
        self.terms
            .iter()
            .map(|(key, c)| {
                let mut v = *c;
                for (x, &e) in xi.iter().zip(&key.xi) {
                    v *= x.powu(e);
                }
                v * p.powu(key.p) * zeta.powu(key.zeta)
            })
            .sum()
    }

    /// Evaluates at real frequencies.
    pub fn eval_real_xi(&self, xi: &[f64], p: Complex64, zeta: Complex64) -> Complex64 {
        let xi: Vec<Complex64> = xi.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.eval(&xi, p, zeta)
    }

    /// True when every term has anisotropic order `order` (zeta counted as a
    /// spatial variable).
    pub fn is_anisotropically_homogeneous(&self, b: u32, order: u32) -> bool {
        self.terms.keys().all(|k| k.anisotropic_order(b) == order)
    }

    /// Substitutes `xi := xi0 + zeta*nu` and `p := p_value`, leaving a
    /// polynomial in `zeta`. Any explicit `zeta` powers in `self` multiply
    /// through unchanged.
    pub fn specialize_to_zeta(&self, xi0: &[f64], nu: &[f64], p_value: Complex64) -> Result<UniPoly> {
        if xi0.len() != self.n || nu.len() != self.n {
            return Err(Error::input(format!(
                "specialization vectors must have length {}",
                self.n
            )));
        }
        let norm = nu.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::input(format!(
                "direction nu must be a unit vector, |nu| = {norm}"
            )));
        }
        // Linear factors xi0_i + zeta*nu_i and their powers, built lazily.
        let linear: Vec<UniPoly> = xi0
            .iter()
            .zip(nu)
            .map(|(&a, &v)| UniPoly::new(vec![Complex64::new(a, 0.0), Complex64::new(v, 0.0)]))
            .collect();
        let mut powers: Vec<Vec<UniPoly>> = linear.iter().map(|l| vec![UniPoly::one(), l.clone()]).collect();
        let mut out = UniPoly::zero();
        for (key, c) in &self.terms {
            let mut term = UniPoly::constant(*c * p_value.powu(key.p));
            for (i, &e) in key.xi.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &linear[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e];
            }
            if key.zeta > 0 {
                term = term.shift_up(key.zeta as usize);
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Fixes the spatial frequencies and `zeta`, leaving a polynomial in `p`.
    pub fn specialize_to_p(&self, xi: &[f64], zeta: Complex64) -> Result<UniPoly> {
        if xi.len() != self.n {
            return Err(Error::input(format!(
                "frequency vector must have length {}",
                self.n
            )));
        }
        let degree = self.terms.keys().map(|k| k.p).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Complex64::default(); degree + 1];
        for (key, c) in &self.terms {
            let mut v = *c * zeta.powu(key.zeta);
            for (&x, &e) in xi.iter().zip(&key.xi) {
                v *= x.powi(e as i32);
            }
            coeffs[key.p as usize] += v;
        }
        Ok(UniPoly::new(coeffs))
    }

    fn add_term(&mut self, key: ExponentKey, c: Complex64) {
        *self.terms.entry(key).or_default() += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() > PRUNE_THRESHOLD);
    }

    fn check_same_n(&self, other: &PolySymbol) {
        assert_eq!(
            self.n, other.n,
            "polynomials over different numbers of spatial variables"
        );
    }
}

impl Add for &PolySymbol {
    type Output = PolySymbol;

    fn add(self, rhs: &PolySymbol) -> PolySymbol {
        self.check_same_n(rhs);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), *c);
        }
        out.prune();
        out
    }
}

impl Sub for &PolySymbol {
    type Output = PolySymbol;

    fn sub(self, rhs: &PolySymbol) -> PolySymbol {
        self.check_same_n(rhs);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -*c);
        }
        out.prune();
        out
    }
}

impl Mul for &PolySymbol {
    type Output = PolySymbol;

    fn mul(self, rhs: &PolySymbol) -> PolySymbol {
        self.check_same_n(rhs);
        let mut out = PolySymbol::zero(self.n);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_term(ka.combine(kb), ca * cb);
            }
        }
        out.prune();
        out
    }
}

impl Neg for &PolySymbol {
    type Output = PolySymbol;

    fn neg(self) -> PolySymbol {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (key, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for (i, &e) in key.xi.iter().enumerate() {
                if e > 0 {
                    write!(f, "*xi{}^{}", i + 1, e)?;
                }
            }
            if key.p > 0 {
                write!(f, "*p^{}", key.p)?;
            }
            if key.zeta > 0 {
                write!(f, "*zeta^{}", key.zeta)?;
            }
        }
        Ok(())
    }
}
