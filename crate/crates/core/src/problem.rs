//! The initial-boundary-value problem: PDO term tables, principal symbols,
//! and the order constants derived from `b`, `kappa` and `ell`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{Dialect, Expr};
use crate::geometry::{BoundarySample, InteriorSample};
use crate::symbolic::{ExponentKey, PolyMatrix, PolySymbol};

const FRAME_TOL: f64 = 1e-10;

/// A smooth coefficient `a(x, t)` given by an expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    text: String,
    expr: Expr,
}

impl Coefficient {
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let expr = Dialect::coefficient(n).parse(text)?;
        Ok(Coefficient {
            text: text.to_string(),
            expr,
        })
    }

    pub fn constant(value: f64) -> Self {
        Coefficient {
            text: value.to_string(),
            expr: Expr::Real(value),
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn eval(&self, x: &[f64], t: f64) -> Result<Complex64> {
        let value = self.expr.eval_complex(&|name| {
            if name == "t" {
                return Some(Complex64::new(t, 0.0));
            }
            let idx: usize = name.strip_prefix('x')?.parse().ok()?;
            x.get(idx.checked_sub(1)?).map(|&v| Complex64::new(v, 0.0))
        })?;
        if !value.is_finite() {
            return Err(Error::input(format!(
                "coefficient `{}` is not finite at x = {x:?}, t = {t}",
                self.text
            )));
        }
        Ok(value)
    }
}

/// One term `a(x, t) D_x^alpha d_t^beta` of a PDO.
#[derive(Debug, Clone, PartialEq)]
pub struct PdoTerm {
    pub alpha: Vec<u32>,
    pub beta: u32,
    pub coeff: Coefficient,
}

impl PdoTerm {
    pub fn new(alpha: Vec<u32>, beta: u32, coeff: Coefficient) -> Self {
        PdoTerm { alpha, beta, coeff }
    }

    /// Anisotropic order `|alpha| + 2b*beta`.
    pub fn order(&self, b: u32) -> u32 {
        self.alpha.iter().sum::<u32>() + 2 * b * self.beta
    }
}

/// Everything needed to build a [`ParabolicProblem`]; validated by
/// [`ParabolicProblem::new`]. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDefinition {
    pub n: usize,
    pub unknowns: usize,
    pub b: u32,
    pub tau: f64,
    pub kappa: Vec<u32>,
    pub ell: Vec<i64>,
    /// `a_terms[j][k]` lists the terms of `A_{j,k}`.
    pub a_terms: Vec<Vec<Vec<PdoTerm>>>,
    /// `b_terms[j][k]` lists the terms of `B_{j,k}`.
    pub b_terms: Vec<Vec<Vec<PdoTerm>>>,
    pub interior: Vec<InteriorSample>,
    pub boundary: Vec<BoundarySample>,
}

/// `m = b * sum(kappa)`, `sigma0 = max{0, l_j + 1}`, `l0 = max l_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderConstants {
    pub m: usize,
    pub sigma0: i64,
    pub l0: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicProblem {
    def: ProblemDefinition,
    warnings: Vec<String>,
}

impl ParabolicProblem {
    pub fn new(def: ProblemDefinition) -> Result<Self> {
        let mut warnings = Vec::new();
        if def.n < 2 {
            return Err(Error::input(format!(
                "spatial dimension n must be at least 2, got {}",
                def.n
            )));
        }
        if def.unknowns == 0 {
            return Err(Error::input("number of unknowns N must be at least 1"));
        }
        if def.unknowns == 1 {
            warnings.push("N = 1: scalar equation (the system theory assumes N >= 2)".to_string());
        }
        if def.b == 0 {
            return Err(Error::input("b must be a positive integer"));
        }
        if !(def.tau > 0.0 && def.tau.is_finite()) {
            return Err(Error::input(format!("tau must be positive, got {}", def.tau)));
        }
        if def.kappa.len() != def.unknowns {
            return Err(Error::input(format!(
                "kappa has {} entries, expected N = {}",
                def.kappa.len(),
                def.unknowns
            )));
        }
        if let Some(k) = def.kappa.iter().position(|&k| k == 0) {
            return Err(Error::input(format!("kappa[{}] must be positive", k + 1)));
        }
        let m = def.b as usize * def.kappa.iter().map(|&k| k as usize).sum::<usize>();
        if def.ell.len() != m {
            return Err(Error::input(format!(
                "ell has {} entries, expected m = b*sum(kappa) = {m}",
                def.ell.len()
            )));
        }
        let nn = def.unknowns;
        let b = def.b;
        if def.a_terms.len() != nn || def.a_terms.iter().any(|row| row.len() != nn) {
            return Err(Error::input(format!("A must be an {nn}x{nn} table")));
        }
        if def.b_terms.len() != m || def.b_terms.iter().any(|row| row.len() != nn) {
            return Err(Error::input(format!("B must be an {m}x{nn} table")));
        }
        for (j, row) in def.a_terms.iter().enumerate() {
            for (k, terms) in row.iter().enumerate() {
                let bound = 2 * b * def.kappa[k];
                for (t, term) in terms.iter().enumerate() {
                    check_alpha(term, def.n, "A", j, k, t)?;
                    if term.order(b) > bound {
                        return Err(Error::input(format!(
                            "A[{}][{}] term #{} (alpha={:?}, beta={}) has anisotropic order {} exceeding bound 2b*kappa_{} = {}",
                            j + 1, k + 1, t + 1, term.alpha, term.beta, term.order(b), k + 1, bound
                        )));
                    }
                }
            }
        }
        for (j, row) in def.b_terms.iter().enumerate() {
            for (k, terms) in row.iter().enumerate() {
                let bound = def.ell[j] + 2 * b as i64 * def.kappa[k] as i64;
                if bound < 0 && !terms.is_empty() {
                    return Err(Error::input(format!(
                        "B[{}][{}] must be empty because l_{} + 2b*kappa_{} = {} < 0",
                        j + 1, k + 1, j + 1, k + 1, bound
                    )));
                }
                for (t, term) in terms.iter().enumerate() {
                    check_alpha(term, def.n, "B", j, k, t)?;
                    if term.order(b) as i64 > bound {
                        return Err(Error::input(format!(
                            "B[{}][{}] term #{} (alpha={:?}, beta={}) has anisotropic order {} exceeding bound l_{} + 2b*kappa_{} = {}",
                            j + 1, k + 1, t + 1, term.alpha, term.beta, term.order(b), j + 1, k + 1, bound
                        )));
                    }
                }
            }
        }
        if def.interior.is_empty() {
            return Err(Error::input("at least one interior sample is required"));
        }
        if def.boundary.is_empty() {
            return Err(Error::input("at least one boundary sample is required"));
        }
        for s in &def.interior {
            if s.x.len() != def.n {
                return Err(Error::input(format!(
                    "interior sample {:?} must have {} coordinates",
                    s.x, def.n
                )));
            }
            if !(0.0..=def.tau).contains(&s.t) {
                return Err(Error::input(format!(
                    "interior sample time {} outside [0, tau]",
                    s.t
                )));
            }
        }
        for s in &def.boundary {
            s.validate(def.n, FRAME_TOL)?;
            if !(0.0..=def.tau).contains(&s.t) {
                return Err(Error::input(format!(
                    "boundary sample time {} outside [0, tau]",
                    s.t
                )));
            }
        }
        Ok(ParabolicProblem { def, warnings })
    }

    pub fn definition(&self) -> &ProblemDefinition {
        &self.def
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn n(&self) -> usize {
        self.def.n
    }

    pub fn unknowns(&self) -> usize {
        self.def.unknowns
    }

    pub fn b(&self) -> u32 {
        self.def.b
    }

    pub fn tau(&self) -> f64 {
        self.def.tau
    }

    pub fn kappa(&self) -> &[u32] {
        &self.def.kappa
    }

    pub fn ell(&self) -> &[i64] {
        &self.def.ell
    }

    pub fn interior_samples(&self) -> &[InteriorSample] {
        &self.def.interior
    }

    pub fn boundary_samples(&self) -> &[BoundarySample] {
        &self.def.boundary
    }

    pub fn boundary_rows(&self) -> usize {
        self.def.ell.len()
    }

    pub fn derived_orders(&self) -> OrderConstants {
        derived_orders(self.def.b, &self.def.kappa, &self.def.ell)
    }

    /// Principal symbol `A^(0)_{j,k}(x, t, xi, p)`: the terms of order
    /// exactly `2b*kappa_k` with `D^alpha -> xi^alpha`, `d_t^beta -> p^beta`.
    pub fn principal_symbol_a(&self, j: usize, k: usize, x: &[f64], t: f64) -> Result<PolySymbol> {
        let order = 2 * self.def.b * self.def.kappa[k];
        self.symbol_of(&self.def.a_terms[j][k], order as i64, x, t, "A", j, k)
    }

    /// Principal symbol `B^(0)_{j,k}`: the terms of order exactly
    /// `l_j + 2b*kappa_k`, or zero when that order is negative.
    pub fn principal_symbol_b(&self, j: usize, k: usize, x: &[f64], t: f64) -> Result<PolySymbol> {
        let order = self.def.ell[j] + 2 * self.def.b as i64 * self.def.kappa[k] as i64;
        if order < 0 {
            return Ok(PolySymbol::zero(self.def.n));
        }
        self.symbol_of(&self.def.b_terms[j][k], order, x, t, "B", j, k)
    }

    pub fn principal_matrix_a(&self, x: &[f64], t: f64) -> Result<PolyMatrix> {
        let nn = self.def.unknowns;
        let rows = (0..nn)
            .map(|j| (0..nn).map(|k| self.principal_symbol_a(j, k, x, t)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        PolyMatrix::from_rows(rows)
    }

    pub fn principal_matrix_b(&self, x: &[f64], t: f64) -> Result<PolyMatrix> {
        let rows = (0..self.boundary_rows())
            .map(|j| {
                (0..self.def.unknowns)
                    .map(|k| self.principal_symbol_b(j, k, x, t))
                    .collect()
            })
            .collect::<Result<Vec<Vec<_>>>>()?;
        PolyMatrix::from_rows(rows)
    }

    /// Sum of the coefficients of `d_t^{kappa_k}` (alpha = 0) in `A_{j,k}`.
    pub fn pure_time_coefficient(&self, j: usize, k: usize, x: &[f64], t: f64) -> Result<Complex64> {
        let beta = self.def.kappa[k];
        let mut total = Complex64::default();
        for (idx, term) in self.def.a_terms[j][k].iter().enumerate() {
            if term.beta == beta && term.alpha.iter().all(|&a| a == 0) {
                total += eval_term(term, x, t, "A", j, k, idx)?;
            }
        }
        Ok(total)
    }

    #[allow(clippy::too_many_arguments)]
    fn symbol_of(
        &self,
        terms: &[PdoTerm],
        order: i64,
        x: &[f64],
        t: f64,
        table: &str,
        j: usize,
        k: usize,
    ) -> Result<PolySymbol> {
        let n = self.def.n;
        let mut out = Vec::new();
        for (idx, term) in terms.iter().enumerate() {
            if term.order(self.def.b) as i64 == order {
                let c = eval_term(term, x, t, table, j, k, idx)?;
                out.push((ExponentKey::new(term.alpha.clone(), term.beta, 0), c));
            }
        }
        PolySymbol::from_terms(n, out)
    }
}

pub fn derived_orders(b: u32, kappa: &[u32], ell: &[i64]) -> OrderConstants {
    let m = b as usize * kappa.iter().map(|&k| k as usize).sum::<usize>();
    let l0 = ell.iter().copied().max().unwrap_or(0);
    let sigma0 = ell.iter().map(|l| l + 1).fold(0, i64::max);
    OrderConstants { m, sigma0, l0 }
}

fn check_alpha(term: &PdoTerm, n: usize, table: &str, j: usize, k: usize, t: usize) -> Result<()> {
    if term.alpha.len() != n {
        return Err(Error::input(format!(
            "{table}[{}][{}] term #{} has a multi-index of length {}, expected n = {n}",
            j + 1,
            k + 1,
            t + 1,
            term.alpha.len()
        )));
    }
    Ok(())
}

fn eval_term(
    term: &PdoTerm,
    x: &[f64],
    t: f64,
    table: &str,
    j: usize,
    k: usize,
    idx: usize,
) -> Result<Complex64> {
    term.coeff.eval(x, t).map_err(|e| {
        Error::input(format!(
            "{table}[{}][{}] term #{} coefficient `{}`: {e}",
            j + 1,
            k + 1,
            idx + 1,
            term.coeff.text()
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate, Domain, SamplingDensity};

    fn term(alpha: &[u32], beta: u32, coeff: &str, n: usize) -> PdoTerm {
        PdoTerm::new(alpha.to_vec(), beta, Coefficient::parse(coeff, n).unwrap())
    }

    fn laplacian_terms(n: usize) -> Vec<PdoTerm> {
        (0..n)
            .map(|i| {
                let mut a = vec![0; n];
                a[i] = 2;
                term(&a, 0, "1", n)
            })
            .collect()
    }

    fn scalar(n: usize, a_terms: Vec<PdoTerm>, b_terms: Vec<PdoTerm>, ell: i64) -> Result<ParabolicProblem> {
        let (interior, boundary) = generate(Domain::UnitBall, n, 1.0, SamplingDensity::default())?;
        ParabolicProblem::new(ProblemDefinition {
            n,
            unknowns: 1,
            b: 1,
            tau: 1.0,
            kappa: vec![1],
            ell: vec![ell],
            a_terms: vec![vec![a_terms]],
            b_terms: vec![vec![b_terms]],
            interior,
            boundary,
        })
    }

    fn heat_symbol(n: usize) -> PolySymbol {
        let mut s = PolySymbol::p(n);
        for i in 0..n {
            let x = PolySymbol::xi(n, i);
            s = &s + &(&x * &x);
        }
        s
    }

    #[test]
    fn heat_principal_symbol() {
        let n = 3;
        let mut a = vec![term(&[0, 0, 0], 1, "1", n)];
        a.extend(laplacian_terms(n));
        let problem = scalar(n, a.clone(), vec![term(&[0, 0, 0], 0, "1", n)], -2).unwrap();
        assert_eq!(problem.principal_symbol_a(0, 0, &[0.0; 3], 0.0).unwrap(), heat_symbol(n));

        a.push(term(&[0, 0, 0], 0, "5", n));
        let problem = scalar(n, a, vec![term(&[0, 0, 0], 0, "1", n)], -2).unwrap();
        assert_eq!(problem.principal_symbol_a(0, 0, &[0.0; 3], 0.0).unwrap(), heat_symbol(n));
        assert!(problem.warnings()[0].contains("N = 1"));
    }

    #[test]
    fn zero_operator_symbol() {
        let problem = scalar(2, vec![], vec![], -2).unwrap();
        assert!(problem.principal_symbol_a(0, 0, &[0.0; 2], 0.0).unwrap().is_zero());
    }

    #[test]
    fn boundary_symbols() {
        let dirichlet = scalar(2, vec![], vec![term(&[0, 0], 0, "1", 2)], -2).unwrap();
        assert_eq!(
            dirichlet.principal_symbol_b(0, 0, &[1.0, 0.0], 0.0).unwrap(),
            PolySymbol::one(2)
        );
        let neumann = scalar(2, vec![], vec![term(&[0, 1], 0, "1", 2)], -1).unwrap();
        assert_eq!(
            neumann.principal_symbol_b(0, 0, &[1.0, 0.0], 0.0).unwrap(),
            PolySymbol::xi(2, 1)
        );
        let negative = scalar(2, vec![], vec![], -3).unwrap();
        assert!(negative.principal_symbol_b(0, 0, &[1.0, 0.0], 0.0).unwrap().is_zero());
    }

    #[test]
    fn coefficients_depend_on_position() {
        let problem = scalar(2, vec![term(&[2, 0], 0, "1 + x1^2 + 2i*t", 2)], vec![], -3).unwrap();
        let sym = problem.principal_symbol_a(0, 0, &[2.0, 0.0], 0.5).unwrap();
        let key = ExponentKey::new(vec![2, 0], 0, 0);
        assert_eq!(sym.coefficient(&key), Complex64::new(5.0, 1.0));
    }

    #[test]
    fn order_bounds_are_enforced() {
        let err = scalar(2, vec![term(&[3, 0], 0, "1", 2)], vec![], -2).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("A[1][1] term #1"), "{msg}");
        assert!(msg.contains("order 3"), "{msg}");

        let err = scalar(2, vec![], vec![term(&[1, 0], 0, "1", 2)], -2).unwrap_err();
        assert!(err.to_string().contains("B[1][1]"));

        let err = scalar(2, vec![], vec![term(&[0, 0], 0, "1", 2)], -3).unwrap_err();
        assert!(err.to_string().contains("must be empty"));
    }

    #[test]
    fn derived_order_constants() {
        assert_eq!(derived_orders(1, &[1, 1], &[-2, -2]), OrderConstants { m: 2, sigma0: 0, l0: -2 });
        assert_eq!(derived_orders(1, &[1], &[-1]), OrderConstants { m: 1, sigma0: 0, l0: -1 });
        let c = derived_orders(1, &[1, 1], &[0, 1]);
        assert_eq!((c.sigma0, c.l0), (2, 1));
    }

    #[test]
    fn bad_coefficient_names_the_term() {
        let problem = scalar(2, vec![term(&[2, 0], 0, "1/(x1 - x1)", 2)], vec![], -3).unwrap();
        let err = problem.principal_symbol_a(0, 0, &[0.3, 0.0], 0.0).unwrap_err();
        assert!(err.to_string().contains("A[1][1] term #1"));
    }
}
