//! Problem specification files.
//!
//! A spec is a TOML document with the sections `[problem]`, `[operators]`
//! (arrays of tables `A` and `B`), `[geometry]`, an optional `[[claims]]`
//! array and optional `[options]`. Rows and columns are 1-based.
//!
//! ```toml
//! [problem]
//! n = 2
//! unknowns = 1
//! b = 1
//! tau = 1.0
//! kappa = [1]
//! ell = [-2]
//!
//! [[operators.A]]
//! row = 1
//! col = 1
//! terms = [
//!   { alpha = [0, 0], beta = 1, coeff = "1" },
//!   { alpha = [2, 0], beta = 0, coeff = "1" },
//!   { alpha = [0, 2], beta = 0, coeff = "1" },
//! ]
//!
//! [[operators.B]]
//! row = 1
//! col = 1
//! terms = [{ alpha = [0, 0], beta = 0, coeff = "1" }]
//!
//! [geometry]
//! domain = "unit_ball"
//!
//! [[claims]]
//! target = "f"
//! region = "interior"
//! sigma = 2
//! phi = "1 + ln(r)"
//! ```

use std::fmt;
use std::ops::Range;

use parabolic_core::geometry::{generate, BoundarySample, Domain, InteriorSample, SamplingDensity};
use parabolic_core::parabolicity::CheckConfig;
use parabolic_core::problem::{Coefficient, ParabolicProblem, PdoTerm, ProblemDefinition};
use parabolic_core::regularity::{sigma_from_f64, RegionTag, RegularityClaim, Sigma, Target};
use parabolic_core::hormander::FunctionParameter;
use parabolic_core::Error;
use serde::Deserialize;
use toml::Spanned;

/// Diagnostic anchored at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for SpecError {}

/// Options read from `[options]`; unset fields take the library defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecOptions {
    pub check: CheckConfig,
    pub delta1: Option<f64>,
    pub density: SamplingDensity,
}

#[derive(Debug, Clone)]
pub struct SpecFile {
    pub problem: ParabolicProblem,
    pub claims: Vec<RegularityClaim>,
    pub options: SpecOptions,
    /// Name of the built-in domain, or `explicit`.
    pub domain: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    problem: Option<Spanned<RawProblem>>,
    operators: Option<Spanned<RawOperators>>,
    geometry: Option<Spanned<RawGeometry>>,
    #[serde(default)]
    claims: Vec<Spanned<RawClaim>>,
    options: Option<Spanned<RawOptions>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    n: usize,
    unknowns: usize,
    b: u32,
    #[serde(default = "default_tau")]
    tau: f64,
    kappa: Vec<u32>,
    ell: Vec<i64>,
}

fn default_tau() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperators {
    #[serde(rename = "A", default)]
    a: Vec<Spanned<RawEntry>>,
    #[serde(rename = "B", default)]
    b: Vec<Spanned<RawEntry>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    row: usize,
    col: usize,
    terms: Vec<Spanned<RawTerm>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    alpha: Vec<u32>,
    #[serde(default)]
    beta: u32,
    coeff: Spanned<CoeffValue>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffValue {
    Real(f64),
    Integer(i64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    domain: Spanned<String>,
    interior_points: Option<usize>,
    boundary_points: Option<usize>,
    boundary_times: Option<usize>,
    #[serde(default)]
    interior: Vec<RawInterior>,
    #[serde(default)]
    boundary: Vec<Spanned<RawBoundary>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInterior {
    x: Vec<f64>,
    t: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBoundary {
    x: Vec<f64>,
    t: f64,
    normal: Vec<f64>,
    tangents: Option<Vec<Vec<f64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClaim {
    target: Spanned<String>,
    region: Spanned<String>,
    sigma: Spanned<SigmaValue>,
    phi: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SigmaValue {
    Integer(i64),
    Real(f64),
    Text(String),
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    delta1: Option<f64>,
    xi_directions: Option<usize>,
    tangent_directions: Option<usize>,
    arc_points: Option<usize>,
    pure_p_points: Option<usize>,
    delta_floor: Option<f64>,
    im_floor: Option<f64>,
    rank_tol: Option<f64>,
    cluster_tol: Option<f64>,
}

/// Byte offset to 1-based line and column (in characters).
fn position(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn at(&self, span: Range<usize>, message: impl Into<String>) -> SpecError {
        let (line, column) = position(self.text, span.start);
        SpecError { line, column, message: message.into() }
    }
}

/// Parses and fully validates a spec file.
pub fn parse_problem(text: &str) -> Result<SpecFile, SpecError> {
    let ctx = Ctx { text };
    let raw: RawSpec = toml::from_str(text).map_err(|e| {
        let span = e.span().unwrap_or(0..0);
        ctx.at(span, e.message().trim().to_string())
    })?;
    let end = text.len()..text.len();
    let problem = raw.problem.ok_or_else(|| ctx.at(end.clone(), "missing section [problem]"))?;
    let operators = raw.operators.ok_or_else(|| ctx.at(end.clone(), "missing section [operators]"))?;
    let geometry = raw.geometry.ok_or_else(|| ctx.at(end.clone(), "missing section [geometry]"))?;
    let problem_span = problem.span();
    let p = problem.into_inner();
    if p.n == 0 {
        return Err(ctx.at(problem_span, "n must be at least 1"));
    }

    let options = raw.options.map(|o| o.into_inner()).unwrap_or_default();
    let mut check = CheckConfig::default();
    macro_rules! take {
        ($($field:ident),*) => { $( if let Some(v) = options.$field { check.$field = v; } )* };
    }
    take!(xi_directions, tangent_directions, arc_points, pure_p_points, delta_floor, im_floor, rank_tol, cluster_tol);

    // Operators.
    let a_terms = collect_table(&ctx, "A", &operators.get_ref().a, p.unknowns, p.unknowns, p.n)?;
    let b_terms = collect_table(&ctx, "B", &operators.get_ref().b, p.ell.len(), p.unknowns, p.n)?;

    // Geometry.
    let geometry_span = geometry.span();
    let g = geometry.into_inner();
    let defaults = SamplingDensity::default();
    let density = SamplingDensity {
        interior_points: g.interior_points.unwrap_or(defaults.interior_points),
        boundary_points: g.boundary_points.unwrap_or(defaults.boundary_points),
        boundary_times: g.boundary_times.unwrap_or(defaults.boundary_times),
    };
    let domain_name = g.domain.get_ref().clone();
    let (interior, boundary) = if domain_name == "explicit" {
        let interior: Vec<InteriorSample> = g.interior.into_iter().map(|s| InteriorSample { x: s.x, t: s.t }).collect();
        let mut boundary = Vec::new();
        for s in g.boundary {
            let span = s.span();
            let s = s.into_inner();
            let tangents = match s.tangents {
                Some(t) => t,
                None if s.normal.len() == p.n => parabolic_core::geometry::tangent_frame(&s.normal),
                None => return Err(ctx.at(span, format!("normal must have {} components", p.n))),
            };
            let sample = BoundarySample { x: s.x, t: s.t, normal: s.normal, tangents };
            sample.validate(p.n, 1e-10).map_err(|e| ctx.at(span, describe(&e)))?;
            boundary.push(sample);
        }
        if interior.is_empty() || boundary.is_empty() {
            return Err(ctx.at(geometry_span, "explicit geometry needs interior and boundary samples"));
        }
        (interior, boundary)
    } else {
        let domain = Domain::from_name(&domain_name).ok_or_else(|| {
            ctx.at(
                g.domain.span(),
                format!("unknown domain `{domain_name}` (half_space, unit_ball, smoothed_square or explicit)"),
            )
        })?;
        generate(domain, p.n, p.tau, density).map_err(|e| ctx.at(geometry_span.clone(), describe(&e)))?
    };

    let def = ProblemDefinition {
        n: p.n,
        unknowns: p.unknowns,
        b: p.b,
        tau: p.tau,
        kappa: p.kappa,
        ell: p.ell,
        a_terms,
        b_terms,
        interior,
        boundary,
    };
    let problem = ParabolicProblem::new(def).map_err(|e| {
        let message = describe(&e);
        let span = term_span(&message, &operators.get_ref().a, "A")
            .or_else(|| term_span(&message, &operators.get_ref().b, "B"))
            .unwrap_or_else(|| problem_span.clone());
        ctx.at(span, message)
    })?;

    let claims = collect_claims(&ctx, &raw.claims, problem.unknowns(), problem.boundary_rows())?;
    Ok(SpecFile {
        problem,
        claims,
        options: SpecOptions { check, delta1: options.delta1, density },
        domain: domain_name,
    })
}

fn describe(e: &Error) -> String {
    match e {
        Error::Input(m) | Error::Incomplete(m) | Error::Degenerate(m) | Error::Separation(m) | Error::Truncation(m) => {
            m.clone()
        }
        other => other.to_string(),
    }
}

/// Span of the term a validation message names, as in `A[1][2] term #3`.
fn term_span(message: &str, entries: &[Spanned<RawEntry>], table: &str) -> Option<Range<usize>> {
    for entry in entries {
        let e = entry.get_ref();
        for (t, term) in e.terms.iter().enumerate() {
            let label = format!("{table}[{}][{}] term #{}", e.row, e.col, t + 1);
            if let Some(pos) = message.find(&label) {
                let next = message[pos + label.len()..].chars().next();
                if !next.is_some_and(|c| c.is_ascii_digit()) {
                    return Some(term.span());
                }
            }
        }
    }
    None
}

fn collect_table(
    ctx: &Ctx<'_>,
    table: &str,
    entries: &[Spanned<RawEntry>],
    rows: usize,
    cols: usize,
    n: usize,
) -> Result<Vec<Vec<Vec<PdoTerm>>>, SpecError> {
    let mut out = vec![vec![Vec::new(); cols]; rows];
    let mut seen = vec![vec![false; cols]; rows];
    for entry in entries {
        let span = entry.span();
        let e = entry.get_ref();
        if e.row == 0 || e.row > rows || e.col == 0 || e.col > cols {
            return Err(ctx.at(
                span,
                format!("{table}[{}][{}] is outside the {rows}x{cols} operator table", e.row, e.col),
            ));
        }
        if seen[e.row - 1][e.col - 1] {
            return Err(ctx.at(span, format!("{table}[{}][{}] is given twice", e.row, e.col)));
        }
        seen[e.row - 1][e.col - 1] = true;
        for term in &e.terms {
            let t = term.get_ref();
            let coeff = match t.coeff.get_ref() {
                CoeffValue::Real(v) => Coefficient::constant(*v),
                CoeffValue::Integer(v) => Coefficient::constant(*v as f64),
                CoeffValue::Text(s) => Coefficient::parse(s, n).map_err(|err| match err {
                    Error::Parse { offset, message } => {
                        // Skip the opening quote of the string literal.
                        let start = t.coeff.span().start + 1 + offset;
                        ctx.at(start..start, format!("in coefficient `{s}`: {message}"))
                    }
                    other => ctx.at(t.coeff.span(), describe(&other)),
                })?,
            };
            out[e.row - 1][e.col - 1].push(PdoTerm::new(t.alpha.clone(), t.beta, coeff));
        }
    }
    Ok(out)
}

fn parse_sigma(value: &SigmaValue) -> Result<Sigma, String> {
    match value {
        SigmaValue::Integer(i) => Ok(Sigma::from_integer(*i)),
        SigmaValue::Real(r) => sigma_from_f64(*r).map_err(|e| describe(&e)),
        SigmaValue::Text(s) => {
            let bad = || format!("sigma `{s}` is not a number or a fraction p/q");
            match s.split_once('/') {
                Some((num, den)) => {
                    let num: i64 = num.trim().parse().map_err(|_| bad())?;
                    let den: i64 = den.trim().parse().map_err(|_| bad())?;
                    if den == 0 {
                        return Err(bad());
                    }
                    Ok(Sigma::new(num, den))
                }
                None => {
                    let v: f64 = s.trim().parse().map_err(|_| bad())?;
                    sigma_from_f64(v).map_err(|e| describe(&e))
                }
            }
        }
    }
}

fn collect_claims(
    ctx: &Ctx<'_>,
    raw: &[Spanned<RawClaim>],
    unknowns: usize,
    rows: usize,
) -> Result<Vec<RegularityClaim>, SpecError> {
    let mut claims = Vec::new();
    for c in raw {
        let c = c.get_ref();
        let region_name = c.region.get_ref();
        let region = RegionTag::from_name(region_name).ok_or_else(|| {
            ctx.at(
                c.region.span(),
                format!("unknown region `{region_name}` (interior, lateral_collar, bottom_collar, lateral_boundary)"),
            )
        })?;
        let sigma = parse_sigma(c.sigma.get_ref()).map_err(|m| ctx.at(c.sigma.span(), m))?;
        let phi = FunctionParameter::parse(c.phi.get_ref()).map_err(|e| {
            let span = c.phi.span();
            match e {
                Error::Parse { offset, message } => {
                    let start = span.start + 1 + offset;
                    ctx.at(start..start, message)
                }
                other => ctx.at(span, describe(&other)),
            }
        })?;
        let target_text = c.target.get_ref().as_str();
        let targets: Vec<Target> = match target_text {
            "f" => (0..unknowns).map(Target::F).collect(),
            "g" => (0..rows).map(Target::G).collect(),
            _ => {
                let parsed = target_text
                    .strip_prefix('f')
                    .map(|d| (true, d))
                    .or_else(|| target_text.strip_prefix('g').map(|d| (false, d)))
                    .and_then(|(f, d)| d.parse::<usize>().ok().filter(|&j| j >= 1).map(|j| (f, j - 1)));
                match parsed {
                    Some((true, j)) => vec![Target::F(j)],
                    Some((false, j)) => vec![Target::G(j)],
                    None => {
                        return Err(ctx.at(
                            c.target.span(),
                            format!("target `{target_text}` is not f, g, f<j> or g<j>"),
                        ))
                    }
                }
            }
        };
        for target in targets {
            claims.push(RegularityClaim::new(target, region, sigma, phi.clone()));
        }
    }
    Ok(claims)
}
