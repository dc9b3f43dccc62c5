//! Decision procedure for classical solvability: the sigma thresholds,
//! validation of declared right-hand-side regularity against them, and
//! per-component budgets of continuous derivatives.
//!
//! Regularity claims are trusted inputs. Nothing here checks them against
//! data.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::hormander::{
    check_class_m, dini_integral, embedding_order, ClassMConfig, DiniVerdict, FunctionParameter, SpaceTag,
};
use crate::problem::{derived_orders, ParabolicProblem};

/// Exact smoothness index.
pub type Sigma = Ratio<i64>;

/// Converts a decimal `f64` to the rational it prints as, so `2.5` becomes
/// exactly `5/2`.
pub fn sigma_from_f64(value: f64) -> Result<Sigma> {
    if !value.is_finite() {
        return Err(Error::input(format!("sigma = {value} is not finite")));
    }
    let text = format!("{value}");
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.as_str()),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if frac.len() > 18 {
        return Err(Error::input(format!("sigma = {value} has too many decimal digits")));
    }
    let scale = 10i64.pow(frac.len() as u32);
    let parse = |s: &str| -> Result<i64> {
        if s.is_empty() {
            return Ok(0);
        }
        s.parse::<i64>().map_err(|_| Error::input(format!("sigma = {value} is out of range")))
    };
    let frac_value = parse(frac)?;
    let numer = parse(whole)?
        .checked_mul(scale)
        .and_then(|w| w.checked_add(frac_value))
        .ok_or_else(|| Error::input(format!("sigma = {value} is out of range")))?;
    Ok(Sigma::new(if negative { -numer } else { numer }, scale))
}

pub fn sigma_to_f64(s: Sigma) -> f64 {
    *s.numer() as f64 / *s.denom() as f64
}

/// `5/2` prints as `2.5`; denominators other than products of 2 and 5
/// keep the fraction form.
pub fn format_sigma(s: Sigma) -> String {
    let mut d = *s.denom();
    while d % 2 == 0 {
        d /= 2;
    }
    while d % 5 == 0 {
        d /= 5;
    }
    if d == 1 {
        format!("{}", sigma_to_f64(s))
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionTag {
    /// `Omega_0 = Omega`, `Omega' = {}`.
    Interior,
    /// `Omega_0 = S_eps`, `Omega' = S`.
    LateralCollar,
    /// `Omega_0 = G_eps`, `Omega' = G`.
    BottomCollar,
    /// The lateral boundary `S` itself, where `g` lives.
    LateralBoundary,
}

impl RegionTag {
    pub const ALL: [RegionTag; 4] = [
        RegionTag::Interior,
        RegionTag::LateralCollar,
        RegionTag::BottomCollar,
        RegionTag::LateralBoundary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegionTag::Interior => "interior",
            RegionTag::LateralCollar => "lateral_collar",
            RegionTag::BottomCollar => "bottom_collar",
            RegionTag::LateralBoundary => "lateral_boundary",
        }
    }

    pub fn from_name(name: &str) -> Option<RegionTag> {
        RegionTag::ALL.into_iter().find(|r| r.name() == name)
    }
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Right-hand side a claim is about; indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    F(usize),
    G(usize),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::F(j) => write!(f, "f{}", j + 1),
            Target::G(j) => write!(f, "g{}", j + 1),
        }
    }
}

/// Declared membership of one right-hand side in a local Hörmander space.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityClaim {
    pub target: Target,
    pub region: RegionTag,
    pub sigma: Sigma,
    pub phi: FunctionParameter,
}

impl RegularityClaim {
    pub fn new(target: Target, region: RegionTag, sigma: Sigma, phi: FunctionParameter) -> Self {
        RegularityClaim { target, region, sigma, phi }
    }
}

/// The order data the decision procedure depends on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemOrders {
    pub n: usize,
    pub b: u32,
    pub kappa: Vec<u32>,
    pub ell: Vec<i64>,
}

impl ProblemOrders {
    pub fn of(problem: &ParabolicProblem) -> Self {
        ProblemOrders {
            n: problem.n(),
            b: problem.b(),
            kappa: problem.kappa().to_vec(),
            ell: problem.ell().to_vec(),
        }
    }

    pub fn unknowns(&self) -> usize {
        self.kappa.len()
    }

    pub fn boundary_rows(&self) -> usize {
        self.ell.len()
    }

    fn half_n(&self) -> Sigma {
        Sigma::new(self.n as i64, 2)
    }

    fn gamma(&self) -> f64 {
        1.0 / (2.0 * self.b as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaThresholds {
    pub b: u32,
    pub n: usize,
    pub l0: i64,
    pub sigma0: Sigma,
    pub sigma1: Sigma,
    pub sigma2: Sigma,
    pub sigma3: Sigma,
    pub sigma2_gt_sigma0: bool,
    pub sigma3_gt_sigma0: bool,
}

pub fn sigma_thresholds(problem: &ParabolicProblem) -> SigmaThresholds {
    thresholds_for(&ProblemOrders::of(problem))
}

pub fn thresholds_for(orders: &ProblemOrders) -> SigmaThresholds {
    let consts = derived_orders(orders.b, &orders.kappa, &orders.ell);
    let b = Sigma::from_integer(orders.b as i64);
    let half_n = orders.half_n();
    let sigma0 = Sigma::from_integer(consts.sigma0);
    let sigma1 = b + half_n;
    let sigma2 = Sigma::from_integer(consts.l0) + b + half_n;
    let sigma3 = -b + half_n;
    SigmaThresholds {
        b: orders.b,
        n: orders.n,
        l0: consts.l0,
        sigma0,
        sigma1,
        sigma2,
        sigma3,
        sigma2_gt_sigma0: sigma2 > sigma0,
        sigma3_gt_sigma0: sigma3 > sigma0,
    }
}

/// Parameter chosen for one hypothesis group.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiChoice {
    /// Every claim in the group has strictly more smoothness than needed,
    /// so any Dini-convergent class-M parameter works.
    Any,
    Claimed(FunctionParameter),
}

impl fmt::Display for PhiChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiChoice::Any => f.write_str("any Dini-convergent parameter, e.g. 1 + ln(r)"),
            PhiChoice::Claimed(phi) => write!(f, "{phi}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub passed: bool,
    pub thresholds: SigmaThresholds,
    /// Parameters for the interior, lateral-collar and bottom-collar
    /// hypotheses; `None` when the group fails.
    pub phi_choices: [Option<PhiChoice>; 3],
    pub failures: Vec<String>,
}

/// Notes attached to every decision.
pub const DECISION_NOTES: [&str; 3] = [
    "regularity claims are assumed, not verified against data",
    "the dominance rule transfers the embeddings of Hörmander spaces to localized spaces by monotonicity",
    "the criterion is sufficient only; a negative verdict does not mean the solution is not classical",
];

/// Checked claim set for one problem.
struct Claims<'a> {
    orders: &'a ProblemOrders,
    by_key: BTreeMap<(Target, RegionTag), &'a RegularityClaim>,
    class_m: RefCell<HashMap<String, bool>>,
    dini: RefCell<HashMap<String, bool>>,
}

impl<'a> Claims<'a> {
    fn new(orders: &'a ProblemOrders, claims: &'a [RegularityClaim]) -> Result<Self> {
        let mut by_key = BTreeMap::new();
        for c in claims {
            match c.target {
                Target::F(j) if j >= orders.unknowns() => {
                    return Err(Error::input(format!(
                        "claim for {} but the problem has N = {} unknowns",
                        c.target,
                        orders.unknowns()
                    )))
                }
                Target::G(j) if j >= orders.boundary_rows() => {
                    return Err(Error::input(format!(
                        "claim for {} but the problem has m = {} boundary rows",
                        c.target,
                        orders.boundary_rows()
                    )))
                }
                _ => {}
            }
            let g = matches!(c.target, Target::G(_));
            if g != (c.region == RegionTag::LateralBoundary) {
                return Err(Error::input(format!(
                    "claim for {} on region {}: g claims live on lateral_boundary and f claims never do",
                    c.target, c.region
                )));
            }
            if by_key.insert((c.target, c.region), c).is_some() {
                return Err(Error::input(format!("duplicate claim for {} on {}", c.target, c.region)));
            }
        }
        Ok(Claims {
            orders,
            by_key,
            class_m: RefCell::new(HashMap::new()),
            dini: RefCell::new(HashMap::new()),
        })
    }

    /// The claims needed for `region`, or an incomplete-input error.
    fn required(&self, regions: &[RegionTag]) -> Result<Vec<&'a RegularityClaim>> {
        let mut out = Vec::new();
        let mut missing = Vec::new();
        for &region in regions {
            let targets: Vec<Target> = if region == RegionTag::LateralBoundary {
                (0..self.orders.boundary_rows()).map(Target::G).collect()
            } else {
                (0..self.orders.unknowns()).map(Target::F).collect()
            };
            for t in targets {
                match self.by_key.get(&(t, region)) {
                    Some(c) => out.push(*c),
                    None => missing.push(format!("{t} on {region}")),
                }
            }
        }
        if !missing.is_empty() {
            return Err(Error::Incomplete(format!("missing regularity claims: {}", missing.join(", "))));
        }
        Ok(out)
    }

    fn in_class_m(&self, phi: &FunctionParameter) -> Result<bool> {
        let key = phi.to_string();
        if let Some(&v) = self.class_m.borrow().get(&key) {
            return Ok(v);
        }
        let v = check_class_m(phi, &ClassMConfig::default())?.consistent;
        self.class_m.borrow_mut().insert(key, v);
        Ok(v)
    }

    fn dini_converges(&self, phi: &FunctionParameter) -> Result<bool> {
        let key = phi.to_string();
        if let Some(&v) = self.dini.borrow().get(&key) {
            return Ok(v);
        }
        let v = dini_integral(phi)?.verdict == DiniVerdict::Converges;
        self.dini.borrow_mut().insert(key, v);
        Ok(v)
    }

    /// Shift between the group's sigma and the sigma a claim must reach.
    fn offset(&self, claim: &RegularityClaim) -> Sigma {
        match claim.target {
            Target::F(_) => Sigma::from_integer(0),
            Target::G(j) => -Sigma::from_integer(self.orders.ell[j]) - Sigma::new(1, 2),
        }
    }

    /// Whether every claim dominates `(sigma + offset, phi)` for one common
    /// Dini-convergent `phi`.
    ///
    /// A claim strictly above its target admits any class-M parameter. The
    /// claims exactly at target must share a parameter: one of their own
    /// `phi`, Dini-convergent, into whose space all the others embed.
    fn dominates(&self, items: &[&RegularityClaim], sigma: Sigma) -> Result<(Option<PhiChoice>, Vec<String>)> {
        let mut failures = Vec::new();
        let mut at_equality = Vec::new();
        for c in items {
            let need = sigma + self.offset(c);
            if c.sigma < need {
                failures.push(format!(
                    "{} on {}: σ = {} is below the required {}",
                    c.target,
                    c.region,
                    format_sigma(c.sigma),
                    format_sigma(need)
                ));
                continue;
            }
            if !self.in_class_m(&c.phi)? {
                failures.push(format!(
                    "{} on {}: φ = {} fails the class-M screen",
                    c.target, c.region, c.phi
                ));
                continue;
            }
            if c.sigma == need {
                at_equality.push(*c);
            }
        }
        if !failures.is_empty() {
            return Ok((None, failures));
        }
        if at_equality.is_empty() {
            return Ok((Some(PhiChoice::Any), failures));
        }
        let gamma = self.orders.gamma();
        let mut diverging = Vec::new();
        for cand in &at_equality {
            let cand_tag = SpaceTag::new(0.0, gamma, cand.phi.clone())?;
            let mut all_embed = true;
            for other in &at_equality {
                let tag = SpaceTag::new(0.0, gamma, other.phi.clone())?;
                if !embedding_order(&tag, &cand_tag)?.embeds {
                    all_embed = false;
                    break;
                }
            }
            if !all_embed {
                continue;
            }
            if self.dini_converges(&cand.phi)? {
                return Ok((Some(PhiChoice::Claimed(cand.phi.clone())), failures));
            }
            diverging.push(cand.phi.to_string());
        }
        if diverging.is_empty() {
            failures.push(format!(
                "claims at the threshold have no common function parameter: {}",
                at_equality.iter().map(|c| format!("{} has φ = {}", c.target, c.phi)).collect::<Vec<_>>().join(", ")
            ));
        } else {
            diverging.dedup();
            failures.push(format!("Dini integral diverges for φ = {}", diverging.join(", ")));
        }
        Ok((None, failures))
    }
}

/// Checks the hypotheses of the classicality theorem for the given claims
/// and lists every unmet one.
pub fn check_theorem_hypotheses(problem: &ParabolicProblem, claims: &[RegularityClaim]) -> Result<HypothesisReport> {
    check_hypotheses_for(&ProblemOrders::of(problem), claims)
}

pub fn check_hypotheses_for(orders: &ProblemOrders, claims: &[RegularityClaim]) -> Result<HypothesisReport> {
    let set = Claims::new(orders, claims)?;
    let th = thresholds_for(orders);
    let interior = set.required(&[RegionTag::Interior])?;
    let collar = set.required(&[RegionTag::LateralCollar, RegionTag::LateralBoundary])?;
    let bottom = set.required(&[RegionTag::BottomCollar])?;

    let mut failures = Vec::new();
    if !th.sigma2_gt_sigma0 {
        failures.push(format!(
            "σ₂ > σ₀ violated (σ₂ = {}, σ₀ = {})",
            format_sigma(th.sigma2),
            format_sigma(th.sigma0)
        ));
    }
    if !th.sigma3_gt_sigma0 {
        failures.push(format!(
            "σ₃ > σ₀ violated (σ₃ = {}, σ₀ = {})",
            format_sigma(th.sigma3),
            format_sigma(th.sigma0)
        ));
    }
    let mut phi_choices: [Option<PhiChoice>; 3] = [None, None, None];
    for (slot, (items, sigma)) in [(interior, th.sigma1), (collar, th.sigma2), (bottom, th.sigma3)]
        .into_iter()
        .enumerate()
    {
        let (choice, group_failures) = set.dominates(&items, sigma)?;
        phi_choices[slot] = choice;
        let label = ["φ₁", "φ₂", "φ₃"][slot];
        failures.extend(group_failures.into_iter().map(|f| format!("{label}: {f}")));
    }
    Ok(HypothesisReport { passed: failures.is_empty(), thresholds: th, phi_choices, failures })
}

/// Largest `p >= 0` for which the claims on `region` give continuity of
/// `D^alpha d_t^beta u_k`, `|alpha| + 2b beta <= p`, on that region; `None`
/// when no `p` qualifies. `k` is 0-based.
pub fn derivative_budget(
    problem: &ParabolicProblem,
    k: usize,
    region: RegionTag,
    claims: &[RegularityClaim],
) -> Result<Option<u32>> {
    let orders = ProblemOrders::of(problem);
    let set = Claims::new(&orders, claims)?;
    Ok(budget(&set, k, region)?.0)
}

pub fn derivative_budget_for(
    orders: &ProblemOrders,
    k: usize,
    region: RegionTag,
    claims: &[RegularityClaim],
) -> Result<Option<u32>> {
    let set = Claims::new(orders, claims)?;
    Ok(budget(&set, k, region)?.0)
}

/// Budget plus the reason the next larger `p` fails.
fn budget(set: &Claims<'_>, k: usize, region: RegionTag) -> Result<(Option<u32>, Vec<String>)> {
    let orders = set.orders;
    if k >= orders.unknowns() {
        return Err(Error::input(format!("component {} out of range 1..={}", k + 1, orders.unknowns())));
    }
    let regions: &[RegionTag] = match region {
        RegionTag::Interior => &[RegionTag::Interior],
        RegionTag::LateralCollar => &[RegionTag::LateralCollar, RegionTag::LateralBoundary],
        RegionTag::BottomCollar => &[RegionTag::BottomCollar],
        RegionTag::LateralBoundary => {
            return Err(Error::input("derivative budgets are computed on interior, lateral_collar or bottom_collar"))
        }
    };
    let items = set.required(regions)?;
    let th = thresholds_for(orders);
    let two_b_kappa = Sigma::from_integer(2 * orders.b as i64 * orders.kappa[k] as i64);
    let base = Sigma::from_integer(orders.b as i64) + orders.half_n();
    // sigma(p) = p + b + n/2 - 2b kappa_k must not exceed any claim.
    let ceiling = items
        .iter()
        .map(|c| c.sigma - set.offset(c))
        .min()
        .expect("claim sets are never empty");
    let p_hi = (ceiling - base + two_b_kappa).floor().to_integer();
    let admissible = |p: i64| p >= 0 && Sigma::from_integer(p) + base > th.sigma0 + two_b_kappa;

    // Below p_hi every claim is strictly above its target, so the outcome
    // no longer depends on p: two candidates decide.
    let mut reasons = Vec::new();
    for p in [p_hi, p_hi - 1] {
        if !admissible(p) {
            if reasons.is_empty() {
                reasons.push(format!(
                    "p = {p} violates p ≥ 0 and p + b + n/2 > σ₀ + 2bκ_{}",
                    k + 1
                ));
            }
            break;
        }
        let sigma = Sigma::from_integer(p) + base - two_b_kappa;
        let (choice, failures) = set.dominates(&items, sigma)?;
        if choice.is_some() {
            return Ok((Some(p as u32), reasons));
        }
        reasons.extend(failures.into_iter().map(|f| format!("p = {p}: {f}")));
    }
    Ok((None, reasons))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overall {
    GuaranteedClassical,
    NotGuaranteed,
}

impl Overall {
    pub fn label(self) -> &'static str {
        match self {
            Overall::GuaranteedClassical => "guaranteed-classical",
            Overall::NotGuaranteed => "not-guaranteed",
        }
    }
}

/// One of the conditions (a), (b), (c) for one component.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionDetail {
    /// 0-based component index.
    pub component: usize,
    pub condition: char,
    pub region: RegionTag,
    /// Anisotropic order of derivatives that must be continuous.
    pub required: i64,
    pub budget: Option<u32>,
    pub passed: bool,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalityVerdict {
    pub overall: Overall,
    pub details: Vec<ConditionDetail>,
    pub failed: Vec<String>,
}

/// Decides whether every generalized solution with the claimed right-hand
/// sides is classical, component by component.
pub fn classify_solution(problem: &ParabolicProblem, claims: &[RegularityClaim]) -> Result<ClassicalityVerdict> {
    classify_for(&ProblemOrders::of(problem), claims)
}

pub fn classify_for(orders: &ProblemOrders, claims: &[RegularityClaim]) -> Result<ClassicalityVerdict> {
    let set = Claims::new(orders, claims)?;
    set.required(&[
        RegionTag::Interior,
        RegionTag::LateralCollar,
        RegionTag::BottomCollar,
        RegionTag::LateralBoundary,
    ])?;
    let th = thresholds_for(orders);
    let two_b = 2 * orders.b as i64;
    let mut details = Vec::new();
    for (k, &kappa) in orders.kappa.iter().enumerate() {
        let kappa = kappa as i64;
        let plan = [
            ('a', RegionTag::Interior, two_b * kappa),
            ('b', RegionTag::LateralCollar, th.l0 + two_b * kappa),
            ('c', RegionTag::BottomCollar, two_b * (kappa - 1)),
        ];
        for (condition, region, required) in plan {
            let (budget_p, mut reasons) = budget(&set, k, region)?;
            let passed = if required < 0 {
                reasons = vec![format!("no derivatives are required (order bound {required} < 0)")];
                true
            } else {
                budget_p.is_some_and(|p| p as i64 >= required)
            };
            if !passed {
                reasons.insert(
                    0,
                    match budget_p {
                        Some(p) => format!("p_max = {p} < {required}"),
                        None => format!("no admissible p (need {required})"),
                    },
                );
            }
            details.push(ConditionDetail { component: k, condition, region, required, budget: budget_p, passed, reasons });
        }
    }
    let failed: Vec<String> = details
        .iter()
        .filter(|d| !d.passed)
        .map(|d| format!("condition ({}) fails for u{}: {}", d.condition, d.component + 1, d.reasons.join("; ")))
        .collect();
    let overall = if failed.is_empty() { Overall::GuaranteedClassical } else { Overall::NotGuaranteed };
    Ok(ClassicalityVerdict { overall, details, failed })
}
