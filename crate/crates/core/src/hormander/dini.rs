use super::phi::FunctionParameter;
use super::quad::integrate_adaptive;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiniVerdict {
    Converges,
    Diverges,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiniMethod {
    ClosedForm,
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiniResult {
    pub verdict: DiniVerdict,
    /// Value of `int_1^inf dr / (r phi(r)^2)` when it converges.
    pub value: Option<f64>,
    pub method: DiniMethod,
    /// Integrals over the blocks `u = ln r` in `[0, 1]`, `[1, 2]`, `[2, 4]`, ...
    pub blocks: Vec<f64>,
    /// Fitted ratio between consecutive dyadic blocks.
    pub block_ratio: Option<f64>,
}

const WINDOW: usize = 8;
const MAX_BLOCKS: usize = 62;
const CONVERGENT_RATIO: f64 = 0.95;
const MONOTONE_SLACK: f64 = 1e-9;
const BLOCK_REL_TOL: f64 = 1e-11;
const TAIL_CUTOFF: f64 = 1e-16;

/// The fixed constants of the numeric test, for reports.
pub fn dini_settings() -> Vec<(&'static str, f64)> {
    vec![
        ("dini.window_blocks", WINDOW as f64),
        ("dini.max_blocks", MAX_BLOCKS as f64),
        ("dini.convergent_ratio", CONVERGENT_RATIO),
        ("dini.monotone_slack", MONOTONE_SLACK),
        ("dini.block_rel_tol", BLOCK_REL_TOL),
        ("dini.tail_cutoff", TAIL_CUTOFF),
    ]
}

/// Dini-type test for `int_1^inf dr / (r phi(r)^2)`.
///
/// Parameters of the form `c (1 + ln r)^theta` are decided in closed form:
/// the integral is `1 / (c^2 (2 theta - 1))` for `theta > 1/2` and diverges
/// otherwise. Anything else goes to [`dini_integral_numeric`].
pub fn dini_integral(phi: &FunctionParameter) -> Result<DiniResult> {
    if let Some((c, theta)) = phi.log_power_form() {
        let converges = 2.0 * theta > 1.0;
        return Ok(DiniResult {
            verdict: if converges { DiniVerdict::Converges } else { DiniVerdict::Diverges },
            value: converges.then(|| 1.0 / (c * c * (2.0 * theta - 1.0))),
            method: DiniMethod::ClosedForm,
            blocks: Vec::new(),
            block_ratio: None,
        });
    }
    dini_integral_numeric(phi)
}

/// Numeric version of the test, in the variable `u = ln r`.
///
/// The integrand `phi(e^u)^{-2}` is integrated over `[0, 1]` and the dyadic
/// blocks `[2^{i-1}, 2^i]`. The integral converges when the block
/// integrals decay geometrically (fitted ratio below 0.95 over the last 8
/// blocks), the sum then being completed with a geometric tail. It
/// diverges when 8 consecutive blocks fail to decrease.
pub fn dini_integral_numeric(phi: &FunctionParameter) -> Result<DiniResult> {
    let integrand = |u: f64| -> Result<f64> { Ok((-2.0 * phi.ln_at_log(u)?).exp()) };
    let mut blocks = vec![integrate_adaptive(integrand, 0.0, 1.0, BLOCK_REL_TOL, 0.0)?];
    let mut converged_ratio: Option<f64> = None;
    let mut last_ratio = None;
    for i in 1..=MAX_BLOCKS {
        let lo = 2f64.powi(i as i32 - 1);
        let c = integrate_adaptive(integrand, lo, 2.0 * lo, BLOCK_REL_TOL, 0.0)?;
        blocks.push(c);
        if !c.is_finite() {
            return Ok(diverges(blocks));
        }
        let dyadic = &blocks[1..];
        if dyadic.len() < WINDOW {
            continue;
        }
        let window = &dyadic[dyadic.len() - WINDOW..];
        let sum: f64 = blocks.iter().sum();
        if let Some(rho) = converged_ratio {
            if c <= TAIL_CUTOFF * sum || c == 0.0 {
                return Ok(converges(blocks, rho));
            }
            continue;
        }
        if window.windows(2).all(|w| w[1] >= w[0] * (1.0 - MONOTONE_SLACK)) {
            return Ok(diverges(blocks));
        }
        if window.contains(&0.0) {
            return Ok(converges(blocks, 0.0));
        }
        let rho = fitted_ratio(window);
        last_ratio = Some(rho);
        if rho < CONVERGENT_RATIO {
            converged_ratio = Some(rho);
            if c <= TAIL_CUTOFF * sum {
                return Ok(converges(blocks, rho));
            }
        }
    }
    if let Some(rho) = converged_ratio {
        return Ok(converges(blocks, rho));
    }
    Ok(DiniResult {
        verdict: DiniVerdict::Inconclusive,
        value: None,
        method: DiniMethod::Numeric,
        blocks,
        block_ratio: last_ratio,
    })
}

/// `exp` of the least-squares slope of `ln v_k` against `k`.
fn fitted_ratio(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean_k = (n - 1.0) / 2.0;
    let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let mean_l = logs.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (k, l) in logs.iter().enumerate() {
        let dk = k as f64 - mean_k;
        num += dk * (l - mean_l);
        den += dk * dk;
    }
    (num / den).exp()
}

fn converges(blocks: Vec<f64>, rho: f64) -> DiniResult {
    let last = *blocks.last().expect("non-empty");
    let tail = if rho > 0.0 { last * rho / (1.0 - rho) } else { 0.0 };
    let value = blocks.iter().sum::<f64>() + tail;
    DiniResult {
        verdict: DiniVerdict::Converges,
        value: Some(value),
        method: DiniMethod::Numeric,
        blocks,
        block_ratio: Some(rho),
    }
}

fn diverges(blocks: Vec<f64>) -> DiniResult {
    DiniResult {
        verdict: DiniVerdict::Diverges,
        value: None,
        method: DiniMethod::Numeric,
        blocks,
        block_ratio: None,
    }
}
