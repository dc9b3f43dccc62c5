use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{BinOp, Dialect, Expr, Func};

const VALIDATION_POINTS: usize = 96;

/// A function parameter `phi: [1, inf) -> (0, inf)` given by an expression
/// in `r`.
///
/// Evaluation goes through `ln phi` as a function of `ln r`, so `phi` can
/// be probed at `r = e^u` for `u` far beyond the range of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionParameter {
    expr: Expr,
}

impl FunctionParameter {
    /// Parses `text` and checks that it is finite and positive on
    /// `[1, 1e12]`.
    pub fn parse(text: &str) -> Result<Self> {
        let expr = Dialect::function_parameter().parse(text)?;
        let phi = FunctionParameter { expr };
        for i in 0..=VALIDATION_POINTS {
            let u = 1e12f64.ln() * i as f64 / VALIDATION_POINTS as f64;
            let l = phi.ln_at_log(u)?;
            if l.abs() > f64::MAX_EXP as f64 * std::f64::consts::LN_2 {
                return Err(Error::input(format!(
                    "`{phi}` leaves the floating-point range at r = {:e}",
                    u.exp()
                )));
            }
        }
        Ok(phi)
    }

    /// `phi = 1`.
    pub fn one() -> Self {
        FunctionParameter { expr: Expr::Real(1.0) }
    }

    /// `phi(r) = (1 + ln r)^theta`.
    pub fn log_power(theta: f64) -> Self {
        Self::parse(&format!("(1 + ln(r))^{}", Expr::Real(theta))).expect("valid log-power form")
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    /// `phi(r)`; errors when the value is not finite and positive.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r <= 0.0 {
            return Err(Error::input(format!("function parameter evaluated at r = {r}")));
        }
        let v = self.ln_at_log(r.ln())?.exp();
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::input(format!("phi({r}) = {v} overflows")));
        }
        Ok(v)
    }

    /// `ln phi(e^u)`.
    pub fn ln_at_log(&self, u: f64) -> Result<f64> {
        let v = eval_log(&self.expr, u)?;
        match v {
            LogNum::Positive(l) if l.is_finite() => Ok(l),
            LogNum::Positive(l) => Err(Error::input(format!(
                "`{self}` overflows at ln r = {u} (ln phi = {l})"
            ))),
            _ => Err(Error::input(format!(
                "`{self}` is not positive at ln r = {u}"
            ))),
        }
    }

    /// Recognizes `c * (1 + ln r)^theta`, including products, quotients and
    /// powers of such factors; returns `(c, theta)`.
    pub fn log_power_form(&self) -> Option<(f64, f64)> {
        log_power_of(&self.expr).filter(|(c, theta)| *c > 0.0 && c.is_finite() && theta.is_finite())
    }
}

impl fmt::Display for FunctionParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}

fn is_one_plus_ln_r(e: &Expr) -> bool {
    let ln_r = |x: &Expr| matches!(x, Expr::Call(Func::Ln, arg) if **arg == Expr::Var("r".into()));
    match e {
        Expr::Binary(BinOp::Add, a, b) => {
            (**a == Expr::Real(1.0) && ln_r(b)) || (ln_r(a) && **b == Expr::Real(1.0))
        }
        _ => false,
    }
}

fn constant_value(e: &Expr) -> Option<f64> {
    if !e.is_constant() {
        return None;
    }
    let v = e.eval_complex(&|_| None).ok()?;
    (v.im == 0.0 && v.re.is_finite()).then_some(v.re)
}

fn log_power_of(e: &Expr) -> Option<(f64, f64)> {
    if let Some(c) = constant_value(e) {
        return Some((c, 0.0));
    }
    if is_one_plus_ln_r(e) {
        return Some((1.0, 1.0));
    }
    match e {
        Expr::Binary(BinOp::Pow, base, exp) => {
            let k = constant_value(exp)?;
            let (c, theta) = log_power_of(base)?;
            if c <= 0.0 {
                return None;
            }
            Some((c.powf(k), theta * k))
        }
        Expr::Binary(BinOp::Mul, a, b) => {
            let (ca, ta) = log_power_of(a)?;
            let (cb, tb) = log_power_of(b)?;
            Some((ca * cb, ta + tb))
        }
        Expr::Binary(BinOp::Div, a, b) => {
            let (ca, ta) = log_power_of(a)?;
            let (cb, tb) = log_power_of(b)?;
            Some((ca / cb, ta - tb))
        }
        _ => None,
    }
}

/// A real number stored as sign and log-magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
enum LogNum {
    Positive(f64),
    Zero,
    Negative(f64),
}

impl LogNum {
    fn from_f64(v: f64) -> LogNum {
        if v > 0.0 {
            LogNum::Positive(v.ln())
        } else if v < 0.0 {
            LogNum::Negative((-v).ln())
        } else {
            LogNum::Zero
        }
    }

    fn to_f64(self) -> f64 {
        match self {
            LogNum::Positive(l) => l.exp(),
            LogNum::Zero => 0.0,
            LogNum::Negative(l) => -l.exp(),
        }
    }

    fn parts(self) -> (i8, f64) {
        match self {
            LogNum::Positive(l) => (1, l),
            LogNum::Zero => (0, f64::NEG_INFINITY),
            LogNum::Negative(l) => (-1, l),
        }
    }

    fn from_parts(sign: i8, l: f64) -> LogNum {
        if sign == 0 || l == f64::NEG_INFINITY {
            LogNum::Zero
        } else if sign > 0 {
            LogNum::Positive(l)
        } else {
            LogNum::Negative(l)
        }
    }

    fn neg(self) -> LogNum {
        let (s, l) = self.parts();
        LogNum::from_parts(-s, l)
    }

    fn add(self, other: LogNum) -> LogNum {
        let (sa, la) = self.parts();
        let (sb, lb) = other.parts();
        if sa == 0 {
            return other;
        }
        if sb == 0 {
            return self;
        }
        let (hi, lo, s_hi) = if la >= lb { (la, lb, sa) } else { (lb, la, sb) };
        if sa == sb {
            LogNum::from_parts(s_hi, hi + (lo - hi).exp().ln_1p())
        } else if la == lb {
            LogNum::Zero
        } else {
            LogNum::from_parts(s_hi, hi + (-(lo - hi).exp()).ln_1p())
        }
    }

    fn mul(self, other: LogNum) -> LogNum {
        let (sa, la) = self.parts();
        let (sb, lb) = other.parts();
        LogNum::from_parts(sa * sb, la + lb)
    }
}

fn eval_log(e: &Expr, u: f64) -> Result<LogNum> {
    Ok(match e {
        Expr::Real(v) => LogNum::from_f64(*v),
        Expr::Const(c) => LogNum::from_f64(c.value()),
        Expr::Var(_) => LogNum::Positive(u),
        Expr::Imag(_) => return Err(Error::input("function parameters are real-valued")),
        Expr::Neg(a) => eval_log(a, u)?.neg(),
        Expr::Binary(op, a, b) => {
            let x = eval_log(a, u)?;
            match op {
                BinOp::Add => x.add(eval_log(b, u)?),
                BinOp::Sub => x.add(eval_log(b, u)?.neg()),
                BinOp::Mul => x.mul(eval_log(b, u)?),
                BinOp::Div => {
                    let (s, l) = eval_log(b, u)?.parts();
                    if s == 0 {
                        return Err(Error::input("division by zero in function parameter"));
                    }
                    x.mul(LogNum::from_parts(s, -l))
                }
                BinOp::Pow => {
                    let k = eval_log(b, u)?.to_f64();
                    let (s, l) = x.parts();
                    match s {
                        0 if k > 0.0 => LogNum::Zero,
                        0 => return Err(Error::input("zero raised to a non-positive power")),
                        1 => LogNum::Positive(l * k),
                        _ if k.fract() == 0.0 => {
                            let sign = if (k as i64) % 2 == 0 { 1 } else { -1 };
                            LogNum::from_parts(sign, l * k)
                        }
                        _ => return Err(Error::input("negative base raised to a fractional power")),
                    }
                }
            }
        }
        Expr::Call(func, a) => {
            let x = eval_log(a, u)?;
            match func {
                Func::Ln => match x {
                    LogNum::Positive(l) => LogNum::from_f64(l),
                    _ => return Err(Error::input("logarithm of a non-positive value")),
                },
                Func::Exp => LogNum::Positive(x.to_f64()),
                Func::Sin | Func::Cos => {
                    let v = x.to_f64();
                    LogNum::from_f64(if *func == Func::Sin { v.sin() } else { v.cos() })
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_matches_direct_formula() {
        let phi = FunctionParameter::parse("(1 + ln(r))^0.6 * 2 / ln(e - 1 + r)").unwrap();
        for r in [1.0, 2.5, 1e3, 1e9] {
            let direct = (1.0 + f64::ln(r)).powf(0.6) * 2.0 / (std::f64::consts::E - 1.0 + r).ln();
            assert!((phi.eval(r).unwrap() / direct - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn log_domain_reaches_huge_arguments() {
        let phi = FunctionParameter::parse("ln(e - 1 + r)").unwrap();
        // ln(e - 1 + e^u) = u + ln(1 + (e-1) e^{-u}) ~ u.
        let l = phi.ln_at_log(1e15).unwrap();
        assert!((l - 1e15f64.ln()).abs() < 1e-12);
        let power = FunctionParameter::parse("r^0.1").unwrap();
        assert!((power.ln_at_log(1e6).unwrap() - 1e5).abs() < 1e-6);
    }

    #[test]
    fn log_power_recognition() {
        assert_eq!(FunctionParameter::parse("1").unwrap().log_power_form(), Some((1.0, 0.0)));
        assert_eq!(
            FunctionParameter::parse("(1 + ln(r))^0.4").unwrap().log_power_form(),
            Some((1.0, 0.4))
        );
        assert_eq!(
            FunctionParameter::parse("3*(ln(r) + 1)").unwrap().log_power_form(),
            Some((3.0, 1.0))
        );
        let (c, t) = FunctionParameter::parse("(1 + ln(r))^2 / (2*(1 + ln(r))^0.5)")
            .unwrap()
            .log_power_form()
            .unwrap();
        assert!((c - 0.5).abs() < 1e-15 && (t - 1.5).abs() < 1e-15);
        assert_eq!(FunctionParameter::parse("ln(e - 1 + r)").unwrap().log_power_form(), None);
        assert_eq!(FunctionParameter::parse("(1 + ln(r)) + 1").unwrap().log_power_form(), None);
    }

    #[test]
    fn non_positive_values_are_errors() {
        assert!(FunctionParameter::parse("ln(r)").is_err());
        assert!(FunctionParameter::parse("2 - r").is_err());
        assert!(FunctionParameter::parse("exp(r)").is_err());
        assert!(FunctionParameter::one().eval(0.0).is_err());
    }

    #[test]
    fn text_round_trip() {
        for text in ["(1 + ln(r))^0.6", "2*ln(e - 1 + r)^-1.5", "r^0.1", "1"] {
            let phi = FunctionParameter::parse(text).unwrap();
            assert_eq!(FunctionParameter::parse(&phi.to_string()).unwrap(), phi);
        }
        assert_eq!(FunctionParameter::log_power(0.5).log_power_form(), Some((1.0, 0.5)));
    }
}
