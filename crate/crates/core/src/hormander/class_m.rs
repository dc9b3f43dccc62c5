use super::phi::FunctionParameter;
use crate::error::Result;

/// Sampling plan for the class-M screen.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMConfig {
    /// Right ends `d` of the intervals `[1, d]` on which `phi` and `1/phi`
    /// must stay bounded.
    pub boundedness_ranges: Vec<f64>,
    pub boundedness_points: usize,
    pub lambdas: Vec<f64>,
    /// Radii along which the deviation must decay.
    pub ladder: Vec<f64>,
    /// Bound on `|phi(lambda r)/phi(r) - 1|` at the last ladder radius.
    pub ratio_tolerance: f64,
    /// `ln r` of the far probe used when the ladder level is too coarse.
    pub far_log_radius: f64,
    /// Bound on the per-octave log deviation at the far probe.
    pub far_tolerance: f64,
}

impl ClassMReport {
    /// Verdict text; the screen is a sampled heuristic, never a proof.
    pub fn verdict_label(&self) -> &'static str {
        if self.consistent {
            "consistent with M (heuristic)"
        } else {
            "violates M (heuristic)"
        }
    }
}

impl Default for ClassMConfig {
    fn default() -> Self {
        ClassMConfig {
            boundedness_ranges: vec![10.0, 1e3],
            boundedness_points: 256,
            lambdas: vec![0.5, 2.0, 10.0],
            ladder: vec![1e3, 1e4, 1e5, 1e6],
            ratio_tolerance: 0.05,
            far_log_radius: 1e8,
            far_tolerance: 1e-3,
        }
    }
}

/// Per-`lambda` evidence from the slow-variation probe.
#[derive(Debug, Clone, PartialEq)]
pub struct SlowVariationProbe {
    pub lambda: f64,
    /// `|ln(phi(lambda r)/phi(r))| / |log2 lambda|` along the ladder.
    pub deviations: Vec<f64>,
    /// `phi(lambda r)/phi(r)` at the last ladder radius.
    pub ratio_at_last: f64,
    /// Same deviation at `r = e^far_log_radius`.
    pub far_deviation: f64,
    pub decaying: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassMReport {
    pub consistent: bool,
    /// `(d, sup phi, sup 1/phi)` on `[1, d]`.
    pub bounds: Vec<(f64, f64, f64)>,
    pub probes: Vec<SlowVariationProbe>,
    /// Human-readable description of the first failed probe.
    pub witness: Option<String>,
}

/// Heuristic class-M screen: boundedness of `phi` and `1/phi` on compact
/// intervals and slow variation in the sense `phi(lambda r)/phi(r) -> 1`.
///
/// A pass means the sampled behaviour is consistent with membership. It is
/// not a proof.
pub fn check_class_m(phi: &FunctionParameter, config: &ClassMConfig) -> Result<ClassMReport> {
    let mut bounds = Vec::new();
    for &d in &config.boundedness_ranges {
        let count = config.boundedness_points.max(2);
        let (mut sup, mut sup_inv) = (0.0f64, 0.0f64);
        for i in 0..count {
            let u = d.ln() * i as f64 / (count - 1) as f64;
            let l = phi.ln_at_log(u)?;
            sup = sup.max(l.exp());
            sup_inv = sup_inv.max((-l).exp());
        }
        bounds.push((d, sup, sup_inv));
    }
    let bounded = bounds.iter().all(|(_, a, b)| a.is_finite() && b.is_finite());
    let mut witness = if bounded {
        None
    } else {
        Some("phi or 1/phi is unbounded on a compact interval".to_string())
    };

    let mut probes = Vec::new();
    for &lambda in &config.lambdas {
        let octaves = lambda.log2().abs();
        let deviation = |u: f64| -> Result<f64> {
            Ok((phi.ln_at_log(u + lambda.ln())? - phi.ln_at_log(u)?).abs() / octaves)
        };
        let mut deviations = Vec::new();
        for &r in &config.ladder {
            deviations.push(deviation(r.ln())?);
        }
        let last = *config.ladder.last().expect("non-empty ladder");
        let ratio_at_last = (phi.ln_at_log(last.ln() + lambda.ln())? - phi.ln_at_log(last.ln())?).exp();
        let far_deviation = deviation(config.far_log_radius)?;
        let decaying = deviations.windows(2).all(|w| w[1] < w[0] || w[1] <= 1e-12);
        let level = (ratio_at_last - 1.0).abs() < config.ratio_tolerance
            || far_deviation < config.far_tolerance;
        let passed = decaying && level;
        if !passed && witness.is_none() {
            witness = Some(format!(
                "phi({lambda} r)/phi(r) = {ratio_at_last} at r = {last:e}{}",
                if decaying { "" } else { " and the deviation does not decay" }
            ));
        }
        probes.push(SlowVariationProbe {
            lambda,
            deviations,
            ratio_at_last,
            far_deviation,
            decaying,
            passed,
        });
    }
    // Report the doubling ratio first: it is the most readable witness.
    if let Some(p) = probes.iter().find(|p| p.lambda == 2.0 && !p.passed) {
        witness = Some(format!(
            "phi(2r)/phi(r) = {} at r = {:e}",
            p.ratio_at_last,
            config.ladder.last().expect("non-empty ladder")
        ));
    }
    let consistent = bounded && probes.iter().all(|p| p.passed);
    Ok(ClassMReport { consistent, bounds, probes, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn screen(text: &str) -> ClassMReport {
        check_class_m(&FunctionParameter::parse(text).unwrap(), &ClassMConfig::default()).unwrap()
    }

    #[test]
    fn logarithmic_powers_are_consistent() {
        for text in ["1", "(1 + ln(r))^0.6", "(1 + ln(r))^-2", "(1 + ln(r))^3", "ln(e - 1 + ln(e - 1 + r))"] {
            let report = screen(text);
            assert!(report.consistent, "{text}: {report:?}");
        }
    }

    #[test]
    fn power_is_rejected_with_doubling_witness() {
        let report = screen("r^0.1");
        assert!(!report.consistent);
        let probe = report.probes.iter().find(|p| p.lambda == 2.0).unwrap();
        assert!((probe.ratio_at_last - 2f64.powf(0.1)).abs() < 1e-12);
        assert!(report.witness.unwrap().contains("phi(2r)/phi(r) = 1.07"));
    }

    #[test]
    fn small_powers_are_caught_by_the_trend() {
        let report = screen("r^0.02");
        assert!(!report.consistent);
        assert!(report.probes.iter().all(|p| !p.decaying));
    }

    #[test]
    fn bounds_are_reported() {
        let report = screen("(1 + ln(r))^2");
        let (d, sup, inv) = report.bounds[0];
        assert_eq!(d, 10.0);
        assert!((sup - (1.0 + 10f64.ln()).powi(2)).abs() < 1e-9);
        assert!((inv - 1.0).abs() < 1e-12);
    }
}
