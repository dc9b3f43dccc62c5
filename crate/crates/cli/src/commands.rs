use std::path::Path;

use parabolic_core::hormander::{
    check_class_m, dini_integral, dini_settings, norm_full_space, AnisoGridFunction, ClassMConfig, DiniMethod,
    DiniVerdict, FunctionParameter, SpaceTag, TimeSupport, EDGE_DECAY_TOLERANCE,
};
use parabolic_core::parabolicity::{check_parabolicity, CheckConfig, ParabolicityReport};
use parabolic_core::regularity::{
    check_theorem_hypotheses, classify_solution, format_sigma, sigma_to_f64, sigma_thresholds, Overall,
    DECISION_NOTES,
};
use parabolic_core::Error;
use sha2::{Digest, Sha256};

use crate::report::{Check, Entry, ReportDocument, Section, Summary, Value, Verdict, SCHEMA_VERSION};
use crate::spec_file::{parse_problem, SpecFile};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Overrides shared by all subcommands.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommonOptions {
    pub delta1: Option<f64>,
    /// Number of unit `xi` directions per sample point.
    pub samples: Option<usize>,
    /// `key=value` tolerance overrides.
    pub tolerances: Vec<(String, f64)>,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

struct Builder {
    command: String,
    input_digest: String,
    settings: Vec<Entry>,
    sections: Vec<Section>,
    unchecked: Vec<String>,
}

impl Builder {
    fn new(command: String, input: &[u8]) -> Self {
        Builder { command, input_digest: digest(input), settings: Vec::new(), sections: Vec::new(), unchecked: Vec::new() }
    }

    fn finish(self, verdict: Verdict, exit_code: i32, message: impl Into<String>) -> ReportDocument {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            tool: "parabolic".into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: self.command,
            input_digest: self.input_digest,
            settings: self.settings,
            sections: self.sections,
            unchecked_hypotheses: self.unchecked,
            summary: Summary { verdict, exit_code, message: message.into() },
        }
    }

    fn fail_with(self, err: &Error) -> ReportDocument {
        let code = exit_code_for(err);
        let verdict = if code == EXIT_INPUT { Verdict::Error } else { Verdict::Inconclusive };
        self.finish(verdict, code, err.to_string())
    }
}

pub fn exit_code_for(err: &Error) -> i32 {
    if err.is_numerical() {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_INPUT
    }
}

fn verdict(passed: bool) -> Verdict {
    if passed {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn apply_overrides(config: &mut CheckConfig, opts: &CommonOptions) -> Result<(), String> {
    if let Some(n) = opts.samples {
        if n == 0 {
            return Err("--samples must be positive".into());
        }
        config.xi_directions = n;
    }
    for (key, value) in &opts.tolerances {
        let slot = match key.as_str() {
            "delta_floor" => &mut config.delta_floor,
            "im_floor" => &mut config.im_floor,
            "rank_tol" => &mut config.rank_tol,
            "cluster_tol" => &mut config.cluster_tol,
            other => {
                return Err(format!(
                    "unknown tolerance `{other}` (delta_floor, im_floor, rank_tol, cluster_tol)"
                ))
            }
        };
        if !(value.is_finite() && *value > 0.0) {
            return Err(format!("tolerance {key} = {value} must be positive"));
        }
        *slot = *value;
    }
    Ok(())
}

fn check_settings(config: &CheckConfig, delta1: Option<f64>, spec: &SpecFile) -> Vec<Entry> {
    vec![
        Entry::new("domain", Value::text(spec.domain.clone())),
        Entry::new("interior_samples", Value::Int(spec.problem.interior_samples().len() as i64)),
        Entry::new("boundary_samples", Value::Int(spec.problem.boundary_samples().len() as i64)),
        Entry::new("xi_directions", Value::Int(config.xi_directions as i64)),
        Entry::new("tangent_directions", Value::Int(config.tangent_directions as i64)),
        Entry::new("arc_points", Value::Int(config.arc_points as i64)),
        Entry::new("pure_p_points", Value::Int(config.pure_p_points as i64)),
        Entry::new("delta_floor", Value::real(config.delta_floor)),
        Entry::new("im_floor", Value::real(config.im_floor)),
        Entry::new("rank_tol", Value::real(config.rank_tol)),
        Entry::new("cluster_tol", Value::real(config.cluster_tol)),
        Entry::new(
            "delta1",
            delta1.map_or_else(|| Value::text("delta_estimate / 2"), Value::real),
        ),
    ]
}

fn load(path: &Path) -> Result<(String, Vec<u8>), String> {
    let bytes = std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| format!("{} is not UTF-8", path.display()))?;
    Ok((text, bytes))
}

fn file_label(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |f| f.to_string_lossy().into_owned())
}

const SAMPLING_CAVEAT: &str = "conditions are evaluated at sampled points only; a pass is evidence, not proof";
const SMOOTHNESS_CAVEAT: &str = "coefficients are assumed infinitely smooth; only their sampled values are used";

pub fn check_parabolic(path: &Path, opts: &CommonOptions) -> ReportDocument {
    let mut b = Builder::new(format!("check-parabolic {}", file_label(path)), &[]);
    let (text, bytes) = match load(path) {
        Ok(v) => v,
        Err(m) => return b.finish(Verdict::Error, EXIT_INPUT, m),
    };
    b.input_digest = digest(&bytes);
    let spec = match parse_problem(&text) {
        Ok(s) => s,
        Err(e) => return b.finish(Verdict::Error, EXIT_INPUT, e.to_string()),
    };
    let mut config = spec.options.check.clone();
    if let Err(m) = apply_overrides(&mut config, opts) {
        return b.finish(Verdict::Error, EXIT_INPUT, m);
    }
    let delta1 = opts.delta1.or(spec.options.delta1);
    b.settings = check_settings(&config, delta1, &spec);
    b.unchecked = vec![
        SMOOTHNESS_CAVEAT.into(),
        SAMPLING_CAVEAT.into(),
        "condition (iii) is checked for the one reported delta1; a smaller delta1 gives a larger set of p to cover".into(),
    ];
    b.unchecked.extend(spec.problem.warnings().iter().cloned());
    match check_parabolicity(&spec.problem, &config, delta1) {
        Ok(report) => {
            b.sections = parabolicity_sections(&report, &config);
            let code = if report.passed { EXIT_PASS } else { EXIT_FAIL };
            let message = if report.passed {
                "all parabolicity conditions hold at the sampled points".to_string()
            } else {
                let failed: Vec<&str> = b.sections.iter().filter(|s| s.verdict == Verdict::Fail).map(|s| s.name.as_str()).collect();
                format!("not satisfied: {}", failed.join(", "))
            };
            b.finish(verdict(report.passed), code, message)
        }
        Err(e) => b.fail_with(&e),
    }
}

fn parabolicity_sections(report: &ParabolicityReport, config: &CheckConfig) -> Vec<Section> {
    let c1 = &report.condition_i;
    let mut s1 = Section::new("condition (i): Re p <= -delta |xi|^{2b}", verdict(c1.passed));
    s1.checks.push(Check {
        name: "delta_estimate".into(),
        verdict: verdict(c1.passed),
        measured: Value::real(c1.delta_estimate),
        criterion: "> delta_floor".into(),
        tolerance: Some(c1.delta_floor),
    });
    s1.details = vec![
        Entry::new("samples_checked", Value::Int(c1.samples_checked as i64)),
        Entry::new("witness.x", Value::vector(&c1.worst_witness.x)),
        Entry::new("witness.t", Value::real(c1.worst_witness.t)),
        Entry::new("witness.xi", Value::vector(&c1.worst_witness.xi)),
        Entry::new("witness.root", Value::complex(c1.worst_witness.root)),
    ];
    if !c1.passed {
        s1.reasons.push(format!(
            "root p = {:.6} {:+.6}i at x = {:?}, t = {}, xi = {:?} has Re p = {:e}",
            c1.worst_witness.root.re,
            c1.worst_witness.root.im + 0.0, c1.worst_witness.x, c1.worst_witness.t, c1.worst_witness.xi, c1.worst_witness.root.re
        ));
    }

    let c2 = &report.condition_ii;
    let mut s2 = Section::new("condition (ii): pure-time coefficients", verdict(c2.passed));
    s2.checks.push(Check {
        name: "max |a_jk^{(0, kappa_k)} - delta_jk|".into(),
        verdict: verdict(c2.passed),
        measured: Value::Int(c2.violations.len() as i64),
        criterion: "violations at tolerance".into(),
        tolerance: Some(c2.tolerance),
    });
    for v in c2.violations.iter().take(8) {
        s2.reasons.push(format!(
            "entry ({}, {}) at x = {:?}, t = {} is {} (expected {})",
            v.row, v.col, v.x, v.t, v.value, v.expected
        ));
    }

    let s3 = match &report.condition_iii {
        None => {
            let mut s = Section::new("condition (iii): covering", Verdict::Skipped);
            s.reasons.push("skipped because condition (i) failed".into());
            s
        }
        Some(c3) => {
            let mut s = Section::new("condition (iii): covering", verdict(c3.passed));
            s.checks.push(Check {
                name: "min sigma_m / sigma_1 of reduced boundary rows".into(),
                verdict: verdict(c3.passed),
                measured: Value::real(c3.min_rank_margin),
                criterion: "> rank_tol".into(),
                tolerance: Some(config.rank_tol),
            });
            s.details = vec![
                Entry::new("delta1", Value::real(c3.delta1)),
                Entry::new("samples_checked", Value::Int(c3.samples_checked as i64)),
                Entry::new("witness.x", Value::vector(&c3.worst_witness.x)),
                Entry::new("witness.t", Value::real(c3.worst_witness.t)),
                Entry::new("witness.xi", Value::vector(&c3.worst_witness.xi)),
                Entry::new("witness.p", Value::complex(c3.worst_witness.p)),
                Entry::new("witness.rank", Value::Int(c3.worst_witness.rank as i64)),
            ];
            if !c3.passed {
                s.reasons.push(format!(
                    "rank {} < m at x = {:?}, t = {}, xi = {:?}, p = {}",
                    c3.worst_witness.rank, c3.worst_witness.x, c3.worst_witness.t, c3.worst_witness.xi, c3.worst_witness.p
                ));
            }
            s
        }
    };
    vec![s1, s2, s3]
}

pub fn check_regularity(path: &Path, opts: &CommonOptions) -> ReportDocument {
    let mut b = Builder::new(format!("check-regularity {}", file_label(path)), &[]);
    let (text, bytes) = match load(path) {
        Ok(v) => v,
        Err(m) => return b.finish(Verdict::Error, EXIT_INPUT, m),
    };
    b.input_digest = digest(&bytes);
    let spec = match parse_problem(&text) {
        Ok(s) => s,
        Err(e) => return b.finish(Verdict::Error, EXIT_INPUT, e.to_string()),
    };
    if let Err(m) = apply_overrides(&mut spec.options.check.clone(), opts) {
        return b.finish(Verdict::Error, EXIT_INPUT, m);
    }
    b.settings = class_m_settings();
    b.settings.extend(dini_settings().into_iter().map(|(k, v)| Entry::new(k, Value::real(v))));
    b.unchecked = vec![
        "parabolicity conditions (i)-(iii) are not checked by this command; run check-parabolic".into(),
        "epsilon in the collars S_eps and G_eps is existential and never computed".into(),
    ];
    b.unchecked.extend(DECISION_NOTES.iter().map(|s| s.to_string()));

    let mut claims = Section::new("claims (assumed)", Verdict::Skipped);
    for c in &spec.claims {
        claims.details.push(Entry::new(
            format!("{} on {}", c.target, c.region),
            Value::text(format!("sigma = {}, phi = {}", format_sigma(c.sigma), c.phi)),
        ));
    }

    let th = sigma_thresholds(&spec.problem);
    let mut thresholds = Section::new(
        "sigma thresholds",
        verdict(th.sigma2_gt_sigma0 && th.sigma3_gt_sigma0),
    );
    for (name, value) in [("sigma0", th.sigma0), ("sigma1", th.sigma1), ("sigma2", th.sigma2), ("sigma3", th.sigma3)] {
        thresholds.details.push(Entry::new(name, Value::text(format_sigma(value))));
    }
    for (name, holds, lhs) in [("sigma2 > sigma0", th.sigma2_gt_sigma0, th.sigma2), ("sigma3 > sigma0", th.sigma3_gt_sigma0, th.sigma3)] {
        thresholds.checks.push(Check {
            name: name.into(),
            verdict: verdict(holds),
            measured: Value::real(sigma_to_f64(lhs)),
            criterion: format!("> {} (exact rational comparison)", format_sigma(th.sigma0)),
            tolerance: None,
        });
    }

    let hyp = match check_theorem_hypotheses(&spec.problem, &spec.claims) {
        Ok(h) => h,
        Err(e) => return b.fail_with(&e),
    };
    let verdict_c = match classify_solution(&spec.problem, &spec.claims) {
        Ok(v) => v,
        Err(e) => return b.fail_with(&e),
    };

    let mut hypotheses = Section::new("theorem hypotheses", verdict(hyp.passed));
    for (label, choice) in ["phi1", "phi2", "phi3"].iter().zip(&hyp.phi_choices) {
        hypotheses.details.push(Entry::new(
            *label,
            Value::text(choice.as_ref().map_or_else(|| "none (group fails)".to_string(), |c| c.to_string())),
        ));
    }
    hypotheses.reasons = hyp.failures.clone();

    let classical = verdict_c.overall == Overall::GuaranteedClassical;
    let mut classification = Section::new(format!("classification: {}", verdict_c.overall.label()), verdict(classical));
    for d in &verdict_c.details {
        classification.checks.push(Check {
            name: format!("u{} condition ({}) on {}", d.component + 1, d.condition, d.region),
            verdict: verdict(d.passed),
            measured: d.budget.map_or_else(|| Value::text("none"), |p| Value::Int(p as i64)),
            criterion: format!("p_max >= {} (exact integer comparison)", d.required),
            tolerance: None,
        });
    }
    classification.reasons = verdict_c.failed.clone();

    b.sections = vec![claims, thresholds, hypotheses, classification];
    let passed = hyp.passed && classical;
    let message = if passed {
        "generalized solutions with the claimed right-hand sides are classical".to_string()
    } else {
        let mut reasons = hyp.failures.clone();
        reasons.extend(verdict_c.failed.iter().cloned());
        reasons.join("; ")
    };
    b.finish(verdict(passed), if passed { EXIT_PASS } else { EXIT_FAIL }, message)
}

fn class_m_settings() -> Vec<Entry> {
    let c = ClassMConfig::default();
    vec![
        Entry::new("class_m.boundedness_ranges", Value::vector(&c.boundedness_ranges)),
        Entry::new("class_m.boundedness_points", Value::Int(c.boundedness_points as i64)),
        Entry::new("class_m.lambdas", Value::vector(&c.lambdas)),
        Entry::new("class_m.ladder", Value::vector(&c.ladder)),
        Entry::new("class_m.ratio_tolerance", Value::real(c.ratio_tolerance)),
        Entry::new("class_m.far_log_radius", Value::real(c.far_log_radius)),
        Entry::new("class_m.far_tolerance", Value::real(c.far_tolerance)),
    ]
}

pub fn norm(path: &Path, s: f64, gamma: f64, phi: &str) -> ReportDocument {
    let mut b = Builder::new(
        format!("norm {} --s {s} --gamma {gamma} --phi {phi}", file_label(path)),
        &[],
    );
    let (text, bytes) = match load(path) {
        Ok(v) => v,
        Err(m) => return b.finish(Verdict::Error, EXIT_INPUT, m),
    };
    b.input_digest = digest(&bytes);
    b.settings = vec![
        Entry::new("s", Value::real(s)),
        Entry::new("gamma", Value::real(gamma)),
        Entry::new("phi", Value::text(phi)),
        Entry::new("edge_decay_tolerance", Value::real(EDGE_DECAY_TOLERANCE)),
    ];
    b.settings.extend(class_m_settings());
    b.unchecked = vec![
        "the spectrum is the DFT of the samples; aliasing above the grid Nyquist frequency is not estimated".into(),
    ];
    let result = FunctionParameter::parse(phi)
        .and_then(|p| SpaceTag::new(s, gamma, p))
        .and_then(|tag| AnisoGridFunction::parse(&text).map(|g| (tag, g)))
        .and_then(|(tag, grid)| norm_full_space(&grid, &tag).map(|v| (v, grid)));
    match result {
        Ok((value, grid)) => {
            let mut section = Section::new("full-space norm", Verdict::Pass);
            section.checks.push(Check {
                name: "largest edge sample / largest sample".into(),
                verdict: Verdict::Pass,
                measured: Value::text("within tolerance"),
                criterion: "<= edge_decay_tolerance".into(),
                tolerance: Some(EDGE_DECAY_TOLERANCE),
            });
            section.details = vec![
                Entry::new("norm", Value::real(value)),
                Entry::new("extents", Value::Vector(grid.extents().iter().map(|&e| e as f64).collect())),
                Entry::new("spacing", Value::vector(grid.spacing())),
            ];
            if grid.support() == TimeSupport::NonNegativeTime {
                section.reasons.push(
                    "samples vanish for t < 0: the value is the extension-by-zero norm, an upper bound for the norm over extensions supported in t >= 0".into(),
                );
            }
            b.sections.push(section);
            b.finish(Verdict::Pass, EXIT_PASS, format!("norm = {value:e}"))
        }
        Err(e) => b.fail_with(&e),
    }
}

pub fn phi_check(phi_arg: &str, theta_form: bool) -> ReportDocument {
    let command = format!("phi-check --phi {phi_arg}{}", if theta_form { " --theta-form" } else { "" });
    let mut b = Builder::new(command, phi_arg.as_bytes());
    b.settings = vec![Entry::new("theta_form", Value::Bool(theta_form))];
    b.settings.extend(class_m_settings());
    b.settings.extend(dini_settings().into_iter().map(|(k, v)| Entry::new(k, Value::real(v))));
    b.unchecked = vec!["class-M membership is screened on finitely many radii; the verdict is heuristic".into()];
    let phi = if theta_form {
        match phi_arg.trim().parse::<f64>() {
            Ok(theta) if theta.is_finite() => Ok(FunctionParameter::log_power(theta)),
            _ => Err(Error::Input(format!("--theta-form expects a number, got `{phi_arg}`"))),
        }
    } else {
        FunctionParameter::parse(phi_arg)
    };
    let phi = match phi {
        Ok(p) => p,
        Err(e) => return b.fail_with(&e),
    };
    let config = ClassMConfig::default();
    let screen = match check_class_m(&phi, &config) {
        Ok(s) => s,
        Err(e) => return b.fail_with(&e),
    };
    let dini = match dini_integral(&phi) {
        Ok(d) => d,
        Err(e) => return b.fail_with(&e),
    };

    let mut m = Section::new(format!("class M screen: {}", screen.verdict_label()), verdict(screen.consistent));
    for (d, sup, inv) in &screen.bounds {
        m.details.push(Entry::new(format!("sup phi on [1, {d}]"), Value::real(*sup)));
        m.details.push(Entry::new(format!("sup 1/phi on [1, {d}]"), Value::real(*inv)));
    }
    for probe in &screen.probes {
        m.checks.push(Check {
            name: format!("phi({} r)/phi(r) at r = {:e}", probe.lambda, config.ladder.last().copied().unwrap_or(0.0)),
            verdict: verdict(probe.passed),
            measured: Value::real(probe.ratio_at_last),
            criterion: format!(
                "|ratio - 1| < tolerance or far deviation {:e} < {:e}; deviation decaying: {}",
                probe.far_deviation, config.far_tolerance, probe.decaying
            ),
            tolerance: Some(config.ratio_tolerance),
        });
    }
    if let Some(w) = &screen.witness {
        m.reasons.push(format!("witness: {w}"));
    }

    let dini_verdict = match dini.verdict {
        DiniVerdict::Converges => Verdict::Pass,
        DiniVerdict::Diverges => Verdict::Fail,
        DiniVerdict::Inconclusive => Verdict::Inconclusive,
    };
    let mut d = Section::new("Dini integral of dr / (r phi(r)^2) over [1, inf)", dini_verdict);
    let method = match dini.method {
        DiniMethod::ClosedForm => "closed_form",
        DiniMethod::Numeric => "numeric",
    };
    let (criterion, tolerance) = match dini.method {
        DiniMethod::ClosedForm => ("closed form for c (1 + ln r)^theta: converges iff theta > 1/2".to_string(), None),
        DiniMethod::Numeric => ("fitted dyadic block ratio < convergent_ratio".to_string(), Some(0.95)),
    };
    d.checks.push(Check {
        name: "verdict".into(),
        verdict: dini_verdict,
        measured: dini.block_ratio.map_or_else(|| Value::text(method), Value::real),
        criterion,
        tolerance,
    });
    if let Some(v) = dini.value {
        d.details.push(Entry::new("value", Value::real(v)));
    }
    d.details.push(Entry::new("method", Value::text(method)));
    d.details.push(Entry::new("blocks", Value::Int(dini.blocks.len() as i64)));
    match dini.verdict {
        DiniVerdict::Diverges => d.reasons.push("Dini integral diverges".into()),
        DiniVerdict::Inconclusive => d.reasons.push("block contributions neither decay geometrically nor stall".into()),
        DiniVerdict::Converges => {}
    }
    b.sections = vec![m, d];

    let (overall, code, message) = if !screen.consistent {
        (Verdict::Fail, EXIT_FAIL, format!("φ = {phi} violates class M (heuristic)"))
    } else {
        match dini.verdict {
            DiniVerdict::Converges => (Verdict::Pass, EXIT_PASS, format!("φ = {phi}: class M (heuristic) and Dini integral converges")),
            DiniVerdict::Diverges => (Verdict::Fail, EXIT_FAIL, format!("φ = {phi}: Dini integral diverges")),
            DiniVerdict::Inconclusive => (Verdict::Inconclusive, EXIT_INCONCLUSIVE, format!("φ = {phi}: Dini test inconclusive")),
        }
    };
    b.finish(overall, code, message)
}
