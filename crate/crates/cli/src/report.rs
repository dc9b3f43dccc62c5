use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of a single check or section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
    Error,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Skipped => "SKIPPED",
            Verdict::Error => "ERROR",
        }
    }
}

/// Typed report value. Non-finite reals are stored as text so the JSON
/// form stays parseable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    Bool(bool),
    Int(i64),
    Real(f64),
    Text(String),
    Complex { re: f64, im: f64 },
    Vector(Vec<f64>),
    List(Vec<Value>),
}

impl Value {
    pub fn real(v: f64) -> Value {
        if v.is_finite() {
            Value::Real(v)
        } else {
            Value::Text(format!("{v}"))
        }
    }

    pub fn complex(z: num_complex::Complex64) -> Value {
        if z.re.is_finite() && z.im.is_finite() {
            Value::Complex { re: z.re, im: z.im }
        } else {
            Value::Text(format!("{z}"))
        }
    }

    pub fn vector(v: &[f64]) -> Value {
        if v.iter().all(|x| x.is_finite()) {
            Value::Vector(v.to_vec())
        } else {
            Value::List(v.iter().map(|&x| Value::real(x)).collect())
        }
    }

    pub fn text(s: impl Into<String>) -> Value {
        Value::Text(s.into())
    }

    fn render(&self) -> String {
        match self {
            Value::Bool(b) => b.to_string(),
            Value::Int(i) => i.to_string(),
            Value::Real(r) => real(*r),
            Value::Text(s) => s.clone(),
            Value::Complex { re, im } => format!("{} {} {}i", real(*re), if *im < 0.0 { "-" } else { "+" }, real(im.abs())),
            Value::Vector(v) => format!("[{}]", v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", ")),
            Value::List(v) => format!("[{}]", v.iter().map(Value::render).collect::<Vec<_>>().join(", ")),
        }
    }
}

fn real(r: f64) -> String {
    if r == 0.0 || (1e-3..1e6).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub key: String,
    pub value: Value,
}

impl Entry {
    pub fn new(key: impl Into<String>, value: Value) -> Self {
        Entry { key: key.into(), value }
    }
}

/// One judged quantity with the threshold it was compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub measured: Value,
    /// How `measured` was compared, e.g. `"> delta_floor"`.
    pub criterion: String,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub details: Vec<Entry>,
    pub reasons: Vec<String>,
}

impl Section {
    pub fn new(name: impl Into<String>, verdict: Verdict) -> Self {
        Section { name: name.into(), verdict, checks: Vec::new(), details: Vec::new(), reasons: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub verdict: Verdict,
    pub exit_code: i32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    /// SHA-256 of the input file or argument text.
    pub input_digest: String,
    /// Every tolerance and sampling setting in effect, defaults included.
    pub settings: Vec<Entry>,
    pub sections: Vec<Section>,
    pub unchecked_hypotheses: Vec<String>,
    pub summary: Summary,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} :: {}", self.tool, self.tool_version, self.command);
        let _ = writeln!(out, "input sha256 {}", self.input_digest);
        for section in &self.sections {
            let _ = writeln!(out);
            let _ = writeln!(out, "[{}] {}", section.verdict.label(), section.name);
            for c in &section.checks {
                let tol = c.tolerance.map(|t| format!(" (tolerance {t:e})")).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "  {:<12} {}: {} {}{tol}",
                    c.verdict.label(),
                    c.name,
                    c.measured.render(),
                    c.criterion
                );
            }
            for e in &section.details {
                let _ = writeln!(out, "  {} = {}", e.key, e.value.render());
            }
            for r in &section.reasons {
                let _ = writeln!(out, "  - {r}");
            }
        }
        if !self.unchecked_hypotheses.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "not checked:");
            for h in &self.unchecked_hypotheses {
                let _ = writeln!(out, "  - {h}");
            }
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "settings:");
        for e in &self.settings {
            let _ = writeln!(out, "  {} = {}", e.key, e.value.render());
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "overall: {} (exit {}) {}",
            self.summary.verdict.label(),
            self.summary.exit_code,
            self.summary.message
        );
        out
    }
}
