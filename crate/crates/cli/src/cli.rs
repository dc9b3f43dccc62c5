use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, CommonOptions, EXIT_INPUT};
use crate::report::ReportDocument;

#[derive(Debug, Parser)]
#[command(name = "parabolic", version, about = "Checks parabolicity and classical regularity of parabolic boundary problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check conditions (i)-(iii) on the sampled points of a spec file.
    CheckParabolic {
        spec: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Decide whether generalized solutions are classical under the spec's claims.
    CheckRegularity {
        spec: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Spectral norm of a grid function in the anisotropic Hormander space.
    Norm {
        grid: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value = "1")]
        phi: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Screen a function parameter for class M and run the Dini test.
    PhiCheck {
        #[arg(long, allow_negative_numbers = true)]
        phi: String,
        /// Read `--phi` as the exponent theta of (1 + ln r)^theta.
        #[arg(long)]
        theta_form: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args, Clone, Default)]
pub struct CommonArgs {
    /// Covering parameter delta1, overriding the spec and the delta/2 default.
    #[arg(long)]
    pub delta1: Option<f64>,
    /// Unit xi directions per sample point.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Tolerance override `key=value`; keys delta_floor, im_floor, rank_tol, cluster_tol.
    #[arg(long = "tolerance", value_parser = parse_key_value)]
    pub tolerances: Vec<(String, f64)>,
    /// Also write the JSON report to this path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Print the JSON report instead of the human-readable one.
    #[arg(long)]
    pub machine: bool,
}

fn parse_key_value(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

/// Result of one invocation, separated from process I/O for testing.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<ReportDocument>,
}

pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return RunOutput { exit_code: code, stdout, stderr, report: None };
        }
    };
    let (doc, common) = match cli.command {
        Command::CheckParabolic { spec, common } => (commands::check_parabolic(&spec, &options(&common)), common),
        Command::CheckRegularity { spec, common } => (commands::check_regularity(&spec, &options(&common)), common),
        Command::Norm { grid, s, gamma, phi, common } => (commands::norm(&grid, s, gamma, &phi), common),
        Command::PhiCheck { phi, theta_form, common } => (commands::phi_check(&phi, theta_form), common),
    };
    let json = doc.to_json();
    let mut stderr = String::new();
    if let Some(path) = &common.report {
        if let Err(e) = std::fs::write(path, &json) {
            stderr = format!("cannot write report to {}: {e}\n", path.display());
            return RunOutput { exit_code: EXIT_INPUT, stdout: String::new(), stderr, report: Some(doc) };
        }
    }
    let stdout = if common.machine { json } else { doc.to_human() };
    if doc.summary.exit_code == EXIT_INPUT {
        stderr = format!("error: {}\n", doc.summary.message);
    }
    RunOutput { exit_code: doc.summary.exit_code, stdout, stderr, report: Some(doc) }
}

fn options(common: &CommonArgs) -> CommonOptions {
    CommonOptions { delta1: common.delta1, samples: common.samples, tolerances: common.tolerances.clone() }
}
