use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use vandercert::vandermonde::{GlobalRecord, NodeRecord};
use vandercert::{analyze, AnalysisConfig, Limits, SearchConfig, StabilityReport};

use crate::emit::{sci, table, to_json};
use crate::error::{CliError, Result, EXIT_FAILURE};
use crate::input::parse_nodeset;

/// Requested total degree: a fixed `N`, or `auto` for `s − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Degree {
    Auto,
    Fixed(usize),
}

impl Degree {
    pub fn resolve(self, s: usize) -> usize {
        match self {
            Degree::Auto => s - 1,
            Degree::Fixed(n) => n,
        }
    }
}

impl FromStr for Degree {
    type Err = String;

    fn from_str(text: &str) -> std::result::Result<Self, String> {
        if text == "auto" {
            return Ok(Degree::Auto);
        }
        text.parse()
            .map(Degree::Fixed)
            .map_err(|_| format!("expected `auto` or a non-negative integer, got `{text}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeConfig {
    pub input: PathBuf,
    pub degree: Degree,
    pub budget: usize,
    pub seed: u64,
    pub max_nu: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl AnalyzeConfig {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        AnalyzeConfig {
            input: input.into(),
            degree: Degree::Auto,
            budget: SearchConfig::default().random_directions,
            seed: 0,
            max_nu: Limits::default().max_nu,
            format: Format::Json,
            output: None,
        }
    }

    pub fn analysis(&self) -> AnalysisConfig {
        analysis_config(self.budget, self.seed, self.max_nu)
    }
}

pub(crate) fn analysis_config(budget: usize, seed: u64, max_nu: usize) -> AnalysisConfig {
    AnalysisConfig {
        search: SearchConfig {
            random_directions: budget,
            seed,
            ..SearchConfig::default()
        },
        limits: Limits {
            max_nu,
            ..Limits::default()
        },
    }
}

/// The settings that determine a report, echoed into it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub input: String,
    pub degree_requested: Degree,
    pub degree: usize,
    pub budget: usize,
    pub seed: u64,
    pub max_nu: usize,
    pub search: SearchConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ConfigEcho,
    pub per_node: Vec<NodeRecord>,
    pub global: GlobalRecord,
    pub all_pass: bool,
    pub failures: Vec<String>,
}

impl Report {
    fn new(config: ConfigEcho, r: StabilityReport) -> Self {
        Report {
            config,
            per_node: r.per_node,
            global: r.global,
            all_pass: r.all_pass,
            failures: r.failures,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass {
            0
        } else {
            EXIT_FAILURE
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(to_json(self)?),
            Format::Table => Ok(self.to_table()),
        }
    }

    pub fn to_table(&self) -> String {
        let g = &self.global;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "n = {}  s = {}  N = {}  nu = {}  kappa_hat = {}  rank = {}  kernel = {}",
            g.n,
            g.s,
            g.degree,
            g.nu,
            sci(g.kappa_hat),
            g.rank,
            g.kernel_dim
        );
        out.push('\n');
        let rows: Vec<Vec<String>> = self
            .per_node
            .iter()
            .map(|p| {
                vec![
                    p.j.to_string(),
                    sci(p.delta_j),
                    if p.exact { "exact" } else { "search" }.into(),
                    sci(p.dist_bound),
                    sci(p.dist_lower_via_cj),
                    sci(p.dist_actual),
                    sci(p.sin_theta_bound),
                    sci(p.sin_theta_actual),
                    sci(p.qj_norm),
                    sci(p.qj_bound),
                ]
            })
            .collect();
        out.push_str(&table(
            &[
                "j",
                "delta",
                "kind",
                "dist_bound",
                "1/|c_j|",
                "dist",
                "sin_bound",
                "sin",
                "|Q_j|",
                "|Q_j|_bound",
            ],
            &rows,
        ));
        out.push('\n');
        let pair = |name: &str, actual: f64, bound: f64, lower: bool| {
            let ok = if lower {
                bound <= actual
            } else {
                actual <= bound
            };
            vec![
                name.to_string(),
                sci(actual),
                sci(bound),
                if ok { "ok" } else { "FAIL" }.into(),
            ]
        };
        let rows = vec![
            pair("sigma_min", g.sigma_min_actual, g.sigma_min_bound, true),
            pair("sigma_max", g.sigma_max_actual, g.sigma_max_bound, false),
            pair("cond", g.cond_actual, g.cond_bound, false),
            pair("|V+|", g.rinv_norm_actual, g.rinv_norm_bound, false),
            pair("|P|_inf", g.interpolant_norm, g.interpolant_bound, false),
        ];
        out.push_str(&table(&["quantity", "actual", "bound", "status"], &rows));
        let _ = writeln!(out, "\nall_pass = {}", self.all_pass);
        for f in &self.failures {
            let _ = writeln!(out, "failed: {f}");
        }
        out
    }
}

/// Reads, validates and certifies one node set.
pub fn analyze_document(document: &str, config: &AnalyzeConfig) -> Result<Report> {
    let nodes = parse_nodeset(document)?;
    let degree = config.degree.resolve(nodes.len());
    let analysis = config.analysis();
    let report = analyze(&nodes, degree, &analysis)?;
    let echo = ConfigEcho {
        input: config.input.display().to_string(),
        degree_requested: config.degree,
        degree,
        budget: config.budget,
        seed: config.seed,
        max_nu: config.max_nu,
        search: analysis.search,
    };
    Ok(Report::new(echo, report))
}

/// Runs `analyze` end to end, writing the rendered report to the output
/// path or returning it. The exit code is 0 iff every certificate holds.
pub fn run_analyze(config: &AnalyzeConfig) -> Result<(i32, String)> {
    let document = fs::read_to_string(&config.input).map_err(|source| CliError::Io {
        path: config.input.clone(),
        source,
    })?;
    let report = analyze_document(&document, config)?;
    let text = report.render(config.format)?;
    write_output_to(config.output.as_ref(), &text)?;
    Ok((report.exit_code(), text))
}

pub fn write_output_to(path: Option<&PathBuf>, text: &str) -> Result<()> {
    if let Some(path) = path {
        fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(())
}
