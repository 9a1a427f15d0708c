use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use vandercert::sampling::random_nodeset;
use vandercert::{analyze, Limits, StabilityReport};

use crate::analyze::{analysis_config, Format};
use crate::emit::{sci, table, to_json};
use crate::error::{CliError, Result, EXIT_FAILURE};

/// How each instance picks its degree from its node count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeRule {
    /// `N = s − 1 + k`.
    Offset(usize),
    Fixed(usize),
}

impl DegreeRule {
    pub fn degree(self, s: usize) -> usize {
        match self {
            DegreeRule::Offset(k) => s - 1 + k,
            DegreeRule::Fixed(n) => n,
        }
    }
}

impl FromStr for DegreeRule {
    type Err = String;

    /// `auto`, `auto+K` or a fixed `N`.
    fn from_str(text: &str) -> std::result::Result<Self, String> {
        let bad = || format!("expected `auto`, `auto+K` or an integer, got `{text}`");
        match text.strip_prefix("auto") {
            Some("") => Ok(DegreeRule::Offset(0)),
            Some(rest) => rest
                .strip_prefix('+')
                .and_then(|k| k.parse().ok())
                .map(DegreeRule::Offset)
                .ok_or_else(bad),
            None => text.parse().map(DegreeRule::Fixed).map_err(|_| bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub count: usize,
    pub s_min: usize,
    pub s_max: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub degree: DegreeRule,
    pub budget: usize,
    pub max_nu: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            count: 100,
            s_min: 2,
            s_max: 5,
            n_min: 1,
            n_max: 3,
            degree: DegreeRule::Offset(0),
            budget: 1024,
            max_nu: Limits::default().max_nu,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let limits = Limits::default();
        let fail = |msg: String| Err(CliError::Config(msg));
        if self.s_min < 2 || self.s_min > self.s_max || self.s_max > limits.max_nodes {
            return fail(format!(
                "node counts {}..={} must lie in 2..={}",
                self.s_min, self.s_max, limits.max_nodes
            ));
        }
        if self.n_min < 1 || self.n_min > self.n_max || self.n_max > limits.max_dim {
            return fail(format!(
                "dimensions {}..={} must lie in 1..={}",
                self.n_min, self.n_max, limits.max_dim
            ));
        }
        for s in self.s_min..=self.s_max {
            let degree = self.degree.degree(s);
            if degree + 1 < s {
                return fail(format!(
                    "degree {degree} is below s - 1 = {} for s = {s}",
                    s - 1
                ));
            }
            if degree > limits.max_degree {
                return fail(format!("degree {degree} exceeds {}", limits.max_degree));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFailure {
    pub index: usize,
    pub s: usize,
    pub n: usize,
    pub degree: usize,
    pub messages: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub config: SuiteConfig,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    /// Largest `bound/actual` (lower bounds) or `actual/bound` (upper bounds)
    /// per family; a value above one is a violation.
    pub worst_ratio: BTreeMap<String, f64>,
    pub failures: Vec<InstanceFailure>,
}

impl SuiteSummary {
    pub fn exit_code(&self) -> i32 {
        if self.failed == 0 {
            0
        } else {
            EXIT_FAILURE
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(to_json(self)?),
            Format::Table => {
                let mut out = format!("{}/{} instances pass\n\n", self.passed, self.instances);
                let rows: Vec<Vec<String>> = self
                    .worst_ratio
                    .iter()
                    .map(|(k, v)| vec![k.clone(), sci(*v)])
                    .collect();
                out.push_str(&table(&["family", "worst ratio"], &rows));
                for f in &self.failures {
                    let _ = writeln!(
                        out,
                        "instance {} (s={}, n={}, N={}):",
                        f.index, f.s, f.n, f.degree
                    );
                    for m in &f.messages {
                        let _ = writeln!(out, "  {m}");
                    }
                }
                Ok(out)
            }
        }
    }
}

fn ratios(r: &StabilityReport) -> Vec<(&'static str, f64)> {
    let g = &r.global;
    let mut out = vec![
        ("sigma_min", g.sigma_min_bound / g.sigma_min_actual),
        ("sigma_max", g.sigma_max_actual / g.sigma_max_bound),
        ("cond", g.cond_actual / g.cond_bound),
        ("right_inverse_norm", g.rinv_norm_actual / g.rinv_norm_bound),
        ("interpolant_norm", g.interpolant_norm / g.interpolant_bound),
    ];
    for p in &r.per_node {
        out.push(("dist_bound_vs_cj", p.dist_bound / p.dist_lower_via_cj));
        out.push(("cj_vs_dist", p.dist_lower_via_cj / p.dist_actual));
        out.push(("sin_theta", p.sin_theta_bound / p.sin_theta_actual));
        out.push(("qj_sharp", p.qj_norm / p.qj_sharp_bound));
        out.push(("qj_lemma", p.qj_norm / p.qj_bound));
    }
    out
}

/// Certifies `count` random node sets. Instance `k` draws from its own
/// stream of the seeded generator, so results do not depend on order.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteSummary> {
    config.validate()?;
    let analysis = analysis_config(config.budget, config.seed, config.max_nu);
    let mut summary = SuiteSummary {
        config: *config,
        instances: config.count,
        passed: 0,
        failed: 0,
        worst_ratio: BTreeMap::new(),
        failures: Vec::new(),
    };
    for index in 0..config.count {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(index as u64);
        let s = rng.gen_range(config.s_min..=config.s_max);
        let n = rng.gen_range(config.n_min..=config.n_max);
        let degree = config.degree.degree(s);
        let nodes = random_nodeset(&mut rng, s, n);
        let messages = match analyze(&nodes, degree, &analysis) {
            Ok(report) => {
                for (family, ratio) in ratios(&report) {
                    let slot = summary.worst_ratio.entry(family.to_string()).or_insert(0.0);
                    *slot = slot.max(ratio);
                }
                report.failures
            }
            Err(e) => vec![format!("analysis error: {e}")],
        };
        if messages.is_empty() {
            summary.passed += 1;
        } else {
            summary.failed += 1;
            summary.failures.push(InstanceFailure {
                index,
                s,
                n,
                degree,
                messages,
            });
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_rules() {
        assert_eq!("auto".parse::<DegreeRule>().unwrap(), DegreeRule::Offset(0));
        assert_eq!(
            "auto+2".parse::<DegreeRule>().unwrap(),
            DegreeRule::Offset(2)
        );
        assert_eq!("5".parse::<DegreeRule>().unwrap(), DegreeRule::Fixed(5));
        assert!("auto-1".parse::<DegreeRule>().is_err());
        assert_eq!(DegreeRule::Offset(2).degree(4), 5);
    }

    #[test]
    fn empty_suite() {
        let s = run_suite(&SuiteConfig {
            count: 0,
            ..SuiteConfig::default()
        })
        .unwrap();
        assert_eq!((s.instances, s.passed, s.exit_code()), (0, 0, 0));
        assert!(s.worst_ratio.is_empty());
    }

    #[test]
    fn low_fixed_degree_is_rejected() {
        let cfg = SuiteConfig {
            degree: DegreeRule::Fixed(2),
            ..SuiteConfig::default()
        };
        assert!(matches!(run_suite(&cfg), Err(CliError::Config(_))));
        let cfg = SuiteConfig {
            s_min: 1,
            ..SuiteConfig::default()
        };
        assert!(run_suite(&cfg).is_err());
    }

    #[test]
    fn default_suite_passes_and_is_deterministic() {
        let cfg = SuiteConfig::default();
        let a = run_suite(&cfg).unwrap();
        assert_eq!(a.passed, 100, "{:?}", a.failures);
        assert!(a.worst_ratio.values().all(|&r| r <= 1.0 + 1e-9));
        assert_eq!(run_suite(&cfg).unwrap(), a);
    }
}
