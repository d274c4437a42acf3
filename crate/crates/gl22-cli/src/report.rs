use gl22::limits::ConvergenceReport;
use gl22::numeric::Tolerance;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// residual ≤ threshold
    AtMost,
    /// residual ≥ threshold
    AtLeast,
    /// residual = threshold
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// `None` when the check could not be evaluated (see `error`)
    pub residual: Option<f64>,
    pub threshold: f64,
    pub comparison: Comparison,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, threshold: f64, comparison: Comparison) -> Self {
        let pass = residual.is_finite()
            && match comparison {
                Comparison::AtMost => residual <= threshold,
                Comparison::AtLeast => residual >= threshold,
                Comparison::Equal => residual == threshold,
            };
        Check {
            name: name.into(),
            residual: residual.is_finite().then_some(residual),
            threshold,
            comparison,
            pass,
            error: (!residual.is_finite()).then(|| "non-finite residual".to_string()),
        }
    }

    pub fn at_most(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Check::new(name, residual, threshold, Comparison::AtMost)
    }

    pub fn failed(name: impl Into<String>, threshold: f64, err: impl ToString) -> Self {
        Check { name: name.into(), residual: None, threshold, comparison: Comparison::AtMost, pass: false, error: Some(err.to_string()) }
    }

    /// Evaluate a fallible residual; errors become failed checks.
    pub fn eval(name: impl Into<String>, threshold: f64, r: gl22::Result<f64>) -> Self {
        match r {
            Ok(v) => Check::at_most(name, v, threshold),
            Err(e) => Check::failed(name, threshold, e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub convergence: Vec<ConvergenceReport>,
}

impl SuiteResult {
    pub fn new(suite: &str) -> Self {
        SuiteResult { suite: suite.to_string(), checks: vec![], convergence: vec![] }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: Tolerance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub environment: Environment,
    pub suites: Vec<SuiteResult>,
    pub pass: bool,
}

impl Report {
    pub fn new(environment: Environment, suites: Vec<SuiteResult>) -> Self {
        let pass = suites.iter().all(SuiteResult::pass);
        Report { schema: SCHEMA, environment, suites, pass }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serialisable") + "\n"
    }

    /// One row per check.
    pub fn to_csv(&self) -> crate::CliResult<String> {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(["suite", "check", "residual", "threshold", "comparison", "pass"])?;
        for s in &self.suites {
            for c in &s.checks {
                let cmp = match c.comparison {
                    Comparison::AtMost => "<=",
                    Comparison::AtLeast => ">=",
                    Comparison::Equal => "==",
                };
                let res = c.residual.map(|r| r.to_string()).unwrap_or_default();
                w.write_record([s.suite.as_str(), &c.name, &res, &c.threshold.to_string(), cmp, &c.pass.to_string()])?;
            }
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
    }
}
