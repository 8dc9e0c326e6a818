use crate::config::SuiteConfig;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    /// Residual must stay at or below the tolerance.
    Pass,
    /// Residual must exceed the tolerance; the check passes when it does.
    ExpectedFail,
    /// Reported only.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// Short name of the relation being checked.
    pub reference: String,
    pub params: Option<[f64; 3]>,
    /// Absent when the residual is not finite.
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub expect: Expect,
    pub pass: bool,
    pub status: String,
}

impl CheckRecord {
    pub fn check(name: impl Into<String>, reference: &str, params: Option<[f64; 3]>, residual: f64, tolerance: f64) -> Self {
        Self::build(name.into(), reference, params, residual, Some(tolerance), Expect::Pass)
    }

    pub fn expect_fail(name: impl Into<String>, reference: &str, params: Option<[f64; 3]>, residual: f64, tolerance: f64) -> Self {
        Self::build(name.into(), reference, params, residual, Some(tolerance), Expect::ExpectedFail)
    }

    pub fn info(name: impl Into<String>, reference: &str, params: Option<[f64; 3]>, value: f64) -> Self {
        Self::build(name.into(), reference, params, value, None, Expect::Info)
    }

    /// A check that could not be evaluated counts as failed.
    pub fn error(name: impl Into<String>, reference: &str, params: Option<[f64; 3]>, message: String) -> Self {
        CheckRecord {
            name: name.into(),
            reference: reference.into(),
            params,
            residual: None,
            tolerance: None,
            expect: Expect::Pass,
            pass: false,
            status: format!("error: {message}"),
        }
    }

    fn build(name: String, reference: &str, params: Option<[f64; 3]>, residual: f64, tolerance: Option<f64>, expect: Expect) -> Self {
        let (pass, status) = match (expect, tolerance) {
            (Expect::Pass, Some(t)) => {
                let ok = residual <= t;
                (ok, if ok { "pass" } else { "fail" }.to_string())
            }
            (Expect::ExpectedFail, Some(t)) => {
                let ok = residual > t;
                (ok, format!("expected-fail: {}", if ok { "pass" } else { "fail" }))
            }
            _ => (true, "info".to_string()),
        };
        let residual = Some(residual).filter(|r| r.is_finite());
        CheckRecord { name, reference: reference.into(), params, residual, tolerance, expect, pass, status }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub records: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteResult {
    pub fn new(suite: &str, records: Vec<CheckRecord>) -> Self {
        let failed = records.iter().filter(|r| !r.pass).count();
        SuiteResult { suite: suite.into(), passed: records.len() - failed, failed, records }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub seed: u64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub expected_fail: usize,
    pub info: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub environment: Environment,
    pub config: SuiteConfig,
    pub suites: Vec<SuiteResult>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn new(config: SuiteConfig, suites: Vec<SuiteResult>) -> Self {
        let all = || suites.iter().flat_map(|s| &s.records);
        let summary = Summary {
            checks: all().count(),
            passed: all().filter(|r| r.pass).count(),
            failed: all().filter(|r| !r.pass).count(),
            expected_fail: all().filter(|r| r.expect == Expect::ExpectedFail).count(),
            info: all().filter(|r| r.expect == Expect::Info).count(),
        };
        SuiteReport {
            schema: SCHEMA,
            environment: Environment { seed: config.seed, version: env!("CARGO_PKG_VERSION").into() },
            config,
            suites,
            summary,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn records(&self) -> impl Iterator<Item = &CheckRecord> {
        self.suites.iter().flat_map(|s| &s.records)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}
