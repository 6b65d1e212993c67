//! Machine-readable check reports shared by the verifiers and the CLI.

/// One verified statement: a stable identifier, a verdict, and optional
/// length accounting or a failure witness.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    /// Stable identifier of the underlying statement.
    pub refid: &'static str,
    pub verdict: bool,
    pub lengths: Vec<(String, u64)>,
    pub witness: Option<String>,
}

impl CheckReport {
    pub fn pass(name: impl Into<String>, refid: &'static str) -> Self {
        CheckReport { name: name.into(), refid, verdict: true, lengths: Vec::new(), witness: None }
    }

    pub fn of(name: impl Into<String>, refid: &'static str, verdict: bool) -> Self {
        CheckReport { name: name.into(), refid, verdict, lengths: Vec::new(), witness: None }
    }

    pub fn with_length(mut self, label: impl Into<String>, value: u64) -> Self {
        self.lengths.push((label.into(), value));
        self
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }
}

/// A suite of checks run under one configuration.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub config: String,
    pub checks: Vec<CheckReport>,
    pub elapsed_secs: f64,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, config: impl Into<String>) -> Self {
        SuiteReport { suite: suite.into(), config: config.into(), checks: Vec::new(), elapsed_secs: 0.0 }
    }

    pub fn push(&mut self, check: CheckReport) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict)
    }
}
