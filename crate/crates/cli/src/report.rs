//! Accumulated command output and the exit-status mapping.

use std::fmt;
use std::process::ExitCode;

use serde_json::{Map, Value};

/// Why a command stopped.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input. Exit status 2.
    Input(String),
    /// A computation raised an error. Exit status 1.
    Compute(String),
}

impl CliError {
    pub fn compute(e: impl fmt::Display) -> Self {
        CliError::Compute(e.to_string())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Compute(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Compute(m) => write!(f, "error: {m}"),
        }
    }
}

/// Text lines and a JSON object built side by side.
#[derive(Default)]
pub struct Report {
    lines: Vec<String>,
    json: Map<String, Value>,
    failures: usize,
}

impl Report {
    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.json.insert(key.to_string(), v);
    }

    /// Records a named yes/no invariant in both renderings.
    pub fn check(&mut self, label: &str, key: &str, ok: bool) {
        self.line(format!("{label}: {}", if ok { "yes" } else { "no" }));
        self.json.insert(key.to_string(), Value::Bool(ok));
        if !ok {
            self.failures += 1;
        }
    }

    pub fn fail(&mut self) {
        self.failures += 1;
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn render(mut self, json: bool) -> (String, ExitCode) {
        let code = if self.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) };
        let text = if json {
            self.json.insert("ok".into(), Value::Bool(self.failures == 0));
            serde_json::to_string_pretty(&Value::Object(self.json)).expect("JSON values serialize")
        } else {
            self.lines.join("\n")
        };
        (text, code)
    }
}
