use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::wire::Solution;

pub const TOOL_VERSION: &str = concat!("upb-lab ", env!("CARGO_PKG_VERSION"));

/// Machine-readable result of one command. Every field except `timing` is
/// a function of the command line (and the catalog file, if any), so two
/// runs with the same inputs serialize to the same bytes; `timing` is only
/// present when asked for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub command: String,
    pub seed: Option<u64>,
    pub uom: Option<String>,
    pub split: Option<String>,
    pub verdicts: Value,
    pub solutions: Vec<Solution>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<f64>,
    pub tool_version: String,
}

impl Certificate {
    pub fn new(verdicts: Value) -> Self {
        Certificate {
            command: String::new(),
            seed: None,
            uom: None,
            split: None,
            verdicts,
            solutions: Vec::new(),
            timing: None,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        pretty(self)
    }
}

pub fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    ClaimFailed = 1,
    Usage = 2,
    BudgetExceeded = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] upb_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Core(upb_core::Error::BudgetExceeded { .. }) => Exit::BudgetExceeded,
            CliError::Core(upb_core::Error::NotOrthogonal(..)) => Exit::ClaimFailed,
            _ => Exit::Usage,
        }
    }
}

/// What a command produced: the JSON document (a certificate, a report,
/// or catalog entries), a short human summary, and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub json: String,
    pub text: String,
    pub exit: Exit,
    /// Printed to stderr when set.
    pub failure: Option<String>,
}

impl Outcome {
    pub fn ok(cert: &Certificate, text: String) -> Self {
        Outcome { json: cert.to_json(), text, exit: Exit::Ok, failure: None }
    }

    /// Exit 1 unless the checked claim `holds`.
    pub fn claim(cert: &Certificate, text: String, holds: bool) -> Self {
        Outcome { json: cert.to_json(), text, exit: if holds { Exit::Ok } else { Exit::ClaimFailed }, failure: None }
    }
}
