//! One JSON object per line describing a run and its verdicts.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Config;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    pub detail: String,
    /// Informational checks are reported but never fail a run.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
}

impl Verdict {
    pub fn new(check: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            check: check.into(),
            pass,
            detail: detail.into(),
            informational: false,
        }
    }

    pub fn info(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Verdict {
            check: check.into(),
            pass: true,
            detail: detail.into(),
            informational: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub config: Config,
    pub seed: u64,
    pub wall_time_s: f64,
    /// Seconds since the Unix epoch; the only field allowed to differ between replays.
    pub timestamp: u64,
    pub payload: Value,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
}

impl RunRecord {
    pub fn new(command: &str, config: &Config, seed: u64, wall_time_s: f64, payload: Value, verdicts: Vec<Verdict>) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let pass = verdicts.iter().all(|v| v.pass || v.informational);
        RunRecord {
            command: command.to_string(),
            config: config.clone(),
            seed,
            wall_time_s,
            timestamp,
            payload,
            verdicts,
            pass,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// Appends records to a JSONL file in the order given.
pub fn append(path: &Path, records: &[RunRecord]) -> Result<(), CliError> {
    let io = |e| CliError::Io(path.display().to_string(), e);
    let mut file = std::fs::OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
    for r in records {
        writeln!(file, "{}", r.to_line()).map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_are_single_lines() {
        let r = RunRecord::new(
            "group",
            &Config::default(),
            1,
            0.5,
            serde_json::json!({"order": 216}),
            vec![Verdict::new("order", true, "216"), Verdict::info("note", "x")],
        );
        let line = r.to_line();
        assert!(!line.contains('\n'));
        let back: RunRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
        assert!(back.pass);
    }

    #[test]
    fn informational_checks_do_not_fail() {
        let mut v = Verdict::info("probe", "order 216");
        v.pass = false;
        let r = RunRecord::new("x", &Config::default(), 0, 0.0, Value::Null, vec![v]);
        assert!(r.pass);
        let r = RunRecord::new("x", &Config::default(), 0, 0.0, Value::Null, vec![Verdict::new("a", false, "")]);
        assert!(!r.pass);
    }
}
