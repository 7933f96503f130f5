//! TOML run reports and CSV tables.
//!
//! A report starts with `#` comment lines, then `[config]` (the resolved run
//! configuration), `[result]` and, when the run did not pass, `[failure]`.
//! Reports carry no timestamps, so identical runs give identical bytes.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use heatsym_core::invariance::Witness;
use serde::Serialize;

use crate::CliError;

/// Resolved knobs of one run, echoed into its report.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_range: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_range: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_from: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

/// Machine-readable reason a run did not pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    /// `check_failed` or `error`.
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Failure {
    pub fn check(message: impl Into<String>) -> Self {
        Self {
            kind: "check_failed".into(),
            message: message.into(),
            criterion: None,
            witness: None,
        }
    }

    pub fn error(message: impl Into<String>) -> Self {
        Self {
            kind: "error".into(),
            message: message.into(),
            criterion: None,
            witness: None,
        }
    }
}

#[derive(Serialize)]
struct Document<'a> {
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<&'a toml::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<&'a Failure>,
}

/// Render a full report.
pub fn render(config: &RunConfig, result: Option<&toml::Value>, failure: Option<&Failure>) -> Result<String, CliError> {
    let body = toml::to_string(&Document {
        config,
        result,
        failure,
    })
    .map_err(|e| CliError::Render(e.to_string()))?;
    Ok(format!(
        "# heatsym {}\n# heatsym-core {}\n# status: {}\n\n{body}",
        config.subcommand,
        env!("CARGO_PKG_VERSION"),
        if failure.is_none() { "pass" } else { "fail" },
    ))
}

/// Convert a serializable result into a TOML value.
pub fn to_value<T: Serialize>(v: &T) -> Result<toml::Value, CliError> {
    toml::Value::try_from(v).map_err(|e| CliError::Render(e.to_string()))
}

/// Shortest round-trip rendering, in exponent form for very small or large
/// magnitudes.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// A CSV table with `#` metadata lines in front of the header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            meta: Vec::new(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let io = |source| CliError::Io {
            path: path.display().to_string(),
            source,
        };
        let mut file = File::create(path).map_err(io)?;
        for m in &self.meta {
            writeln!(file, "# {m}").map_err(io)?;
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(file);
        let csv_err = |e: csv::Error| CliError::Io {
            path: path.display().to_string(),
            source: e.into(),
        };
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| fmt_f64(*v))).map_err(csv_err)?;
        }
        w.flush().map_err(io)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_layout() {
        let cfg = RunConfig {
            subcommand: "check".into(),
            n: Some(3),
            eps_grid: Some(vec![-1.0, 0.5]),
            ..Default::default()
        };
        let result = to_value(&std::collections::BTreeMap::from([("pass", true)])).unwrap();
        let text = render(&cfg, Some(&result), Some(&Failure::check("boom"))).unwrap();
        assert!(text.starts_with("# heatsym check\n"));
        assert!(text.contains("# status: fail"));
        let parsed: toml::Table = text.parse().unwrap();
        assert_eq!(parsed["config"]["n"].as_integer(), Some(3));
        assert!(parsed["config"].get("spec").is_none());
        assert_eq!(parsed["failure"]["kind"].as_str(), Some("check_failed"));
        assert_eq!(parsed["result"]["pass"].as_bool(), Some(true));
    }

    #[test]
    fn csv_with_metadata() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut t = Table::new(&["x", "u"]);
        t.meta.push("t = 0.5".into());
        t.rows.push(vec![0.1, 2.5]);
        t.rows.push(vec![0.2, 1e-20]);
        t.write(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "# t = 0.5\nx,u\n0.1,2.5\n0.2,1e-20\n");
    }
}
