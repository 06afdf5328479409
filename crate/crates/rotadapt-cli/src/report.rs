//! JSON artifacts: per-command reports and the run manifest written next
//! to every file output.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use rotadapt::{AdaptationOutcome, AngleEstimate, IterationOutcome};
use serde::Serialize;

/// Reproducibility sidecar: everything needed to re-create a run's outputs
/// bit-for-bit (modulo the wall-clock duration, which is informational).
#[derive(Debug, Serialize)]
pub struct RunManifest<C: Serialize> {
    /// Subcommand that produced the artifacts, e.g. `experiment ns-sweep`.
    pub command: &'static str,
    /// Crate version of the tool.
    pub version: &'static str,
    /// Master seed all randomness derives from.
    pub seed: u64,
    /// The fully resolved configuration (flags, config file, and defaults
    /// merged).
    pub config: C,
    /// Informational wall-clock duration; the only field that varies
    /// between identical runs.
    pub duration_seconds: f64,
}

/// Current crate version, recorded in every manifest.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Serializes `value` as pretty JSON with a trailing newline.
pub fn to_json_file(value: &impl Serialize) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).context("serializing JSON artifact")?;
    text.push('\n');
    Ok(text)
}

/// Writes a JSON artifact into the output directory.
pub fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, to_json_file(value)?)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// One bootstrap repetition in the adapt report.
#[derive(Debug, Serialize)]
pub struct IterationReport {
    pub index: usize,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// The `adapt` command's JSON report.
#[derive(Debug, Serialize)]
pub struct AdaptReport {
    /// Adapted line: median slope over accepted repetitions.
    pub a_r: f64,
    /// Adapted line: median intercept over accepted repetitions.
    pub b_r: f64,
    pub a_s: f64,
    pub b_s: f64,
    pub n_accepted: usize,
    pub n_rejected: usize,
    pub iterations: Vec<IterationReport>,
}

impl AdaptReport {
    pub fn from_outcome(outcome: &AdaptationOutcome) -> Self {
        let iterations = outcome
            .iterations
            .iter()
            .enumerate()
            .map(|(index, it)| match it {
                IterationOutcome::Accepted { theta, line } => IterationReport {
                    index,
                    status: "accepted",
                    theta_hat: Some(theta.radians()),
                    a: Some(line.a),
                    b: Some(line.b),
                    error: None,
                },
                IterationOutcome::Rejected(e) => IterationReport {
                    index,
                    status: "rejected",
                    theta_hat: None,
                    a: None,
                    b: None,
                    error: Some(e.to_string()),
                },
            })
            .collect();
        Self {
            a_r: outcome.adapted.a,
            b_r: outcome.adapted.b,
            a_s: outcome.source_fit.a,
            b_s: outcome.source_fit.b,
            n_accepted: outcome.accepted_count(),
            n_rejected: outcome.rejected_count(),
            iterations,
        }
    }
}

/// The `estimate-angle` command's JSON report.
#[derive(Debug, Serialize)]
pub struct EstimateReport {
    pub theta_hat: f64,
    pub transport_cost: f64,
    /// Centroid `i` was matched with target point `assignment[i]`.
    pub assignment: Vec<usize>,
    pub n_centroids: usize,
}

impl EstimateReport {
    pub fn from_estimate(est: &AngleEstimate) -> Self {
        Self {
            theta_hat: est.theta_hat.radians(),
            transport_cost: est.plan.total_cost,
            assignment: est.plan.assignment.as_slice().to_vec(),
            n_centroids: est.centroids.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_field_names_are_stable() {
        let manifest = RunManifest {
            command: "simulate",
            version: TOOL_VERSION,
            seed: 7,
            config: serde_json::json!({"n": 3}),
            duration_seconds: 0.25,
        };
        let text = to_json_file(&manifest).unwrap();
        // Struct order is the emitted order.
        let positions: Vec<usize> = ["command", "version", "seed", "config", "duration_seconds"]
            .iter()
            .map(|k| text.find(&format!("\"{k}\"")).expect(k))
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
    }

    #[test]
    fn json_artifacts_end_with_a_newline() {
        let text = to_json_file(&serde_json::json!({"k": 1})).unwrap();
        assert!(text.ends_with('\n'));
    }
}
