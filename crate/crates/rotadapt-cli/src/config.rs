//! Configuration plumbing: the optional JSON config file and the flag
//! parsers shared across subcommands.
//!
//! Precedence is always: command-line flags, then `--config` file values,
//! then built-in defaults. Flags are therefore declared as `Option`s and
//! resolved explicitly with [`resolve`].

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

/// Values a `--config <json>` file may provide. Every field is optional;
/// unknown keys are rejected so typos do not silently fall back to
/// defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub p_norm: Option<f64>,
    pub repetitions: Option<usize>,
    pub bootstrap_prop: Option<f64>,
    pub x_range: Option<(f64, f64)>,
    pub jobs: Option<usize>,
    pub runs: Option<usize>,
    pub ns: Option<Vec<usize>>,
    pub theta: Option<f64>,
    pub sigma: Option<f64>,
    pub n: Option<usize>,
    pub n_source: Option<usize>,
    pub n_target: Option<usize>,
    pub n_test: Option<usize>,
    pub thetas: Option<Vec<f64>>,
    pub sigmas: Option<Vec<f64>>,
}

impl FileConfig {
    /// Loads the file when a path was given, otherwise an empty overlay.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = fs::read_to_string(p)
                    .with_context(|| format!("reading config file {}", p.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing config file {}", p.display()))
            }
        }
    }
}

/// Three-level precedence: flag value, then config-file value, then the
/// built-in default.
pub fn resolve<T: Clone>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Parses `lo,hi` into an interval, validating `lo < hi`.
pub fn parse_x_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected `lo,hi`, found `{s}`"));
    }
    let lo: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("invalid number `{}`", parts[0]))?;
    let hi: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("invalid number `{}`", parts[1]))?;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(format!("x range needs finite lo < hi, found {lo},{hi}"));
    }
    Ok((lo, hi))
}

/// How close `cos(theta)` may come to zero before the CLI refuses the
/// inclination: the slope `tan(theta)` would be astronomically steep and
/// the run meaningless. Coarser than the library's internal guard so that
/// low-precision approximations of a right angle (e.g. `1.5708`) are
/// caught at the flag level.
pub const VERTICAL_COS_TOL: f64 = 1e-4;

/// Rejects inclinations whose line `y = tan(theta) x` is effectively
/// vertical.
pub fn reject_vertical(theta: f64) -> Result<()> {
    if !theta.is_finite() {
        bail!("theta must be finite, found {theta}");
    }
    if theta.cos().abs() <= VERTICAL_COS_TOL {
        bail!(
            "theta = {theta} is too close to vertical (pi/2): \
             the slope tan(theta) cannot represent that line"
        );
    }
    Ok(())
}

/// Validates an x-range coming from a config file (flag values are checked
/// at parse time).
pub fn check_x_range(range: (f64, f64)) -> Result<(f64, f64)> {
    let (lo, hi) = range;
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        bail!("x range needs finite lo < hi, found {lo},{hi}");
    }
    Ok(range)
}
