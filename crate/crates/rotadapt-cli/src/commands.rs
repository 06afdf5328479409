//! The five subcommands: argument declarations, flag/config resolution,
//! execution, and artifact emission.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;

use rotadapt::{
    adapt_regression_detailed, estimate_angle, generate_domain, AdaptationConfig, CellId,
    CellRuns, DomainSpec, ExperimentResult, RotationAngle, TrialParams,
};

use crate::config::{check_x_range, parse_x_range, reject_vertical, resolve, FileConfig};
use crate::driver::{run_cells, CellSpec};
use crate::io::{read_points_csv, write_points_csv};
use crate::report::{
    write_json, AdaptReport, EstimateReport, RunManifest, TOOL_VERSION,
};
use crate::svg;

// ---------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------

const DEFAULT_SEED: u64 = 0;
const DEFAULT_P_NORM: f64 = 2.0;
const DEFAULT_REPETITIONS: usize = 100;
const DEFAULT_BOOTSTRAP_PROP: f64 = 0.5;
const DEFAULT_X_RANGE: (f64, f64) = (0.0, 10.0);
const DEFAULT_JOBS: usize = 1;
const DEFAULT_NS: [usize; 4] = [10, 100, 1_000, 10_000];
const DEFAULT_SWEEP_RUNS: usize = 200;
const DEFAULT_GRID_RUNS: usize = 100;

fn ensure_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))
}

fn write_manifest<C: Serialize>(
    dir: &Path,
    command: &'static str,
    seed: u64,
    config: C,
    started: Instant,
) -> Result<()> {
    let manifest = RunManifest {
        command,
        version: TOOL_VERSION,
        seed,
        config,
        duration_seconds: started.elapsed().as_secs_f64(),
    };
    write_json(dir, "manifest.json", &manifest)
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
}

// ---------------------------------------------------------------------
// adapt
// ---------------------------------------------------------------------

/// Adapt a source-domain regression line to a rotated target domain.
#[derive(Debug, Args)]
pub struct AdaptArgs {
    /// Source dataset CSV (header `x,y`).
    pub source: PathBuf,
    /// Target dataset CSV (header `x,y`).
    pub target: PathBuf,
    /// Master seed for the bootstrap and k-means [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Transport cost norm order, >= 1 (`inf` accepted) [default: 2].
    #[arg(long, value_name = "P")]
    pub p_norm: Option<f64>,
    /// Bootstrap repetitions N [default: 100].
    #[arg(long, value_name = "N")]
    pub repetitions: Option<usize>,
    /// Fraction of the source resampled per repetition, in (0, 1]
    /// [default: 0.5].
    #[arg(long, value_name = "P")]
    pub bootstrap_prop: Option<f64>,
    /// Directory for the JSON report and run manifest.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// JSON config file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct AdaptResolved {
    source: String,
    target: String,
    seed: u64,
    p_norm: f64,
    repetitions: usize,
    bootstrap_prop: f64,
}

pub fn cmd_adapt(args: &AdaptArgs) -> Result<()> {
    let started = Instant::now();
    let file = FileConfig::load(args.config.as_deref())?;
    let resolved = AdaptResolved {
        source: args.source.display().to_string(),
        target: args.target.display().to_string(),
        seed: resolve(args.seed, file.seed, DEFAULT_SEED),
        p_norm: resolve(args.p_norm, file.p_norm, DEFAULT_P_NORM),
        repetitions: resolve(args.repetitions, file.repetitions, DEFAULT_REPETITIONS),
        bootstrap_prop: resolve(
            args.bootstrap_prop,
            file.bootstrap_prop,
            DEFAULT_BOOTSTRAP_PROP,
        ),
    };

    let source = read_points_csv(&args.source)?;
    let target = read_points_csv(&args.target)?;
    let config = AdaptationConfig {
        n_repetitions: resolved.repetitions,
        bootstrap_proportion: resolved.bootstrap_prop,
        norm_order: resolved.p_norm,
        seed: resolved.seed,
        ..Default::default()
    };
    let outcome = adapt_regression_detailed(&source, &target, &config)
        .context("adapting the source regression to the target domain")?;

    println!("a_r = {}", outcome.adapted.a);
    println!("b_r = {}", outcome.adapted.b);

    if let Some(dir) = &args.out {
        ensure_out_dir(dir)?;
        write_json(dir, "adapt_report.json", &AdaptReport::from_outcome(&outcome))?;
        write_manifest(dir, "adapt", resolved.seed, &resolved, started)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------
// estimate-angle
// ---------------------------------------------------------------------

/// Estimate the rotation angle between a source and a target point set.
#[derive(Debug, Args)]
pub struct EstimateAngleArgs {
    /// Source dataset CSV (header `x,y`).
    pub source: PathBuf,
    /// Target dataset CSV (header `x,y`).
    pub target: PathBuf,
    /// Seed for the k-means summarization [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Transport cost norm order, >= 1 (`inf` accepted) [default: 2].
    #[arg(long, value_name = "P")]
    pub p_norm: Option<f64>,
    /// Directory for the JSON report and run manifest.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// JSON config file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct EstimateResolved {
    source: String,
    target: String,
    seed: u64,
    p_norm: f64,
}

pub fn cmd_estimate_angle(args: &EstimateAngleArgs) -> Result<()> {
    let started = Instant::now();
    let file = FileConfig::load(args.config.as_deref())?;
    let resolved = EstimateResolved {
        source: args.source.display().to_string(),
        target: args.target.display().to_string(),
        seed: resolve(args.seed, file.seed, DEFAULT_SEED),
        p_norm: resolve(args.p_norm, file.p_norm, DEFAULT_P_NORM),
    };

    let source = read_points_csv(&args.source)?;
    let target = read_points_csv(&args.target)?;
    let config = AdaptationConfig {
        norm_order: resolved.p_norm,
        seed: resolved.seed,
        ..Default::default()
    };
    let estimate = estimate_angle(&source, &target, &config)
        .context("estimating the rotation between the domains")?;

    println!("theta_hat = {}", estimate.theta_hat.radians());

    if let Some(dir) = &args.out {
        ensure_out_dir(dir)?;
        write_json(
            dir,
            "estimate_report.json",
            &EstimateReport::from_estimate(&estimate),
        )?;
        write_manifest(dir, "estimate-angle", resolved.seed, &resolved, started)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------

/// Generate a synthetic dataset: x uniform on a range, y = tan(theta) x
/// plus Gaussian noise.
#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Line inclination in radians [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Noise standard deviation [default: 0].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Number of points (required here or in the config file).
    #[arg(long)]
    pub n: Option<usize>,
    /// Seed for the draws [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Covariate interval `lo,hi` [default: 0,10].
    #[arg(long, value_parser = parse_x_range, value_name = "LO,HI")]
    pub x_range: Option<(f64, f64)>,
    /// Directory for dataset.csv and the run manifest; omitted = CSV to
    /// stdout.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// JSON config file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct SimulateResolved {
    theta: f64,
    sigma: f64,
    n: usize,
    seed: u64,
    x_range: (f64, f64),
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let started = Instant::now();
    let file = FileConfig::load(args.config.as_deref())?;
    let Some(n) = args.n.or(file.n) else {
        bail!("--n is required (or provide `n` in the config file)");
    };
    let resolved = SimulateResolved {
        theta: resolve(args.theta, file.theta, 0.0),
        sigma: resolve(args.sigma, file.sigma, 0.0),
        n,
        seed: resolve(args.seed, file.seed, DEFAULT_SEED),
        x_range: check_x_range(resolve(args.x_range, file.x_range, DEFAULT_X_RANGE))?,
    };
    reject_vertical(resolved.theta)?;

    let spec = DomainSpec {
        theta: RotationAngle::new(resolved.theta).context("invalid theta")?,
        sigma: resolved.sigma,
        n: resolved.n,
        x_range: resolved.x_range,
        seed: resolved.seed,
    };
    let points = generate_domain(&spec).context("generating the dataset")?;

    match &args.out {
        None => {
            let stdout = std::io::stdout();
            write_points_csv(stdout.lock(), &points)?;
        }
        Some(dir) => {
            ensure_out_dir(dir)?;
            let mut buf = Vec::new();
            write_points_csv(&mut buf, &points)?;
            fs::write(dir.join("dataset.csv"), buf)
                .with_context(|| format!("writing {}", dir.join("dataset.csv").display()))?;
            write_manifest(dir, "simulate", resolved.seed, &resolved, started)?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------
// experiment (shared pieces)
// ---------------------------------------------------------------------

/// Flags shared by both experiment kinds.
#[derive(Debug, Args)]
pub struct ExperimentCommonArgs {
    /// Master seed; every trial derives its own seed from it [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Transport cost norm order, >= 1 [default: 2].
    #[arg(long, value_name = "P")]
    pub p_norm: Option<f64>,
    /// Bootstrap repetitions inside each trial [default: 100].
    #[arg(long, value_name = "N")]
    pub repetitions: Option<usize>,
    /// Bootstrap proportion in (0, 1] [default: 0.5].
    #[arg(long, value_name = "P")]
    pub bootstrap_prop: Option<f64>,
    /// Covariate interval `lo,hi` [default: 0,10].
    #[arg(long, value_parser = parse_x_range, value_name = "LO,HI")]
    pub x_range: Option<(f64, f64)>,
    /// Worker threads; results do not depend on this [default: 1].
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
    /// Held-out evaluation points per trial [default: 1000].
    #[arg(long, value_name = "N")]
    pub n_test: Option<usize>,
    /// Output directory for CSV, SVG, and manifest artifacts.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// JSON config file; flags override its values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct AdaptSettings {
    p_norm: f64,
    repetitions: usize,
    bootstrap_prop: f64,
}

struct ExperimentCommon {
    seed: u64,
    jobs: usize,
    x_range: (f64, f64),
    n_test: usize,
    adapt: AdaptSettings,
}

impl ExperimentCommon {
    fn resolve(args: &ExperimentCommonArgs, file: &FileConfig) -> Result<Self> {
        Ok(Self {
            seed: resolve(args.seed, file.seed, DEFAULT_SEED),
            jobs: resolve(args.jobs, file.jobs, DEFAULT_JOBS),
            x_range: check_x_range(resolve(args.x_range, file.x_range, DEFAULT_X_RANGE))?,
            n_test: resolve(args.n_test, file.n_test, 1000),
            adapt: AdaptSettings {
                p_norm: resolve(args.p_norm, file.p_norm, DEFAULT_P_NORM),
                repetitions: resolve(args.repetitions, file.repetitions, DEFAULT_REPETITIONS),
                bootstrap_prop: resolve(
                    args.bootstrap_prop,
                    file.bootstrap_prop,
                    DEFAULT_BOOTSTRAP_PROP,
                ),
            },
        })
    }

    fn adaptation_config(&self) -> AdaptationConfig {
        AdaptationConfig {
            n_repetitions: self.adapt.repetitions,
            bootstrap_proportion: self.adapt.bootstrap_prop,
            norm_order: self.adapt.p_norm,
            // The per-trial seed replaces this; see run_single_trial.
            seed: 0,
            ..Default::default()
        }
    }
}

/// Writes the per-run raw values CSV shared by both experiments. The
/// leading columns identify the cell.
fn write_runs_csv(
    dir: &Path,
    name: &str,
    header_prefix: &str,
    cells: &[CellRuns],
    cell_prefix: impl Fn(CellId) -> String,
) -> Result<()> {
    let mut text = String::new();
    text.push_str(header_prefix);
    text.push_str("run,mse_target_only,mse_adapted,variation\n");
    for runs in cells {
        let prefix = cell_prefix(runs.cell());
        for (run, outcome) in runs.outcomes().iter().enumerate() {
            if let Ok(o) = outcome {
                text.push_str(&format!(
                    "{prefix}{run},{},{},{}\n",
                    o.mse_target_only, o.mse_adapted, o.variation
                ));
            }
        }
    }
    write_text(dir, name, &text)
}

// ---------------------------------------------------------------------
// experiment ns-sweep
// ---------------------------------------------------------------------

/// Sweep the source-domain size and compare adapted vs. target-only MSE.
#[derive(Debug, Args)]
pub struct NsSweepArgs {
    /// Source sizes, comma separated [default: 10,100,1000,10000].
    #[arg(long, value_delimiter = ',', value_name = "N,N,...")]
    pub ns: Option<Vec<usize>>,
    /// Monte-Carlo runs per source size [default: 200].
    #[arg(long, value_name = "N")]
    pub runs: Option<usize>,
    /// Rotation between the domains in radians [default: pi/4].
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Noise standard deviation [default: 1].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Target domain size [default: 10].
    #[arg(long, value_name = "N")]
    pub n_target: Option<usize>,
    #[command(flatten)]
    pub common: ExperimentCommonArgs,
}

#[derive(Debug, Serialize)]
struct NsSweepResolved {
    ns: Vec<usize>,
    runs: usize,
    theta: f64,
    sigma: f64,
    n_target: usize,
    n_test: usize,
    x_range: (f64, f64),
    seed: u64,
    jobs: usize,
    p_norm: f64,
    repetitions: usize,
    bootstrap_prop: f64,
}

pub fn cmd_ns_sweep(args: &NsSweepArgs) -> Result<()> {
    let started = Instant::now();
    let file = FileConfig::load(args.common.config.as_deref())?;
    let common = ExperimentCommon::resolve(&args.common, &file)?;
    let ns = resolve(args.ns.clone(), file.ns.clone(), DEFAULT_NS.to_vec());
    let runs = resolve(args.runs, file.runs, DEFAULT_SWEEP_RUNS);
    let theta = resolve(args.theta, file.theta, std::f64::consts::FRAC_PI_4);
    let sigma = resolve(args.sigma, file.sigma, 1.0);
    let n_target = resolve(args.n_target, file.n_target, 10);
    reject_vertical(theta)?;
    if ns.is_empty() {
        bail!("--ns needs at least one source size");
    }

    let resolved = NsSweepResolved {
        ns: ns.clone(),
        runs,
        theta,
        sigma,
        n_target,
        n_test: common.n_test,
        x_range: common.x_range,
        seed: common.seed,
        jobs: common.jobs,
        p_norm: common.adapt.p_norm,
        repetitions: common.adapt.repetitions,
        bootstrap_prop: common.adapt.bootstrap_prop,
    };

    let base = TrialParams {
        rotation: RotationAngle::new(theta).context("invalid theta")?,
        sigma,
        n_source: 0, // set per cell
        n_target,
        n_test: common.n_test,
        x_range: common.x_range,
        adapt: common.adaptation_config(),
    };
    let cells: Vec<CellSpec> = ns
        .iter()
        .map(|&n_source| CellSpec {
            cell: CellId::SourceSize(n_source),
            params: TrialParams { n_source, ..base },
        })
        .collect();

    let results = run_cells(&cells, runs, common.seed, common.jobs)?;

    let dir = &args.common.out;
    ensure_out_dir(dir)?;

    let mut csv = String::from("n_s,median_mse_target,median_mse_adapted,q1,q3,n_failed\n");
    for cell in &results {
        let s: &ExperimentResult = cell.summary();
        let CellId::SourceSize(n_s) = s.cell else {
            unreachable!("sweep cells are source sizes")
        };
        csv.push_str(&format!(
            "{n_s},{},{},{},{},{}\n",
            s.median_mse_target_only,
            s.median_mse_adapted,
            s.q1_mse_adapted,
            s.q3_mse_adapted,
            s.n_failed
        ));
    }
    write_text(dir, "ns_sweep.csv", &csv)?;

    write_runs_csv(dir, "ns_sweep_runs.csv", "n_s,", &results, |cell| {
        let CellId::SourceSize(n) = cell else {
            unreachable!("sweep cells are source sizes")
        };
        format!("{n},")
    })?;

    let summaries: Vec<ExperimentResult> = results.iter().map(|c| *c.summary()).collect();
    write_text(dir, "ns_sweep.svg", &svg::ns_sweep_chart(&summaries))?;
    write_manifest(dir, "experiment ns-sweep", common.seed, &resolved, started)?;

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for s in &summaries {
        let CellId::SourceSize(n_s) = s.cell else {
            continue;
        };
        writeln!(
            out,
            "n_s = {n_s}: median MSE target-only {}, adapted {} ({} of {} runs failed)",
            s.median_mse_target_only, s.median_mse_adapted, s.n_failed, s.n_runs
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------
// experiment theta-sigma
// ---------------------------------------------------------------------

/// Map the adapted method's relative improvement over an
/// inclination/noise grid.
#[derive(Debug, Args)]
pub struct ThetaSigmaArgs {
    /// Grid inclinations in radians, comma separated
    /// [default: pi/6,2pi/6,pi/2-0.01,4pi/6,5pi/6].
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_name = "T,T,...")]
    pub thetas: Option<Vec<f64>>,
    /// Grid noise levels, comma separated [default: 0.1,0.2,0.5,1,2,5].
    #[arg(long, value_delimiter = ',', value_name = "S,S,...")]
    pub sigmas: Option<Vec<f64>>,
    /// Monte-Carlo runs per cell [default: 100].
    #[arg(long, value_name = "N")]
    pub runs: Option<usize>,
    /// Source domain size [default: 1000].
    #[arg(long, value_name = "N")]
    pub n_source: Option<usize>,
    /// Target domain size [default: 50].
    #[arg(long, value_name = "N")]
    pub n_target: Option<usize>,
    #[command(flatten)]
    pub common: ExperimentCommonArgs,
}

#[derive(Debug, Serialize)]
struct ThetaSigmaResolved {
    thetas: Vec<f64>,
    sigmas: Vec<f64>,
    runs: usize,
    n_source: usize,
    n_target: usize,
    n_test: usize,
    x_range: (f64, f64),
    seed: u64,
    jobs: usize,
    p_norm: f64,
    repetitions: usize,
    bootstrap_prop: f64,
}

pub fn cmd_theta_sigma(args: &ThetaSigmaArgs) -> Result<()> {
    let started = Instant::now();
    let file = FileConfig::load(args.common.config.as_deref())?;
    let common = ExperimentCommon::resolve(&args.common, &file)?;
    let thetas = resolve(
        args.thetas.clone(),
        file.thetas.clone(),
        rotadapt::default_theta_grid()
            .iter()
            .map(|a| a.radians())
            .collect(),
    );
    let sigmas = resolve(args.sigmas.clone(), file.sigmas.clone(), rotadapt::default_sigma_grid());
    let runs = resolve(args.runs, file.runs, DEFAULT_GRID_RUNS);
    let n_source = resolve(args.n_source, file.n_source, 1000);
    let n_target = resolve(args.n_target, file.n_target, 50);
    if thetas.is_empty() || sigmas.is_empty() {
        bail!("--thetas and --sigmas each need at least one value");
    }
    for &theta in &thetas {
        reject_vertical(theta)?;
    }
    for &sigma in &sigmas {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            bail!("sigma must be finite and >= 0, found {sigma}");
        }
    }

    let resolved = ThetaSigmaResolved {
        thetas: thetas.clone(),
        sigmas: sigmas.clone(),
        runs,
        n_source,
        n_target,
        n_test: common.n_test,
        x_range: common.x_range,
        seed: common.seed,
        jobs: common.jobs,
        p_norm: common.adapt.p_norm,
        repetitions: common.adapt.repetitions,
        bootstrap_prop: common.adapt.bootstrap_prop,
    };

    let base = TrialParams {
        rotation: RotationAngle::new(0.0).expect("zero is in range"),
        sigma: 0.0,
        n_source,
        n_target,
        n_test: common.n_test,
        x_range: common.x_range,
        adapt: common.adaptation_config(),
    };
    // Row-major: theta outer, sigma inner — the same cell order and
    // indices as the library's sequential grid runner.
    let mut cells = Vec::with_capacity(thetas.len() * sigmas.len());
    for &theta in &thetas {
        for &sigma in &sigmas {
            cells.push(CellSpec {
                cell: CellId::ThetaSigma { theta, sigma },
                params: TrialParams {
                    rotation: RotationAngle::new(theta).context("invalid theta")?,
                    sigma,
                    ..base
                },
            });
        }
    }

    let results = run_cells(&cells, runs, common.seed, common.jobs)?;

    let dir = &args.common.out;
    ensure_out_dir(dir)?;

    let mut csv = String::from(
        "theta,sigma,median_variation,median_mse_target,median_mse_adapted,\
         q1_variation,q3_variation,n_failed\n",
    );
    for cell in &results {
        let s = cell.summary();
        let CellId::ThetaSigma { theta, sigma } = s.cell else {
            unreachable!("grid cells carry theta and sigma")
        };
        csv.push_str(&format!(
            "{theta},{sigma},{},{},{},{},{},{}\n",
            s.median_variation,
            s.median_mse_target_only,
            s.median_mse_adapted,
            s.q1_variation,
            s.q3_variation,
            s.n_failed
        ));
    }
    write_text(dir, "theta_sigma.csv", &csv)?;

    write_runs_csv(dir, "theta_sigma_runs.csv", "theta,sigma,", &results, |cell| {
        let CellId::ThetaSigma { theta, sigma } = cell else {
            unreachable!("grid cells carry theta and sigma")
        };
        format!("{theta},{sigma},")
    })?;

    let summaries: Vec<ExperimentResult> = results.iter().map(|c| *c.summary()).collect();
    write_text(
        dir,
        "theta_sigma.svg",
        &svg::theta_sigma_heatmap(&summaries, &thetas, &sigmas),
    )?;
    write_manifest(dir, "experiment theta-sigma", common.seed, &resolved, started)?;

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for s in &summaries {
        let CellId::ThetaSigma { theta, sigma } = s.cell else {
            continue;
        };
        writeln!(
            out,
            "theta = {theta}, sigma = {sigma}: median variation {} ({} of {} runs failed)",
            s.median_variation, s.n_failed, s.n_runs
        )?;
    }
    Ok(())
}
