//! Synthetic-domain generation and the Monte-Carlo experiment harness.
//!
//! Domains are noisy straight lines through the origin: x is uniform on a
//! fixed interval, y is `tan(theta) * x` plus Gaussian noise. A trial
//! generates a source domain (inclination 0), a rotated target domain, and
//! a held-out test set from the target model, then compares the adapted
//! regression against the target-only fit by MSE on the test set.
//!
//! Every trial's seed is derived from `(master seed, cell index, run
//! index)`, so experiments can be distributed across threads and still
//! aggregate to identical results.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::adapt::{adapt_regression, fit_ols, AdaptationConfig};
use crate::error::{Error, Result};
use crate::geom::{LineCoeffs, Point2, PointSet, RotationAngle};
use crate::seed::derive_seed;

/// Covariate interval used when nothing else is requested.
pub const DEFAULT_X_RANGE: (f64, f64) = (0.0, 10.0);

/// Offset keeping the steepest grid inclination clear of the vertical.
pub const VERTICAL_GRID_DELTA: f64 = 0.01;

/// How close (in radians) an inclination may come to +-pi/2 before the
/// slope `tan(theta)` is considered unrepresentable.
pub const VERTICAL_THETA_TOL: f64 = 1e-9;

/// A generative model for one domain: points on the line of inclination
/// `theta` through the origin, with vertical Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    /// Line inclination; the regression slope is `tan(theta)`.
    pub theta: RotationAngle,
    /// Noise standard deviation, >= 0.
    pub sigma: f64,
    /// Number of points.
    pub n: usize,
    /// Uniform x interval (low, high).
    pub x_range: (f64, f64),
    /// Seed for this domain's draws.
    pub seed: u64,
}

impl DomainSpec {
    pub fn new(theta: RotationAngle, sigma: f64, n: usize, seed: u64) -> Self {
        Self {
            theta,
            sigma,
            n,
            x_range: DEFAULT_X_RANGE,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(Error::InvalidInput("sigma must be finite and >= 0"));
        }
        if self.n == 0 {
            return Err(Error::InvalidInput("domain must have at least one point"));
        }
        let (lo, hi) = self.x_range;
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidInput("x_range must be finite with low < high"));
        }
        if (self.theta.radians().abs() - FRAC_PI_2).abs() <= VERTICAL_THETA_TOL {
            return Err(Error::InvalidInput(
                "theta at +-pi/2 has an infinite slope",
            ));
        }
        Ok(())
    }
}

/// Draws a domain sample: `x ~ Uniform(x_range)`, `y = tan(theta) * x + e`
/// with `e ~ N(0, sigma^2)`, all i.i.d. Deterministic given `spec.seed`;
/// the per-point draw order (x, then noise) is fixed, so specs differing
/// only in `sigma` see the same x values.
pub fn generate_domain(spec: &DomainSpec) -> Result<PointSet> {
    spec.validate()?;
    let slope = libm::tan(spec.theta.radians());
    let (lo, hi) = spec.x_range;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut points = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let x = rng.random_range(lo..hi);
        let z: f64 = rng.sample(StandardNormal);
        points.push(Point2::new(x, slope * x + spec.sigma * z));
    }
    PointSet::new(points)
}

/// Mean squared residual of `line` on `test`.
pub fn mse(line: LineCoeffs, test: &PointSet) -> f64 {
    let sum: f64 = test
        .iter()
        .map(|p| {
            let r = p.y - line.eval(p.x);
            r * r
        })
        .sum();
    sum / test.len() as f64
}

/// Relative improvement of the adapted model over the target-only fit:
/// `mse_target_only / mse_adapted - 1`; positive values favor adaptation.
///
/// Edge conventions keep the statistic well-defined on noiseless data:
/// both errors zero compares two perfect fits (0), and a perfect adapted
/// fit against a fallible baseline is +infinity.
pub fn variation(mse_target_only: f64, mse_adapted: f64) -> f64 {
    if mse_adapted == 0.0 {
        if mse_target_only == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        mse_target_only / mse_adapted - 1.0
    }
}

/// Quantile with linear interpolation between order statistics (the common
/// "type 7" rule; `q = 0.5` is the midpoint median convention).
pub fn quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InvalidInput("quantile of an empty sequence"));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidInput("quantile level must lie in [0, 1]"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos as usize;
    let frac = pos - lo as f64;
    Ok(if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    })
}

/// Parameters of one Monte-Carlo trial. The source domain always has
/// inclination 0; the target domain is rotated by `rotation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialParams {
    /// Rotation between source and target domains.
    pub rotation: RotationAngle,
    /// Noise level shared by source, target, and test draws.
    pub sigma: f64,
    pub n_source: usize,
    pub n_target: usize,
    /// Held-out evaluation points drawn from the target model.
    pub n_test: usize,
    pub x_range: (f64, f64),
    /// Adaptation settings; the seed field is replaced per trial.
    pub adapt: AdaptationConfig,
}

impl Default for TrialParams {
    fn default() -> Self {
        Self {
            rotation: RotationAngle::new(FRAC_PI_4).expect("constant in range"),
            sigma: 1.0,
            n_source: 1000,
            n_target: 10,
            n_test: 1000,
            x_range: DEFAULT_X_RANGE,
            adapt: AdaptationConfig::default(),
        }
    }
}

/// What one trial measured on its held-out test set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    /// OLS fit on the small target sample alone.
    pub target_fit: LineCoeffs,
    /// Source fit transported through the estimated rotation.
    pub adapted: LineCoeffs,
    pub mse_target_only: f64,
    pub mse_adapted: f64,
    pub variation: f64,
}

/// Seed for run `run_index` of cell `cell_index` under `master`.
pub fn trial_seed(master: u64, cell_index: usize, run_index: usize) -> u64 {
    derive_seed(derive_seed(master, cell_index as u64), run_index as u64)
}

/// Runs one trial: generate source/target/test sets, fit both models,
/// score them on the held-out set.
pub fn run_single_trial(params: &TrialParams, seed: u64) -> Result<TrialOutcome> {
    let flat = RotationAngle::new(0.0).expect("zero is in range");
    let source = generate_domain(&DomainSpec {
        theta: flat,
        sigma: params.sigma,
        n: params.n_source,
        x_range: params.x_range,
        seed: derive_seed(seed, 0),
    })?;
    let target = generate_domain(&DomainSpec {
        theta: params.rotation,
        sigma: params.sigma,
        n: params.n_target,
        x_range: params.x_range,
        seed: derive_seed(seed, 1),
    })?;
    let test = generate_domain(&DomainSpec {
        theta: params.rotation,
        sigma: params.sigma,
        n: params.n_test,
        x_range: params.x_range,
        seed: derive_seed(seed, 2),
    })?;

    let config = AdaptationConfig {
        seed: derive_seed(seed, 3),
        ..params.adapt
    };
    let target_fit = fit_ols(&target)?;
    let adapted = adapt_regression(&source, &target, &config)?;
    let mse_target_only = mse(target_fit, &test);
    let mse_adapted = mse(adapted, &test);
    Ok(TrialOutcome {
        target_fit,
        adapted,
        mse_target_only,
        mse_adapted,
        variation: variation(mse_target_only, mse_adapted),
    })
}

/// Which experiment cell a result belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellId {
    /// Source-size sweep cell.
    SourceSize(usize),
    /// Rotation/noise grid cell (theta in radians).
    ThetaSigma { theta: f64, sigma: f64 },
}

/// Aggregated statistics of one cell.
///
/// Quartiles accompany the medians so distribution plots can be rebuilt
/// from the summary alone. All statistics are NaN when every run failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentResult {
    pub cell: CellId,
    pub n_runs: usize,
    pub n_failed: usize,
    pub median_mse_target_only: f64,
    pub median_mse_adapted: f64,
    pub median_variation: f64,
    pub q1_mse_adapted: f64,
    pub q3_mse_adapted: f64,
    pub q1_variation: f64,
    pub q3_variation: f64,
}

/// Summarizes one cell's runs; failed runs only count toward `n_failed`.
pub fn summarize_cell(cell: CellId, outcomes: &[Result<TrialOutcome>]) -> ExperimentResult {
    let ok: Vec<&TrialOutcome> = outcomes.iter().filter_map(|r| r.as_ref().ok()).collect();
    let n_failed = outcomes.len() - ok.len();
    let collect = |f: fn(&TrialOutcome) -> f64| -> Vec<f64> { ok.iter().map(|o| f(o)).collect() };
    let stat = |values: &[f64], q: f64| -> f64 {
        quantile(values, q).unwrap_or(f64::NAN)
    };

    let mse_t = collect(|o| o.mse_target_only);
    let mse_a = collect(|o| o.mse_adapted);
    let vars = collect(|o| o.variation);
    ExperimentResult {
        cell,
        n_runs: outcomes.len(),
        n_failed,
        median_mse_target_only: stat(&mse_t, 0.5),
        median_mse_adapted: stat(&mse_a, 0.5),
        median_variation: stat(&vars, 0.5),
        q1_mse_adapted: stat(&mse_a, 0.25),
        q3_mse_adapted: stat(&mse_a, 0.75),
        q1_variation: stat(&vars, 0.25),
        q3_variation: stat(&vars, 0.75),
    }
}

/// One cell's raw outcomes together with their summary.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRuns {
    cell: CellId,
    outcomes: Vec<Result<TrialOutcome>>,
    summary: ExperimentResult,
}

impl CellRuns {
    /// Bundles raw outcomes with their summary; the summary is always
    /// computed here, so it cannot drift from the data.
    pub fn new(cell: CellId, outcomes: Vec<Result<TrialOutcome>>) -> Self {
        let summary = summarize_cell(cell, &outcomes);
        Self {
            cell,
            outcomes,
            summary,
        }
    }

    pub fn cell(&self) -> CellId {
        self.cell
    }

    pub fn outcomes(&self) -> &[Result<TrialOutcome>] {
        &self.outcomes
    }

    pub fn summary(&self) -> &ExperimentResult {
        &self.summary
    }
}

/// Runs all trials of one cell sequentially.
pub fn run_cell(
    params: &TrialParams,
    cell: CellId,
    master_seed: u64,
    cell_index: usize,
    runs: usize,
) -> CellRuns {
    let outcomes = (0..runs)
        .map(|r| run_single_trial(params, trial_seed(master_seed, cell_index, r)))
        .collect();
    CellRuns::new(cell, outcomes)
}

/// Source-size sweep: one cell per entry of `ns_values`, everything else
/// fixed by `base` (`base.n_source` is ignored).
pub fn run_ns_sweep(
    ns_values: &[usize],
    runs: usize,
    base: &TrialParams,
    master_seed: u64,
) -> Result<Vec<CellRuns>> {
    if ns_values.is_empty() {
        return Err(Error::InvalidInput("ns_values must be non-empty"));
    }
    if runs == 0 {
        return Err(Error::InvalidInput("runs must be at least 1"));
    }
    Ok(ns_values
        .iter()
        .enumerate()
        .map(|(idx, &n_source)| {
            let params = TrialParams { n_source, ..*base };
            run_cell(
                &params,
                CellId::SourceSize(n_source),
                master_seed,
                idx,
                runs,
            )
        })
        .collect())
}

/// Rotation/noise grid: cells in row-major order (theta outer, sigma
/// inner); `base.rotation` and `base.sigma` are ignored.
pub fn run_theta_sigma_grid(
    thetas: &[RotationAngle],
    sigmas: &[f64],
    runs: usize,
    base: &TrialParams,
    master_seed: u64,
) -> Result<Vec<CellRuns>> {
    if thetas.is_empty() || sigmas.is_empty() {
        return Err(Error::InvalidInput("grid axes must be non-empty"));
    }
    if runs == 0 {
        return Err(Error::InvalidInput("runs must be at least 1"));
    }
    let mut cells = Vec::with_capacity(thetas.len() * sigmas.len());
    for (ti, &theta) in thetas.iter().enumerate() {
        for (si, &sigma) in sigmas.iter().enumerate() {
            let params = TrialParams {
                rotation: theta,
                sigma,
                ..*base
            };
            let idx = ti * sigmas.len() + si;
            cells.push(run_cell(
                &params,
                CellId::ThetaSigma {
                    theta: theta.radians(),
                    sigma,
                },
                master_seed,
                idx,
                runs,
            ));
        }
    }
    Ok(cells)
}

/// The default inclination grid: multiples of pi/6 from pi/6 to 5pi/6 with
/// the vertical entry pulled off the singularity by [`VERTICAL_GRID_DELTA`].
pub fn default_theta_grid() -> Vec<RotationAngle> {
    [
        PI / 6.0,
        2.0 * PI / 6.0,
        FRAC_PI_2 - VERTICAL_GRID_DELTA,
        4.0 * PI / 6.0,
        5.0 * PI / 6.0,
    ]
    .iter()
    .map(|&t| RotationAngle::new(t).expect("grid angles are finite"))
    .collect()
}

/// The default noise grid.
pub fn default_sigma_grid() -> Vec<f64> {
    alloc::vec![0.1, 0.2, 0.5, 1.0, 2.0, 5.0]
}
