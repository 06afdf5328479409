//! The adaptation pipeline: OLS fitting, rotation-angle estimation from
//! unpaired samples, and the bootstrap-median adapted regression.
//!
//! [`estimate_angle`] compresses the source set to as many centroids as the
//! target has points (k-means), matches centroids to target points with
//! exact optimal transport, and reads the rotation off the matched pairs
//! with the SVD estimator. [`adapt_regression`] wraps that in a bootstrap
//! loop and returns the componentwise median of the per-iteration rotated
//! source fits, which tolerates the occasional wild angle estimate.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assign::{optimal_transport, TransportPlan};
use crate::cluster::{kmeans, KMeansConfig};
use crate::error::{Error, Result};
use crate::geom::{LineCoeffs, Point2, PointSet, RotationAngle};
use crate::rotation::{estimate_rotation, rotate_line};
use crate::seed::derive_seed;

/// Knobs for [`estimate_angle`] and [`adapt_regression`].
///
/// The embedded k-means configuration supplies `max_iter`, `tol` and
/// `n_init` only: its `k` is always overwritten with the target size, and
/// its `seed` with a value derived from `self.seed`, so the pipeline has a
/// single seed to reproduce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptationConfig {
    /// Bootstrap repetitions N.
    pub n_repetitions: usize,
    /// Fraction p of the source drawn per repetition, in (0, 1]. The value
    /// 1 is the degenerate case: the whole source is used, no resampling.
    pub bootstrap_proportion: f64,
    /// Order of the p-norm used as the transport cost.
    pub norm_order: f64,
    /// k-means tuning; see the struct-level note on `k` and `seed`.
    pub kmeans: KMeansConfig,
    /// Master seed; everything downstream derives from it.
    pub seed: u64,
    /// Additional draws allowed when a bootstrap sample has too few
    /// distinct points to seed k-means.
    pub max_bootstrap_retries: usize,
}

impl Default for AdaptationConfig {
    fn default() -> Self {
        Self {
            n_repetitions: 100,
            bootstrap_proportion: 0.5,
            norm_order: 2.0,
            kmeans: KMeansConfig::new(0, 0), // k and seed are replaced per call
            seed: 0,
            max_bootstrap_retries: 10,
        }
    }
}

impl AdaptationConfig {
    fn validate(&self) -> Result<()> {
        if self.n_repetitions == 0 {
            return Err(Error::InvalidInput("n_repetitions must be at least 1"));
        }
        let p = self.bootstrap_proportion;
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidInput(
                "bootstrap_proportion must lie in (0, 1]",
            ));
        }
        if self.norm_order.is_nan() || self.norm_order < 1.0 {
            return Err(Error::InvalidInput("norm order must satisfy p >= 1"));
        }
        Ok(())
    }
}

/// Output of [`estimate_angle`]: the angle plus the intermediates the
/// estimate was read from.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleEstimate {
    pub theta_hat: RotationAngle,
    pub plan: TransportPlan,
    pub centroids: PointSet,
}

/// Ordinary least squares for the line `y = a*x + b`.
pub fn fit_ols(data: &PointSet) -> Result<LineCoeffs> {
    if data.len() < 2 {
        return Err(Error::DegenerateInput(
            "least squares needs at least two points",
        ));
    }
    let c = data.centroid();
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for p in data {
        let dx = p.x - c.x;
        sxx += dx * dx;
        sxy += dx * (p.y - c.y);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateInput("x values are all equal"));
    }
    let a = sxy / sxx;
    Ok(LineCoeffs::new(a, c.y - a * c.x))
}

/// Median with the midpoint convention for even lengths.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InvalidInput("median of an empty sequence"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len();
    Ok(if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    })
}

/// Estimates the rotation angle between the source and target domains.
///
/// The source is summarized by `|target|` k-means centroids, the centroids
/// are matched to the target points by exact optimal transport under the
/// configured p-norm, and the angle is the SVD rotation estimate over the
/// matched pairs. Deterministic given `config.seed`.
pub fn estimate_angle(
    source: &PointSet,
    target: &PointSet,
    config: &AdaptationConfig,
) -> Result<AngleEstimate> {
    config.validate()?;
    estimate_angle_seeded(source, target, derive_seed(config.seed, 0), config)
}

fn estimate_angle_seeded(
    source: &PointSet,
    target: &PointSet,
    kmeans_seed: u64,
    config: &AdaptationConfig,
) -> Result<AngleEstimate> {
    if target.len() < 2 {
        return Err(Error::DegenerateInput(
            "target must contain at least two points",
        ));
    }
    if source.len() < target.len() {
        return Err(Error::DegenerateInput(
            "source must have at least as many points as the target",
        ));
    }
    let kcfg = KMeansConfig {
        k: target.len(),
        seed: kmeans_seed,
        ..config.kmeans
    };
    let km = kmeans(source, &kcfg)?;
    let plan = optimal_transport(&km.centroids, target, config.norm_order)?;
    let matched: Vec<Point2> = plan.assignment.iter().map(|j| target[j]).collect();
    let matched = PointSet::new(matched).expect("permutation of a valid set");
    let rotation = estimate_rotation(&km.centroids, &matched)?;
    Ok(AngleEstimate {
        theta_hat: rotation.angle(),
        plan,
        centroids: km.centroids,
    })
}

/// The fate of one bootstrap repetition inside [`adapt_regression`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IterationOutcome {
    /// The estimated angle and the rotated source line it produced.
    Accepted {
        theta: RotationAngle,
        line: LineCoeffs,
    },
    /// Why this repetition contributed nothing to the medians.
    Rejected(Error),
}

/// Everything [`adapt_regression`] computes, kept for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptationOutcome {
    /// Componentwise median of the accepted per-iteration lines.
    pub adapted: LineCoeffs,
    /// The OLS fit on the full source set.
    pub source_fit: LineCoeffs,
    /// Per-repetition outcomes, in iteration order.
    pub iterations: Vec<IterationOutcome>,
}

impl AdaptationOutcome {
    pub fn accepted_count(&self) -> usize {
        self.iterations
            .iter()
            .filter(|o| matches!(o, IterationOutcome::Accepted { .. }))
            .count()
    }

    pub fn rejected_count(&self) -> usize {
        self.iterations.len() - self.accepted_count()
    }
}

/// Adapts the source regression line to the target domain.
///
/// Fits OLS on the source, repeatedly estimates the domain rotation from a
/// bootstrap subsample of the source versus the full target, rotates the
/// source line by each estimate, and returns the componentwise median of
/// the per-iteration coefficients. Iterations whose angle estimate fails
/// (too few distinct bootstrap points, degenerate geometry, or a vertical
/// rotated line) are dropped from the medians.
pub fn adapt_regression(
    source: &PointSet,
    target: &PointSet,
    config: &AdaptationConfig,
) -> Result<LineCoeffs> {
    adapt_regression_detailed(source, target, config).map(|out| out.adapted)
}

/// [`adapt_regression`] plus per-iteration details for reporting.
pub fn adapt_regression_detailed(
    source: &PointSet,
    target: &PointSet,
    config: &AdaptationConfig,
) -> Result<AdaptationOutcome> {
    config.validate()?;
    if target.len() < 2 {
        return Err(Error::DegenerateInput(
            "target must contain at least two points",
        ));
    }
    let source_fit = fit_ols(source)?;
    let n_target = target.len();
    let sample_size = sample_size(source.len(), config.bootstrap_proportion);

    let mut iterations = Vec::with_capacity(config.n_repetitions);
    let mut slopes = Vec::with_capacity(config.n_repetitions);
    let mut intercepts = Vec::with_capacity(config.n_repetitions);
    for i in 0..config.n_repetitions {
        let iter_seed = derive_seed(config.seed, 1 + i as u64);
        let outcome = run_iteration(source, target, config, sample_size, n_target, iter_seed);
        if let IterationOutcome::Accepted { line, .. } = outcome {
            slopes.push(line.a);
            intercepts.push(line.b);
        }
        iterations.push(outcome);
    }

    if slopes.is_empty() {
        return Err(Error::AdaptationFailed {
            iterations: config.n_repetitions,
        });
    }
    let adapted = LineCoeffs::new(median(&slopes)?, median(&intercepts)?);
    Ok(AdaptationOutcome {
        adapted,
        source_fit,
        iterations,
    })
}

fn run_iteration(
    source: &PointSet,
    target: &PointSet,
    config: &AdaptationConfig,
    sample_size: usize,
    min_distinct: usize,
    iter_seed: u64,
) -> IterationOutcome {
    let mut boot_rng = ChaCha8Rng::seed_from_u64(derive_seed(iter_seed, 1));
    let subset = match bootstrap_sample(
        source,
        sample_size,
        min_distinct,
        config.max_bootstrap_retries,
        config.bootstrap_proportion >= 1.0,
        &mut boot_rng,
    ) {
        Some(s) => s,
        None => {
            return IterationOutcome::Rejected(Error::DegenerateInput(
                "bootstrap sample never reached the required distinct count",
            ))
        }
    };

    let kmeans_seed = derive_seed(iter_seed, 0);
    let source_fit = match fit_ols(source) {
        Ok(f) => f,
        Err(e) => return IterationOutcome::Rejected(e),
    };
    match estimate_angle_seeded(&subset, target, kmeans_seed, config) {
        Ok(est) => match rotate_line(source_fit, est.theta_hat) {
            Ok(line) => IterationOutcome::Accepted {
                theta: est.theta_hat,
                line,
            },
            Err(e) => IterationOutcome::Rejected(e),
        },
        Err(e) => IterationOutcome::Rejected(e),
    }
}

/// `ceil(p * n)`, the bootstrap draw count.
fn sample_size(n: usize, proportion: f64) -> usize {
    libm::ceil(proportion * n as f64) as usize
}

/// De-duplication key with `-0.0` folded onto `0.0` so the key agrees with
/// coordinate equality.
fn point_key(p: Point2) -> (u64, u64) {
    let x = if p.x == 0.0 { 0.0 } else { p.x };
    let y = if p.y == 0.0 { 0.0 } else { p.y };
    (x.to_bits(), y.to_bits())
}

/// Draws `size` points from `source` with replacement and de-duplicates
/// them, keeping first occurrences in draw order. Retries until the sample
/// has at least `min_distinct` distinct points, or gives up after
/// `retries` extra attempts. With `full_set` (the p = 1 case) the sample is
/// the source itself, de-duplicated, with no randomness.
fn bootstrap_sample(
    source: &PointSet,
    size: usize,
    min_distinct: usize,
    retries: usize,
    full_set: bool,
    rng: &mut ChaCha8Rng,
) -> Option<PointSet> {
    let n = source.len();
    for _ in 0..=retries {
        let mut seen = BTreeSet::new();
        let mut distinct: Vec<Point2> = Vec::with_capacity(size.min(n));
        for k in 0..size {
            let p = if full_set {
                source[k]
            } else {
                source[rng.random_range(0..n)]
            };
            if seen.insert(point_key(p)) {
                distinct.push(p);
            }
        }
        if distinct.len() >= min_distinct {
            return Some(PointSet::new(distinct).expect("non-empty finite subset"));
        }
        if full_set {
            return None; // deterministic: retrying cannot change anything
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotation::rotate_set;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::FRAC_PI_4;
    use rand::{Rng, SeedableRng};

    fn angle(t: f64) -> RotationAngle {
        RotationAngle::new(t).unwrap()
    }

    fn line_points(a: f64, b: f64, xs: &[f64]) -> PointSet {
        PointSet::from_pairs(&xs.iter().map(|&x| (x, a * x + b)).collect::<Vec<_>>()).unwrap()
    }

    fn spread(n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn ols_recovers_exact_lines() {
        let fit = fit_ols(&line_points(1.0, 0.0, &[0.0, 1.0, 2.0])).unwrap();
        assert_eq!(fit, LineCoeffs::new(1.0, 0.0));

        let fit = fit_ols(&line_points(0.0, 1.0, &[0.0, 1.0, 2.0])).unwrap();
        assert_eq!(fit, LineCoeffs::new(0.0, 1.0));
    }

    #[test]
    fn ols_three_point_closed_form() {
        // Symmetric tent {(0,0),(1,1),(2,0)}: slope 0, intercept mean(y).
        let fit = fit_ols(&PointSet::from_pairs(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]).unwrap())
            .unwrap();
        assert_abs_diff_eq!(fit.a, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fit.b, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn ols_minimizes_squared_residuals() {
        // Nudging the fitted coefficients never lowers the loss.
        let data = PointSet::from_pairs(&[
            (0.0, 0.3),
            (1.0, 1.1),
            (2.0, 1.8),
            (3.0, 3.4),
            (4.0, 3.9),
        ])
        .unwrap();
        let fit = fit_ols(&data).unwrap();
        let loss = |a: f64, b: f64| -> f64 {
            data.iter().map(|p| (p.y - a * p.x - b) * (p.y - a * p.x - b)).sum()
        };
        let base = loss(fit.a, fit.b);
        for (da, db) in [(0.01, 0.0), (-0.01, 0.0), (0.0, 0.01), (0.0, -0.01)] {
            assert!(loss(fit.a + da, fit.b + db) > base);
        }
    }

    #[test]
    fn ols_rejects_degenerate_input() {
        let one = PointSet::from_pairs(&[(1.0, 2.0)]).unwrap();
        assert!(fit_ols(&one).is_err());
        let vertical = PointSet::from_pairs(&[(2.0, 0.0), (2.0, 1.0), (2.0, 5.0)]).unwrap();
        assert_eq!(
            fit_ols(&vertical).unwrap_err(),
            Error::DegenerateInput("x values are all equal")
        );
    }

    #[test]
    fn median_conventions() {
        assert_eq!(median(&[3.0]).unwrap(), 3.0);
        assert_eq!(median(&[1.0, 2.0, 100.0]).unwrap(), 2.0);
        assert_eq!(median(&[1.0, 2.0, 3.0, 4.0]).unwrap(), 2.5);
        assert_eq!(median(&[2.0, 1.0]).unwrap(), 1.5); // order-insensitive
        assert!(median(&[]).is_err());
    }

    #[test]
    fn median_breakdown_point() {
        // Replacing fewer than half of the values with wild outliers keeps
        // the median inside the range of the untouched values.
        let base = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
        for outlier in [1e18, -1e18] {
            for corrupted in 0..=3usize {
                let mut vals = base;
                for slot in 0..corrupted {
                    vals[slot * 2] = outlier; // scatter the corruption
                }
                let m = median(&vals).unwrap();
                assert!((1.0..=7.0).contains(&m), "median {m} escaped the range");
            }
        }
    }

    #[test]
    fn config_validation() {
        let data = line_points(1.0, 0.0, &spread(20, 0.0, 10.0));
        let target = line_points(1.0, 0.0, &spread(5, 0.0, 10.0));
        for bad in [
            AdaptationConfig {
                n_repetitions: 0,
                ..Default::default()
            },
            AdaptationConfig {
                bootstrap_proportion: 0.0,
                ..Default::default()
            },
            AdaptationConfig {
                bootstrap_proportion: 1.5,
                ..Default::default()
            },
            AdaptationConfig {
                bootstrap_proportion: f64::NAN,
                ..Default::default()
            },
            AdaptationConfig {
                norm_order: 0.5,
                ..Default::default()
            },
        ] {
            assert!(adapt_regression(&data, &target, &bad).is_err());
        }
    }

    #[test]
    fn angle_estimate_on_axis_points() {
        // Source: 200 noiseless points on the x-axis; target: 10 of them
        // rotated by pi/4. The centroid sketch cannot match the target
        // points exactly, so the tolerance is loose.
        let source = line_points(0.0, 0.0, &spread(200, 0.0, 10.0));
        let picks: Vec<f64> = spread(10, 0.2, 9.8);
        let target = rotate_set(&line_points(0.0, 0.0, &picks), angle(FRAC_PI_4));
        let config = AdaptationConfig {
            seed: 42,
            ..Default::default()
        };
        let est = estimate_angle(&source, &target, &config).unwrap();
        assert!((est.theta_hat.radians() - FRAC_PI_4).abs() < 0.05);
        assert_eq!(est.centroids.len(), target.len());

        // Zero rotation: same construction, unrotated target.
        let target0 = line_points(0.0, 0.0, &picks);
        let est0 = estimate_angle(&source, &target0, &config).unwrap();
        assert!(est0.theta_hat.radians().abs() < 0.05);
    }

    #[test]
    fn angle_estimate_exact_when_sizes_match() {
        // |target| = |source| on line-shaped data: k-means with k = n
        // returns the points themselves (in selection order), transport
        // matches each with its own rotated image, and the angle is exact.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let pairs: Vec<(f64, f64)> = (0..25)
            .map(|_| {
                let x = rng.random_range(0.0..10.0);
                (x, 0.7 * x)
            })
            .collect();
        let source = PointSet::from_pairs(&pairs).unwrap();
        let theta = 0.6;
        let target = rotate_set(&source, angle(theta));
        let config = AdaptationConfig {
            seed: 7,
            ..Default::default()
        };
        let est = estimate_angle(&source, &target, &config).unwrap();
        assert!((est.theta_hat.radians() - theta).abs() < 1e-10);

        // Each centroid is paired with the image of the same source point.
        let rotated_centroids = rotate_set(&est.centroids, angle(theta));
        for (i, rc) in rotated_centroids.iter().enumerate() {
            let t = target[est.plan.assignment.apply(i)];
            assert_abs_diff_eq!(rc.x, t.x, epsilon = 1e-9);
            assert_abs_diff_eq!(rc.y, t.y, epsilon = 1e-9);
        }
    }

    #[test]
    fn angle_estimate_rejects_thin_input() {
        let source = line_points(0.0, 0.0, &spread(10, 0.0, 10.0));
        let one = PointSet::from_pairs(&[(1.0, 1.0)]).unwrap();
        assert!(estimate_angle(&source, &one, &AdaptationConfig::default()).is_err());
        // Source smaller than target.
        let small = line_points(0.0, 0.0, &spread(3, 0.0, 10.0));
        let big = line_points(0.0, 0.0, &spread(5, 0.0, 10.0));
        assert!(estimate_angle(&small, &big, &AdaptationConfig::default()).is_err());
    }

    #[test]
    fn zero_rotation_returns_the_source_fit() {
        let source = line_points(0.5, 1.0, &spread(100, 0.0, 10.0));
        let target = line_points(0.5, 1.0, &spread(12, 0.3, 9.7));
        let config = AdaptationConfig {
            seed: 3,
            ..Default::default()
        };
        let adapted = adapt_regression(&source, &target, &config).unwrap();
        let source_fit = fit_ols(&source).unwrap();
        assert_abs_diff_eq!(adapted.a, source_fit.a, epsilon = 1e-6);
        assert_abs_diff_eq!(adapted.b, source_fit.b, epsilon = 1e-6);
    }

    #[test]
    fn noiseless_quarter_turn_recovers_unit_slope() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let xs: Vec<f64> = (0..1000).map(|_| rng.random_range(0.0..10.0)).collect();
        let source = line_points(0.0, 0.0, &xs);
        let picks: Vec<f64> = (0..10).map(|_| rng.random_range(0.0..10.0)).collect();
        let target = rotate_set(&line_points(0.0, 0.0, &picks), angle(FRAC_PI_4));
        let config = AdaptationConfig {
            n_repetitions: 50,
            seed: 17,
            ..Default::default()
        };
        let adapted = adapt_regression(&source, &target, &config).unwrap();
        assert!((adapted.a - 1.0).abs() < 0.1, "slope {}", adapted.a);
    }

    #[test]
    fn full_proportion_collapses_to_the_deterministic_pipeline() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let pairs: Vec<(f64, f64)> = (0..30)
            .map(|_| {
                let x = rng.random_range(0.0..10.0);
                (x, 0.4 * x + 2.0 + rng.random_range(-0.1..0.1))
            })
            .collect();
        let source = PointSet::from_pairs(&pairs).unwrap();
        let theta = 0.35;
        let target = rotate_set(&source, angle(theta));
        let config = AdaptationConfig {
            n_repetitions: 1,
            bootstrap_proportion: 1.0,
            seed: 5,
            ..Default::default()
        };
        let adapted = adapt_regression(&source, &target, &config).unwrap();
        // The reference: rotate the source fit by the true angle.
        let want = rotate_line(fit_ols(&source).unwrap(), angle(theta)).unwrap();
        assert_abs_diff_eq!(adapted.a, want.a, epsilon = 1e-8);
        assert_abs_diff_eq!(adapted.b, want.b, epsilon = 1e-8);
    }

    #[test]
    fn results_are_bitwise_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pairs: Vec<(f64, f64)> = (0..300)
            .map(|_| {
                let x = rng.random_range(0.0..10.0);
                (x, x + rng.random_range(-1.0..1.0))
            })
            .collect();
        let source = PointSet::from_pairs(&pairs).unwrap();
        let tp: Vec<(f64, f64)> = (0..10)
            .map(|_| {
                let x = rng.random_range(0.0..10.0);
                (x, 1.2 * x + rng.random_range(-1.0..1.0))
            })
            .collect();
        let target = PointSet::from_pairs(&tp).unwrap();
        let config = AdaptationConfig {
            seed: 999,
            ..Default::default()
        };
        let a = adapt_regression_detailed(&source, &target, &config).unwrap();
        let b = adapt_regression_detailed(&source, &target, &config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iterations.len(), config.n_repetitions);
    }

    #[test]
    fn impossible_bootstrap_reports_adaptation_failed() {
        // Three distinct source points but a draw size of 1: no sample can
        // ever cover a 3-point target, so every iteration is rejected.
        let source = PointSet::from_pairs(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.5)]).unwrap();
        let target = PointSet::from_pairs(&[(0.0, 1.0), (1.0, 2.0), (2.0, 3.0)]).unwrap();
        let config = AdaptationConfig {
            n_repetitions: 4,
            bootstrap_proportion: 0.3, // ceil(0.3 * 3) = 1 point per draw
            seed: 1,
            ..Default::default()
        };
        assert_eq!(
            adapt_regression(&source, &target, &config).unwrap_err(),
            Error::AdaptationFailed { iterations: 4 }
        );
    }

    #[test]
    fn bootstrap_draws_only_source_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pairs: Vec<(f64, f64)> = (0..50)
            .map(|_| (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
            .collect();
        let source = PointSet::from_pairs(&pairs).unwrap();
        let allowed: BTreeSet<(u64, u64)> = source.iter().map(|&p| point_key(p)).collect();

        let mut draw_rng = ChaCha8Rng::seed_from_u64(100);
        for _ in 0..20 {
            let sample = bootstrap_sample(&source, 25, 5, 10, false, &mut draw_rng).unwrap();
            assert!(sample.len() <= 25);
            assert!(sample.len() >= 5);
            for p in &sample {
                assert!(allowed.contains(&point_key(*p)), "foreign point {p:?}");
            }
            // De-duplication really happened.
            let keys: BTreeSet<_> = sample.iter().map(|&p| point_key(p)).collect();
            assert_eq!(keys.len(), sample.len());
        }
    }

    #[test]
    fn bootstrap_sample_sizes_follow_the_proportion() {
        assert_eq!(sample_size(1000, 0.5), 500);
        assert_eq!(sample_size(3, 0.3), 1); // ceil(0.9)
        assert_eq!(sample_size(10, 1.0), 10);
        assert_eq!(sample_size(7, 0.99), 7); // ceil(6.93)
    }
}
