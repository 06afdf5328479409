//! Rotation-aware domain adaptation for planar linear regression.
//!
//! A linear model is fitted where data is plentiful (the source domain) and
//! transferred to a related domain (the target) that differs by an unknown
//! rotation of the plane. The rotation is estimated from unpaired samples:
//! the source is sketched down to `|target|` k-means centroids, the sketch
//! is matched against the target with exact discrete optimal transport, and
//! an SVD-based orthogonal fit reads the angle off the matched pairs. The
//! fitted source line is mapped through the estimated rotation, and
//! bootstrap replication with a median makes the estimate robust to
//! sampling noise.
//!
//! The [`sim`] module adds a seeded Monte-Carlo harness for measuring when
//! adaptation beats fitting the scarce target data directly.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std`
//! feature only forwards to dependencies.
//!
//! ```
//! use rotadapt::{adapt_regression, rotate_set, AdaptationConfig, PointSet, RotationAngle};
//!
//! // Source: a dense noiseless sample of the flat line y = 0.
//! let xs: Vec<(f64, f64)> = (0..200).map(|i| (i as f64 * 0.05, 0.0)).collect();
//! let source = PointSet::from_pairs(&xs).unwrap();
//!
//! // Target: a handful of points from the same line, rotated by 0.3 rad.
//! let picks: Vec<(f64, f64)> = (1..11).map(|i| (i as f64, 0.0)).collect();
//! let theta = RotationAngle::new(0.3).unwrap();
//! let target = rotate_set(&PointSet::from_pairs(&picks).unwrap(), theta);
//!
//! let config = AdaptationConfig { seed: 1, ..Default::default() };
//! let adapted = adapt_regression(&source, &target, &config).unwrap();
//! assert!((adapted.a - 0.3f64.tan()).abs() < 0.15);
//! ```

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod adapt;
pub mod assign;
pub mod cluster;
pub mod error;
pub mod geom;
pub mod rotation;
pub mod seed;
pub mod sim;

pub use adapt::{
    adapt_regression, adapt_regression_detailed, estimate_angle, fit_ols, median,
    AdaptationConfig, AdaptationOutcome, AngleEstimate, IterationOutcome,
};
pub use assign::{cost_matrix, optimal_transport, solve_assignment, CostMatrix, TransportPlan};
pub use cluster::{kmeans, KMeansConfig, KMeansResult};
pub use error::{Error, Result};
pub use geom::{LineCoeffs, Permutation, Point2, PointSet, Rotation2, RotationAngle};
pub use rotation::{
    estimate_rotation, estimate_rotation_svd, rotate_line, rotate_point, rotate_set,
};
pub use seed::derive_seed;
pub use sim::{
    default_sigma_grid, default_theta_grid, generate_domain, mse, quantile, run_cell,
    run_ns_sweep, run_single_trial, run_theta_sigma_grid, summarize_cell, trial_seed, variation,
    CellId, CellRuns, DomainSpec, ExperimentResult, TrialOutcome, TrialParams,
};
