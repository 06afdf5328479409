//! Planar k-means clustering.
//!
//! Centroids are seeded with the k-means++ rule and refined with Lloyd
//! iterations. Everything is driven by a caller-supplied seed, so results
//! are reproducible bit for bit; ties in the nearest-centroid assignment
//! break toward the lowest centroid index for the same reason.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{Point2, PointSet};

/// Tuning knobs for [`kmeans`]. `k` and `seed` have no sensible universal
/// values and must be chosen by the caller; the rest default to
/// `max_iter = 300`, `tol = 1e-9`, `n_init = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    /// Number of clusters; must satisfy `1 <= k <=` number of distinct points.
    pub k: usize,
    /// Hard cap on Lloyd iterations per restart.
    pub max_iter: usize,
    /// Convergence threshold on the summed squared centroid movement
    /// between consecutive iterations.
    pub tol: f64,
    /// Seed for centroid initialization (and restarts).
    pub seed: u64,
    /// Number of independent restarts; the run with the lowest inertia wins.
    pub n_init: usize,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            max_iter: 300,
            tol: 1e-9,
            seed,
            n_init: 1,
        }
    }
}

/// Output of [`kmeans`]: `labels[i]` indexes the centroid owning point `i`,
/// and `inertia` is the summed squared distance of points to their centroids.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub centroids: PointSet,
    pub labels: Vec<usize>,
    pub inertia: f64,
    pub iterations: usize,
}

fn dist2(a: Point2, b: Point2) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    dx * dx + dy * dy
}

/// Number of distinct points, up to exact coordinate equality.
fn distinct_count(points: &[Point2]) -> usize {
    let mut sorted: Vec<Point2> = points.to_vec();
    // Total order is fine: PointSet guarantees finite coordinates.
    sorted.sort_unstable_by(|p, q| {
        p.x.partial_cmp(&q.x)
            .unwrap()
            .then(p.y.partial_cmp(&q.y).unwrap())
    });
    1 + sorted.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Clusters `data` into `config.k` groups.
///
/// Requires at least `k` distinct points; otherwise some cluster could
/// never receive its own location and the problem is ill-posed.
pub fn kmeans(data: &PointSet, config: &KMeansConfig) -> Result<KMeansResult> {
    let n = data.len();
    let k = config.k;
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1"));
    }
    if config.max_iter == 0 {
        return Err(Error::InvalidInput("max_iter must be at least 1"));
    }
    if config.n_init == 0 {
        return Err(Error::InvalidInput("n_init must be at least 1"));
    }
    if !(config.tol >= 0.0) {
        return Err(Error::InvalidInput("tol must be finite and non-negative"));
    }
    if k > n {
        return Err(Error::DegenerateInput("k exceeds the number of points"));
    }
    if k > 1 && distinct_count(data.points()) < k {
        return Err(Error::DegenerateInput(
            "fewer distinct points than clusters",
        ));
    }

    // Restarts share one rng stream, so n_init = m reproduces the first
    // m restarts of any larger setting.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<KMeansResult> = None;
    for _ in 0..config.n_init {
        let run = lloyd(data, config, &mut rng);
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    Ok(best.expect("n_init >= 1 produces at least one run"))
}

/// One seeded k-means++ initialization followed by Lloyd iterations.
fn lloyd(data: &PointSet, config: &KMeansConfig, rng: &mut ChaCha8Rng) -> KMeansResult {
    let points = data.points();
    let n = points.len();
    let k = config.k;

    let mut centroids = kmeanspp(points, k, rng);
    let mut labels = vec![0usize; n];
    let mut iterations = 0;

    for iter in 0..config.max_iter {
        iterations = iter + 1;

        // Assignment step; ties go to the lowest centroid index.
        for (i, p) in points.iter().enumerate() {
            let mut best_j = 0;
            let mut best_d = dist2(*p, centroids[0]);
            for (j, c) in centroids.iter().enumerate().skip(1) {
                let d = dist2(*p, *c);
                if d < best_d {
                    best_d = d;
                    best_j = j;
                }
            }
            labels[i] = best_j;
        }

        // Update step: means of the assigned points.
        let mut sums = vec![(0.0f64, 0.0f64, 0usize); k];
        for (i, p) in points.iter().enumerate() {
            let s = &mut sums[labels[i]];
            s.0 += p.x;
            s.1 += p.y;
            s.2 += 1;
        }

        let mut shift = 0.0;
        let mut empties: Vec<usize> = Vec::new();
        let mut new_centroids = centroids.clone();
        for (j, &(sx, sy, count)) in sums.iter().enumerate() {
            if count == 0 {
                empties.push(j);
            } else {
                new_centroids[j] = Point2::new(sx / count as f64, sy / count as f64);
            }
        }
        // Empty-cluster repair: each empty centroid jumps to the point
        // currently farthest from its assigned centroid.
        if !empties.is_empty() {
            let mut d_to_own: Vec<f64> = points
                .iter()
                .enumerate()
                .map(|(i, p)| dist2(*p, new_centroids[labels[i]]))
                .collect();
            for j in empties {
                let (far, _) = d_to_own
                    .iter()
                    .enumerate()
                    .fold((0usize, f64::NEG_INFINITY), |(bi, bd), (i, &d)| {
                        if d > bd {
                            (i, d)
                        } else {
                            (bi, bd)
                        }
                    });
                new_centroids[j] = points[far];
                labels[far] = j;
                d_to_own[far] = f64::NEG_INFINITY; // each point repairs one cluster
            }
        }

        for (old, new) in centroids.iter().zip(new_centroids.iter()) {
            shift += dist2(*old, *new);
        }
        centroids = new_centroids;
        if shift <= config.tol {
            break;
        }
    }

    // Final assignment against the settled centroids, plus the inertia.
    let mut inertia = 0.0;
    for (i, p) in points.iter().enumerate() {
        let mut best_j = 0;
        let mut best_d = dist2(*p, centroids[0]);
        for (j, c) in centroids.iter().enumerate().skip(1) {
            let d = dist2(*p, *c);
            if d < best_d {
                best_d = d;
                best_j = j;
            }
        }
        labels[i] = best_j;
        inertia += best_d;
    }

    KMeansResult {
        centroids: PointSet::new(centroids).expect("k >= 1 finite centroids"),
        labels,
        inertia,
        iterations,
    }
}

/// k-means++ seeding: the first centroid is uniform, each next one is drawn
/// with probability proportional to the squared distance to the nearest
/// centroid chosen so far. Points coinciding with a chosen centroid have
/// zero weight and can never be drawn again, so the k seeds are distinct.
fn kmeanspp(points: &[Point2], k: usize, rng: &mut ChaCha8Rng) -> Vec<Point2> {
    let n = points.len();
    let mut centroids = Vec::with_capacity(k);
    centroids.push(points[rng.random_range(0..n)]);

    let mut best_d2: Vec<f64> = points.iter().map(|p| dist2(*p, centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = best_d2.iter().sum();
        let u = rng.random_range(0.0..total);
        let mut cum = 0.0;
        let mut chosen = n - 1;
        for (i, &w) in best_d2.iter().enumerate() {
            cum += w;
            if cum > u {
                chosen = i;
                break;
            }
        }
        let c = points[chosen];
        centroids.push(c);
        for (i, p) in points.iter().enumerate() {
            let d = dist2(*p, c);
            if d < best_d2[i] {
                best_d2[i] = d;
            }
        }
    }
    centroids
}
