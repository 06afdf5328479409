//! Planar primitives: points, point sets, line coefficients, angles,
//! rotation matrices, and permutations.
//!
//! Angles are always normalized to the half-open interval `(-pi, pi]` so that
//! equality comparisons and error measurements are unambiguous.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::ops::Index;

use crate::error::{Error, Result};

/// A point in the plane. Coordinates are expected to be finite; operations
/// that accept external data validate this through [`PointSet`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// A non-empty, ordered sequence of finite points. Order matters: indices
/// carry identity when two sets are matched against each other.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point2>,
}

impl PointSet {
    /// Builds a set from `points`, rejecting empty input and non-finite
    /// coordinates.
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("point set must be non-empty"));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput("point set contains non-finite coordinates"));
        }
        Ok(Self { points })
    }

    /// Convenience constructor from `(x, y)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(x, y)| Point2::new(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; kept for API completeness.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Point2> {
        self.points.iter()
    }

    pub fn into_points(self) -> Vec<Point2> {
        self.points
    }

    /// Arithmetic mean of the set.
    pub fn centroid(&self) -> Point2 {
        let n = self.points.len() as f64;
        let (sx, sy) = self
            .points
            .iter()
            .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
        Point2::new(sx / n, sy / n)
    }
}

impl Index<usize> for PointSet {
    type Output = Point2;

    fn index(&self, i: usize) -> &Point2 {
        &self.points[i]
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point2;
    type IntoIter = core::slice::Iter<'a, Point2>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Slope/intercept coefficients of the line `y = a*x + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineCoeffs {
    /// Slope.
    pub a: f64,
    /// Intercept.
    pub b: f64,
}

impl LineCoeffs {
    pub const fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    /// Evaluates the line at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.a * x + self.b
    }
}

/// A rotation angle in radians, normalized to `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RotationAngle(f64);

impl RotationAngle {
    /// Wraps `theta` (radians) into `(-pi, pi]`. Wrapping is idempotent:
    /// values already in range are returned unchanged, bit for bit.
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidInput("angle must be finite"));
        }
        if theta > -PI && theta <= PI {
            return Ok(Self(theta));
        }
        // fmod keeps the sign of theta, so r is in (-TAU, TAU); one
        // conditional shift lands in (-pi, pi]. Both shifts are exact
        // (Sterbenz), so re-wrapping cannot move the value again.
        let mut r = libm::fmod(theta, TAU);
        if r <= -PI {
            r += TAU;
        } else if r > PI {
            r -= TAU;
        }
        Ok(Self(r))
    }

    /// The wrapped angle in radians.
    pub fn radians(self) -> f64 {
        self.0
    }

    /// Signed angular difference `self - other`, wrapped to `(-pi, pi]`.
    pub fn difference(self, other: RotationAngle) -> RotationAngle {
        // Finite minus finite in (-pi, pi] cannot overflow.
        Self::new(self.0 - other.0).expect("difference of wrapped angles is finite")
    }
}

/// A proper rotation matrix `[[cos, -sin], [sin, cos]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation2 {
    m: [[f64; 2]; 2],
}

/// Elementwise tolerance for the orthonormality and determinant checks in
/// [`Rotation2::try_new`].
pub const ROTATION_TOL: f64 = 1e-9;

impl Rotation2 {
    /// The rotation matrix of `theta`.
    pub fn from_angle(theta: RotationAngle) -> Self {
        let (s, c) = libm::sincos(theta.radians());
        Self {
            m: [[c, -s], [s, c]],
        }
    }

    /// Validates that `m` is orthonormal with determinant +1 (within
    /// [`ROTATION_TOL`] elementwise) before wrapping it.
    pub fn try_new(m: [[f64; 2]; 2]) -> Result<Self> {
        let dot_rows = m[0][0] * m[1][0] + m[0][1] * m[1][1];
        let n0 = m[0][0] * m[0][0] + m[0][1] * m[0][1];
        let n1 = m[1][0] * m[1][0] + m[1][1] * m[1][1];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let ok = dot_rows.abs() <= ROTATION_TOL
            && (n0 - 1.0).abs() <= ROTATION_TOL
            && (n1 - 1.0).abs() <= ROTATION_TOL
            && (det - 1.0).abs() <= ROTATION_TOL;
        if !ok {
            return Err(Error::InvalidInput("matrix is not a proper rotation"));
        }
        Ok(Self { m })
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Applies the rotation to a point.
    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y,
            self.m[1][0] * p.x + self.m[1][1] * p.y,
        )
    }

    /// Extracts the rotation angle via `atan2`.
    pub fn angle(&self) -> RotationAngle {
        RotationAngle::new(libm::atan2(self.m[1][0], self.m[0][0]))
            .expect("atan2 of finite entries is finite")
    }
}

/// A permutation of `{0, ..., n-1}`: position `i` maps to `map[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// Validates that `map` is a bijection on `{0, ..., n-1}`.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n == 0 {
            return Err(Error::InvalidInput("permutation must be non-empty"));
        }
        let mut seen = alloc::vec![false; n];
        for &j in &map {
            if j >= n || seen[j] {
                return Err(Error::InvalidInput("permutation is not a bijection"));
            }
            seen[j] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// The image of index `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.map.iter().copied()
    }
}
