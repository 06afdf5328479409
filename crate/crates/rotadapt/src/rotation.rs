//! Rigid rotation estimation and application.
//!
//! [`estimate_rotation`] recovers the proper rotation that best maps one
//! paired point set onto another in the least-squares sense: both sets are
//! centered, their cross-covariance is decomposed with a closed-form 2x2
//! SVD, and the determinant-corrected product of the orthogonal factors is
//! the optimizer. [`rotate_line`] pushes a regression line through a
//! rotation of the plane.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::{LineCoeffs, Point2, PointSet, Rotation2, RotationAngle};

/// Threshold on `cos(theta) - a*sin(theta)` below which a rotated line is
/// reported as vertical rather than returned with an exploding slope.
pub const VERTICAL_TOL: f64 = 1e-12;

/// Rotates a single point about the origin.
pub fn rotate_point(p: Point2, angle: RotationAngle) -> Point2 {
    Rotation2::from_angle(angle).apply(p)
}

/// Rotates every point of a set about the origin.
pub fn rotate_set(set: &PointSet, angle: RotationAngle) -> PointSet {
    let r = Rotation2::from_angle(angle);
    let points: Vec<Point2> = set.iter().map(|&p| r.apply(p)).collect();
    PointSet::new(points).expect("rotation preserves finiteness and length")
}

/// A singular value decomposition `m = u * diag(s) * vt` of a 2x2 matrix.
/// `u` and `vt` are orthogonal and `s[0] >= s[1] >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Svd2 {
    pub u: [[f64; 2]; 2],
    pub s: [f64; 2],
    pub vt: [[f64; 2]; 2],
}

/// Closed-form SVD of a 2x2 matrix.
///
/// Splits `m` into a rotation-like part `[[e, -h], [h, e]]` and a
/// reflection-like part `[[f, g], [g, -f]]`; the magnitudes and phases of
/// the two parts give the singular values and the two rotation factors
/// directly. When `det(m) < 0` the raw second singular value comes out
/// negative and its sign is folded into `vt`.
pub fn svd2(m: [[f64; 2]; 2]) -> Svd2 {
    let e = (m[0][0] + m[1][1]) / 2.0;
    let f = (m[0][0] - m[1][1]) / 2.0;
    let g = (m[1][0] + m[0][1]) / 2.0;
    let h = (m[1][0] - m[0][1]) / 2.0;

    let q = libm::hypot(e, h);
    let r = libm::hypot(f, g);
    let sx = q + r;
    let mut sy = q - r;

    // Phases of the two parts; atan2(0, 0) = 0 keeps degenerate inputs sane.
    let a1 = libm::atan2(g, f);
    let a2 = libm::atan2(h, e);
    let phi = (a2 + a1) / 2.0;
    let theta = (a2 - a1) / 2.0;

    let (sp, cp) = libm::sincos(phi);
    let (st, ct) = libm::sincos(theta);
    let u = [[cp, -sp], [sp, cp]];
    let mut vt = [[ct, -st], [st, ct]];
    if sy < 0.0 {
        sy = -sy;
        vt[1][0] = -vt[1][0];
        vt[1][1] = -vt[1][1];
    }
    Svd2 {
        u,
        s: [sx, sy],
        vt,
    }
}

/// Least-squares proper rotation mapping `source` onto `target`.
///
/// The sets are paired by index and must have equal length. Both are
/// centered on their means, so any translation between them is ignored; the
/// result is the rotation minimizing the sum of squared residuals between
/// the centered pairs. The determinant correction guarantees a proper
/// rotation (never a reflection), even when the unconstrained orthogonal
/// fit would mirror the plane.
pub fn estimate_rotation(source: &PointSet, target: &PointSet) -> Result<Rotation2> {
    if source.len() != target.len() {
        return Err(Error::SizeMismatch {
            left: source.len(),
            right: target.len(),
        });
    }
    let sc = source.centroid();
    let tc = target.centroid();

    // Cross-covariance H = sum (s - s_bar) (t - t_bar)^T.
    let mut hxx = 0.0;
    let mut hxy = 0.0;
    let mut hyx = 0.0;
    let mut hyy = 0.0;
    for (s, t) in source.iter().zip(target.iter()) {
        let sx = s.x - sc.x;
        let sy = s.y - sc.y;
        let tx = t.x - tc.x;
        let ty = t.y - tc.y;
        hxx += sx * tx;
        hxy += sx * ty;
        hyx += sy * tx;
        hyy += sy * ty;
    }
    if hxx == 0.0 && hxy == 0.0 && hyx == 0.0 && hyy == 0.0 {
        return Err(Error::DegenerateInput(
            "cross-covariance of the paired sets vanishes",
        ));
    }

    let Svd2 { u, vt, .. } = svd2([[hxx, hxy], [hyx, hyy]]);
    // R = V * diag(1, d) * U^T with d = sign(det(V U^T)) forces det(R) = +1.
    let det_u = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let det_v = vt[0][0] * vt[1][1] - vt[0][1] * vt[1][0];
    let d = if det_u * det_v < 0.0 { -1.0 } else { 1.0 };

    // v_cols: V = vt^T; scale its second column by d, then multiply by U^T.
    let v = [[vt[0][0], vt[1][0]], [vt[0][1], vt[1][1]]];
    let mut r = [[0.0f64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = v[i][0] * u[j][0] + d * v[i][1] * u[j][1];
        }
    }
    Rotation2::try_new(r)
}

/// Like [`estimate_rotation`], but returns just the rotation angle.
pub fn estimate_rotation_svd(source: &PointSet, target: &PointSet) -> Result<RotationAngle> {
    estimate_rotation(source, target).map(|r| r.angle())
}

/// Maps the line `y = a*x + b` through a rotation of the plane by `theta`.
///
/// The image of the line is again a graph `y = a'*x + b'` with
/// `a' = (a*cos(theta) + sin(theta)) / (cos(theta) - a*sin(theta))` and
/// `b' = b / (cos(theta) - a*sin(theta))`, provided the denominator does not
/// vanish; otherwise the image is vertical and an error is returned.
pub fn rotate_line(line: LineCoeffs, theta: RotationAngle) -> Result<LineCoeffs> {
    let (sin, cos) = libm::sincos(theta.radians());
    let denom = cos - line.a * sin;
    if denom.abs() <= VERTICAL_TOL {
        return Err(Error::VerticalLine {
            theta: theta.radians(),
            slope: line.a,
        });
    }
    Ok(LineCoeffs::new(
        (line.a * cos + sin) / denom,
        line.b / denom,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn angle(t: f64) -> RotationAngle {
        RotationAngle::new(t).unwrap()
    }

    /// Independent closed-form optimum: the best rotation angle maximizes
    /// `sum t_i . R(theta) s_i` over centered pairs, which is
    /// `atan2(sum cross, sum dot)`.
    fn oracle_angle(source: &PointSet, target: &PointSet) -> f64 {
        let sc = source.centroid();
        let tc = target.centroid();
        let (mut dot, mut cross) = (0.0, 0.0);
        for (s, t) in source.iter().zip(target.iter()) {
            let (sx, sy) = (s.x - sc.x, s.y - sc.y);
            let (tx, ty) = (t.x - tc.x, t.y - tc.y);
            dot += sx * tx + sy * ty;
            cross += sx * ty - sy * tx;
        }
        libm::atan2(cross, dot)
    }

    #[test]
    fn rotate_point_standard_values() {
        let p = Point2::new(1.0, 0.0);
        let q = rotate_point(p, angle(FRAC_PI_2));
        assert_abs_diff_eq!(q.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.y, 1.0, epsilon = 1e-15);

        let r = rotate_point(Point2::new(1.0, 1.0), angle(PI));
        assert_abs_diff_eq!(r.x, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.y, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn rotate_set_then_back_is_identity() {
        let set = PointSet::from_pairs(&[(1.0, 2.0), (-0.5, 3.25), (4.0, -1.0)]).unwrap();
        let there = rotate_set(&set, angle(0.7));
        let back = rotate_set(&there, angle(-0.7));
        for (p, q) in set.iter().zip(back.iter()) {
            assert_abs_diff_eq!(p.x, q.x, epsilon = 1e-14);
            assert_abs_diff_eq!(p.y, q.y, epsilon = 1e-14);
        }
    }

    fn mat_mul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }

    fn assert_svd_valid(m: [[f64; 2]; 2]) {
        let Svd2 { u, s, vt } = svd2(m);
        assert!(s[0] >= s[1] && s[1] >= 0.0, "singular values {s:?}");
        for o in [u, vt] {
            // Rows orthonormal.
            assert_abs_diff_eq!(o[0][0] * o[0][0] + o[0][1] * o[0][1], 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(o[1][0] * o[1][0] + o[1][1] * o[1][1], 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(o[0][0] * o[1][0] + o[0][1] * o[1][1], 0.0, epsilon = 1e-12);
        }
        let rec = mat_mul(mat_mul(u, [[s[0], 0.0], [0.0, s[1]]]), vt);
        let scale = 1.0 + m.iter().flatten().fold(0.0f64, |a, &x| a.max(x.abs()));
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(rec[i][j], m[i][j], epsilon = 1e-12 * scale);
            }
        }
    }

    #[test]
    fn svd_reconstructs_special_matrices() {
        assert_svd_valid([[1.0, 0.0], [0.0, 1.0]]);
        assert_svd_valid([[0.0, 0.0], [0.0, 0.0]]);
        assert_svd_valid([[3.0, 0.0], [0.0, -2.0]]); // indefinite diagonal
        assert_svd_valid([[0.0, -1.0], [1.0, 0.0]]); // quarter turn
        assert_svd_valid([[0.0, 1.0], [1.0, 0.0]]); // reflection
        assert_svd_valid([[2.0, 4.0], [1.0, 2.0]]); // rank one
        assert_svd_valid([[1e-9, 0.0], [0.0, 1e9]]); // wildly scaled
    }

    #[test]
    fn svd_reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let m = [
                [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)],
                [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)],
            ];
            assert_svd_valid(m);
        }
    }

    #[test]
    fn svd_singular_values_match_eigenvalues() {
        // Singular values of M are sqrt of eigenvalues of M^T M; for
        // [[1, 2], [3, 4]] those are known in closed form.
        let m = [[1.0, 2.0], [3.0, 4.0]];
        let Svd2 { s, .. } = svd2(m);
        // M^T M = [[10, 14], [14, 20]]; eigenvalues 15 +- sqrt(221).
        let l1 = 15.0 + 221.0f64.sqrt();
        let l2 = 15.0 - 221.0f64.sqrt();
        assert_abs_diff_eq!(s[0], l1.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(s[1], l2.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn estimates_exact_rotation_from_pairs() {
        let source =
            PointSet::from_pairs(&[(0.0, 0.0), (1.0, 0.0), (3.0, 2.0), (-1.0, 4.0)]).unwrap();
        for k in 0..60 {
            let theta = -3.1 + 0.105 * k as f64;
            let target = rotate_set(&source, angle(theta));
            let est = estimate_rotation(&source, &target).unwrap();
            let err = est.angle().difference(angle(theta)).radians();
            assert!(err.abs() < 1e-12, "theta = {theta}, err = {err}");
            assert_abs_diff_eq!(est.det(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_point_sets_determine_the_rotation() {
        // Rank-one cross-covariance still pins down a planar rotation.
        let source = PointSet::from_pairs(&[(0.0, 0.0), (2.0, 1.0)]).unwrap();
        let target = rotate_set(&source, angle(1.234));
        let est = estimate_rotation(&source, &target).unwrap();
        assert_abs_diff_eq!(est.angle().radians(), 1.234, epsilon = 1e-12);
    }

    #[test]
    fn translation_does_not_bias_the_estimate() {
        let source = PointSet::from_pairs(&[(1.0, 1.0), (2.0, 5.0), (4.0, 0.0)]).unwrap();
        let rotated = rotate_set(&source, angle(-0.8));
        let shifted =
            PointSet::from_pairs(&rotated.iter().map(|p| (p.x + 100.0, p.y - 7.0)).collect::<Vec<_>>())
                .unwrap();
        let est = estimate_rotation(&source, &shifted).unwrap();
        assert_abs_diff_eq!(est.angle().radians(), -0.8, epsilon = 1e-10);
    }

    #[test]
    fn agrees_with_closed_form_optimum_on_noisy_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.random_range(2..30);
            let pairs: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
                .collect();
            let source = PointSet::from_pairs(&pairs).unwrap();
            // Arbitrary target: no rotation relates the two, so this checks
            // the least-squares optimality, not just exact recovery.
            let tgt: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
                .collect();
            let target = PointSet::from_pairs(&tgt).unwrap();
            let est = estimate_rotation(&source, &target);
            let est = match est {
                Ok(r) => r,
                // Vanishing cross-covariance is possible in principle but
                // practically unreachable with continuous random inputs.
                Err(e) => panic!("unexpected failure: {e:?}"),
            };
            let want = oracle_angle(&source, &target);
            let err = est.angle().difference(angle(want)).radians();
            assert!(err.abs() < 1e-9, "want {want}, got {}", est.angle().radians());
        }
    }

    #[test]
    fn determinant_correction_handles_mirrored_targets() {
        // Mirroring the source makes the unconstrained orthogonal fit a
        // reflection; the estimator must still return a proper rotation and
        // still match the closed-form best rotation.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let n = rng.random_range(3..20);
            let pairs: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
                .collect();
            let source = PointSet::from_pairs(&pairs).unwrap();
            let mirrored: Vec<(f64, f64)> = pairs.iter().map(|&(x, y)| (x, -y)).collect();
            let target = PointSet::from_pairs(&mirrored).unwrap();
            let est = estimate_rotation(&source, &target).unwrap();
            assert_abs_diff_eq!(est.det(), 1.0, epsilon = 1e-9);
            let want = oracle_angle(&source, &target);
            let err = est.angle().difference(angle(want)).radians();
            assert!(err.abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_pairs_are_rejected() {
        let s = PointSet::from_pairs(&[(1.0, 1.0), (1.0, 1.0)]).unwrap();
        let t = PointSet::from_pairs(&[(0.0, 0.0), (2.0, 2.0)]).unwrap();
        assert_eq!(
            estimate_rotation(&s, &t).unwrap_err(),
            Error::DegenerateInput("cross-covariance of the paired sets vanishes")
        );

        let one = PointSet::from_pairs(&[(1.0, 2.0)]).unwrap();
        assert!(estimate_rotation(&one, &one).is_err());

        let two = PointSet::from_pairs(&[(1.0, 2.0), (3.0, 4.0)]).unwrap();
        assert_eq!(
            estimate_rotation(&one, &two).unwrap_err(),
            Error::SizeMismatch { left: 1, right: 2 }
        );
    }

    #[test]
    fn rotate_line_quarter_turn_example() {
        // The horizontal line y = 1 rotated by pi/4 becomes y = x + sqrt(2).
        let out = rotate_line(LineCoeffs::new(0.0, 1.0), angle(FRAC_PI_4)).unwrap();
        assert_abs_diff_eq!(out.a, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.b, SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn rotate_line_matches_two_point_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 300 {
            let a = rng.random_range(-4.0..4.0);
            let b = rng.random_range(-10.0..10.0);
            let theta = rng.random_range(-3.0..3.0);
            let (sin, cos) = libm::sincos(theta);
            if (cos - a * sin).abs() < 1e-3 {
                continue; // stay away from the vertical image
            }
            checked += 1;

            // Rotate two concrete points of the line and re-fit.
            let p0 = rotate_point(Point2::new(0.0, b), angle(theta));
            let p1 = rotate_point(Point2::new(1.0, a + b), angle(theta));
            let want_a = (p1.y - p0.y) / (p1.x - p0.x);
            let want_b = p0.y - want_a * p0.x;

            let got = rotate_line(LineCoeffs::new(a, b), angle(theta)).unwrap();
            let scale_a = 1.0 + want_a.abs();
            let scale_b = 1.0 + want_b.abs();
            assert_abs_diff_eq!(got.a, want_a, epsilon = 1e-8 * scale_a);
            assert_abs_diff_eq!(got.b, want_b, epsilon = 1e-8 * scale_b);
        }
    }

    #[test]
    fn rotate_line_round_trip() {
        let line = LineCoeffs::new(0.75, -2.0);
        let there = rotate_line(line, angle(0.5)).unwrap();
        let back = rotate_line(there, angle(-0.5)).unwrap();
        assert_abs_diff_eq!(back.a, line.a, epsilon = 1e-12);
        assert_abs_diff_eq!(back.b, line.b, epsilon = 1e-12);
    }

    #[test]
    fn rotating_a_line_onto_the_vertical_fails() {
        // Slope 1 rotated by pi/4 becomes vertical: cos - 1*sin = 0.
        let err = rotate_line(LineCoeffs::new(1.0, 0.0), angle(FRAC_PI_4)).unwrap_err();
        match err {
            Error::VerticalLine { theta, slope } => {
                assert_abs_diff_eq!(theta, FRAC_PI_4, epsilon = 1e-15);
                assert_eq!(slope, 1.0);
            }
            other => panic!("expected VerticalLine, got {other:?}"),
        }
    }
}
