//! Width, projection, and projection eigenvalue for planar convex domains.

use super::{Domain, Shape};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};

/// Minimum width, the projection of the domain onto a minimizing support
/// line, and the first Dirichlet eigenvalue of that projection. In the
/// plane the projection is a segment, so `lambda_projection` is exactly
/// `pi^2 / projection^2` by construction.
#[derive(Debug, Clone, Copy)]
pub struct ConvexMetrics {
    pub width: f64,
    pub projection: f64,
    pub lambda_projection: f64,
    /// angle of the minimizing width direction, radians in [0, pi)
    pub width_angle: f64,
}

fn support(domain: &Domain, angle: f64) -> Option<f64> {
    domain.shape().support_2d([angle.cos(), angle.sin()])
}

fn breadth(domain: &Domain, angle: f64) -> Option<f64> {
    Some(support(domain, angle)? + support(domain, angle + std::f64::consts::PI)?)
}

/// Sampled midpoint check: for a convex open set, the midpoint of two
/// interior points is interior. Catches non-convex inputs that still carry
/// a support function through the shape tree.
fn midpoint_convexity_check(domain: &Domain) -> Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_c0_1);
    let bb = domain.bounding_box();
    let mut interior = Vec::with_capacity(96);
    let mut tries = 0;
    while interior.len() < 96 && tries < 200_000 {
        tries += 1;
        let p = [
            rng.gen_range(bb.lo[0]..bb.hi[0]),
            rng.gen_range(bb.lo[1]..bb.hi[1]),
            0.0,
        ];
        if domain.contains(p) {
            interior.push(p);
        }
    }
    for pair in interior.chunks_exact(2) {
        let mid = [
            0.5 * (pair[0][0] + pair[1][0]),
            0.5 * (pair[0][1] + pair[1][1]),
            0.0,
        ];
        if !domain.contains(mid) {
            return Err(Error::NonConvex);
        }
    }
    Ok(())
}

/// Compute the convex metrics by sweeping 512 directions and refining the
/// best one with a golden-section search to 1e-8 radians.
pub fn convex_metrics(domain: &Domain) -> Result<ConvexMetrics> {
    if domain.dim() != 2 {
        return Err(Error::NotPlanar);
    }
    if matches!(
        domain.shape(),
        Shape::PunchedBox { .. } | Shape::Difference { .. }
    ) {
        return Err(Error::NonConvex);
    }
    midpoint_convexity_check(domain)?;

    let pi = std::f64::consts::PI;
    let n = 512;
    let f = |theta: f64| breadth(domain, theta).expect("support available for convex kinds");
    let mut best_theta = 0.0;
    let mut best = f64::INFINITY;
    for k in 0..n {
        let theta = pi * k as f64 / n as f64;
        let b = f(theta);
        if b < best {
            best = b;
            best_theta = theta;
        }
    }
    // golden-section refinement on the bracketing interval
    let gr = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = best_theta - pi / n as f64;
    let mut b = best_theta + pi / n as f64;
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > 1e-8 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    let theta = 0.5 * (a + b);
    let width = f(theta);
    let projection = breadth(domain, theta + pi / 2.0).expect("support available");
    Ok(ConvexMetrics {
        width,
        projection,
        lambda_projection: pi * pi / (projection * projection),
        width_angle: theta.rem_euclid(pi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry;
    use std::f64::consts::PI;

    #[test]
    fn rectangle_metrics() {
        let d = geometry::rectangle(1.0, 4.0).unwrap();
        let m = convex_metrics(&d).unwrap();
        assert!((m.width - 1.0).abs() < 1e-7);
        assert!((m.projection - 4.0).abs() < 1e-6);
        assert!((m.lambda_projection - PI * PI / 16.0).abs() < 1e-6);
    }

    #[test]
    fn disc_metrics() {
        let d = geometry::ball(1.0, 2).unwrap();
        let m = convex_metrics(&d).unwrap();
        assert!((m.width - 2.0).abs() < 1e-9);
        assert!((m.projection - 2.0).abs() < 1e-9);
        assert!((m.lambda_projection - PI * PI / 4.0).abs() < 1e-9);
    }

    /// Brute-force oracle: width of a polygon is the minimum over edges of
    /// the farthest vertex distance to the edge line.
    fn triangle_width_oracle(side: f64) -> f64 {
        let r = side / 3f64.sqrt();
        let verts = [
            (0.0, r),
            (-side / 2.0, -r / 2.0),
            (side / 2.0, -r / 2.0),
        ];
        let mut best = f64::INFINITY;
        for i in 0..3 {
            let (x1, y1) = verts[i];
            let (x2, y2) = verts[(i + 1) % 3];
            let (ex, ey) = (x2 - x1, y2 - y1);
            let len = (ex * ex + ey * ey).sqrt();
            let far = verts
                .iter()
                .map(|(x, y)| ((x - x1) * ey - (y - y1) * ex).abs() / len)
                .fold(0.0f64, f64::max);
            best = best.min(far);
        }
        best
    }

    #[test]
    fn triangle_width_and_projection() {
        let d = geometry::equilateral_triangle(1.0).unwrap();
        let m = convex_metrics(&d).unwrap();
        let oracle = triangle_width_oracle(1.0);
        assert!((oracle - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((m.width - oracle).abs() < 1e-7, "width {}", m.width);
        assert!((m.projection - 1.0).abs() < 1e-6, "projection {}", m.projection);
    }

    #[test]
    fn lambda_projection_identity() {
        for d in [
            geometry::ball(1.0, 2).unwrap(),
            geometry::rectangle(1.0, 4.0).unwrap(),
            geometry::ellipsoid(&[2.0, 1.0]).unwrap(),
            geometry::half_disc(1.0).unwrap(),
        ] {
            let m = convex_metrics(&d).unwrap();
            assert_eq!(m.lambda_projection * m.projection * m.projection, PI * PI);
        }
    }

    #[test]
    fn width_scaling() {
        let d = geometry::equilateral_triangle(1.0).unwrap();
        let w0 = convex_metrics(&d).unwrap().width;
        let w3 = convex_metrics(&d.scaled(3.0).unwrap()).unwrap().width;
        assert!((w3 - 3.0 * w0).abs() < 1e-6);
    }

    #[test]
    fn punched_box_is_rejected() {
        let d = geometry::punched_box(2, 1.0, 2, 0.1).unwrap();
        assert!(matches!(convex_metrics(&d), Err(Error::NonConvex)));
    }

    #[test]
    fn difference_is_rejected() {
        let base = geometry::ball(1.0, 2).unwrap();
        let hole = geometry::ball(0.2, 2).unwrap();
        let d = base.difference(hole).unwrap();
        assert!(matches!(convex_metrics(&d), Err(Error::NonConvex)));
    }
}
