//! Shape kinds and their signed distance / support functions.

use super::Point;

/// Implicit shape tree. Distances are exact for the primitives except the
/// ellipsoid, whose value is the conservative `min(a_i) (|x/a| - 1)`; that
/// keeps 1-Lipschitz continuity, an exact sign, and |d| below the true
/// distance, which is what the rasterizer and the sphere walker need.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Box {
        half: [f64; 3],
    },
    Ball {
        radius: f64,
    },
    Ellipsoid {
        semi: [f64; 3],
    },
    EquilateralTriangle {
        side: f64,
    },
    HalfDisc {
        radius: f64,
    },
    PunchedBox {
        side: f64,
        holes_per_axis: u32,
        hole_radius: f64,
    },
    Translate {
        offset: Point,
        inner: Box<Shape>,
    },
    Scale {
        factor: f64,
        inner: Box<Shape>,
    },
    Difference {
        base: Box<Shape>,
        hole: Box<Shape>,
    },
}

fn norm(p: Point, dim: usize) -> f64 {
    (0..dim).map(|a| p[a] * p[a]).sum::<f64>().sqrt()
}

impl Shape {
    pub fn signed_distance(&self, p: Point, dim: usize) -> f64 {
        match self {
            Shape::Box { half } => {
                let mut outside_sq = 0.0;
                let mut max_q = f64::NEG_INFINITY;
                for a in 0..dim {
                    let q = p[a].abs() - half[a];
                    max_q = max_q.max(q);
                    if q > 0.0 {
                        outside_sq += q * q;
                    }
                }
                outside_sq.sqrt() + max_q.min(0.0)
            }
            Shape::Ball { radius } => norm(p, dim) - radius,
            Shape::Ellipsoid { semi } => {
                let rho = (0..dim)
                    .map(|a| (p[a] / semi[a]).powi(2))
                    .sum::<f64>()
                    .sqrt();
                let min_axis = (0..dim).map(|a| semi[a]).fold(f64::INFINITY, f64::min);
                min_axis * (rho - 1.0)
            }
            Shape::EquilateralTriangle { side } => {
                // intersection of three half planes; exact inside, where the
                // solvers live, and a lower bound outside near the vertices
                let inradius = side / (2.0 * 3f64.sqrt());
                let normals = [
                    (0.0, -1.0),
                    (3f64.sqrt() / 2.0, 0.5),
                    (-3f64.sqrt() / 2.0, 0.5),
                ];
                normals
                    .iter()
                    .map(|(nx, ny)| nx * p[0] + ny * p[1] - inradius)
                    .fold(f64::NEG_INFINITY, f64::max)
            }
            Shape::HalfDisc { radius } => {
                let d_disc = norm(p, 2) - radius;
                d_disc.max(-p[1])
            }
            Shape::PunchedBox {
                side,
                holes_per_axis,
                hole_radius,
            } => {
                let half = side / 2.0;
                let n = *holes_per_axis as f64;
                let cell = side / n;
                // cube part
                let mut outside_sq = 0.0;
                let mut max_q = f64::NEG_INFINITY;
                for a in 0..dim {
                    let q = p[a].abs() - half;
                    max_q = max_q.max(q);
                    if q > 0.0 {
                        outside_sq += q * q;
                    }
                }
                let d_cube = outside_sq.sqrt() + max_q.min(0.0);
                // nearest hole center on the subcell lattice
                let mut dist_sq = 0.0;
                for a in 0..dim {
                    let k = ((p[a] + half) / cell).floor().clamp(0.0, n - 1.0);
                    let center = -half + (k + 0.5) * cell;
                    dist_sq += (p[a] - center).powi(2);
                }
                d_cube.max(hole_radius - dist_sq.sqrt())
            }
            Shape::Translate { offset, inner } => {
                let q = [p[0] - offset[0], p[1] - offset[1], p[2] - offset[2]];
                inner.signed_distance(q, dim)
            }
            Shape::Scale { factor, inner } => {
                let q = [p[0] / factor, p[1] / factor, p[2] / factor];
                factor * inner.signed_distance(q, dim)
            }
            Shape::Difference { base, hole } => {
                let db = base.signed_distance(p, dim);
                let dh = hole.signed_distance(p, dim);
                db.max(-dh)
            }
        }
    }

    /// Support function `sup_{x in shape} x . u` for planar convex kinds,
    /// with `u` a unit direction. `None` for kinds with holes.
    pub fn support_2d(&self, u: [f64; 2]) -> Option<f64> {
        match self {
            Shape::Box { half } => Some(half[0] * u[0].abs() + half[1] * u[1].abs()),
            Shape::Ball { radius } => Some(*radius),
            Shape::Ellipsoid { semi } => {
                Some(((semi[0] * u[0]).powi(2) + (semi[1] * u[1]).powi(2)).sqrt())
            }
            Shape::EquilateralTriangle { side } => {
                let r = side / 3f64.sqrt();
                let vertices = [
                    (0.0, r),
                    (-side / 2.0, -r / 2.0),
                    (side / 2.0, -r / 2.0),
                ];
                Some(
                    vertices
                        .iter()
                        .map(|(x, y)| x * u[0] + y * u[1])
                        .fold(f64::NEG_INFINITY, f64::max),
                )
            }
            Shape::HalfDisc { radius } => {
                // arc supports every upward direction; the flat side caps
                // the downward ones at |u_x| r
                if u[1] >= 0.0 {
                    Some(*radius)
                } else {
                    Some(radius * u[0].abs())
                }
            }
            Shape::Translate { offset, inner } => inner
                .support_2d(u)
                .map(|h| h + offset[0] * u[0] + offset[1] * u[1]),
            Shape::Scale { factor, inner } => inner.support_2d(u).map(|h| factor * h),
            Shape::PunchedBox { .. } | Shape::Difference { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_distance_is_exact() {
        let b = Shape::Box { half: [0.5, 1.0, 0.0] };
        assert!((b.signed_distance([0.0, 0.0, 0.0], 2) + 0.5).abs() < 1e-15);
        assert!((b.signed_distance([1.5, 0.0, 0.0], 2) - 1.0).abs() < 1e-15);
        // outside a corner: Euclidean distance to (0.5, 1.0)
        let d = b.signed_distance([1.5, 2.0, 0.0], 2);
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn punched_box_distance_sees_nearest_hole() {
        let s = Shape::PunchedBox {
            side: 1.0,
            holes_per_axis: 2,
            hole_radius: 0.1,
        };
        // cell centers at (+-0.25, +-0.25); at the origin the nearest hole
        // surface is sqrt(2)*0.25 - 0.1 away, the cube wall 0.5 away
        let d = s.signed_distance([0.0, 0.0, 0.0], 2);
        let expect = -(2f64.sqrt() * 0.25 - 0.1);
        assert!((d - expect).abs() < 1e-12, "{d} vs {expect}");
        // inside a hole the distance is positive
        assert!(s.signed_distance([0.25, 0.25, 0.0], 2) > 0.0);
    }

    #[test]
    fn half_disc_membership() {
        let s = Shape::HalfDisc { radius: 1.0 };
        assert!(s.signed_distance([0.0, 0.5, 0.0], 2) < 0.0);
        assert!(s.signed_distance([0.0, -0.1, 0.0], 2) > 0.0);
        assert!(s.signed_distance([1.05, 0.05, 0.0], 2) > 0.0);
    }

    #[test]
    fn triangle_inradius_at_centroid() {
        let s = Shape::EquilateralTriangle { side: 1.0 };
        let d = s.signed_distance([0.0, 0.0, 0.0], 2);
        assert!((d + 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn ellipsoid_distance_is_conservative() {
        let s = Shape::Ellipsoid { semi: [2.0, 1.0, 0.0] };
        // at the center, |d| = 1 = the true nearest-boundary distance
        assert!((s.signed_distance([0.0, 0.0, 0.0], 2) + 1.0).abs() < 1e-15);
        // on the long axis just inside: |d| must not exceed the true distance
        let d = s.signed_distance([1.9, 0.0, 0.0], 2);
        assert!(d < 0.0 && d.abs() <= 0.1 + 1e-12);
    }
}
