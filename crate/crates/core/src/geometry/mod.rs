//! Implicit domain construction and geometric measurements.
//!
//! A [`Domain`] is a membership predicate plus a signed distance function
//! (negative inside), a bounding box, and whatever exact metadata the shape
//! admits in closed form. Points are `[f64; 3]` throughout; planar domains
//! ignore the third coordinate.

mod convex;
mod json;
mod measure;
mod shapes;

pub use convex::{convex_metrics, ConvexMetrics};
pub use json::{domain_from_json, domain_from_name};
pub use measure::{measure, perimeter};
pub use shapes::Shape;

use crate::constants::unit_ball_volume;
use crate::error::{Error, Result};

pub type Point = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub lo: Point,
    pub hi: Point,
}

impl BoundingBox {
    pub fn extent(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    pub fn diameter(&self, dim: usize) -> f64 {
        (0..dim).map(|a| self.extent(a).powi(2)).sum::<f64>().sqrt()
    }
}

/// Closed-form shape data carried alongside the implicit representation.
/// A `None` simply means the quantity has no elementary closed form for
/// that shape; solvers fill the gap.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ExactValues {
    pub measure: Option<f64>,
    pub perimeter: Option<f64>,
    pub torsional_rigidity: Option<f64>,
    pub lambda1: Option<f64>,
}

impl ExactValues {
    /// T * lambda_1 / |domain| when all three ingredients are known.
    pub fn polya_functional(&self) -> Option<f64> {
        match (self.torsional_rigidity, self.lambda1, self.measure) {
            (Some(t), Some(l), Some(v)) => Some(t * l / v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Domain {
    shape: Shape,
    dim: usize,
    bbox: BoundingBox,
    exact: ExactValues,
    label: String,
}

impl Domain {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn bounding_box(&self) -> BoundingBox {
        self.bbox
    }

    pub fn exact(&self) -> ExactValues {
        self.exact
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Signed distance, negative inside. For boolean combinations this is a
    /// conservative value: |d| never exceeds the true distance to the
    /// boundary, and the sign is exact.
    pub fn signed_distance(&self, p: Point) -> f64 {
        self.shape.signed_distance(p, self.dim)
    }

    pub fn contains(&self, p: Point) -> bool {
        self.signed_distance(p) < 0.0
    }

    pub fn diameter(&self) -> f64 {
        self.bbox.diameter(self.dim)
    }

    /// Set difference `self \ closure(hole)`. Exact metadata is dropped;
    /// the punched-box family keeps its closed forms by construction instead.
    pub fn difference(self, hole: Domain) -> Result<Domain> {
        if self.dim != hole.dim {
            return Err(Error::InvalidSpec(
                "difference of domains with different dimensions".into(),
            ));
        }
        let label = format!("{} minus {}", self.label, hole.label);
        Ok(Domain {
            shape: Shape::Difference {
                base: Box::new(self.shape),
                hole: Box::new(hole.shape),
            },
            dim: self.dim,
            bbox: self.bbox,
            exact: ExactValues::default(),
            label,
        })
    }

    pub fn translated(self, offset: Point) -> Domain {
        let mut bbox = self.bbox;
        for a in 0..3 {
            bbox.lo[a] += offset[a];
            bbox.hi[a] += offset[a];
        }
        Domain {
            shape: Shape::Translate {
                offset,
                inner: Box::new(self.shape),
            },
            bbox,
            label: format!("{} shifted", self.label),
            ..self
        }
    }

    /// Homothety by `alpha > 0`. Exact metadata scales with the usual powers
    /// of alpha: measure by alpha^m, perimeter by alpha^{m-1}, rigidity by
    /// alpha^{m+2}, lambda_1 by alpha^{-2}.
    pub fn scaled(self, alpha: f64) -> Result<Domain> {
        if alpha <= 0.0 {
            return Err(Error::NonPositiveParameter("scale factor"));
        }
        let m = self.dim as i32;
        let exact = ExactValues {
            measure: self.exact.measure.map(|v| v * alpha.powi(m)),
            perimeter: self.exact.perimeter.map(|v| v * alpha.powi(m - 1)),
            torsional_rigidity: self.exact.torsional_rigidity.map(|v| v * alpha.powi(m + 2)),
            lambda1: self.exact.lambda1.map(|v| v / (alpha * alpha)),
        };
        let scale_pt = |p: Point| [p[0] * alpha, p[1] * alpha, p[2] * alpha];
        Ok(Domain {
            shape: Shape::Scale {
                factor: alpha,
                inner: Box::new(self.shape),
            },
            dim: self.dim,
            bbox: BoundingBox {
                lo: scale_pt(self.bbox.lo),
                hi: scale_pt(self.bbox.hi),
            },
            exact,
            label: format!("{} x{alpha}", self.label),
        })
    }
}

fn require_positive(value: f64, what: &'static str) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveParameter(what))
    }
}

/// Ball of the given radius centered at the origin, in `dim` in {2, 3}.
pub fn ball(radius: f64, dim: usize) -> Result<Domain> {
    require_positive(radius, "ball radius")?;
    check_dim(dim)?;
    let r = radius;
    let exact = if dim == 2 {
        ExactValues {
            measure: Some(std::f64::consts::PI * r * r),
            perimeter: Some(2.0 * std::f64::consts::PI * r),
            // torsion function (r^2 - |x|^2)/4 integrated in polar coordinates
            torsional_rigidity: Some(std::f64::consts::PI * r.powi(4) / 8.0),
            lambda1: Some(crate::constants::j0_first_zero().powi(2) / (r * r)),
        }
    } else {
        ExactValues {
            measure: Some(unit_ball_volume(3) * r.powi(3)),
            perimeter: Some(4.0 * std::f64::consts::PI * r * r),
            // torsion function (r^2 - |x|^2)/6
            torsional_rigidity: Some(unit_ball_volume(3) * r.powi(5) / 15.0),
            lambda1: Some(std::f64::consts::PI.powi(2) / (r * r)),
        }
    };
    let mut lo = [0.0; 3];
    let mut hi = [0.0; 3];
    for a in 0..dim {
        lo[a] = -r;
        hi[a] = r;
    }
    Ok(Domain {
        shape: Shape::Ball { radius: r },
        dim,
        bbox: BoundingBox { lo, hi },
        exact,
        label: if dim == 2 {
            format!("disc r={r}")
        } else {
            format!("ball r={r}")
        },
    })
}

/// Axis-aligned box centered at the origin; dimension from the side count.
pub fn box_domain(sides: &[f64]) -> Result<Domain> {
    let dim = sides.len();
    check_dim(dim)?;
    for &s in sides {
        require_positive(s, "box side")?;
    }
    let mut half = [0.0; 3];
    let mut lo = [0.0; 3];
    let mut hi = [0.0; 3];
    for a in 0..dim {
        half[a] = sides[a] / 2.0;
        lo[a] = -half[a];
        hi[a] = half[a];
    }
    let measure: f64 = sides.iter().product();
    let exact = if dim == 2 {
        ExactValues {
            measure: Some(measure),
            perimeter: Some(2.0 * (sides[0] + sides[1])),
            torsional_rigidity: Some(rectangle_rigidity(sides[0], sides[1])),
            lambda1: Some(
                std::f64::consts::PI.powi(2)
                    * (1.0 / (sides[0] * sides[0]) + 1.0 / (sides[1] * sides[1])),
            ),
        }
    } else {
        let (a, b, c) = (sides[0], sides[1], sides[2]);
        ExactValues {
            measure: Some(measure),
            perimeter: Some(2.0 * (a * b + b * c + c * a)),
            torsional_rigidity: None,
            lambda1: Some(
                std::f64::consts::PI.powi(2)
                    * sides.iter().map(|s| 1.0 / (s * s)).sum::<f64>(),
            ),
        }
    };
    Ok(Domain {
        shape: Shape::Box { half },
        dim,
        bbox: BoundingBox { lo, hi },
        exact,
        label: match dim {
            2 => format!("rectangle {}x{}", sides[0], sides[1]),
            _ => format!("box {}x{}x{}", sides[0], sides[1], sides[2]),
        },
    })
}

pub fn rectangle(a: f64, b: f64) -> Result<Domain> {
    box_domain(&[a, b])
}

/// Torsional rigidity of an a-by-b rectangle from the separated series
/// solution of the unit-load Poisson problem:
/// `a^3 b / 12 - (16 a^5 / pi^5) sum_{n odd} tanh(n pi b / (2a)) / n^5`
/// with `a` the shorter side. The tail beyond n ~ 2000 is below 1e-14.
pub fn rectangle_rigidity(a: f64, b: f64) -> f64 {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let pi = std::f64::consts::PI;
    let mut sum = 0.0;
    let mut n = 1u32;
    while n < 2000 {
        let nf = n as f64;
        sum += (nf * pi * b / (2.0 * a)).tanh() / nf.powi(5);
        n += 2;
    }
    a.powi(3) * b / 12.0 - 16.0 * a.powi(5) / pi.powi(5) * sum
}

/// Ellipse (dim 2) or ellipsoid (dim 3) with the given semi-axes.
/// Rigidity has the closed form (omega_m/(m+2)) (sum a_i^{-2})^{-1} prod a_i;
/// lambda_1 is only known in closed form when all semi-axes coincide.
pub fn ellipsoid(semi_axes: &[f64]) -> Result<Domain> {
    let dim = semi_axes.len();
    check_dim(dim)?;
    for &s in semi_axes {
        require_positive(s, "semi-axis")?;
    }
    if semi_axes.iter().all(|&s| (s - semi_axes[0]).abs() < 1e-15) {
        return ball(semi_axes[0], dim);
    }
    let mut semi = [0.0; 3];
    let mut lo = [0.0; 3];
    let mut hi = [0.0; 3];
    for a in 0..dim {
        semi[a] = semi_axes[a];
        lo[a] = -semi[a];
        hi[a] = semi[a];
    }
    let omega = unit_ball_volume(dim);
    let product: f64 = semi_axes.iter().product();
    let inv_sq: f64 = semi_axes.iter().map(|s| 1.0 / (s * s)).sum();
    let exact = ExactValues {
        measure: Some(omega * product),
        perimeter: None,
        torsional_rigidity: Some(omega / (dim as f64 + 2.0) * product / inv_sq),
        lambda1: None,
    };
    Ok(Domain {
        shape: Shape::Ellipsoid { semi },
        dim,
        bbox: BoundingBox { lo, hi },
        exact,
        label: if dim == 2 {
            format!("ellipse {}:{}", semi_axes[0], semi_axes[1])
        } else {
            format!("ellipsoid {}:{}:{}", semi_axes[0], semi_axes[1], semi_axes[2])
        },
    })
}

/// Equilateral triangle of side `a`, centroid at the origin, one vertex up.
pub fn equilateral_triangle(side: f64) -> Result<Domain> {
    require_positive(side, "triangle side")?;
    let a = side;
    let circumradius = a / 3f64.sqrt();
    let inradius = a / (2.0 * 3f64.sqrt());
    let pi = std::f64::consts::PI;
    let exact = ExactValues {
        measure: Some(3f64.sqrt() / 4.0 * a * a),
        perimeter: Some(3.0 * a),
        torsional_rigidity: Some(3f64.sqrt() * a.powi(4) / 320.0),
        lambda1: Some(16.0 * pi * pi / (3.0 * a * a)),
    };
    Ok(Domain {
        shape: Shape::EquilateralTriangle { side: a },
        dim: 2,
        bbox: BoundingBox {
            lo: [-a / 2.0, -inradius, 0.0],
            hi: [a / 2.0, circumradius, 0.0],
        },
        exact,
        label: format!("equilateral triangle a={a}"),
    })
}

/// Upper half-disc of radius `a` (y > 0), flat side on the x-axis.
pub fn half_disc(radius: f64) -> Result<Domain> {
    require_positive(radius, "half-disc radius")?;
    let a = radius;
    let pi = std::f64::consts::PI;
    let j11 = crate::constants::j1_first_zero();
    let exact = ExactValues {
        measure: Some(pi * a * a / 2.0),
        perimeter: Some((pi + 2.0) * a),
        torsional_rigidity: Some((pi / 8.0 - 1.0 / pi) * a.powi(4)),
        // first eigenvalue of the half-disc = second of the full disc;
        // scales as 1/length^2, hence j11^2 / a^2
        lambda1: Some(j11 * j11 / (a * a)),
    };
    Ok(Domain {
        shape: Shape::HalfDisc { radius: a },
        dim: 2,
        bbox: BoundingBox {
            lo: [-a, 0.0, 0.0],
            hi: [a, a, 0.0],
        },
        exact,
        label: format!("half-disc r={a}"),
    })
}

/// Cube of side `side` minus `holes_per_axis^dim` closed balls of radius
/// `hole_radius` centered on the subcell centers. Requires
/// `0 < hole_radius < side / (2 holes_per_axis)` so the balls are disjoint
/// and interior; the measure is then exact by set algebra.
pub fn punched_box(dim: usize, side: f64, holes_per_axis: u32, hole_radius: f64) -> Result<Domain> {
    check_dim(dim)?;
    require_positive(side, "punched box side")?;
    if holes_per_axis == 0 {
        return Err(Error::NonPositiveParameter("holes per axis"));
    }
    let max = side / (2.0 * holes_per_axis as f64);
    if !(hole_radius > 0.0 && hole_radius < max) {
        return Err(Error::InvalidHoleRadius {
            delta: hole_radius,
            max,
        });
    }
    let omega = unit_ball_volume(dim);
    let n_holes = (holes_per_axis as f64).powi(dim as i32);
    let measure = side.powi(dim as i32) - n_holes * omega * hole_radius.powi(dim as i32);
    let hole_surface = dim as f64 * omega * hole_radius.powi(dim as i32 - 1);
    let perimeter = 2.0 * dim as f64 * side.powi(dim as i32 - 1) + n_holes * hole_surface;
    let mut lo = [0.0; 3];
    let mut hi = [0.0; 3];
    for a in 0..dim {
        lo[a] = -side / 2.0;
        hi[a] = side / 2.0;
    }
    Ok(Domain {
        shape: Shape::PunchedBox {
            side,
            holes_per_axis,
            hole_radius,
        },
        dim,
        bbox: BoundingBox { lo, hi },
        exact: ExactValues {
            measure: Some(measure),
            perimeter: Some(perimeter),
            torsional_rigidity: None,
            lambda1: None,
        },
        label: format!("punched box L={side} N={holes_per_axis} delta={hole_radius}"),
    })
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!(
            "dimension {dim} unsupported; expected 2 or 3"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn disc_metadata() {
        let d = ball(1.0, 2).unwrap();
        let e = d.exact();
        assert!((e.measure.unwrap() - PI).abs() < 1e-12);
        assert!((e.torsional_rigidity.unwrap() - PI / 8.0).abs() < 1e-12);
        let j01 = crate::constants::j0_first_zero();
        assert!((e.lambda1.unwrap() - j01 * j01).abs() < 1e-9);
        // Polya functional of the disc: j01^2 / 8
        assert!((e.polya_functional().unwrap() - j01 * j01 / 8.0).abs() < 1e-9);
    }

    #[test]
    fn triangle_metadata() {
        let d = equilateral_triangle(1.0).unwrap();
        let e = d.exact();
        assert!((e.torsional_rigidity.unwrap() - 3f64.sqrt() / 320.0).abs() < 1e-15);
        assert!((e.torsional_rigidity.unwrap() - 0.0054127).abs() < 1e-6);
        assert!((e.polya_functional().unwrap() - PI * PI / 15.0).abs() < 1e-12);
    }

    #[test]
    fn unit_square_metadata() {
        let d = box_domain(&[1.0, 1.0]).unwrap();
        let e = d.exact();
        assert!((e.measure.unwrap() - 1.0).abs() < 1e-15);
        assert!((e.lambda1.unwrap() - 2.0 * PI * PI).abs() < 1e-12);
        // Series rigidity of the unit square; the classical value is 0.035144.
        assert!((e.torsional_rigidity.unwrap() - 0.035144).abs() < 2e-6);
    }

    #[test]
    fn half_disc_metadata_matches_its_functional_value() {
        let d = half_disc(1.0).unwrap();
        let f = d.exact().polya_functional().unwrap();
        let j11 = crate::constants::j1_first_zero();
        let expected = (0.25 - 2.0 / (PI * PI)) * j11 * j11;
        assert!((f - expected).abs() < 1e-12);
        assert!((f - 0.6953).abs() < 1e-3);
    }

    #[test]
    fn ellipse_rigidity_closed_form() {
        // semi-axes 2 and 1: (omega_2/4) (1/4 + 1)^{-1} * 2 = 2 pi / 5
        let d = ellipsoid(&[2.0, 1.0]).unwrap();
        let t = d.exact().torsional_rigidity.unwrap();
        assert!((t - 2.0 * PI / 5.0).abs() < 1e-12);
    }

    #[test]
    fn ball3_metadata() {
        let d = ball(1.0, 3).unwrap();
        let e = d.exact();
        assert!((e.measure.unwrap() - 4.0 * PI / 3.0).abs() < 1e-12);
        assert!((e.torsional_rigidity.unwrap() - 4.0 * PI / 45.0).abs() < 1e-12);
        // F(ball in 3-D) = (omega/15) pi^2 / omega = pi^2 / 15
        assert!((e.polya_functional().unwrap() - PI * PI / 15.0).abs() < 1e-12);
    }

    #[test]
    fn punched_measures() {
        // vanishing holes
        let d = punched_box(2, 1.0, 1, 1e-9).unwrap();
        assert!((d.exact().measure.unwrap() - 1.0).abs() < 1e-15);
        // N = 10, delta = 1/80: 1 - pi/64
        let d = punched_box(2, 1.0, 10, 1.0 / 80.0).unwrap();
        assert!((d.exact().measure.unwrap() - (1.0 - PI / 64.0)).abs() < 1e-12);
        assert!((d.exact().measure.unwrap() - 0.9509126).abs() < 1e-6);
        // 3-D: 8 - 8 (4 pi / 3) 0.008
        let d = punched_box(3, 2.0, 2, 0.2).unwrap();
        let expect = 8.0 - 8.0 * (4.0 * PI / 3.0) * 0.008;
        assert!((d.exact().measure.unwrap() - expect).abs() < 1e-12);
        assert!((expect - 7.731917).abs() < 1e-5);
    }

    #[test]
    fn punched_rejects_touching_holes() {
        assert!(matches!(
            punched_box(2, 1.0, 2, 0.25),
            Err(Error::InvalidHoleRadius { .. })
        ));
        assert!(punched_box(2, 1.0, 2, 0.2499).is_ok());
    }

    #[test]
    fn nonpositive_parameters_rejected() {
        assert!(ball(0.0, 2).is_err());
        assert!(ball(-1.0, 3).is_err());
        assert!(box_domain(&[1.0, 0.0]).is_err());
        assert!(equilateral_triangle(-2.0).is_err());
    }

    #[test]
    fn scaling_updates_metadata() {
        let d = ball(1.0, 2).unwrap().scaled(2.0).unwrap();
        let e = d.exact();
        assert!((e.measure.unwrap() - 4.0 * PI).abs() < 1e-12);
        assert!((e.torsional_rigidity.unwrap() - 16.0 * PI / 8.0).abs() < 1e-12);
        let j01 = crate::constants::j0_first_zero();
        assert!((e.lambda1.unwrap() - j01 * j01 / 4.0).abs() < 1e-9);
        // F is scale invariant
        let f0 = ball(1.0, 2).unwrap().exact().polya_functional().unwrap();
        assert!((e.polya_functional().unwrap() - f0).abs() < 1e-12);
    }

    #[test]
    fn signed_distance_membership_and_lipschitz_sampled() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let domains = [
            ball(1.0, 2).unwrap(),
            box_domain(&[1.0, 2.0]).unwrap(),
            equilateral_triangle(1.0).unwrap(),
            half_disc(1.0).unwrap(),
            ellipsoid(&[2.0, 1.0]).unwrap(),
            punched_box(2, 1.0, 4, 0.05).unwrap(),
            ball(1.0, 3).unwrap(),
        ];
        for d in &domains {
            let bb = d.bounding_box();
            let mut sample = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut p = [0.0; 3];
                for a in 0..d.dim() {
                    p[a] = rng.gen_range((bb.lo[a] - 0.3)..(bb.hi[a] + 0.3));
                }
                p
            };
            for _ in 0..500 {
                let p = sample(&mut rng);
                let q = sample(&mut rng);
                let dp = d.signed_distance(p);
                let dq = d.signed_distance(q);
                assert_eq!(d.contains(p), dp < 0.0);
                let dist = (0..3)
                    .map(|a| (p[a] - q[a]).powi(2))
                    .sum::<f64>()
                    .sqrt();
                assert!(
                    (dp - dq).abs() <= dist + 1e-9,
                    "Lipschitz violated for {}: |{dp} - {dq}| > {dist}",
                    d.label()
                );
            }
            // bounding box contains the negative set (sampled)
            for _ in 0..500 {
                let p = sample(&mut rng);
                if d.contains(p) {
                    for a in 0..d.dim() {
                        assert!(p[a] >= bb.lo[a] - 1e-12 && p[a] <= bb.hi[a] + 1e-12);
                    }
                }
            }
        }
    }
}
