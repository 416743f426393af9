//! Every inequality the laboratory verifies, expressed as a checkable
//! report over computed or closed-form quantities.
//!
//! Sign convention: a report passes iff `margin = rhs - lhs >= -tol`, i.e.
//! the checked statement is always phrased as `lhs <= rhs`.

use crate::constants;
use crate::error::{Error, Result};
use crate::geometry::ConvexMetrics;
use serde::Serialize;
use std::f64::consts::{E, PI};

/// Tolerance for sides built purely from closed forms.
pub const EXACT_TOL: f64 = 1e-10;

/// Default tolerance for solver-fed sides: one percent of the bound
/// magnitude (staircase discretization error dominates).
pub fn solver_tol(magnitude: f64) -> f64 {
    0.01 * magnitude.abs().max(1e-12)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    pub tol: f64,
    pub notes: String,
}

impl BoundReport {
    pub fn check(name: &str, lhs: f64, rhs: f64, tol: f64, notes: impl Into<String>) -> Self {
        let margin = rhs - lhs;
        BoundReport {
            name: name.to_string(),
            lhs,
            rhs,
            margin,
            pass: margin >= -tol && lhs.is_finite() && rhs.is_finite(),
            tol,
            notes: notes.into(),
        }
    }
}

/// Dimension-dependent constants used across the checks.
#[derive(Debug, Clone, Copy)]
pub struct Constants {
    pub dim: usize,
    /// measure of the unit ball
    pub omega: f64,
    /// Newtonian capacity of the unit ball (dim >= 3)
    pub capacity: Option<f64>,
    /// k_m, the heat-kernel hitting constant
    pub heat_kernel: f64,
    /// s_m, the boundary leakage constant
    pub boundary_leak: f64,
    pub j01: f64,
    pub j11: f64,
}

impl Constants {
    pub fn for_dim(dim: usize) -> Self {
        Constants {
            dim,
            omega: constants::unit_ball_volume(dim),
            capacity: (dim >= 3).then(|| constants::unit_ball_capacity(dim)),
            heat_kernel: constants::heat_kernel_constant(dim),
            boundary_leak: constants::boundary_leak_constant(dim),
            j01: constants::j0_first_zero(),
            j11: constants::j1_first_zero(),
        }
    }

    /// 2 m omega_m^{2/m} / (m + 2), the sharpening coefficient.
    pub fn sharpening_coefficient(&self) -> f64 {
        let m = self.dim as f64;
        2.0 * m * self.omega.powf(2.0 / m) / (m + 2.0)
    }
}

/// F = T lambda_1 / |domain|.
pub fn polya_functional(rigidity: f64, lambda1: f64, measure: f64) -> Result<f64> {
    if rigidity <= 0.0 {
        return Err(Error::NonPositiveInput("torsional rigidity"));
    }
    if lambda1 <= 0.0 {
        return Err(Error::NonPositiveInput("lambda1"));
    }
    if measure <= 0.0 {
        return Err(Error::NonPositiveInput("measure"));
    }
    Ok(rigidity * lambda1 / measure)
}

/// Classical bound F <= 1.
pub fn check_polya(f: f64, tol: f64) -> BoundReport {
    BoundReport::check("polya", f, 1.0, tol, "classical upper bound")
}

/// Sharpened bound F <= 1 - c_m T / |domain|^{1 + 2/m}, plus the equivalent
/// planar form F <= 1 - pi / (lambda_1 |domain| + pi) when m = 2.
pub fn check_polya_sharpened(
    f: f64,
    rigidity: f64,
    measure: f64,
    dim: usize,
    tol: f64,
) -> Vec<BoundReport> {
    let c = Constants::for_dim(dim);
    let m = dim as f64;
    let rhs = 1.0 - c.sharpening_coefficient() * rigidity / measure.powf(1.0 + 2.0 / m);
    let mut out = vec![BoundReport::check(
        "polya_sharpened",
        f,
        rhs,
        tol,
        "torsion-deficit improvement of the classical bound",
    )];
    if dim == 2 {
        // eliminate T via T = F |domain| / lambda_1
        let lambda1 = f * measure / rigidity;
        let rhs2 = 1.0 - PI / (lambda1 * measure + PI);
        out.push(BoundReport::check(
            "polya_sharpened_planar",
            f,
            rhs2,
            tol,
            "planar form in terms of lambda_1 |domain|",
        ));
    }
    out
}

/// Rayleigh-quotient bound lambda_1 <= T / integral(v^2), with the torsion
/// function as test function.
pub fn check_rayleigh_torsion(
    rigidity: f64,
    square_integral: f64,
    lambda1: f64,
    tol: f64,
) -> BoundReport {
    BoundReport::check(
        "rayleigh_torsion",
        lambda1,
        rigidity / square_integral,
        tol,
        "torsion function as Rayleigh test function",
    )
}

/// Lower bounds for convex domains: the general
/// `F >= pi^2 / (4 m^{m+2} (m+2))`, and for m = 2 also `F >= pi^2/48`
/// together with its two ingredients
/// `lambda_1 >= pi^2 Per^2 / (16 |domain|^2)` and
/// `T >= |domain|^3 / (3 Per^2)`.
pub fn check_convex_lower(
    f: f64,
    dim: usize,
    perimeter: f64,
    measure: f64,
    rigidity: f64,
    lambda1: f64,
    tol: f64,
) -> Vec<BoundReport> {
    let m = dim as f64;
    let general = PI * PI / (4.0 * m.powf(m + 2.0) * (m + 2.0));
    let mut out = vec![BoundReport::check(
        "convex_lower_general",
        general,
        f,
        tol,
        "inscribed-ellipsoid lower bound, any dimension",
    )];
    if dim == 2 {
        out.push(BoundReport::check(
            "convex_lower_planar",
            PI * PI / 48.0,
            f,
            tol,
            "planar convex lower bound",
        ));
        out.push(BoundReport::check(
            "eigenvalue_perimeter_lower",
            PI * PI * perimeter * perimeter / (16.0 * measure * measure),
            lambda1,
            solver_tol(lambda1).max(tol),
            "eigenvalue vs perimeter for planar convex sets",
        ));
        out.push(BoundReport::check(
            "torsion_perimeter_lower",
            measure.powi(3) / (3.0 * perimeter * perimeter),
            rigidity,
            solver_tol(rigidity).max(tol),
            "rigidity vs perimeter for convex sets",
        ));
    }
    out
}

/// Width-based upper bounds for bounded convex domains. `c` is the
/// dimensionless combination (32 w^2 Lambda / pi^2)^{1/3}.
pub fn check_convex_width_bounds(
    f: f64,
    metrics: &ConvexMetrics,
    dim: usize,
    rigidity: f64,
    measure: f64,
    tol: f64,
) -> Vec<BoundReport> {
    let w = metrics.width;
    let lam = metrics.lambda_projection;
    let c = (32.0 * w * w * lam / (PI * PI)).powf(1.0 / 3.0);
    let cubic = 1.0 + 1.5 * c + 0.75 * c * c + c * c * c / 8.0;
    let mut out = vec![BoundReport::check(
        "convex_width_upper",
        f,
        PI * PI / 12.0 * cubic,
        tol,
        format!("slab comparison with c = {c:.6}"),
    )];
    out.push(BoundReport::check(
        "slab_torsion_ratio",
        rigidity / measure,
        w * w / 12.0,
        tol,
        "rigidity per unit measure against the width slab",
    ));
    if dim == 2 {
        let j01 = constants::j0_first_zero();
        let ratio = w / metrics.projection;
        out.push(BoundReport::check(
            "convex_planar_gap",
            f,
            1.0 - 1.0 / 11560.0,
            tol,
            "uniform planar convex gap below one",
        ));
        out.push(BoundReport::check(
            "width_ratio_upper",
            f,
            1.0 - PI / (PI + 9.0 * j01 * j01) * ratio,
            tol,
            "inscribed-ball route, strong for fat domains",
        ));
        out.push(BoundReport::check(
            "width_ratio_twothirds_upper",
            f,
            PI * PI / 12.0
                + (2f64.powf(-4.0 / 3.0) + 2f64.powf(-2.0 / 3.0) + 1.0 / 3.0)
                    * PI
                    * PI
                    * ratio.powf(2.0 / 3.0),
            tol,
            "slab route, strong for thin domains",
        ));
    }
    out
}

/// Capacity bracket for the mixed cube-minus-ball eigenvalue in 3-D:
/// `k_3 cap / L^3 <= mu_1` always, and `mu_1 <= 2 pi m cap / L^3` when
/// `cap <= L/16`. The upper branch is still evaluated (and noted) when its
/// precondition fails.
pub fn check_capacity_bracket(mu1: f64, side: f64, delta: f64, tol: f64) -> Vec<BoundReport> {
    let c = Constants::for_dim(3);
    let cap = c.capacity.unwrap() * delta;
    let volume = side.powi(3);
    let lower = c.heat_kernel * cap / volume;
    let upper = 2.0 * PI * 3.0 * cap / volume;
    let applicable = cap <= side / 16.0;
    vec![
        BoundReport::check(
            "capacity_bracket_lower",
            lower,
            mu1,
            tol,
            format!("cap(hole) = {cap:.6}"),
        ),
        BoundReport::check(
            "capacity_bracket_upper",
            mu1,
            upper,
            tol,
            if applicable {
                "precondition cap <= L/16 holds".to_string()
            } else {
                format!(
                    "informational: precondition cap <= L/16 fails (cap = {cap:.4}, L/16 = {:.4})",
                    side / 16.0
                )
            },
        ),
    ]
}

/// Logarithmic bracket for the planar mixed eigenvalue, valid for
/// `delta < side / 6`:
/// `1/(100 L^2 log(L/2d)) <= mu_1 <= 8 pi / ((4 - pi) L^2 log(L/2d))`.
pub fn check_log_bracket(mu1: f64, side: f64, delta: f64, tol: f64) -> Result<Vec<BoundReport>> {
    if !(delta > 0.0 && delta < side / 6.0) {
        return Err(Error::InvalidConfig(format!(
            "log bracket needs 0 < delta < side/6, got delta = {delta}, side = {side}"
        )));
    }
    let log = (side / (2.0 * delta)).ln();
    let lower = 1.0 / (100.0 * side * side * log);
    let upper = 8.0 * PI / ((4.0 - PI) * side * side * log);
    Ok(vec![
        BoundReport::check("planar_hole_bracket_lower", lower, mu1, tol, ""),
        BoundReport::check("planar_hole_bracket_upper", mu1, upper, tol, ""),
    ])
}

/// Explicit lower bound for the punched-cube functional in terms of the
/// single-cell mixed eigenvalue `mu1_cell` (cell side = side / n):
/// `F >= 1 - sqrt(4 m L^2 mu / (3 e n^2)) - 1/n - s_m (ln n)^{3/2} / (L sqrt(mu))`.
pub fn punched_lower_bound_value(dim: usize, side: f64, n: u32, mu1_cell: f64) -> f64 {
    let m = dim as f64;
    let nf = n as f64;
    let s_m = constants::boundary_leak_constant(dim);
    let log_n = nf.ln();
    let tail = if n == 1 {
        0.0
    } else {
        s_m * log_n.powf(1.5) / (side * mu1_cell.sqrt())
    };
    1.0 - (4.0 * m * side * side * mu1_cell / (3.0 * E * nf * nf)).sqrt() - 1.0 / nf - tail
}

/// The same bound in its theta form, with the bracket constants substituted
/// for the cell eigenvalue. At laboratory scale both forms sit far below the
/// computed functional.
pub fn punched_lower_bound_theta(dim: usize, side: f64, n: u32, delta: f64) -> f64 {
    let nf = n as f64;
    let log_n = nf.ln();
    if dim == 2 {
        let theta = (side / (2.0 * nf * delta)).ln().powf(-0.5);
        let s2 = constants::boundary_leak_constant(2);
        1.0 - 1.0 / nf
            - (32.0 / (3.0 * E * (4.0 - PI))).sqrt() * theta
            - 300.0 * s2 * log_n.powf(1.5) / (PI * nf * theta)
    } else {
        let m = dim as f64;
        let kappa = constants::unit_ball_capacity(dim);
        let km = constants::heat_kernel_constant(dim);
        let sm = constants::boundary_leak_constant(dim);
        let theta = (nf * delta / side).powf((m - 2.0) / 2.0);
        1.0 - 1.0 / nf
            - (8.0 * PI * m * m * kappa / (3.0 * E)).sqrt() * theta
            - sm / (km * kappa).sqrt() * log_n.powf(1.5) / (nf * theta)
    }
}

/// Check `F >= explicit bound` (primary, from the computed cell eigenvalue)
/// and emit the theta form alongside it.
pub fn check_punched_lower_bound(
    f: f64,
    dim: usize,
    side: f64,
    n: u32,
    delta: f64,
    mu1_cell: f64,
    tol: f64,
) -> Vec<BoundReport> {
    let explicit = punched_lower_bound_value(dim, side, n, mu1_cell);
    let theta = punched_lower_bound_theta(dim, side, n, delta);
    vec![
        BoundReport::check(
            "punched_lower_bound",
            explicit,
            f,
            tol,
            format!("cell eigenvalue {mu1_cell:.6}"),
        ),
        BoundReport::check(
            "punched_lower_bound_theta",
            theta,
            f,
            tol,
            "theta form with bracket constants substituted",
        ),
    ]
}
