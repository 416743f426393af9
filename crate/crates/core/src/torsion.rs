//! Torsion function, torsional rigidity, and the superlevel-set machinery:
//! the distribution function of the torsion values, the isoperimetric decay
//! bound on it, and the integrated deficit inequality.

use crate::bounds::BoundReport;
use crate::constants::unit_ball_volume;
use crate::error::{Error, Result};
use crate::grid::{BoundaryMode, GridProblem, ScalarField};
use crate::solve::{cg_solve, ShiftedStiffness};

pub const TORSION_CG_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct TorsionResult {
    pub field: ScalarField,
    /// T = h^m sum v
    pub rigidity: f64,
    /// M = max v
    pub max_value: f64,
    /// h^m sum v^2
    pub square_integral: f64,
    pub report: crate::solve::SolveReport,
}

/// Solve the unit-load Dirichlet problem on the grid and integrate.
pub fn solve_torsion(grid: &GridProblem) -> Result<TorsionResult> {
    if grid.mode() != BoundaryMode::Dirichlet {
        return Err(Error::InvalidConfig(
            "torsion solves need a Dirichlet-mode grid".into(),
        ));
    }
    let n = grid.n_unknowns();
    let op = ShiftedStiffness { grid, sigma: 0.0 };
    let rhs = vec![1.0; n];
    let (v, report) = cg_solve(&op, &rhs, None, TORSION_CG_TOL)?;
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "torsion field not strictly positive (min {min:.3e}); grid too coarse"
        )));
    }
    let rigidity = grid.integral(&v);
    let square_integral = grid.inner(&v, &v);
    let max_value = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(TorsionResult {
        field: grid.field_from_values(v)?,
        rigidity,
        max_value,
        square_integral,
        report,
    })
}

/// Distribution function of the torsion values: mu(theta) is the measure of
/// the nodes with v > theta, sampled on a uniform theta grid over [0, max].
#[derive(Debug, Clone)]
pub struct DistributionFunction {
    pub thetas: Vec<f64>,
    pub mu: Vec<f64>,
}

pub fn distribution(
    grid: &GridProblem,
    result: &TorsionResult,
    n_theta: usize,
) -> Result<DistributionFunction> {
    grid.check_field(&result.field)?;
    if n_theta < 16 {
        return Err(Error::InvalidConfig(format!(
            "distribution needs at least 16 theta samples, got {n_theta}"
        )));
    }
    let mut sorted = result.field.values.clone();
    sorted.sort_by(f64::total_cmp);
    let cell = grid.cell_volume();
    let max = result.max_value;
    let thetas: Vec<f64> = (0..n_theta)
        .map(|j| max * j as f64 / (n_theta - 1) as f64)
        .collect();
    let mu = thetas
        .iter()
        .map(|&theta| {
            // strict inequality v > theta, the open superlevel set
            let above = sorted.len() - sorted.partition_point(|&v| v <= theta);
            cell * above as f64
        })
        .collect();
    Ok(DistributionFunction { thetas, mu })
}

impl DistributionFunction {
    /// Trapezoid value of `int_0^M mu`, which reproduces the rigidity.
    pub fn layer_cake_rigidity(&self) -> f64 {
        trapezoid(&self.thetas, &self.mu)
    }

    /// Trapezoid value of `int_0^M 2 theta mu`, which reproduces the
    /// square integral of the torsion function.
    pub fn layer_cake_square(&self) -> f64 {
        let weighted: Vec<f64> = self
            .thetas
            .iter()
            .zip(&self.mu)
            .map(|(t, m)| 2.0 * t * m)
            .collect();
        trapezoid(&self.thetas, &weighted)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.mu.windows(2).all(|w| w[1] <= w[0] + 1e-15)
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Superlevel decay bound: for every sampled theta,
/// `mu(theta) <= (|domain|^{2/m} - 2 m omega_m^{2/m} theta)_+^{m/2}`.
/// The right side is clamped at zero past its root, where mu >= 0 forces
/// the set to be empty anyway. Reports the worst margin over the samples.
pub fn check_superlevel_bound(
    dist: &DistributionFunction,
    measure: f64,
    dim: usize,
    tol: f64,
) -> BoundReport {
    let m = dim as f64;
    let omega = unit_ball_volume(dim);
    let mut worst = f64::INFINITY;
    let mut at = (0.0, 0.0, 0.0);
    for (&theta, &mu) in dist.thetas.iter().zip(&dist.mu) {
        let base = measure.powf(2.0 / m) - 2.0 * m * omega.powf(2.0 / m) * theta;
        let rhs = base.max(0.0).powf(m / 2.0);
        if rhs - mu < worst {
            worst = rhs - mu;
            at = (theta, mu, rhs);
        }
    }
    BoundReport::check(
        "superlevel_decay",
        at.1,
        at.2,
        tol,
        format!("worst margin at theta = {:.6}", at.0),
    )
}

/// Integrated deficit inequality in both equivalent forms. The first checks the
/// quadrature functional
/// `Q(M) = (int mu)^2 - 2 (int theta mu) |domain|` against
/// `-(2 m omega^{2/m}/(m+2)) |domain|^{1-2/m} (int v^2)^2 / int v`;
/// the second is the equivalent statement
/// `(int v)^2 / ((int v^2) |domain|) - 1 <= -(2 m omega^{2/m}/(m+2)) T / |domain|^{1+2/m}`.
pub fn check_torsion_deficit(
    result: &TorsionResult,
    dist: &DistributionFunction,
    measure: f64,
    dim: usize,
    tol_scale: f64,
) -> Vec<BoundReport> {
    let m = dim as f64;
    let coeff = crate::bounds::Constants::for_dim(dim).sharpening_coefficient();
    let int_mu = dist.layer_cake_rigidity();
    let int_theta_mu = 0.5 * dist.layer_cake_square();
    let q = int_mu * int_mu - 2.0 * int_theta_mu * measure;
    let rhs_q = -coeff
        * measure.powf(1.0 - 2.0 / m)
        * result.square_integral.powi(2)
        / result.rigidity;
    let tol_q = tol_scale * q.abs().max(rhs_q.abs());
    let final_lhs = result.rigidity.powi(2) / (result.square_integral * measure) - 1.0;
    let final_rhs = -coeff * result.rigidity / measure.powf(1.0 + 2.0 / m);
    let tol_f = tol_scale * final_lhs.abs().max(final_rhs.abs());
    vec![
        BoundReport::check(
            "torsion_deficit_integral",
            q,
            rhs_q,
            tol_q,
            "quadrature form over the distribution function",
        ),
        BoundReport::check(
            "torsion_deficit_final",
            final_lhs,
            final_rhs,
            tol_f,
            "closed form in T, int v^2, |domain|",
        ),
    ]
}
