//! First Dirichlet eigenvalue, the mixed Neumann-outer / Dirichlet-inner
//! cube eigenvalue, and the eigenfunction-sum and heat-content identities
//! that tie the spectrum back to the torsional rigidity.

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::geometry;
use crate::grid::{rasterize, BoundaryMode, GridProblem, ScalarField};
use crate::solve::{lowest_eigenpairs, EigenOptions, EigenPair};

/// Lowest Dirichlet eigenpair of the grid, with the eigenfunction sign
/// normalized so its integral is nonnegative.
pub fn lambda1(grid: &GridProblem) -> Result<EigenPair> {
    lambda1_with(grid, &EigenOptions::default())
}

pub fn lambda1_with(grid: &GridProblem, opts: &EigenOptions) -> Result<EigenPair> {
    if grid.mode() != BoundaryMode::Dirichlet {
        return Err(Error::InvalidConfig(
            "lambda1 needs a Dirichlet-mode grid".into(),
        ));
    }
    let mut pair = lowest_eigenpairs(grid, 1, opts)?.remove(0);
    fix_sign(grid, &mut pair.field);
    Ok(pair)
}

fn fix_sign(grid: &GridProblem, field: &mut ScalarField) {
    if grid.integral(&field.values) < 0.0 {
        for v in field.values.iter_mut() {
            *v = -*v;
        }
    }
}

/// First eigenpair of the cube of side `side` with Neumann conditions on the
/// outer boundary and Dirichlet conditions on the central ball of radius
/// `delta` (no hole when `delta == 0`).
#[derive(Debug, Clone)]
pub struct MixedEigenResult {
    pub mu1: f64,
    pub field: ScalarField,
    /// q = (integral of |phi|)^2, the squared L1 mass
    pub l1_mass_sq: f64,
    pub grid: GridProblem,
}

pub fn mu1_mixed(dim: usize, side: f64, delta: f64, h: f64) -> Result<MixedEigenResult> {
    if !(delta >= 0.0 && delta < side / 2.0) {
        return Err(Error::InvalidConfig(format!(
            "hole radius {delta} must sit in [0, side/2) for the mixed problem"
        )));
    }
    let cube = geometry::box_domain(&vec![side; dim])?;
    let domain = if delta > 0.0 {
        cube.difference(geometry::ball(delta, dim)?)?
    } else {
        cube
    };
    let grid = rasterize(&domain, h, BoundaryMode::NeumannOuterDirichletInner)?;
    if delta > 0.0 {
        let lattice_total: usize = (0..dim)
            .map(|_| (side / grid.spacing()).round() as usize + 1)
            .product();
        if grid.n_unknowns() == lattice_total {
            return Err(Error::HoleUnresolved { h, delta });
        }
    }
    let opts = EigenOptions {
        shift: 1e-8 / (side * side),
        lambda_floor: 1e-6 / (side * side),
        inner_tol: 1e-6,
        resid_rel_tol: 5e-3,
        max_outer: 200,
        ..EigenOptions::default()
    };
    let mut pair = lowest_eigenpairs(&grid, 1, &opts)?.remove(0);
    fix_sign(&grid, &mut pair.field);
    let abs_field: Vec<f64> = pair.field.values.iter().map(|v| v.abs()).collect();
    let l1_mass_sq = grid.integral(&abs_field).powi(2);
    Ok(MixedEigenResult {
        mu1: pair.value.max(0.0),
        field: pair.field,
        l1_mass_sq,
        grid,
    })
}

/// Bracket on the squared L1 mass of the mixed ground state:
/// `L^m (1 - sqrt(4 m L^2 mu_1 / (3 e))) <= q <= L^m`, left side clamped
/// at zero.
pub fn check_mixed_mass_bracket(
    result: &MixedEigenResult,
    side: f64,
    dim: usize,
    tol: f64,
) -> Vec<BoundReport> {
    let m = dim as f64;
    let volume = side.powi(dim as i32);
    let deficit = (4.0 * m * side * side * result.mu1 / (3.0 * std::f64::consts::E)).sqrt();
    let lower = (volume * (1.0 - deficit)).max(0.0);
    vec![
        BoundReport::check(
            "mixed_mass_lower",
            lower,
            result.l1_mass_sq,
            tol,
            if lower == 0.0 {
                "left side clamped at zero"
            } else {
                ""
            },
        ),
        BoundReport::check("mixed_mass_upper", result.l1_mass_sq, volume, tol, ""),
    ]
}

/// Partial sums `S_j = sum_{i<=j} lambda_i^{-1} (integral phi_i)^2` of the
/// eigenfunction expansion of the rigidity, together with the one-mode
/// lower bound report `T >= lambda_1^{-1} (integral phi_1)^2`.
#[derive(Debug)]
pub struct EigenSum {
    pub pairs: Vec<EigenPair>,
    pub partials: Vec<f64>,
    pub lower_bound: BoundReport,
}

pub fn eigensum_partials(
    grid: &GridProblem,
    rigidity: f64,
    k: usize,
    opts: &EigenOptions,
) -> Result<EigenSum> {
    let mut pairs = lowest_eigenpairs(grid, k, opts)?;
    for p in pairs.iter_mut() {
        fix_sign(grid, &mut p.field);
    }
    let mut partials = Vec::with_capacity(k);
    let mut acc = 0.0;
    for p in &pairs {
        let mass = grid.integral(&p.field.values);
        acc += mass * mass / p.value;
        partials.push(acc);
    }
    let first_mass = grid.integral(&pairs[0].field.values);
    let lower_bound = BoundReport::check(
        "rigidity_eigensum_lower",
        first_mass * first_mass / pairs[0].value,
        rigidity,
        1e-3 * rigidity,
        "one-mode truncation of the eigenfunction expansion",
    );
    Ok(EigenSum {
        pairs,
        partials,
        lower_bound,
    })
}

/// Truncated heat content against its one-mode envelope: checks
/// `sum_{j<=k} e^{-t lambda_j} (int phi_j)^2 <= e^{-t lambda_1} |domain|`
/// at each requested time (truncation only lowers the left side).
pub fn heat_content_bound(
    grid: &GridProblem,
    pairs: &[EigenPair],
    t_samples: &[f64],
    measure: f64,
    tol: f64,
) -> BoundReport {
    let masses: Vec<f64> = pairs
        .iter()
        .map(|p| grid.integral(&p.field.values).powi(2))
        .collect();
    let lambda1 = pairs[0].value;
    let mut worst = f64::INFINITY;
    let mut at = (0.0, 0.0, 0.0);
    for &t in t_samples {
        let content: f64 = pairs
            .iter()
            .zip(&masses)
            .map(|(p, m)| (-t * p.value).exp() * m)
            .sum();
        let envelope = (-t * lambda1).exp() * measure;
        if envelope - content < worst {
            worst = envelope - content;
            at = (t, content, envelope);
        }
    }
    BoundReport::check(
        "heat_content_upper",
        at.1,
        at.2,
        tol,
        format!("worst margin at t = {:.4}", at.0),
    )
}
