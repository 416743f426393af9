//! Browser demo: three interactive views over the solver stack, exchanged
//! as JSON strings so the page stays a plain static file.
//!
//! The compute layer is ordinary Rust and compiles on every target; the
//! `wasm-bindgen` exports live behind the wasm32 cfg.

use serde::Serialize;
use torsionlab::bounds;
use torsionlab::experiments::delta_rule;
use torsionlab::geometry::{self, Domain};
use torsionlab::grid::{rasterize, BoundaryMode};
use torsionlab::solve::EigenOptions;
use torsionlab::spectrum;
use torsionlab::torsion::solve_torsion;
use torsionlab::wos;

#[derive(Serialize)]
struct FieldView {
    nx: usize,
    ny: usize,
    /// row-major over the bounding-box lattice; NaN marks exterior nodes
    values: Vec<f64>,
    max_value: f64,
}

#[derive(Serialize)]
struct ShapeView {
    label: String,
    h: f64,
    rigidity: f64,
    lambda1: f64,
    measure: f64,
    polya: f64,
    polya_exact: Option<f64>,
    reports: Vec<bounds::BoundReport>,
    torsion: FieldView,
    ground_state: FieldView,
}

fn err_json(e: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": e.to_string() }).to_string()
}

fn field_view(
    grid: &torsionlab::GridProblem,
    domain: &Domain,
    values: &[f64],
) -> FieldView {
    let bb = domain.bounding_box();
    let h = grid.spacing();
    let nx = (bb.extent(0) / h).round() as usize + 1;
    let ny = (bb.extent(1) / h).round() as usize + 1;
    let mut out = vec![f64::NAN; nx * ny];
    let mut max_value = 0.0f64;
    for iy in 0..ny {
        for ix in 0..nx {
            let p = [bb.lo[0] + ix as f64 * h, bb.lo[1] + iy as f64 * h, 0.0];
            if let Some(node) = grid.node_near(p) {
                out[iy * nx + ix] = values[node];
                max_value = max_value.max(values[node].abs());
            }
        }
    }
    FieldView {
        nx,
        ny,
        values: out,
        max_value,
    }
}

/// Solve one planar shape and return fields, numbers, and bound reports.
pub fn analyze_shape_json(spec: &str, h: f64) -> String {
    let run = || -> torsionlab::Result<String> {
        let domain = geometry::domain_from_name(spec)?;
        let grid = rasterize(&domain, h, BoundaryMode::Dirichlet)?;
        let torsion = solve_torsion(&grid)?;
        let pair = spectrum::lambda1_with(&grid, &EigenOptions::default())?;
        let measure = domain
            .exact()
            .measure
            .unwrap_or_else(|| geometry::measure(&domain, domain.diameter() / 512.0));
        let polya = bounds::polya_functional(torsion.rigidity, pair.value, measure)?;
        let mut reports = vec![bounds::check_polya(polya, 0.01)];
        reports.extend(bounds::check_polya_sharpened(
            polya,
            torsion.rigidity,
            measure,
            domain.dim(),
            0.01,
        ));
        reports.push(bounds::check_rayleigh_torsion(
            torsion.rigidity,
            torsion.square_integral,
            pair.value,
            0.01 * pair.value,
        ));
        let view = ShapeView {
            label: domain.label().to_string(),
            h: grid.spacing(),
            rigidity: torsion.rigidity,
            lambda1: pair.value,
            measure,
            polya,
            polya_exact: domain.exact().polya_functional(),
            reports,
            torsion: field_view(&grid, &domain, &torsion.field.values),
            ground_state: field_view(&grid, &domain, &pair.field.values),
        };
        Ok(serde_json::to_string(&view)?)
    };
    run().unwrap_or_else(err_json)
}

#[derive(Serialize)]
struct PunchedView {
    n: u32,
    delta: f64,
    delta_max: f64,
    h: f64,
    rigidity: f64,
    lambda1: f64,
    measure: f64,
    polya: f64,
    square_polya: f64,
    mu1_cell: f64,
    lower_bound: f64,
    torsion: FieldView,
}

/// Punched-square explorer: `n` holes per axis, radius as a fraction of the
/// maximal admissible radius. A zero fraction defaults to the study rule.
pub fn punched_square_json(n: u32, delta_fraction: f64, h: f64) -> String {
    let run = || -> torsionlab::Result<String> {
        let side = 1.0;
        let delta_max = side / (2.0 * n.max(1) as f64);
        let delta = if delta_fraction > 0.0 {
            (delta_fraction.min(0.98)) * delta_max
        } else {
            delta_rule(2, side, n)
        };
        let domain = geometry::punched_box(2, side, n, delta)?;
        let h = h.min(delta / 2.0);
        let grid = rasterize(&domain, h, BoundaryMode::Dirichlet)?;
        let torsion = solve_torsion(&grid)?;
        let pair = spectrum::lambda1_with(&grid, &EigenOptions::default())?;
        let measure = domain.exact().measure.unwrap();
        let polya = bounds::polya_functional(torsion.rigidity, pair.value, measure)?;
        let square = geometry::box_domain(&[side, side])?;
        let sq_grid = rasterize(&square, h, BoundaryMode::Dirichlet)?;
        let sq_torsion = solve_torsion(&sq_grid)?;
        let sq_pair = spectrum::lambda1_with(&sq_grid, &EigenOptions::default())?;
        let square_polya =
            bounds::polya_functional(sq_torsion.rigidity, sq_pair.value, side * side)?;
        let cell = spectrum::mu1_mixed(2, side / n as f64, delta, h.min(delta / 2.0))?;
        let view = PunchedView {
            n,
            delta,
            delta_max,
            h,
            rigidity: torsion.rigidity,
            lambda1: pair.value,
            measure,
            polya,
            square_polya,
            mu1_cell: cell.mu1,
            lower_bound: bounds::punched_lower_bound_value(2, side, n, cell.mu1),
            torsion: field_view(&grid, &domain, &torsion.field.values),
        };
        Ok(serde_json::to_string(&view)?)
    };
    run().unwrap_or_else(err_json)
}

#[derive(Serialize)]
struct WosView {
    t_estimate: f64,
    std_error: f64,
    samples: u64,
    eps: f64,
    grid_rigidity: f64,
    agreement_sigma: f64,
}

/// Monte Carlo rigidity against a quick grid solve of the same shape.
pub fn wos_compare_json(spec: &str, samples: u64, seed: u64) -> String {
    let run = || -> torsionlab::Result<String> {
        let domain = geometry::domain_from_name(spec)?;
        let eps = wos::default_eps(&domain);
        let est = wos::wos_torsional_rigidity(&domain, samples.max(1000), eps, seed)?;
        let grid = rasterize(&domain, 2f64.powi(-6), BoundaryMode::Dirichlet)?;
        let grid_rigidity = solve_torsion(&grid)?.rigidity;
        let view = WosView {
            t_estimate: est.mean,
            std_error: est.std_error,
            samples: est.samples,
            eps,
            grid_rigidity,
            agreement_sigma: (est.mean - grid_rigidity).abs() / est.std_error.max(1e-300),
        };
        Ok(serde_json::to_string(&view)?)
    };
    run().unwrap_or_else(err_json)
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen]
    pub fn analyze_shape(spec: &str, h: f64) -> String {
        super::analyze_shape_json(spec, h)
    }

    #[wasm_bindgen]
    pub fn punched_square(n: u32, delta_fraction: f64, h: f64) -> String {
        super::punched_square_json(n, delta_fraction, h)
    }

    #[wasm_bindgen]
    pub fn wos_compare(spec: &str, samples: u64, seed: u64) -> String {
        super::wos_compare_json(spec, samples, seed)
    }
}
