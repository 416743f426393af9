//! The punched-cube family: hole radii from the capped theta rule, the
//! single-cell mixed eigenvalue, and the explicit lower bound on the shape
//! functional for each hole count.

use super::{solve_shape, StudyConfig};
use crate::bounds;
use crate::error::Result;
use crate::geometry;
use crate::spectrum::mu1_mixed;
use serde::Serialize;
use std::f64::consts::{E, PI};

/// Hole radius for a given hole count, from maximising the theta form of
/// the lower bound and capping at side/(8 n), an eighth of the cell (the
/// logarithmic bracket stays valid there and the holes stay well separated).
/// At laboratory scale the optimizer always wants a larger radius than the
/// cap allows, so the cap is what the studies actually run.
pub fn delta_rule(dim: usize, side: f64, n: u32) -> f64 {
    let cap = side / (8.0 * n as f64);
    if n == 1 {
        return cap;
    }
    let nf = n as f64;
    let log_n = nf.ln();
    let opt = if dim == 2 {
        let a = (32.0 / (3.0 * E * (4.0 - PI))).sqrt();
        let b = 300.0 * crate::constants::boundary_leak_constant(2) * log_n.powf(1.5) / (PI * nf);
        let theta = (b / a).sqrt();
        side / (2.0 * nf) * (-1.0 / (theta * theta)).exp()
    } else {
        let m = dim as f64;
        let kappa = crate::constants::unit_ball_capacity(dim);
        let km = crate::constants::heat_kernel_constant(dim);
        let sm = crate::constants::boundary_leak_constant(dim);
        let a = (8.0 * PI * m * m * kappa / (3.0 * E)).sqrt();
        let b = sm / (km * kappa).sqrt() * log_n.powf(1.5) / nf;
        let theta = (b / a).sqrt();
        side / nf * theta.powf(2.0 / (m - 2.0))
    };
    opt.min(cap)
}

#[derive(Debug, Clone, Serialize)]
pub struct PunchedRow {
    pub n: u32,
    pub delta: f64,
    pub h: f64,
    pub mu1_cell: f64,
    pub rigidity: f64,
    pub lambda1: f64,
    pub measure: f64,
    pub polya: f64,
    pub bound: f64,
    pub bound_theta: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct PunchedStudy {
    pub rows: Vec<PunchedRow>,
    /// functional of the unpunched square at the study resolution
    pub square_polya: f64,
    pub reports: Vec<bounds::BoundReport>,
}

fn default_spacing(dim: usize) -> f64 {
    if dim == 2 {
        2f64.powi(-7)
    } else {
        2f64.powi(-5)
    }
}

pub fn run_punched_study(config: &StudyConfig) -> Result<PunchedStudy> {
    config.validate()?;
    let dim = config.dim;
    let side = config.side;
    let eigen = config.eigen_options();
    let base_h = config
        .ladder
        .last()
        .copied()
        .unwrap_or_else(|| default_spacing(dim))
        .min(default_spacing(dim));

    let square = geometry::box_domain(&vec![side; dim])?;
    let square_polya = solve_shape(&square, base_h, &eigen)?.polya;

    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for &n in &config.n_list {
        let delta = delta_rule(dim, side, n);
        let h = base_h.min(delta / 2.0);
        let cell = mu1_mixed(dim, side / n as f64, delta, h)?;
        let domain = geometry::punched_box(dim, side, n, delta)?;
        let solved = solve_shape(&domain, h, &eigen)?;
        let bound_reports = bounds::check_punched_lower_bound(
            solved.polya,
            dim,
            side,
            n,
            delta,
            cell.mu1,
            config.tol,
        );
        let polya_report = bounds::check_polya(solved.polya, config.tol);
        let pass = bound_reports.iter().all(|r| r.pass) && polya_report.pass;
        rows.push(PunchedRow {
            n,
            delta,
            h,
            mu1_cell: cell.mu1,
            rigidity: solved.torsion.rigidity,
            lambda1: solved.lambda1,
            measure: solved.measure,
            polya: solved.polya,
            bound: bound_reports[0].lhs,
            bound_theta: bound_reports[1].lhs,
            pass,
        });
        reports.extend(bound_reports);
        reports.push(polya_report);
    }
    Ok(PunchedStudy {
        rows,
        square_polya,
        reports,
    })
}

impl PunchedStudy {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,delta,mu1_cell,F,bound,pass\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.n,
                super::fmt(r.delta),
                super::fmt(r.mu1_cell),
                super::fmt(r.polya),
                super::fmt(r.bound),
                r.pass,
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_rule_caps_at_an_eighth_of_the_cell() {
        for n in [1u32, 2, 4, 8, 16] {
            let d = delta_rule(2, 1.0, n);
            assert!((d - 1.0 / (8.0 * n as f64)).abs() < 1e-15, "n={n}: {d}");
        }
        // the rule stays inside the punched-box validity window
        for n in [1u32, 2, 4, 8] {
            assert!(delta_rule(2, 1.0, n) < 1.0 / (2.0 * n as f64));
            assert!(delta_rule(3, 1.0, n) < 1.0 / (2.0 * n as f64));
        }
        // scaling in the side length is linear
        assert!((delta_rule(2, 2.0, 4) - 2.0 * delta_rule(2, 1.0, 4)).abs() < 1e-15);
    }

    #[test]
    fn central_hole_raises_the_functional() {
        let config = StudyConfig {
            study: "punched".into(),
            n_list: vec![1],
            ladder: vec![2f64.powi(-5), 2f64.powi(-6)],
            ..Default::default()
        };
        let study = run_punched_study(&config).unwrap();
        let row = &study.rows[0];
        assert!(row.pass, "F={} bound={}", row.polya, row.bound);
        assert!(row.polya <= 1.0 && row.polya >= row.bound);
        assert!(
            row.polya > study.square_polya,
            "punched {} vs square {}",
            row.polya,
            study.square_polya
        );
    }

    /// The homogenized family N >= 2 trends upward. N = 1 sits apart: its
    /// single hole lands on the eigenfunction peak and overshoots the trend,
    /// while the quarter-point holes of N = 2 land where punching lowers the
    /// functional.
    #[test]
    fn refining_the_hole_family_trends_upward() {
        let config = StudyConfig {
            study: "punched".into(),
            n_list: vec![2, 4],
            ladder: vec![2f64.powi(-5), 2f64.powi(-6)],
            ..Default::default()
        };
        let study = run_punched_study(&config).unwrap();
        assert_eq!(study.rows.len(), 2);
        for r in &study.rows {
            assert!(r.pass, "row n={} failed: F={} bound={}", r.n, r.polya, r.bound);
            assert!(r.polya <= 1.0);
            assert!(r.polya >= r.bound);
        }
        assert!(study.rows[1].polya > study.rows[0].polya);
    }
}
