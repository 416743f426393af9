//! Reproducible studies over the solver stack: the shape table, the
//! punched-cube family, the single-hole perturbation asymptotics, grid
//! convergence with Richardson extrapolation, and the full inequality
//! suite. All outputs are deterministic for a fixed config and seed.

mod config;
mod perturb;
mod punched;
mod richardson;
mod suite;
mod table;

pub use config::StudyConfig;
pub use perturb::{run_perturbation_study, PerturbRow, PerturbStudy};
pub use punched::{delta_rule, run_punched_study, PunchedRow, PunchedStudy};
pub use richardson::{run_convergence, RichardsonResult};
pub use suite::{run_bound_suite, Corpus, SuiteResult};
pub use table::{run_table, TableRow, TableStudy};

use crate::error::Result;
use crate::geometry::{self, Domain};
use crate::grid::{rasterize, BoundaryMode, GridProblem};
use crate::solve::EigenOptions;
use crate::spectrum;
use crate::torsion::{solve_torsion, TorsionResult};

/// Everything the studies need from one domain at one spacing.
pub struct SolvedShape {
    pub grid: GridProblem,
    pub torsion: TorsionResult,
    pub lambda1: f64,
    pub measure: f64,
    pub polya: f64,
}

pub fn solve_shape(domain: &Domain, h: f64, eigen: &EigenOptions) -> Result<SolvedShape> {
    let grid = rasterize(domain, h, BoundaryMode::Dirichlet)?;
    let torsion = solve_torsion(&grid)?;
    let pair = spectrum::lambda1_with(&grid, eigen)?;
    let measure = domain
        .exact()
        .measure
        .unwrap_or_else(|| geometry::measure(domain, domain.diameter() / 1024.0));
    let polya = crate::bounds::polya_functional(torsion.rigidity, pair.value, measure)?;
    Ok(SolvedShape {
        grid,
        torsion,
        lambda1: pair.value,
        measure,
        polya,
    })
}

/// Format a float for CSV output; fixed so reruns are byte-identical.
pub(crate) fn fmt(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{v:.1}")
    } else {
        format!("{v:.12e}")
    }
}
