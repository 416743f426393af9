//! Study configuration, shared by the library API and the CLI. The JSON
//! form of this struct is the config-file format.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct StudyConfig {
    /// one of `table`, `punched`, `perturb`, `converge`, `bounds`
    pub study: String,
    /// shorthand name or inline JSON spec; empty uses the study default
    pub domain: String,
    /// grid spacings, strictly decreasing
    pub ladder: Vec<f64>,
    pub n_list: Vec<u32>,
    pub dim: usize,
    pub side: f64,
    pub x0: Vec<f64>,
    /// hole radii for the perturbation study, strictly decreasing
    pub deltas: Vec<f64>,
    /// quantity for convergence studies: `lambda1`, `rigidity`, `measure`, `polya`
    pub quantity: String,
    /// corpus for the bound suite: `default`, `convex`, `punched`, `3d`
    pub corpus: String,
    pub samples: u64,
    pub seed: u64,
    pub cg_tol: f64,
    /// eigen residual target as a fraction of the eigenvalue
    pub eigen_tol: f64,
    /// inequality tolerance as a fraction of the bound magnitude
    pub tol: f64,
    /// harness self-test hook: multiply computed lambda_1 by this factor
    pub corrupt_lambda1: Option<f64>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            study: String::new(),
            domain: String::new(),
            ladder: vec![2f64.powi(-6), 2f64.powi(-7)],
            n_list: vec![1, 2, 4, 8],
            dim: 2,
            side: 1.0,
            x0: vec![0.0, 0.0],
            deltas: vec![
                2f64.powi(-4),
                2f64.powi(-5),
                2f64.powi(-6),
                2f64.powi(-7),
            ],
            quantity: "lambda1".into(),
            corpus: "default".into(),
            samples: 100_000,
            seed: 42,
            cg_tol: 1e-10,
            eigen_tol: 5e-3,
            tol: 0.01,
            corrupt_lambda1: None,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.dim == 2 || self.dim == 3) {
            return fail(format!("dim must be 2 or 3, got {}", self.dim));
        }
        if self.ladder.is_empty() {
            return fail("grid ladder must not be empty".into());
        }
        if !self
            .ladder
            .windows(2)
            .all(|w| w[1] < w[0] && w[1] > 0.0)
        {
            return fail(format!("grid ladder must be strictly decreasing and positive: {:?}", self.ladder));
        }
        if self.ladder[0] <= 0.0 {
            return fail("grid spacings must be positive".into());
        }
        match self.study.as_str() {
            "table" | "converge" => {
                if self.ladder.len() < 2 {
                    return fail("Richardson extrapolation needs at least 2 ladder rungs".into());
                }
            }
            "perturb" => {
                if self.deltas.is_empty() || !self.deltas.windows(2).all(|w| w[1] < w[0]) {
                    return fail(format!(
                        "perturbation radii must be strictly decreasing: {:?}",
                        self.deltas
                    ));
                }
                if self.x0.len() < 2 {
                    return fail("perturbation study needs an interior point x0".into());
                }
            }
            "punched" => {
                if self.n_list.is_empty() || !self.n_list.windows(2).all(|w| w[1] > w[0]) {
                    return fail(format!(
                        "hole counts must be strictly increasing: {:?}",
                        self.n_list
                    ));
                }
                if self.side <= 0.0 {
                    return fail("cube side must be positive".into());
                }
            }
            "bounds" | "" => {}
            other => return fail(format!("unknown study '{other}'")),
        }
        if self.cg_tol <= 0.0 || self.eigen_tol <= 0.0 || self.tol < 0.0 {
            return fail("tolerances must be positive".into());
        }
        if self.samples == 0 {
            return fail("sample count must be positive".into());
        }
        Ok(())
    }

    pub fn eigen_options(&self) -> crate::solve::EigenOptions {
        crate::solve::EigenOptions {
            resid_rel_tol: self.eigen_tol,
            seed: self.seed,
            ..Default::default()
        }
    }
}
