//! Numerical laboratory for the torsion function, torsional rigidity,
//! the first Dirichlet eigenvalue, and the Polya functional
//! `F = T * lambda_1 / |domain|` on implicit 2-D and 3-D domains.
//!
//! The crate is organised as a pipeline:
//!
//! * [`geometry`] builds implicit domains (signed distance + membership)
//!   and measures them,
//! * [`grid`] rasterizes a domain onto a uniform lattice and exposes
//!   matrix-free Laplacians,
//! * [`solve`] provides conjugate gradients and inverse-power eigenpairs,
//! * [`torsion`] and [`spectrum`] compute the shape quantities,
//! * [`bounds`] checks every inequality as a [`bounds::BoundReport`],
//! * [`wos`] cross-checks rigidity with a walk-on-spheres Monte Carlo,
//! * [`experiments`] wires it all into reproducible studies.

pub mod bounds;
pub mod constants;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod grid;
pub mod solve;
pub mod spectrum;
pub mod torsion;
pub mod wos;

pub use error::{Error, Result};
pub use geometry::Domain;
pub use grid::{BoundaryMode, GridProblem, ScalarField};
