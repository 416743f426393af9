//! Uniform-lattice rasterization of implicit domains and matrix-free
//! Laplacian application under two boundary treatments:
//!
//! * `Dirichlet`: nodes strictly inside the domain are unknowns, every
//!   missing neighbor contributes zero (node masking, staircase boundary).
//! * `NeumannOuterDirichletInner`: all lattice nodes of a closed cube are
//!   unknowns except those inside an interior hole; neighbors beyond a cube
//!   face are mirrored ghosts, hole neighbors contribute zero.
//!
//! In mixed mode each node carries the trapezoid weight 2^-(number of faces
//! it lies on). With that weight as the quadrature mass, the mirrored-ghost
//! operator is exactly self-adjoint and the constant function is exactly in
//! its kernel when there is no hole.

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point, Shape};
use rayon::prelude::*;
use std::sync::atomic::{AtomicU64, Ordering};

static GRID_IDS: AtomicU64 = AtomicU64::new(1);

/// Nodes this close to the boundary (in signed distance) count as exterior,
/// matching the open-set convention.
const BOUNDARY_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    Dirichlet,
    NeumannOuterDirichletInner,
}

#[derive(Debug, Clone)]
pub struct ScalarField {
    pub values: Vec<f64>,
    grid_id: u64,
}

impl ScalarField {
    pub fn grid_id(&self) -> u64 {
        self.grid_id
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone)]
pub struct GridProblem {
    id: u64,
    dim: usize,
    h: f64,
    mode: BoundaryMode,
    origin: Point,
    lattice_dims: [usize; 3],
    /// lattice flat index -> unknown index, or -1
    node_of_lattice: Vec<i32>,
    /// unknown index -> lattice flat index
    lattice_of_node: Vec<u32>,
    /// trapezoid node weights; empty means all ones (Dirichlet mode)
    weights: Vec<f64>,
    /// side of the outer cube in mixed mode
    cube_side: Option<f64>,
}

impl GridProblem {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    pub fn n_unknowns(&self) -> usize {
        self.lattice_of_node.len()
    }

    pub fn cube_side(&self) -> Option<f64> {
        self.cube_side
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    fn lattice_strides(&self) -> [usize; 3] {
        [
            1,
            self.lattice_dims[0],
            self.lattice_dims[0] * self.lattice_dims[1],
        ]
    }

    pub fn node_position(&self, node: usize) -> Point {
        let flat = self.lattice_of_node[node] as usize;
        let [_, sy, sz] = self.lattice_strides();
        let iz = flat / sz;
        let iy = (flat % sz) / sy;
        let ix = flat % sy;
        let mut p = self.origin;
        p[0] += ix as f64 * self.h;
        p[1] += iy as f64 * self.h;
        if self.dim == 3 {
            p[2] += iz as f64 * self.h;
        }
        p
    }

    /// Unknown index of the lattice node nearest to `p`, if it is one.
    pub fn node_near(&self, p: Point) -> Option<usize> {
        let mut flat = 0usize;
        let strides = self.lattice_strides();
        for a in 0..self.dim {
            let k = ((p[a] - self.origin[a]) / self.h).round();
            if k < 0.0 || k as usize >= self.lattice_dims[a] {
                return None;
            }
            flat += k as usize * strides[a];
        }
        let node = self.node_of_lattice[flat];
        (node >= 0).then_some(node as usize)
    }

    pub fn node_weight(&self, node: usize) -> f64 {
        if self.weights.is_empty() {
            1.0
        } else {
            self.weights[node]
        }
    }

    pub fn zero_field(&self) -> ScalarField {
        ScalarField {
            values: vec![0.0; self.n_unknowns()],
            grid_id: self.id,
        }
    }

    pub fn constant_field(&self, c: f64) -> ScalarField {
        ScalarField {
            values: vec![c; self.n_unknowns()],
            grid_id: self.id,
        }
    }

    pub fn field_from_fn(&self, f: impl Fn(Point) -> f64) -> ScalarField {
        let values = (0..self.n_unknowns())
            .map(|k| f(self.node_position(k)))
            .collect();
        ScalarField {
            values,
            grid_id: self.id,
        }
    }

    pub fn field_from_values(&self, values: Vec<f64>) -> Result<ScalarField> {
        if values.len() != self.n_unknowns() {
            return Err(Error::GridMismatch);
        }
        Ok(ScalarField {
            values,
            grid_id: self.id,
        })
    }

    pub fn check_field(&self, field: &ScalarField) -> Result<()> {
        if field.grid_id == self.id && field.values.len() == self.n_unknowns() {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Quadrature: h^m sum of w_i u_i.
    pub fn integral(&self, u: &[f64]) -> f64 {
        let cell = self.cell_volume();
        if self.weights.is_empty() {
            cell * u.iter().sum::<f64>()
        } else {
            cell * u.iter().zip(&self.weights).map(|(a, w)| a * w).sum::<f64>()
        }
    }

    /// Weighted inner product h^m sum of w_i u_i v_i.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let cell = self.cell_volume();
        if self.weights.is_empty() {
            cell * u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>()
        } else {
            cell * u
                .iter()
                .zip(v)
                .zip(&self.weights)
                .map(|((a, b), w)| a * b * w)
                .sum::<f64>()
        }
    }

    pub fn l2_norm(&self, u: &[f64]) -> f64 {
        self.inner(u, u).sqrt()
    }

    /// Apply the negative discrete Laplacian, `out = -Lap_h u`.
    pub fn apply_neg_laplacian(&self, u: &[f64], out: &mut [f64]) {
        assert_eq!(u.len(), self.n_unknowns());
        assert_eq!(out.len(), self.n_unknowns());
        let inv_h2 = 1.0 / (self.h * self.h);
        let strides = self.lattice_strides();
        let dims = self.lattice_dims;
        let dim = self.dim;
        let mixed = self.mode == BoundaryMode::NeumannOuterDirichletInner;
        let node_of = &self.node_of_lattice;
        let lattice_of = &self.lattice_of_node;

        let body = |k: usize, out_k: &mut f64| {
            let flat = lattice_of[k] as usize;
            let mut idx = [0usize; 3];
            idx[2] = flat / strides[2];
            idx[1] = (flat % strides[2]) / strides[1];
            idx[0] = flat % strides[1];
            let mut acc = 0.0;
            for a in 0..dim {
                let fetch = |i: isize| -> Option<f64> {
                    if i < 0 || i as usize >= dims[a] {
                        return None; // beyond the lattice
                    }
                    let nf = flat as isize + (i - idx[a] as isize) * strides[a] as isize;
                    let node = node_of[nf as usize];
                    (node >= 0).then(|| u[node as usize])
                };
                let i = idx[a] as isize;
                let left_raw = fetch(i - 1);
                let right_raw = fetch(i + 1);
                let (left, right) = if mixed {
                    // beyond a cube face: mirrored ghost; hole nodes stay
                    // inside the lattice and were resolved to None -> 0
                    let off_lattice_left = i == 0;
                    let off_lattice_right = i + 1 >= dims[a] as isize;
                    let l = match left_raw {
                        Some(v) => v,
                        None if off_lattice_left => right_raw.unwrap_or(0.0),
                        None => 0.0,
                    };
                    let r = match right_raw {
                        Some(v) => v,
                        None if off_lattice_right => left_raw.unwrap_or(0.0),
                        None => 0.0,
                    };
                    (l, r)
                } else {
                    (left_raw.unwrap_or(0.0), right_raw.unwrap_or(0.0))
                };
                acc += 2.0 * u[k] - left - right;
            }
            *out_k = acc * inv_h2;
        };

        if self.n_unknowns() >= 1 << 15 {
            out.par_iter_mut().enumerate().for_each(|(k, o)| body(k, o));
        } else {
            out.iter_mut().enumerate().for_each(|(k, o)| body(k, o));
        }
    }
}

/// Rasterize a domain at lattice spacing `h`.
///
/// Dirichlet mode keeps the lattice nodes where the domain membership holds
/// strictly. Mixed mode requires the outer shape to be a cube (optionally
/// with a hole as a `Difference`); the lattice then spans the closed cube
/// with nodes on the faces, and `h` is snapped so the cube side is an exact
/// number of steps.
pub fn rasterize(domain: &Domain, h: f64, mode: BoundaryMode) -> Result<GridProblem> {
    if h <= 0.0 {
        return Err(Error::NonPositiveParameter("grid spacing"));
    }
    match mode {
        BoundaryMode::Dirichlet => rasterize_dirichlet(domain, h),
        BoundaryMode::NeumannOuterDirichletInner => rasterize_mixed(domain, h),
    }
}

fn rasterize_dirichlet(domain: &Domain, h: f64) -> Result<GridProblem> {
    let dim = domain.dim();
    let bb = domain.bounding_box();
    let mut dims = [1usize; 3];
    for a in 0..dim {
        let n = (bb.extent(a) / h + 1e-9).floor() as usize + 1;
        // make sure the lattice spans the whole box
        let n = if bb.lo[a] + (n - 1) as f64 * h < bb.hi[a] - 1e-12 {
            n + 1
        } else {
            n
        };
        dims[a] = n;
    }
    let total: usize = dims.iter().product();
    let mut node_of_lattice = vec![-1i32; total];
    let mut lattice_of_node = Vec::new();
    let mut flat = 0usize;
    for iz in 0..dims[2] {
        for iy in 0..dims[1] {
            for ix in 0..dims[0] {
                let p = [
                    bb.lo[0] + ix as f64 * h,
                    bb.lo[1] + iy as f64 * h,
                    if dim == 3 { bb.lo[2] + iz as f64 * h } else { 0.0 },
                ];
                if domain.signed_distance(p) < -BOUNDARY_SNAP {
                    node_of_lattice[flat] = lattice_of_node.len() as i32;
                    lattice_of_node.push(flat as u32);
                }
                flat += 1;
            }
        }
    }
    if lattice_of_node.is_empty() {
        return Err(Error::EmptyDiscretization { h });
    }
    Ok(GridProblem {
        id: GRID_IDS.fetch_add(1, Ordering::Relaxed),
        dim,
        h,
        mode: BoundaryMode::Dirichlet,
        origin: [bb.lo[0], bb.lo[1], if dim == 3 { bb.lo[2] } else { 0.0 }],
        lattice_dims: dims,
        node_of_lattice,
        lattice_of_node,
        weights: Vec::new(),
        cube_side: None,
    })
}

fn cube_of(domain: &Domain) -> Option<(f64, Option<&Shape>)> {
    match domain.shape() {
        Shape::Box { half } => {
            let side = 2.0 * half[0];
            (0..domain.dim())
                .all(|a| (half[a] - half[0]).abs() < 1e-12)
                .then_some((side, None))
        }
        Shape::Difference { base, hole } => {
            if let Shape::Box { half } = base.as_ref() {
                let side = 2.0 * half[0];
                (0..domain.dim())
                    .all(|a| (half[a] - half[0]).abs() < 1e-12)
                    .then_some((side, Some(hole.as_ref())))
            } else {
                None
            }
        }
        _ => None,
    }
}

fn rasterize_mixed(domain: &Domain, h: f64) -> Result<GridProblem> {
    let dim = domain.dim();
    let (side, hole) = cube_of(domain).ok_or_else(|| {
        Error::InvalidSpec("mixed boundary mode needs a cube, optionally minus a hole".into())
    })?;
    let n = (side / h).round().max(1.0) as usize;
    let h = side / n as f64; // snap so faces land on lattice planes
    let mut dims = [1usize; 3];
    for a in dims.iter_mut().take(dim) {
        *a = n + 1;
    }
    let total: usize = dims.iter().product();
    let mut node_of_lattice = vec![-1i32; total];
    let mut lattice_of_node = Vec::new();
    let mut weights = Vec::new();
    let origin = [-side / 2.0, -side / 2.0, if dim == 3 { -side / 2.0 } else { 0.0 }];
    let mut flat = 0usize;
    for iz in 0..dims[2] {
        for iy in 0..dims[1] {
            for ix in 0..dims[0] {
                let idx = [ix, iy, iz];
                let p = [
                    origin[0] + ix as f64 * h,
                    origin[1] + iy as f64 * h,
                    if dim == 3 { origin[2] + iz as f64 * h } else { 0.0 },
                ];
                let in_hole = hole
                    .map(|hs| hs.signed_distance(p, dim) <= BOUNDARY_SNAP)
                    .unwrap_or(false);
                if !in_hole {
                    node_of_lattice[flat] = lattice_of_node.len() as i32;
                    lattice_of_node.push(flat as u32);
                    let faces = (0..dim)
                        .filter(|&a| idx[a] == 0 || idx[a] == n)
                        .count() as i32;
                    weights.push(2f64.powi(-faces));
                }
                flat += 1;
            }
        }
    }
    if lattice_of_node.is_empty() {
        return Err(Error::EmptyDiscretization { h });
    }
    Ok(GridProblem {
        id: GRID_IDS.fetch_add(1, Ordering::Relaxed),
        dim,
        h,
        mode: BoundaryMode::NeumannOuterDirichletInner,
        origin,
        lattice_dims: dims,
        node_of_lattice,
        lattice_of_node,
        weights,
        cube_side: Some(side),
    })
}
