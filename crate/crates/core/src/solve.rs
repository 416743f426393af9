//! Matrix-free conjugate gradients and inverse-power eigenpairs.
//!
//! The eigen driver works against the grid quadrature: eigenvalues are
//! Rayleigh quotients `<A x, x> / <x, x>` in the weighted inner product, so
//! Dirichlet and mixed grids share one code path. CG always runs on the
//! stiffness side `W (A + sigma I)`, which is symmetric positive definite in
//! the plain dot product.

use crate::error::{Error, Result};
use crate::grid::{GridProblem, ScalarField};
use rand::{Rng, SeedableRng};

pub trait LinOp: Sync {
    fn size(&self) -> usize;
    fn apply(&self, x: &[f64], out: &mut [f64]);
}

/// `out = W (A + sigma I) x` for a grid Laplacian `A`; plain `A + sigma I`
/// on Dirichlet grids where the weights are all one.
pub struct ShiftedStiffness<'a> {
    pub grid: &'a GridProblem,
    pub sigma: f64,
}

impl LinOp for ShiftedStiffness<'_> {
    fn size(&self) -> usize {
        self.grid.n_unknowns()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.grid.apply_neg_laplacian(x, out);
        if self.sigma != 0.0 {
            for (o, xi) in out.iter_mut().zip(x) {
                *o += self.sigma * xi;
            }
        }
        for (k, o) in out.iter_mut().enumerate() {
            let w = self.grid.node_weight(k);
            if w != 1.0 {
                *o *= w;
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveReport {
    pub iterations: usize,
    /// final true residual norm ||b - A x||
    pub residual: f64,
    /// absolute residual target used
    pub tolerance: f64,
    /// false if the recurrence residual ever rose beyond rounding noise
    pub residual_monotone: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Conjugate gradients with an optional warm start. Stops when the true
/// residual satisfies `||b - A x|| <= rel_tol ||b||`; errors out at
/// `10 * n` iterations.
pub fn cg_solve(
    op: &dyn LinOp,
    rhs: &[f64],
    x0: Option<&[f64]>,
    rel_tol: f64,
) -> Result<(Vec<f64>, SolveReport)> {
    let n = op.size();
    assert_eq!(rhs.len(), n);
    let b_norm = dot(rhs, rhs).sqrt();
    let target = rel_tol * b_norm;
    let max_iters = 10 * n.max(1);

    let mut x = match x0 {
        Some(v) => v.to_vec(),
        None => vec![0.0; n],
    };
    let mut r = vec![0.0; n];
    let mut ap = vec![0.0; n];
    op.apply(&x, &mut ap);
    for i in 0..n {
        r[i] = rhs[i] - ap[i];
    }
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let mut monotone = true;
    let mut iterations = 0;
    let mut prev_norm = rr.sqrt();

    if b_norm == 0.0 {
        return Ok((
            vec![0.0; n],
            SolveReport {
                iterations: 0,
                residual: 0.0,
                tolerance: 0.0,
                residual_monotone: true,
            },
        ));
    }

    // allow one restart on recurrence drift
    for _restart in 0..2 {
        while rr.sqrt() > target && iterations < max_iters {
            op.apply(&p, &mut ap);
            let pap = dot(&p, &ap);
            if pap <= 0.0 {
                return Err(Error::CgStalled {
                    iterations,
                    residual: rr.sqrt(),
                    target,
                });
            }
            let alpha = rr / pap;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            let rr_new = dot(&r, &r);
            let norm = rr_new.sqrt();
            // ignore jitter once the residual sits at rounding level
            if norm > prev_norm * (1.0 + 1e-10) && norm > 1e-14 * b_norm {
                monotone = false;
            }
            prev_norm = norm;
            let beta = rr_new / rr;
            rr = rr_new;
            for i in 0..n {
                p[i] = r[i] + beta * p[i];
            }
            iterations += 1;
        }
        // recompute the true residual; restart if the recurrence drifted
        op.apply(&x, &mut ap);
        for i in 0..n {
            r[i] = rhs[i] - ap[i];
        }
        rr = dot(&r, &r);
        if rr.sqrt() <= target.max(1e-300) || iterations >= max_iters {
            break;
        }
        p.copy_from_slice(&r);
        prev_norm = rr.sqrt();
    }

    let residual = rr.sqrt();
    if residual > target * (1.0 + 1e-9) {
        return Err(Error::CgStalled {
            iterations,
            residual,
            target,
        });
    }
    Ok((
        x,
        SolveReport {
            iterations,
            residual,
            tolerance: target,
            residual_monotone: monotone,
        },
    ))
}

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// relative change of the Rayleigh quotient at which to stop
    pub rq_rel_tol: f64,
    /// floor on the settling test: near-degenerate clusters make the
    /// Rayleigh quotient drift within the cluster long after the residual
    /// certifies the value, so changes below this fraction count as settled
    pub rq_floor: f64,
    /// residual target as a fraction of the eigenvalue
    pub resid_rel_tol: f64,
    /// relative tolerance of the inner CG solves
    pub inner_tol: f64,
    pub max_outer: usize,
    /// shift added inside the inner solves (kept out of the reported value)
    pub shift: f64,
    /// eigenvalues at or below this floor count as converged-to-zero modes
    pub lambda_floor: f64,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            rq_rel_tol: 1e-7,
            rq_floor: 1e-4,
            resid_rel_tol: 5e-3,
            inner_tol: 1e-8,
            max_outer: 400,
            shift: 0.0,
            lambda_floor: 0.0,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub field: ScalarField,
    /// quadrature norm of `A phi - lambda phi`
    pub residual: f64,
    /// residual tolerance that was requested, as a fraction of the value
    pub requested_tol: f64,
    /// set when this value sits within 1e-6 (relative) of a neighbor
    pub degenerate: bool,
    /// Rayleigh quotients were nonincreasing across the iteration
    pub rayleigh_monotone: bool,
}

fn normalize(grid: &GridProblem, x: &mut [f64]) -> f64 {
    let norm = grid.l2_norm(x);
    if norm > 0.0 {
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
    norm
}

fn deflate(grid: &GridProblem, x: &mut [f64], basis: &[Vec<f64>]) {
    for phi in basis {
        let c = grid.inner(x, phi);
        for (xi, pi) in x.iter_mut().zip(phi) {
            *xi -= c * pi;
        }
    }
}

/// Lowest `k` eigenpairs of the grid operator by inverse power iteration
/// with Gram-Schmidt deflation. Pairs come out ascending and mutually
/// orthogonal in the grid inner product.
pub fn lowest_eigenpairs(
    grid: &GridProblem,
    k: usize,
    opts: &EigenOptions,
) -> Result<Vec<EigenPair>> {
    if k == 0 || k > 12 {
        return Err(Error::InvalidConfig(format!(
            "eigenpair count {k} outside 1..=12"
        )));
    }
    let n = grid.n_unknowns();
    let op = ShiftedStiffness {
        grid,
        sigma: opts.shift,
    };
    let mut found: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    let mut monotones = Vec::with_capacity(k);

    let weighted_rhs = |x: &[f64]| -> Vec<f64> {
        (0..n).map(|i| grid.node_weight(i) * x[i]).collect()
    };

    for j in 0..k {
        let mut x = if j == 0 {
            // the unit-load solution has strong overlap with the ground state
            let ones = vec![1.0; n];
            let (v, _) = cg_solve(&op, &weighted_rhs(&ones), None, opts.inner_tol.max(1e-8))?;
            v
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed ^ (j as u64) << 32);
            (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
        };
        deflate(grid, &mut x, &found);
        normalize(grid, &mut x);

        let mut au = vec![0.0; n];
        let mut lambda_prev = f64::INFINITY;
        let mut rayleigh_monotone = true;
        let mut converged = false;
        let mut lambda = 0.0;
        let mut residual = f64::INFINITY;
        for _outer in 0..opts.max_outer {
            grid.apply_neg_laplacian(&x, &mut au);
            lambda = grid.inner(&au, &x);
            if lambda > lambda_prev * (1.0 + 1e-12) + 1e-300 {
                rayleigh_monotone = false;
            }
            let mut res_sq = 0.0;
            for i in 0..n {
                let r = au[i] - lambda * x[i];
                res_sq += grid.node_weight(i) * r * r;
            }
            residual = (grid.cell_volume() * res_sq).sqrt();
            let scale = lambda.abs().max(opts.lambda_floor).max(1e-300);
            let rq_settled =
                (lambda - lambda_prev).abs() <= opts.rq_rel_tol.max(opts.rq_floor) * scale;
            let resid_ok = residual <= opts.resid_rel_tol * lambda.max(opts.lambda_floor);
            if rq_settled && resid_ok {
                converged = true;
                break;
            }
            lambda_prev = lambda;
            // inverse iteration step with a warm start at x / lambda
            let rhs = weighted_rhs(&x);
            let guess: Vec<f64> = if lambda > 0.0 {
                x.iter().map(|v| v / (lambda + opts.shift)).collect()
            } else {
                x.clone()
            };
            let (mut y, _) = cg_solve(&op, &rhs, Some(&guess), opts.inner_tol)?;
            deflate(grid, &mut y, &found);
            if normalize(grid, &mut y) == 0.0 {
                return Err(Error::EigenStalled {
                    iterations: _outer,
                    residual,
                });
            }
            x = y;
        }
        if !converged {
            return Err(Error::EigenStalled {
                iterations: opts.max_outer,
                residual,
            });
        }
        values.push(lambda);
        residuals.push(residual);
        monotones.push(rayleigh_monotone);
        found.push(x);
    }

    // sort ascending (deflation order is arrival order, which can disagree
    // with value order inside near-degenerate clusters)
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let lambda1 = values[order[0]];
    let mut pairs = Vec::with_capacity(k);
    for (rank, &idx) in order.iter().enumerate() {
        // a gap below 1e-6 lambda_1 flags a degeneracy; gaps inside the
        // residual-certified windows are indistinguishable from one, so
        // they flag too
        let near = |a: usize, b: usize| {
            (values[a] - values[b]).abs()
                < (1e-6 * lambda1.abs()).max(residuals[a] + residuals[b])
        };
        let degenerate = (rank > 0 && near(idx, order[rank - 1]))
            || (rank + 1 < k && near(order[rank + 1], idx));
        pairs.push(EigenPair {
            value: values[idx],
            field: grid.field_from_values(found[idx].clone())?,
            residual: residuals[idx],
            requested_tol: opts.resid_rel_tol,
            degenerate,
            rayleigh_monotone: monotones[idx],
        });
    }
    Ok(pairs)
}
