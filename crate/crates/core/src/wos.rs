//! Walk-on-spheres Monte Carlo estimator for the torsion function and the
//! torsional rigidity, used as a grid-independent cross-check.
//!
//! Convention: the exit-time functional solves the unit-load problem, so a
//! jump of radius d contributes d^2 / (2 m) and the estimator at a point is
//! unbiased up to the O(eps) stopping-shell cutoff.

use crate::error::{Error, Result};
use crate::geometry::{measure, Domain, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const JUMP_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub struct WosEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub eps: f64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index)))
}

fn unit_sphere_jump(rng: &mut ChaCha8Rng, dim: usize) -> Point {
    if dim == 2 {
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        [angle.cos(), angle.sin(), 0.0]
    } else {
        let z: f64 = rng.gen_range(-1.0..1.0);
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (1.0 - z * z).sqrt();
        [r * angle.cos(), r * angle.sin(), z]
    }
}

fn walk(domain: &Domain, start: Point, eps: f64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let dim = domain.dim();
    let two_m = 2.0 * dim as f64;
    let mut x = start;
    let mut acc = 0.0;
    let mut c = 0.0; // Kahan compensation
    for _ in 0..JUMP_CAP {
        let d = -domain.signed_distance(x);
        if d < eps {
            return Ok(acc);
        }
        let term = d * d / two_m - c;
        let sum = acc + term;
        c = (sum - acc) - term;
        acc = sum;
        let dir = unit_sphere_jump(rng, dim);
        for a in 0..dim {
            x[a] += d * dir[a];
        }
    }
    Err(Error::WalkJumpCap(JUMP_CAP))
}

/// One exit-time sample of the torsion function at `start`.
pub fn wos_exit_time(domain: &Domain, start: Point, eps: f64, seed: u64) -> Result<f64> {
    if eps <= 0.0 {
        return Err(Error::NonPositiveParameter("walk shell width"));
    }
    if !domain.contains(start) {
        return Err(Error::StartOutside);
    }
    let mut rng = stream_rng(seed, 0);
    walk(domain, start, eps, &mut rng)
}

/// Default shell width: 1e-4 of the bounding-box diameter.
pub fn default_eps(domain: &Domain) -> f64 {
    1e-4 * domain.diameter()
}

/// Monte Carlo torsional rigidity: uniform start points over the domain
/// (rejection inside the bounding box), T = |domain| * mean of the exit-time
/// samples. Sample streams are derived per index, so the estimate is
/// deterministic for a given seed regardless of thread count.
pub fn wos_torsional_rigidity(
    domain: &Domain,
    n_samples: u64,
    eps: f64,
    seed: u64,
) -> Result<WosEstimate> {
    if n_samples < 1_000 {
        return Err(Error::InvalidConfig(format!(
            "rigidity estimates need at least 1000 samples, got {n_samples}"
        )));
    }
    if eps <= 0.0 {
        return Err(Error::NonPositiveParameter("walk shell width"));
    }
    let bb = domain.bounding_box();
    let dim = domain.dim();

    // quick acceptance probe so a degenerate bounding box fails fast
    {
        let mut rng = stream_rng(seed, u64::MAX);
        let hits = (0..4096)
            .filter(|_| {
                let mut p = [0.0; 3];
                for a in 0..dim {
                    p[a] = rng.gen_range(bb.lo[a]..bb.hi[a]);
                }
                domain.contains(p)
            })
            .count();
        if hits < 4 {
            return Err(Error::RejectionTooSparse);
        }
    }

    let samples: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let start = loop {
                let mut p = [0.0; 3];
                for a in 0..dim {
                    p[a] = rng.gen_range(bb.lo[a]..bb.hi[a]);
                }
                if domain.contains(p) {
                    break p;
                }
            };
            walk(domain, start, eps, &mut rng)
        })
        .collect::<Result<Vec<f64>>>()?;

    // fixed-order compensated reduction keeps the result bit-identical
    let mut mean_acc = 0.0;
    let mut c = 0.0;
    for &s in &samples {
        let term = s - c;
        let sum = mean_acc + term;
        c = (sum - mean_acc) - term;
        mean_acc = sum;
    }
    let mean_v = mean_acc / n_samples as f64;
    let mut var_acc = 0.0;
    let mut c2 = 0.0;
    for &s in &samples {
        let term = (s - mean_v) * (s - mean_v) - c2;
        let sum = var_acc + term;
        c2 = (sum - var_acc) - term;
        var_acc = sum;
    }
    let variance = var_acc / (n_samples as f64 - 1.0);
    let std_error_v = (variance / n_samples as f64).sqrt();

    let volume = domain
        .exact()
        .measure
        .unwrap_or_else(|| measure(domain, domain.diameter() / 2048.0));
    Ok(WosEstimate {
        mean: volume * mean_v,
        std_error: volume * std_error_v,
        samples: n_samples,
        eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry;
    use std::f64::consts::PI;

    #[test]
    fn ball_center_first_jump_carries_the_full_value() {
        // from the center of the unit disc the first jump has radius 1 and
        // contributes exactly 1/4; the remaining walk adds the O(eps) tail
        let d = geometry::ball(1.0, 2).unwrap();
        let v = wos_exit_time(&d, [0.0, 0.0, 0.0], 1e-6, 7).unwrap();
        assert!((v - 0.25).abs() < 1e-3, "v = {v}");
    }

    #[test]
    fn ball_interior_point_matches_the_closed_form() {
        let d = geometry::ball(1.0, 2).unwrap();
        let exact = (1.0 - 0.25) / 4.0;
        let n = 20_000u64;
        let mut acc = 0.0;
        let mut sq = 0.0;
        for i in 0..n {
            let mut rng = stream_rng(99, i);
            let v = walk(&d, [0.5, 0.0, 0.0], 1e-5, &mut rng).unwrap();
            acc += v;
            sq += v * v;
        }
        let mean = acc / n as f64;
        let se = ((sq / n as f64 - mean * mean) / n as f64).sqrt();
        assert!(
            (mean - exact).abs() < 3.0 * se + 1e-4,
            "mean {mean} vs {exact} (se {se})"
        );
    }

    #[test]
    fn degenerate_start_in_the_shell_returns_zero() {
        let d = geometry::ball(1.0, 2).unwrap();
        let v = wos_exit_time(&d, [0.9999, 0.0, 0.0], 1e-3, 1).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn start_outside_is_an_error() {
        let d = geometry::ball(1.0, 2).unwrap();
        assert!(matches!(
            wos_exit_time(&d, [2.0, 0.0, 0.0], 1e-4, 1),
            Err(Error::StartOutside)
        ));
    }

    #[test]
    fn disc_rigidity_within_three_standard_errors() {
        let d = geometry::ball(1.0, 2).unwrap();
        let est = wos_torsional_rigidity(&d, 100_000, default_eps(&d), 12345).unwrap();
        let exact = PI / 8.0;
        assert!(
            (est.mean - exact).abs() < 3.0 * est.std_error,
            "T = {} +- {}, exact {exact}",
            est.mean,
            est.std_error
        );
    }

    #[test]
    fn seed_determinism_is_bit_exact() {
        let d = geometry::box_domain(&[1.0, 1.0]).unwrap();
        let a = wos_torsional_rigidity(&d, 2_000, 1e-4, 42).unwrap();
        let b = wos_torsional_rigidity(&d, 2_000, 1e-4, 42).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        let c = wos_torsional_rigidity(&d, 2_000, 1e-4, 43).unwrap();
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn shell_bias_sits_below_the_noise() {
        let d = geometry::ball(1.0, 2).unwrap();
        let coarse = wos_torsional_rigidity(&d, 30_000, 1e-3 * 2.0, 5).unwrap();
        let fine = wos_torsional_rigidity(&d, 30_000, 1e-4 * 2.0, 5).unwrap();
        let combined = (coarse.std_error.powi(2) + fine.std_error.powi(2)).sqrt();
        assert!(
            (coarse.mean - fine.mean).abs() < 3.0 * combined,
            "{} vs {}",
            coarse.mean,
            fine.mean
        );
    }

    #[test]
    fn rigidity_scaling_under_doubling() {
        let base = geometry::ball(1.0, 2).unwrap();
        let doubled = geometry::ball(1.0, 2).unwrap().scaled(2.0).unwrap();
        let a = wos_torsional_rigidity(&base, 40_000, 2e-4, 9).unwrap();
        let b = wos_torsional_rigidity(&doubled, 40_000, 4e-4, 9).unwrap();
        let combined = (16.0 * a.std_error).hypot(b.std_error);
        assert!(
            (b.mean - 16.0 * a.mean).abs() < 3.0 * combined,
            "{} vs {}",
            b.mean,
            16.0 * a.mean
        );
    }

    #[test]
    fn sample_floor_is_enforced() {
        let d = geometry::ball(1.0, 2).unwrap();
        assert!(wos_torsional_rigidity(&d, 100, 1e-4, 1).is_err());
    }

    #[test]
    fn three_dimensional_ball_center_value() {
        // v(0) = r^2 / 6 in 3-D
        let d = geometry::ball(1.0, 3).unwrap();
        let n = 5_000u64;
        let mut acc = 0.0;
        for i in 0..n {
            let mut rng = stream_rng(4, i);
            acc += walk(&d, [0.0, 0.0, 0.0], 1e-5, &mut rng).unwrap();
        }
        let mean = acc / n as f64;
        assert!((mean - 1.0 / 6.0).abs() < 5e-3, "mean {mean}");
    }
}
