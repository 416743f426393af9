//! Dimension-dependent constants and the small special-function kit
//! (half-integer Gamma, Bessel J0/J1 with their first zeros, adaptive
//! Simpson quadrature) used by the inequality checkers.
//!
//! Everything here is computed locally; no tabulated values are baked in
//! beyond the defining formulas.

use std::f64::consts::PI;

/// Gamma(n/2) for positive integer n, via Gamma(1/2) = sqrt(pi) and the
/// recurrence Gamma(x+1) = x Gamma(x).
fn gamma_half_integer(n: u32) -> f64 {
    assert!(n >= 1, "gamma_half_integer needs n >= 1");
    if n % 2 == 0 {
        // Gamma(k) = (k-1)!
        let k = n / 2;
        (1..k).map(|i| i as f64).product()
    } else {
        // Gamma(k + 1/2) = (2k)! / (4^k k!) sqrt(pi)
        let k = (n - 1) / 2;
        let mut value = PI.sqrt();
        for i in 0..k {
            value *= i as f64 + 0.5;
        }
        value
    }
}

/// Volume of the unit ball in `dim` dimensions: pi^{m/2} / Gamma(m/2 + 1).
pub fn unit_ball_volume(dim: usize) -> f64 {
    PI.powf(dim as f64 / 2.0) / gamma_half_integer(dim as u32 + 2)
}

/// Newtonian capacity of the unit ball in `dim >= 3` dimensions:
/// 4 pi^{m/2} / Gamma((m-2)/2).
pub fn unit_ball_capacity(dim: usize) -> f64 {
    assert!(dim >= 3, "Newtonian capacity needs dim >= 3");
    4.0 * PI.powf(dim as f64 / 2.0) / gamma_half_integer(dim as u32 - 2)
}

/// The heat-kernel hitting constant k_m = int_0^1 (4 pi s)^{-m/2} e^{-m/(4s)} ds.
///
/// The integrand has an essential singularity at s = 0; the lower piece is
/// integrated after the substitution s = e^{-u}, the upper piece directly.
/// Both pieces use adaptive Simpson with a 1e-9 absolute target, well below
/// the 1e-6 accuracy the bracket checks need.
pub fn heat_kernel_constant(dim: usize) -> f64 {
    let m = dim as f64;
    let f = move |s: f64| (4.0 * PI * s).powf(-m / 2.0) * (-m / (4.0 * s)).exp();
    let split = 0.1f64;
    // s in (0, split]: s = e^{-u}, ds = -e^{-u} du, u from ln(1/split) upward.
    let g = move |u: f64| {
        let s = (-u).exp();
        f(s) * s
    };
    let u_lo = (1.0 / split).ln();
    // e^{-m/(4s)} with s = e^{-u} dies double-exponentially; u = 12 gives
    // s ~ 6e-6 and an integrand below 1e-40000 for any m >= 2.
    let u_hi = 12.0;
    let lower = adaptive_simpson(&g, u_lo, u_hi, 1e-10, 40);
    let upper = adaptive_simpson(&f, split, 1.0, 1e-9, 40);
    lower + upper
}

/// Boundary-leakage constant s_m = 2^{(m+7)/2} m sqrt(pi) / 3.
pub fn boundary_leak_constant(dim: usize) -> f64 {
    let m = dim as f64;
    2f64.powf((m + 7.0) / 2.0) * m * PI.sqrt() / 3.0
}

/// Bessel function J0 by its power series. Accurate for |x| <~ 12, which
/// covers every zero this crate needs.
pub fn bessel_j0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= -q / ((k * k) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
    }
    sum
}

/// Bessel function J1 by its power series.
pub fn bessel_j1(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = x / 2.0;
    let mut sum = term;
    for k in 1..60 {
        term *= -q / ((k * (k + 1)) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
    }
    sum
}

fn bisect_zero(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(
        flo * f(hi) < 0.0,
        "bisection bracket [{lo}, {hi}] does not straddle a zero"
    );
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) * flo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First positive zero of J0 (bisection on the series, 1e-10 accurate).
pub fn j0_first_zero() -> f64 {
    bisect_zero(bessel_j0, 2.0, 3.0)
}

/// First positive zero of J1.
pub fn j1_first_zero() -> f64 {
    bisect_zero(bessel_j1, 3.0, 5.0)
}

/// Adaptive Simpson quadrature with the usual |S_half - S| / 15 acceptance.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes_are_exact() {
        assert!((unit_ball_volume(2) - PI).abs() < 1e-12);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-12);
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn capacity_of_unit_ball_in_3d_is_4pi() {
        assert!((unit_ball_capacity(3) - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn heat_kernel_constant_matches_its_stated_window() {
        let k3 = heat_kernel_constant(3);
        assert!(
            (0.0101..=0.0102).contains(&k3),
            "k_3 = {k3} outside [0.0101, 0.0102]"
        );
        // Cross-check against the closed form via the upper incomplete gamma:
        // k_3 = (4 pi)^{-3/2} * Gamma(1/2, 3/4) / sqrt(3/4).
        let tail = adaptive_simpson(&|u: f64| u.powf(-0.5) * (-u).exp(), 0.75, 40.0, 1e-12, 40);
        let reference = (4.0 * PI).powf(-1.5) * tail / 0.75f64.sqrt();
        assert!((k3 - reference).abs() < 1e-8, "k3 {k3} vs {reference}");
    }

    #[test]
    fn boundary_leak_constant_formula() {
        let s2 = boundary_leak_constant(2);
        assert!((s2 - 2f64.powf(4.5) * 2.0 * PI.sqrt() / 3.0).abs() < 1e-12);
    }

    #[test]
    fn bessel_zeros() {
        let j01 = j0_first_zero();
        let j11 = j1_first_zero();
        assert!(bessel_j0(j01).abs() < 1e-9);
        assert!(bessel_j1(j11).abs() < 1e-9);
        assert!((2.40482..2.40483).contains(&j01), "j01 = {j01}");
        assert!((3.83170..3.83172).contains(&j11), "j11 = {j11}");
    }

    #[test]
    fn simpson_integrates_polynomials() {
        let exact = 0.25;
        let got = adaptive_simpson(&|x: f64| x * x * x, 0.0, 1.0, 1e-12, 30);
        assert!((got - exact).abs() < 1e-12);
        let got = adaptive_simpson(&|x: f64| (-x).exp(), 0.0, 5.0, 1e-10, 30);
        assert!((got - (1.0 - (-5.0f64).exp())).abs() < 1e-9);
    }
}
