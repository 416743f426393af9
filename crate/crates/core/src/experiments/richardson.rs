//! Grid convergence and Richardson extrapolation.

use super::solve_shape;
use crate::error::{Error, Result};
use crate::geometry::{self, Domain};
use crate::solve::EigenOptions;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RichardsonResult {
    pub spacings: Vec<f64>,
    pub values: Vec<f64>,
    /// None when the ladder is non-monotone or the correction is implausibly
    /// large; the raw values remain the answer then
    pub extrapolated: Option<f64>,
    /// leading error order, fitted only with 3+ rungs on a uniform ratio
    pub order: Option<f64>,
    /// size of the applied correction
    pub uncertainty: Option<f64>,
}

/// Extrapolate assuming a leading error `C h^p`. With two rungs the order
/// defaults to 1 (the staircase-boundary rate); with three or more it is
/// fitted from the last triple when the ladder ratio is uniform.
pub fn extrapolate(spacings: &[f64], values: &[f64]) -> RichardsonResult {
    assert_eq!(spacings.len(), values.len());
    let n = values.len();
    let declined = |order| RichardsonResult {
        spacings: spacings.to_vec(),
        values: values.to_vec(),
        extrapolated: None,
        order,
        uncertainty: None,
    };
    if n < 2 {
        return declined(None);
    }
    let deltas: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    // non-monotone ladder: refuse to extrapolate
    if deltas.windows(2).any(|w| w[0] * w[1] < 0.0) {
        return declined(None);
    }
    let ratio = spacings[n - 2] / spacings[n - 1];
    let mut order = None;
    let mut p = 1.0;
    if n >= 3 {
        let uniform = spacings
            .windows(2)
            .map(|w| w[0] / w[1])
            .all(|r| (r - ratio).abs() < 1e-9 * ratio);
        let d0 = deltas[n - 3];
        let d1 = deltas[n - 2];
        if uniform && d1 != 0.0 && d0 / d1 > 0.0 {
            let fitted = (d0 / d1).ln() / ratio.ln();
            order = Some(fitted);
            if (0.2..=4.0).contains(&fitted) {
                p = fitted;
            }
        }
    }
    let d_last = deltas[n - 1 - 1];
    if d_last == 0.0 {
        return RichardsonResult {
            spacings: spacings.to_vec(),
            values: values.to_vec(),
            extrapolated: Some(values[n - 1]),
            order,
            uncertainty: Some(0.0),
        };
    }
    let correction = d_last / (ratio.powf(p) - 1.0);
    // the correction may not exceed twice the last rung-to-rung move
    if correction.abs() > 2.0 * d_last.abs() {
        return declined(order);
    }
    RichardsonResult {
        spacings: spacings.to_vec(),
        values: values.to_vec(),
        extrapolated: Some(values[n - 1] + correction),
        order,
        uncertainty: Some(correction.abs()),
    }
}

/// Evaluate one quantity of a domain along a grid ladder and extrapolate.
pub fn run_convergence(
    domain: &Domain,
    quantity: &str,
    ladder: &[f64],
    eigen: &EigenOptions,
) -> Result<RichardsonResult> {
    if ladder.len() < 2 {
        return Err(Error::InvalidConfig(
            "convergence studies need at least 2 ladder rungs".into(),
        ));
    }
    let mut values = Vec::with_capacity(ladder.len());
    for &h in ladder {
        let v = match quantity {
            "measure" => geometry::measure(domain, h),
            "perimeter" => geometry::perimeter(domain, h),
            "lambda1" => solve_shape(domain, h, eigen)?.lambda1,
            "rigidity" | "torsion" => solve_shape(domain, h, eigen)?.torsion.rigidity,
            "polya" | "F" => solve_shape(domain, h, eigen)?.polya,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown convergence quantity '{other}'"
                )))
            }
        };
        values.push(v);
    }
    Ok(extrapolate(ladder, &values))
}

impl RichardsonResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,value\n");
        for (h, v) in self.spacings.iter().zip(&self.values) {
            out.push_str(&format!("{},{}\n", super::fmt(*h), super::fmt(*v)));
        }
        out.push_str(&format!(
            "extrapolated,{}\norder,{}\n",
            self.extrapolated.map_or("declined".into(), super::fmt),
            self.order.map_or("n/a".into(), super::fmt),
        ));
        out
    }
}
