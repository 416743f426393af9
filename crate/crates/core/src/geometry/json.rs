//! JSON domain specs and the shorthand names accepted on the command line.
//!
//! ```json
//! {"kind": "ball", "params": [1.0], "dim": 2}
//! {"kind": "punched_box", "L": 1.0, "N": 10, "delta": 0.0125}
//! {"kind": "box", "params": [1, 1],
//!  "ops": [{"difference": {"kind": "ball", "params": [0.1], "center": [0.2, 0.2]}}]}
//! ```

use super::Domain;
use crate::error::{Error, Result};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
struct DomainSpec {
    kind: String,
    #[serde(default)]
    params: Vec<f64>,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    center: Option<Vec<f64>>,
    #[serde(default, rename = "L")]
    side: Option<f64>,
    #[serde(default, rename = "N")]
    holes_per_axis: Option<u32>,
    #[serde(default)]
    delta: Option<f64>,
    #[serde(default)]
    ops: Vec<OpSpec>,
}

#[derive(Debug, Deserialize)]
struct OpSpec {
    #[serde(default)]
    difference: Option<Box<DomainSpec>>,
    #[serde(default)]
    scale: Option<f64>,
}

fn build(spec: &DomainSpec) -> Result<Domain> {
    let p = &spec.params;
    let need = |n: usize| -> Result<()> {
        if p.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!(
                "kind '{}' expects {n} params, got {}",
                spec.kind,
                p.len()
            )))
        }
    };
    let mut domain = match spec.kind.as_str() {
        "ball" | "disc" => {
            need(1)?;
            super::ball(p[0], spec.dim.unwrap_or(2))?
        }
        "box" | "rectangle" | "cube" => {
            if p.len() != 2 && p.len() != 3 {
                return Err(Error::InvalidSpec(format!(
                    "kind '{}' expects 2 or 3 params, got {}",
                    spec.kind,
                    p.len()
                )));
            }
            super::box_domain(p)?
        }
        "ellipse" | "ellipsoid" => {
            if p.len() != 2 && p.len() != 3 {
                return Err(Error::InvalidSpec(
                    "ellipse/ellipsoid expects 2 or 3 semi-axes".into(),
                ));
            }
            super::ellipsoid(p)?
        }
        "equilateral_triangle" | "triangle" => {
            need(1)?;
            super::equilateral_triangle(p[0])?
        }
        "half_disc" => {
            need(1)?;
            super::half_disc(p[0])?
        }
        "punched_box" => {
            let side = spec
                .side
                .ok_or_else(|| Error::InvalidSpec("punched_box needs \"L\"".into()))?;
            let n = spec
                .holes_per_axis
                .ok_or_else(|| Error::InvalidSpec("punched_box needs \"N\"".into()))?;
            let delta = spec
                .delta
                .ok_or_else(|| Error::InvalidSpec("punched_box needs \"delta\"".into()))?;
            super::punched_box(spec.dim.unwrap_or(2), side, n, delta)?
        }
        other => {
            return Err(Error::InvalidSpec(format!("unknown domain kind '{other}'")));
        }
    };
    if let Some(center) = &spec.center {
        let mut offset = [0.0; 3];
        for (a, &c) in center.iter().take(3).enumerate() {
            offset[a] = c;
        }
        domain = domain.translated(offset);
    }
    for op in &spec.ops {
        if let Some(hole_spec) = &op.difference {
            let hole = build(hole_spec)?;
            domain = domain.difference(hole)?;
        }
        if let Some(factor) = op.scale {
            domain = domain.scaled(factor)?;
        }
    }
    Ok(domain)
}

/// Parse a JSON domain spec string.
pub fn domain_from_json(text: &str) -> Result<Domain> {
    let spec: DomainSpec =
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    build(&spec)
}

/// Shorthand names for the command line: `disc`, `square`, `triangle`,
/// `half_disc`, `rect:a:b`, `ellipse:a:b`, `ball3`, `cube3`,
/// `punched:L:N:delta`. Anything starting with `{` is parsed as JSON.
pub fn domain_from_name(name: &str) -> Result<Domain> {
    let name = name.trim();
    if name.starts_with('{') {
        return domain_from_json(name);
    }
    let parts: Vec<&str> = name.split(':').collect();
    let parse = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::InvalidSpec(format!("bad number '{s}' in '{name}'")))
    };
    match parts[0] {
        "disc" => super::ball(1.0, 2),
        "square" => super::box_domain(&[1.0, 1.0]),
        "triangle" => super::equilateral_triangle(1.0),
        "half_disc" => super::half_disc(1.0),
        "ball3" => super::ball(1.0, 3),
        "cube3" => super::box_domain(&[1.0, 1.0, 1.0]),
        "rect" if parts.len() == 3 => super::rectangle(parse(parts[1])?, parse(parts[2])?),
        "ellipse" if parts.len() == 3 => super::ellipsoid(&[parse(parts[1])?, parse(parts[2])?]),
        "punched" if parts.len() == 4 => {
            let n = parts[2]
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("bad hole count in '{name}'")))?;
            super::punched_box(2, parse(parts[1])?, n, parse(parts[3])?)
        }
        _ => Err(Error::InvalidSpec(format!("unknown domain name '{name}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_of_primitives() {
        let d = domain_from_json(r#"{"kind":"ball","params":[1.0]}"#).unwrap();
        assert_eq!(d.dim(), 2);
        let d = domain_from_json(r#"{"kind":"punched_box","L":1.0,"N":10,"delta":0.0125}"#).unwrap();
        assert!(d.exact().measure.is_some());
        let d = domain_from_json(r#"{"kind":"box","params":[1,1,1]}"#).unwrap();
        assert_eq!(d.dim(), 3);
    }

    #[test]
    fn json_difference_and_center() {
        let d = domain_from_json(
            r#"{"kind":"box","params":[1,1],
                "ops":[{"difference":{"kind":"ball","params":[0.1],"center":[0.2,0.2]}}]}"#,
        )
        .unwrap();
        assert!(!d.contains([0.2, 0.2, 0.0]));
        assert!(d.contains([-0.3, -0.3, 0.0]));
    }

    #[test]
    fn shorthand_names() {
        assert_eq!(domain_from_name("disc").unwrap().dim(), 2);
        assert_eq!(domain_from_name("cube3").unwrap().dim(), 3);
        let r = domain_from_name("rect:1:10").unwrap();
        assert!((r.exact().measure.unwrap() - 10.0).abs() < 1e-12);
        assert!(domain_from_name("punched:1:4:0.05").is_ok());
        assert!(domain_from_name("nope").is_err());
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(domain_from_json(r#"{"kind":"ball","params":[]}"#).is_err());
        assert!(domain_from_json(r#"{"kind":"punched_box","L":1.0}"#).is_err());
        assert!(domain_from_json(r#"{"kind":"widget","params":[1]}"#).is_err());
    }
}
