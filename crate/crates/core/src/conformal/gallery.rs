//! Closed-form example metrics with their declared curvature measures.

use std::f64::consts::{E, PI};
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use super::{ChartMetric, ConformalError, DeclaredMeasure, Domain, Singularity};
use crate::curvature::{Atom, Cell, CurvatureMeasure, Curve, EdgePart, FacePart};

/// Radius of the pseudosphere cell whose measure is declared; its area is
/// `2π / log(1/R) = 2π`.
pub const PSEUDOSPHERE_CELL_RADIUS: f64 = 1.0 / E;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExampleKind {
    /// Cone of total angle `theta`.
    Cone {
        theta: f64,
    },
    HemisphereCylinder,
    GluedDisks,
    Pseudosphere,
}

impl FromStr for ExampleKind {
    type Err = ConformalError;

    /// `cone:<theta>`, `hemisphere-cylinder`, `glued-disks` or `pseudosphere`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase().replace('_', "-");
        if let Some(t) = s.strip_prefix("cone:") {
            let theta = parse_angle(t).ok_or_else(|| ConformalError::BadParameter(format!("cone angle '{t}'")))?;
            return Ok(ExampleKind::Cone { theta });
        }
        match s.as_str() {
            "hemisphere-cylinder" => Ok(ExampleKind::HemisphereCylinder),
            "glued-disks" => Ok(ExampleKind::GluedDisks),
            "pseudosphere" => Ok(ExampleKind::Pseudosphere),
            _ => Err(ConformalError::BadParameter(format!("unknown example '{s}'"))),
        }
    }
}

/// Reads `1.5`, `pi`, `pi/2`, `3pi/2`, `2*pi`.
fn parse_angle(t: &str) -> Option<f64> {
    let t = t.replace('*', "");
    if let Ok(v) = t.parse::<f64>() {
        return Some(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.to_string(), d.parse::<f64>().ok()?),
        None => (t.clone(), 1.0),
    };
    let coeff = num.strip_suffix("pi")?;
    let c = if coeff.is_empty() { 1.0 } else { coeff.parse::<f64>().ok()? };
    Some(c * PI / den)
}

/// Gallery metric of the given kind.
pub fn make_example_metric(kind: ExampleKind) -> Result<ChartMetric, ConformalError> {
    let origin = Complex64::new(0.0, 0.0);
    match kind {
        ExampleKind::Cone { theta } => {
            if !(theta > 0.0) || !theta.is_finite() {
                return Err(ConformalError::BadParameter(format!("cone angle {theta} must be positive")));
            }
            let beta = theta / (2.0 * PI) - 1.0;
            let mut measure = CurvatureMeasure::default();
            let mass = -2.0 * PI * beta;
            if mass != 0.0 {
                measure.atoms.push(Atom { site: "apex".into(), point: Some([0.0; 3]), mass });
            }
            let singularities = if beta == 0.0 { vec![] } else { vec![Singularity::Cone { at: origin, beta }] };
            Ok(ChartMetric::new(
                format!("cone({theta})"),
                Domain::Plane,
                Arc::new(move |z: Complex64| if beta == 0.0 { 1.0 } else { z.norm().powf(2.0 * beta) }),
                singularities,
            )
            .with_declared(DeclaredMeasure {
                measure,
                total: 2.0 * PI - theta,
                note: "atom 2π − θ at the apex".into(),
            }))
        }
        ExampleKind::HemisphereCylinder => {
            let seam = Singularity::Seam { center: origin, radius: 1.0 };
            let measure = CurvatureMeasure {
                face_parts: vec![FacePart { id: "hemisphere".into(), mass: 2.0 * PI, cell: Cell::Unplaced }],
                ..Default::default()
            };
            Ok(ChartMetric::new(
                "hemisphere-cylinder",
                Domain::Plane,
                Arc::new(|z: Complex64| {
                    let r2 = z.norm_sqr();
                    if r2 <= 1.0 {
                        4.0 / ((1.0 + r2) * (1.0 + r2))
                    } else {
                        1.0 / r2
                    }
                }),
                vec![seam],
            )
            .with_far_chart(vec![seam, Singularity::InfiniteEnd { at: origin }])
            .with_declared(DeclaredMeasure {
                measure,
                total: 2.0 * PI,
                note: "curvature 1 on the hemisphere, flat cylinder, geodesic seam".into(),
            }))
        }
        ExampleKind::GluedDisks => {
            let seam = Singularity::Seam { center: origin, radius: 1.0 };
            let measure = CurvatureMeasure {
                edge_parts: vec![EdgePart {
                    id: "seam".into(),
                    density: 2.0,
                    length: 2.0 * PI,
                    curve: Curve::Circle { center: [0.0; 3], radius: 1.0, normal: [0.0, 0.0, 1.0] },
                }],
                ..Default::default()
            };
            Ok(ChartMetric::new(
                "glued-disks",
                Domain::Plane,
                Arc::new(|z: Complex64| {
                    let r2 = z.norm_sqr();
                    if r2 <= 1.0 {
                        1.0
                    } else {
                        1.0 / (r2 * r2)
                    }
                }),
                vec![seam],
            )
            .with_far_chart(vec![seam])
            .with_declared(DeclaredMeasure {
                measure,
                total: 4.0 * PI,
                note: "density 2 along the common boundary circle".into(),
            }))
        }
        ExampleKind::Pseudosphere => {
            let r = PSEUDOSPHERE_CELL_RADIUS;
            let area = 2.0 * PI / (1.0 / r).ln();
            let measure = CurvatureMeasure {
                atoms: vec![Atom { site: "cusp".into(), point: Some([0.0; 3]), mass: 2.0 * PI }],
                face_parts: vec![FacePart { id: format!("disk(r<={r:.9})"), mass: -area, cell: Cell::Unplaced }],
                ..Default::default()
            };
            Ok(ChartMetric::new(
                "pseudosphere",
                Domain::PuncturedDisk { radius: 1.0 },
                Arc::new(|z: Complex64| {
                    let r = z.norm();
                    let l = r * r.ln();
                    1.0 / (l * l)
                }),
                vec![Singularity::Cusp { at: origin }],
            )
            .with_declared(DeclaredMeasure {
                measure,
                total: 2.0 * PI - area,
                note: "curvature −1 on the cell r ≤ 1/e plus the cusp atom 2π".into(),
            }))
        }
    }
}

/// Area of the pseudosphere cell `0 < |z| ≤ r`.
pub fn pseudosphere_cell_area(r: f64) -> f64 {
    2.0 * PI / (1.0 / r).ln()
}
