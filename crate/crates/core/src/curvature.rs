//! Curvature measures of singular surfaces.
//!
//! A measure is kept symbolically as point atoms, constant-density parts on
//! curves and total masses on cells. Points are stored as 3-vectors: chart
//! points use `z = 0`, torus points their fundamental-square coordinates and
//! sphere points unit vectors.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mesh::{ConeSurface, Corner};
use crate::quadrature::{gauss_legendre, NeumaierSum};

/// Default threshold below which vertex atoms are treated as flat.
pub const ATOM_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvatureError {
    #[error("QuadratureUnderResolved: resolution {resolution} is below 2 nodes per part")]
    QuadratureUnderResolved { resolution: usize },
    #[error("NonPositiveLength: curve length {length} must be positive")]
    NonPositiveLength { length: f64 },
    #[error("UnplacedPart: part '{id}' has no geometry and the test function is not constant")]
    UnplacedPart { id: String },
}

pub type Point = [f64; 3];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub site: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Point>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Curve {
    #[default]
    Unplaced,
    Segment {
        a: Point,
        b: Point,
    },
    Circle {
        center: Point,
        radius: f64,
        normal: Point,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgePart {
    pub id: String,
    pub density: f64,
    pub length: f64,
    #[serde(default)]
    pub curve: Curve,
}

impl EdgePart {
    pub fn mass(&self) -> f64 {
        self.density * self.length
    }
}

/// Support of a face part. Parts are uniform over their cell except bumps,
/// which carry the normalized bump profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cell {
    #[default]
    Unplaced,
    Triangle {
        corners: [Point; 3],
    },
    /// The whole unit-area square torus.
    FlatTorus,
    /// The whole unit sphere.
    RoundSphere,
    /// Bump of geodesic radius `radius` on the square torus.
    TorusBump {
        center: Point,
        radius: f64,
    },
    /// Bump of geodesic radius `radius` on the unit sphere.
    SphereBump {
        center: Point,
        radius: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacePart {
    pub id: String,
    pub mass: f64,
    #[serde(default)]
    pub cell: Cell,
}

/// Signed curvature measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct CurvatureMeasure {
    #[serde(default)]
    pub atoms: Vec<Atom>,
    #[serde(default, rename = "edges")]
    pub edge_parts: Vec<EdgePart>,
    #[serde(default, rename = "faces")]
    pub face_parts: Vec<FacePart>,
}

impl CurvatureMeasure {
    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.edge_parts.is_empty() && self.face_parts.is_empty()
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).collect::<NeumaierSum>().value()
    }

    pub fn total_mass(&self) -> f64 {
        let mut s = NeumaierSum::default();
        self.atoms.iter().for_each(|a| s.add(a.mass));
        self.edge_parts.iter().for_each(|e| s.add(e.mass()));
        self.face_parts.iter().for_each(|f| s.add(f.mass));
        s.value()
    }

    /// `|ω|(S)`.
    pub fn total_variation(&self) -> f64 {
        let mut s = NeumaierSum::default();
        self.atoms.iter().for_each(|a| s.add(a.mass.abs()));
        self.edge_parts.iter().for_each(|e| s.add(e.mass().abs()));
        self.face_parts.iter().for_each(|f| s.add(f.mass.abs()));
        s.value()
    }

    /// `(ω⁺, ω⁻)`, both nonnegative, with `ω = ω⁺ − ω⁻`. Zero parts go to
    /// neither side.
    pub fn positive_negative_split(&self) -> (CurvatureMeasure, CurvatureMeasure) {
        let mut pos = CurvatureMeasure::default();
        let mut neg = CurvatureMeasure::default();
        for a in &self.atoms {
            if a.mass > 0.0 {
                pos.atoms.push(a.clone());
            } else if a.mass < 0.0 {
                neg.atoms.push(Atom { mass: -a.mass, ..a.clone() });
            }
        }
        for e in &self.edge_parts {
            if e.density > 0.0 {
                pos.edge_parts.push(e.clone());
            } else if e.density < 0.0 {
                neg.edge_parts.push(EdgePart { density: -e.density, ..e.clone() });
            }
        }
        for f in &self.face_parts {
            if f.mass > 0.0 {
                pos.face_parts.push(f.clone());
            } else if f.mass < 0.0 {
                neg.face_parts.push(FacePart { mass: -f.mass, ..f.clone() });
            }
        }
        (pos, neg)
    }

    /// `self + other`, concatenating parts.
    pub fn plus(&self, other: &CurvatureMeasure) -> CurvatureMeasure {
        let mut out = self.clone();
        out.atoms.extend(other.atoms.iter().cloned());
        out.edge_parts.extend(other.edge_parts.iter().cloned());
        out.face_parts.extend(other.face_parts.iter().cloned());
        out
    }

    /// `factor · self`.
    pub fn scaled(&self, factor: f64) -> CurvatureMeasure {
        let mut out = self.clone();
        out.atoms.iter_mut().for_each(|a| a.mass *= factor);
        out.edge_parts.iter_mut().for_each(|e| e.density *= factor);
        out.face_parts.iter_mut().for_each(|f| f.mass *= factor);
        out
    }

    /// `self − other`.
    pub fn minus(&self, other: &CurvatureMeasure) -> CurvatureMeasure {
        self.plus(&other.scaled(-1.0))
    }

    /// `∫ f dω`, with curve and cell parts integrated by the composite
    /// midpoint rule at `resolution` nodes per direction.
    pub fn integrate(&self, f: &dyn TestFunction, resolution: usize) -> Result<f64, CurvatureError> {
        if resolution < 2 {
            return Err(CurvatureError::QuadratureUnderResolved { resolution });
        }
        let mut s = NeumaierSum::default();
        for a in &self.atoms {
            let v = match (a.point, f.constant()) {
                (_, Some(c)) => c,
                (Some(p), None) => f.at(p),
                (None, None) => return Err(CurvatureError::UnplacedPart { id: a.site.clone() }),
            };
            s.add(a.mass * v);
        }
        for e in &self.edge_parts {
            s.add(e.density * integrate_curve(f, e, resolution)?);
        }
        for c in &self.face_parts {
            s.add(c.mass * average_over_cell(f, c, resolution)?);
        }
        Ok(s.value())
    }
}

/// A continuous function that measures are integrated against.
pub trait TestFunction: Sync {
    fn at(&self, p: Point) -> f64;

    /// `Some(c)` when the function is the constant `c`; lets unplaced parts be
    /// integrated.
    fn constant(&self) -> Option<f64> {
        None
    }
}

impl<F: Fn(Point) -> f64 + Sync> TestFunction for F {
    fn at(&self, p: Point) -> f64 {
        self(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl TestFunction for Constant {
    fn at(&self, _: Point) -> f64 {
        self.0
    }

    fn constant(&self) -> Option<f64> {
        Some(self.0)
    }
}

fn integrate_curve(f: &dyn TestFunction, e: &EdgePart, n: usize) -> Result<f64, CurvatureError> {
    if let Some(c) = f.constant() {
        return Ok(c * e.length);
    }
    let mut s = NeumaierSum::default();
    match &e.curve {
        Curve::Unplaced => return Err(CurvatureError::UnplacedPart { id: e.id.clone() }),
        Curve::Segment { a, b } => {
            for k in 0..n {
                let t = (k as f64 + 0.5) / n as f64;
                s.add(f.at(lerp(*a, *b, t)));
            }
        }
        Curve::Circle { center, radius, normal } => {
            let (u, v) = orthonormal_frame(*normal);
            for k in 0..n {
                let phi = 2.0 * PI * (k as f64 + 0.5) / n as f64;
                let (c, si) = (phi.cos() * radius, phi.sin() * radius);
                s.add(f.at([
                    center[0] + c * u[0] + si * v[0],
                    center[1] + c * u[1] + si * v[1],
                    center[2] + c * u[2] + si * v[2],
                ]));
            }
        }
    }
    Ok(s.value() * e.length / n as f64)
}

/// Mean of `f` against the normalized distribution of a cell.
fn average_over_cell(f: &dyn TestFunction, c: &FacePart, n: usize) -> Result<f64, CurvatureError> {
    if let Some(k) = f.constant() {
        return Ok(k);
    }
    let mut s = NeumaierSum::default();
    match &c.cell {
        Cell::Unplaced => Err(CurvatureError::UnplacedPart { id: c.id.clone() }),
        Cell::Triangle { corners: [p0, p1, p2] } => {
            // n² congruent sub-triangles, evaluated at their centroids.
            let h = 1.0 / n as f64;
            for i in 0..n {
                for j in 0..n - i {
                    let (a, b) = (i as f64, j as f64);
                    s.add(f.at(barycentric(*p0, *p1, *p2, (a + 1.0 / 3.0) * h, (b + 1.0 / 3.0) * h)));
                    if i + j + 1 < n {
                        s.add(f.at(barycentric(*p0, *p1, *p2, (a + 2.0 / 3.0) * h, (b + 2.0 / 3.0) * h)));
                    }
                }
            }
            Ok(s.value() / (n * n) as f64)
        }
        Cell::FlatTorus => {
            for i in 0..n {
                for j in 0..n {
                    s.add(f.at([(i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64, 0.0]));
                }
            }
            Ok(s.value() / (n * n) as f64)
        }
        Cell::RoundSphere => {
            // Equal-area cells in (z, φ).
            let m = 2 * n;
            for i in 0..n {
                let z = -1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
                let r = (1.0 - z * z).sqrt();
                for j in 0..m {
                    let phi = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                    s.add(f.at([r * phi.cos(), r * phi.sin(), z]));
                }
            }
            Ok(s.value() / (n * m) as f64)
        }
        Cell::TorusBump { center, radius } => {
            let m = 4 * n;
            let mut w_sum = NeumaierSum::default();
            for i in 0..n {
                let t = radius * (i as f64 + 0.5) / n as f64;
                let w = bump_profile(t / radius) * t;
                for j in 0..m {
                    let phi = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                    let p =
                        [(center[0] + t * phi.cos()).rem_euclid(1.0), (center[1] + t * phi.sin()).rem_euclid(1.0), 0.0];
                    s.add(w * f.at(p));
                    w_sum.add(w);
                }
            }
            Ok(s.value() / w_sum.value())
        }
        Cell::SphereBump { center, radius } => {
            let m = 4 * n;
            let (u, v) = orthonormal_frame(*center);
            let c = normalize(*center);
            let mut w_sum = NeumaierSum::default();
            for i in 0..n {
                let t = radius * (i as f64 + 0.5) / n as f64;
                let w = bump_profile(t / radius) * t.sin();
                for j in 0..m {
                    let phi = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                    let (cp, sp) = (phi.cos(), phi.sin());
                    let p = [
                        t.cos() * c[0] + t.sin() * (cp * u[0] + sp * v[0]),
                        t.cos() * c[1] + t.sin() * (cp * u[1] + sp * v[1]),
                        t.cos() * c[2] + t.sin() * (cp * u[2] + sp * v[2]),
                    ];
                    s.add(w * f.at(p));
                    w_sum.add(w);
                }
            }
            Ok(s.value() / w_sum.value())
        }
    }
}

/// Unnormalized C² bump `(1 − s²)³` on `[0, 1]`, zero beyond.
pub fn bump_profile(s: f64) -> f64 {
    if s >= 1.0 {
        0.0
    } else {
        let a = 1.0 - s * s;
        a * a * a
    }
}

/// Normalizing constant of the bump of geodesic radius `radius` on the unit
/// sphere: `1 / (2π ∫₀^ε (1 − (t/ε)²)³ sin t dt)`.
pub fn sphere_bump_normalization(radius: f64) -> f64 {
    let rule = gauss_legendre(32);
    let integral = rule.integrate(0.0, radius, |t| bump_profile(t / radius) * t.sin());
    1.0 / (2.0 * PI * integral)
}

/// Normalizing constant of the flat bump of radius `radius`.
pub fn flat_bump_normalization(radius: f64) -> f64 {
    4.0 / (PI * radius * radius)
}

fn lerp(a: Point, b: Point, t: f64) -> Point {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])]
}

fn barycentric(p0: Point, p1: Point, p2: Point, s: f64, t: f64) -> Point {
    let r = 1.0 - s - t;
    [r * p0[0] + s * p1[0] + t * p2[0], r * p0[1] + s * p1[1] + t * p2[1], r * p0[2] + s * p1[2] + t * p2[2]]
}

pub(crate) fn normalize(p: Point) -> Point {
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / n, p[1] / n, p[2] / n]
}

pub(crate) fn cross(a: Point, b: Point) -> Point {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Two unit vectors completing `normal` to a right-handed frame.
pub(crate) fn orthonormal_frame(normal: Point) -> (Point, Point) {
    let n = normalize(normal);
    let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = normalize(cross(helper, n));
    let v = cross(n, u);
    (u, v)
}

/// Curvature concentrated at the vertices of a cone surface: one atom
/// `2π − Σθ` per interior vertex, skipping atoms below [`ATOM_THRESHOLD`].
pub fn vertex_curvature_atoms(surface: &ConeSurface) -> CurvatureMeasure {
    vertex_curvature_atoms_with_threshold(surface, ATOM_THRESHOLD)
}

pub fn vertex_curvature_atoms_with_threshold(surface: &ConeSurface, threshold: f64) -> CurvatureMeasure {
    let topo = surface.topology();
    let embedding = surface.embedding();
    let atoms = (0..topo.vertex_count())
        .filter(|&v| !topo.is_boundary_vertex(v))
        .filter_map(|v| {
            let mass = 2.0 * PI - surface.angle_sum(v);
            (mass.abs() >= threshold).then(|| Atom { site: format!("v{v}"), point: embedding.map(|e| e[v]), mass })
        })
        .collect();
    CurvatureMeasure { atoms, ..Default::default() }
}

/// Exterior turning `π − θ` at each boundary vertex.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundaryTurning {
    pub turning: Vec<(usize, f64)>,
}

impl BoundaryTurning {
    pub fn of_surface(surface: &ConeSurface) -> Self {
        let topo = surface.topology();
        let turning = (0..topo.vertex_count())
            .filter(|&v| topo.is_boundary_vertex(v))
            .map(|v| (v, PI - surface.angle_sum(v)))
            .collect();
        BoundaryTurning { turning }
    }

    pub fn total(&self) -> f64 {
        self.turning.iter().map(|t| t.1).collect::<NeumaierSum>().value()
    }
}

/// `∫dω + Σ turning − 2πχ`. Vanishes for a correct measure.
///
/// The boundary term is the standard extension of the closed formula.
pub fn gauss_bonnet_residual(measure: &CurvatureMeasure, chi: i64, boundary: Option<&BoundaryTurning>) -> f64 {
    let mut s = NeumaierSum::default();
    s.add(measure.total_mass());
    if let Some(b) = boundary {
        s.add(b.total());
    }
    s.add(-2.0 * PI * chi as f64);
    s.value()
}

/// Edge part for a gluing curve whose two sides have geodesic curvature
/// `kplus` and `kminus`.
pub fn edge_curvature_density(kplus: f64, kminus: f64, length: f64) -> Result<EdgePart, CurvatureError> {
    if !(length > 0.0) {
        return Err(CurvatureError::NonPositiveLength { length });
    }
    Ok(EdgePart { id: String::new(), density: kplus - kminus, length, curve: Curve::Unplaced })
}

/// Measure of a closed tin can of radius `r` and height `h`: flat lids and
/// side, curvature only along the two rims.
pub fn tin_can(r: f64, h: f64) -> Result<CurvatureMeasure, CurvatureError> {
    let mut edge_parts = Vec::new();
    for (id, z) in [("rim-bottom", 0.0), ("rim-top", h)] {
        let mut part = edge_curvature_density(1.0 / r, 0.0, 2.0 * PI * r)?;
        part.id = id.into();
        part.curve = Curve::Circle { center: [0.0, 0.0, z], radius: r, normal: [0.0, 0.0, 1.0] };
        edge_parts.push(part);
    }
    Ok(CurvatureMeasure { edge_parts, ..Default::default() })
}

/// Total angle around each interior vertex; handy for reports.
pub fn cone_angles(surface: &ConeSurface) -> Vec<(usize, f64)> {
    let topo = surface.topology();
    (0..topo.vertex_count()).filter(|&v| !topo.is_boundary_vertex(v)).map(|v| (v, surface.angle_sum(v))).collect()
}

/// Angles of the three corners of a face.
pub fn face_angles(surface: &ConeSurface, face: usize) -> [f64; 3] {
    [0, 1, 2].map(|i| surface.vertex_angle(Corner::new(face, i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::presets;

    #[test]
    fn cube_atoms() {
        let cube = presets::unit_cube();
        let m = vertex_curvature_atoms(&cube);
        assert_eq!(m.atoms.len(), 8);
        for a in &m.atoms {
            assert!((a.mass - PI / 2.0).abs() < 1e-14);
        }
        assert!(gauss_bonnet_residual(&m, 2, None).abs() < 1e-12);
        let (pos, neg) = m.positive_negative_split();
        assert_eq!(pos, m);
        assert!(neg.is_empty());
    }

    #[test]
    fn flat_torus_has_no_atoms() {
        let m = vertex_curvature_atoms(&presets::square_torus(1.0).unwrap());
        assert!(m.is_empty());
        assert_eq!(gauss_bonnet_residual(&m, 0, None), 0.0);
    }

    #[test]
    fn double_equilateral_triangle() {
        let m = vertex_curvature_atoms(&presets::double_triangle(1.0, 1.0, 1.0).unwrap());
        assert_eq!(m.atoms.len(), 3);
        for a in &m.atoms {
            assert!((a.mass - 4.0 * PI / 3.0).abs() < 1e-14);
        }
        assert!((m.total_mass() - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn tin_can_total() {
        let m = tin_can(0.7, 2.0).unwrap();
        assert!((m.total_mass() - 4.0 * PI).abs() < 1e-14);
        assert!(gauss_bonnet_residual(&m, 2, None).abs() < 1e-14);
        assert_eq!(edge_curvature_density(1.0, 1.0, 3.0).unwrap().mass(), 0.0);
        assert!(edge_curvature_density(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn triangle_with_boundary_turning() {
        let t = presets::single_triangle(3.0, 4.0, 5.0).unwrap();
        let m = vertex_curvature_atoms(&t);
        assert!(m.is_empty());
        let b = BoundaryTurning::of_surface(&t);
        assert!(gauss_bonnet_residual(&m, 1, Some(&b)).abs() < 1e-14);
    }

    #[test]
    fn split_of_opposite_atoms() {
        let m = CurvatureMeasure {
            atoms: vec![
                Atom { site: "a".into(), point: None, mass: 1.0 },
                Atom { site: "b".into(), point: None, mass: -1.0 },
            ],
            ..Default::default()
        };
        let (p, n) = m.positive_negative_split();
        assert_eq!(p.atoms.len(), 1);
        assert_eq!(n.atoms.len(), 1);
        assert_eq!(n.atoms[0].mass, 1.0);
        assert_eq!(p.minus(&n).total_mass(), 0.0);
        assert_eq!(m.total_variation(), 2.0);
    }

    #[test]
    fn integration_rules() {
        let cube = vertex_curvature_atoms(&presets::unit_cube());
        assert!((cube.integrate(&Constant(1.0), 4).unwrap() - 4.0 * PI).abs() < 1e-13);
        assert_eq!(cube.integrate(&Constant(0.0), 4).unwrap(), 0.0);
        assert_eq!(cube.integrate(&Constant(1.0), 1), Err(CurvatureError::QuadratureUnderResolved { resolution: 1 }));
        let rim = tin_can(1.0, 1.0).unwrap();
        let z = |p: Point| p[2];
        assert!((rim.integrate(&z, 8).unwrap() - 2.0 * PI).abs() < 1e-13);
        let unplaced =
            CurvatureMeasure { atoms: vec![Atom { site: "x".into(), point: None, mass: 1.0 }], ..Default::default() };
        assert!(matches!(unplaced.integrate(&z, 4), Err(CurvatureError::UnplacedPart { .. })));
    }

    #[test]
    fn cell_averages_of_linear_functions() {
        let tri = FacePart {
            id: "t".into(),
            mass: 2.0,
            cell: Cell::Triangle { corners: [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]] },
        };
        let m = CurvatureMeasure { face_parts: vec![tri], ..Default::default() };
        // Centroid x = 1/3.
        let got = m.integrate(&|p: Point| p[0], 5).unwrap();
        assert!((got - 2.0 / 3.0).abs() < 1e-14);
        let sphere = CurvatureMeasure {
            face_parts: vec![FacePart { id: "s".into(), mass: 4.0 * PI, cell: Cell::RoundSphere }],
            ..Default::default()
        };
        let z2 = sphere.integrate(&|p: Point| p[2] * p[2], 64).unwrap();
        assert!((z2 - 4.0 * PI / 3.0).abs() < 2e-3);
    }

    #[test]
    fn bump_cells_concentrate_at_their_center() {
        let f = |p: Point| (2.0 * PI * p[0]).cos();
        for (cell, center_value) in [
            (Cell::TorusBump { center: [0.25, 0.5, 0.0], radius: 1e-3 }, 0.0),
            (Cell::SphereBump { center: [0.0, 0.0, 1.0], radius: 1e-3 }, 1.0),
        ] {
            let m = CurvatureMeasure {
                face_parts: vec![FacePart { id: "b".into(), mass: 1.5, cell }],
                ..Default::default()
            };
            let got = m.integrate(&f, 16).unwrap();
            assert!((got - 1.5 * center_value).abs() < 1e-4, "{got}");
        }
    }

    #[test]
    fn json_shape() {
        let m = tin_can(1.0, 1.0).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"edges\""));
        let back: CurvatureMeasure = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn flat_bump_normalization_matches_quadrature() {
        let eps = 0.2;
        let c = flat_bump_normalization(eps);
        let rule = gauss_legendre(16);
        let total = 2.0 * PI * c * rule.integrate(0.0, eps, |t| bump_profile(t / eps) * t);
        assert!((total - 1.0).abs() < 1e-13);
    }
}
