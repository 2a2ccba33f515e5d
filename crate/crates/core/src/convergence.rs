//! Convergence experiments: Schwarz lanterns, mollified atoms, weak
//! distances between curvature measures and the uniform convergence of
//! distances for mollified prescriptions.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvature::{
    bump_profile, gauss_bonnet_residual, vertex_curvature_atoms, BoundaryTurning, CurvatureError, CurvatureMeasure,
    Point,
};
use crate::geodesics::{uniform_distance, GeodesicError};
use crate::mesh::{heron, ConeSurface, MeshError};
use crate::potential::{
    build_alexandrov_metric, Background, GraphResolution, MetricGraph, PotentialError, PrescribedMeasure, SmoothPart,
    MAX_SPHERE_BUMP_RADIUS, MAX_TORUS_BUMP_RADIUS,
};
use crate::sampling;

/// Version tag of the test-function dictionary; bump it when the list changes.
pub const DICTIONARY_VERSION: &str = "dict-v1";
/// Quadrature resolution used for integrating measures against the dictionary.
pub const DEFAULT_WEAK_RESOLUTION: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConvergenceError {
    #[error("BadSpec: {0}")]
    BadSpec(String),
    #[error("EpsilonTooLarge: epsilon {epsilon} exceeds {limit}")]
    EpsilonTooLarge { epsilon: f64, limit: f64 },
    #[error("EmptyDictionary: no test functions to compare against")]
    EmptyDictionary,
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
}

/// Inscribed antiprism triangulation of a cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanternSpec {
    /// Vertices per ring.
    pub n: usize,
    /// Rows of triangles along the axis.
    pub m: usize,
    pub r: f64,
    pub h: f64,
}

impl LanternSpec {
    pub fn validate(&self) -> Result<(), ConvergenceError> {
        if self.n < 3 || self.m < 1 || !(self.r > 0.0) || !(self.h > 0.0) || !self.r.is_finite() || !self.h.is_finite()
        {
            return Err(ConvergenceError::BadSpec(format!("lantern needs n >= 3, m >= 1, r > 0, h > 0; got {self:?}")));
        }
        Ok(())
    }

    pub fn vertex(&self, ring: usize, j: usize) -> Point {
        let phi = 2.0 * PI * j as f64 / self.n as f64 + if ring % 2 == 1 { PI / self.n as f64 } else { 0.0 };
        [self.r * phi.cos(), self.r * phi.sin(), self.h * ring as f64 / self.m as f64]
    }

    /// Vertex positions (ring-major) and counter-clockwise triangles seen
    /// from outside.
    pub fn triangles(&self) -> (Vec<Point>, Vec<[usize; 3]>) {
        let n = self.n;
        let positions =
            (0..=self.m).flat_map(|k| (0..n).map(move |j| (k, j))).map(|(k, j)| self.vertex(k, j)).collect();
        let mut tris = Vec::with_capacity(2 * n * self.m);
        for k in 0..self.m {
            let lo = |j: usize| k * n + j % n;
            let up = |j: usize| (k + 1) * n + j % n;
            for j in 0..n {
                if k % 2 == 0 {
                    tris.push([lo(j), lo(j + 1), up(j)]);
                    tris.push([lo(j + 1), up(j + 1), up(j)]);
                } else {
                    tris.push([lo(j), lo(j + 1), up(j + 1)]);
                    tris.push([lo(j), up(j + 1), up(j)]);
                }
            }
        }
        (positions, tris)
    }

    /// Sum of the triangle areas without building the surface. Rows of the
    /// same parity are congruent, so two rows determine the total.
    pub fn area(&self) -> f64 {
        lantern_area(self)
    }

    pub fn cylinder_area(&self) -> f64 {
        2.0 * PI * self.r * self.h
    }
}

fn lantern_area(spec: &LanternSpec) -> f64 {
    let rows: Vec<f64> = (0..spec.m.min(2))
        .map(|k| {
            let tri = |a: Point, b: Point, c: Point| {
                heron(crate::mesh::dist3(b, c), crate::mesh::dist3(c, a), crate::mesh::dist3(a, b))
            };
            let (l0, l1) = (spec.vertex(k, 0), spec.vertex(k, 1));
            let (u0, u1) = (spec.vertex(k + 1, 0), spec.vertex(k + 1, 1));
            if k % 2 == 0 {
                tri(l0, l1, u0) + tri(l1, u1, u0)
            } else {
                tri(l0, l1, u1) + tri(l0, u1, u0)
            }
        })
        .collect();
    let per_ring = spec.n as f64;
    let even = spec.m.div_ceil(2) as f64;
    let odd = (spec.m / 2) as f64;
    per_ring * (even * rows[0] + odd * rows.get(1).copied().unwrap_or(0.0))
}

/// The lantern as a cone surface with its 3D embedding attached.
pub fn schwarz_lantern(spec: LanternSpec) -> Result<ConeSurface, ConvergenceError> {
    spec.validate()?;
    let (positions, tris) = spec.triangles();
    Ok(ConeSurface::from_embedded(&positions, &tris)?)
}

/// Total area `Σ Heron(a, b, c)`.
pub fn surface_area(surface: &ConeSurface) -> f64 {
    crate::quadrature::sum((0..surface.face_count()).map(|f| surface.face_area(f)))
}

/// Area, curvature concentration and Gauss–Bonnet balance of one lantern.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LanternReport {
    pub spec: LanternSpec,
    pub area: f64,
    /// Largest `|atom|` over interior vertices.
    pub max_atom: f64,
    /// `|ω|(S)` including boundary turning.
    pub total_variation: f64,
    pub gauss_bonnet_residual: f64,
}

pub fn lantern_report(spec: LanternSpec) -> Result<LanternReport, ConvergenceError> {
    let surface = schwarz_lantern(spec)?;
    let atoms = vertex_curvature_atoms(&surface);
    let turning = BoundaryTurning::of_surface(&surface);
    let max_atom = atoms.atoms.iter().map(|a| a.mass.abs()).fold(0.0, f64::max);
    let total_variation = atoms.total_variation() + turning.turning.iter().map(|(_, t)| t.abs()).sum::<f64>();
    Ok(LanternReport {
        spec,
        area: surface_area(&surface),
        max_atom,
        total_variation,
        gauss_bonnet_residual: gauss_bonnet_residual(&atoms, surface.euler_characteristic(), Some(&turning)),
    })
}

/// How the row count follows the ring size along a lantern ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LanternRows {
    /// `m = n`: areas converge to the cylinder.
    Equal,
    /// `m = n³`: areas diverge.
    Cubic,
}

impl LanternRows {
    pub fn rows_for(self, n: usize) -> usize {
        match self {
            LanternRows::Equal => n,
            LanternRows::Cubic => n * n * n,
        }
    }
}

/// Area against the cylinder area along a ladder of ring sizes.
pub fn lantern_table(
    r: f64,
    h: f64,
    ladder: &[usize],
    rows: LanternRows,
) -> Result<ConvergenceTable, ConvergenceError> {
    let mut table = ConvergenceTable::new("n", "area");
    for &n in ladder {
        let spec = LanternSpec { n, m: rows.rows_for(n), r, h };
        spec.validate()?;
        table.push(n as f64, spec.area(), spec.cylinder_area());
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub parameter: f64,
    pub measured: f64,
    pub target: f64,
    pub error: f64,
}

/// Rows of `(parameter, measured, target, error)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub parameter: String,
    pub quantity: String,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn new(parameter: &str, quantity: &str) -> Self {
        ConvergenceTable { parameter: parameter.into(), quantity: quantity.into(), rows: Vec::new() }
    }

    pub fn push(&mut self, parameter: f64, measured: f64, target: f64) {
        self.rows.push(ConvergenceRow { parameter, measured, target, error: measured - target });
    }

    pub fn measured(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.measured).collect()
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].measured < w[0].measured)
    }

    pub fn strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].measured > w[0].measured)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{},target,error\n", self.parameter, self.quantity);
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                format_significant(r.parameter),
                format_significant(r.measured),
                format_significant(r.target),
                format_significant(r.error)
            );
        }
        out
    }
}

/// Nine significant digits, trailing zeros trimmed; scientific notation
/// outside `[1e-4, 1e9)`.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..9).contains(&e) {
        let decimals = (8 - e).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let s = format!("{x:.8e}");
        let (mantissa, exp) = s.split_once('e').expect("scientific format");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exp}")
    }
}

/// Smooth bump of total mass `mass` supported within `epsilon` of `site`.
pub fn mollify_atom(
    background: Background,
    site: Point,
    mass: f64,
    epsilon: f64,
) -> Result<PrescribedMeasure, ConvergenceError> {
    let limit = match background {
        Background::Torus => MAX_TORUS_BUMP_RADIUS,
        Background::Sphere => MAX_SPHERE_BUMP_RADIUS,
    };
    if !(epsilon > 0.0) {
        return Err(ConvergenceError::BadSpec(format!("epsilon {epsilon} must be positive")));
    }
    if epsilon > limit {
        return Err(ConvergenceError::EpsilonTooLarge { epsilon, limit });
    }
    if mass >= 2.0 * PI {
        return Err(PotentialError::CuspAtom { mass, point: site }.into());
    }
    let site = background.point(site)?;
    let m = PrescribedMeasure::new(background);
    if mass == 0.0 {
        return Ok(m);
    }
    Ok(m.with_smooth(SmoothPart::Bump { center: site, radius: epsilon, mass }))
}

/// Test function with its recorded sup norm and Lipschitz constant.
#[derive(Clone)]
pub struct DictionaryFunction {
    pub name: String,
    pub f: Arc<dyn Fn(Point) -> f64 + Send + Sync>,
    pub sup: f64,
    pub lipschitz: f64,
}

impl std::fmt::Debug for DictionaryFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DictionaryFunction")
            .field("name", &self.name)
            .field("sup", &self.sup)
            .field("lipschitz", &self.lipschitz)
            .finish()
    }
}

/// Slope bound of the bump profile: `max |d/ds (1 − s²)³| = (6/√5)(4/5)²`.
const BUMP_SLOPE: f64 = 1.717_300_170_528_581;

/// The fixed 32-function dictionary of a background: 24 low-order modes plus
/// 8 bumps placed by the given seed.
pub fn dictionary(background: Background, seed: u64) -> Vec<DictionaryFunction> {
    let mut out = Vec::with_capacity(32);
    match background {
        Background::Torus => {
            let modes =
                [(1, 0), (0, 1), (1, 1), (1, -1), (2, 0), (0, 2), (2, 1), (1, 2), (2, -1), (1, -2), (2, 2), (3, 0)];
            for (kx, ky) in modes {
                let norm = 2.0 * PI * ((kx * kx + ky * ky) as f64).sqrt();
                for (label, phase) in [("cos", 0.0), ("sin", -0.5 * PI)] {
                    out.push(DictionaryFunction {
                        name: format!("{label}({kx},{ky})"),
                        f: Arc::new(move |p: Point| (2.0 * PI * (kx as f64 * p[0] + ky as f64 * p[1]) + phase).cos()),
                        sup: 1.0,
                        lipschitz: norm,
                    });
                }
            }
        }
        Background::Sphere => {
            for (name, f) in sphere_harmonics() {
                let (sup, lipschitz) = sampled_bounds(&*f);
                out.push(DictionaryFunction { name, f, sup, lipschitz });
            }
        }
    }
    let mut rng = sampling::rng(seed);
    for k in 0..8 {
        let radius = rng.gen_range(0.1..0.3);
        let center = match background {
            Background::Torus => [rng.gen::<f64>(), rng.gen::<f64>(), 0.0],
            Background::Sphere => {
                let z: f64 = rng.gen_range(-1.0..1.0);
                let phi: f64 = rng.gen_range(0.0..2.0 * PI);
                let s = (1.0 - z * z).sqrt();
                [s * phi.cos(), s * phi.sin(), z]
            }
        };
        out.push(DictionaryFunction {
            name: format!("bump{k}"),
            f: Arc::new(move |p: Point| bump_profile(background.distance(p, center) / radius)),
            sup: 1.0,
            lipschitz: BUMP_SLOPE / radius,
        });
    }
    out
}

type SphereFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

/// Real solid harmonics of degrees 1 to 4, unnormalized.
fn sphere_harmonics() -> Vec<(String, SphereFn)> {
    type Harmonic = fn(f64, f64, f64) -> f64;
    let list: Vec<(&str, Harmonic)> = vec![
        ("x", |x, _, _| x),
        ("y", |_, y, _| y),
        ("z", |_, _, z| z),
        ("xy", |x, y, _| x * y),
        ("yz", |_, y, z| y * z),
        ("xz", |x, _, z| x * z),
        ("x2-y2", |x, y, _| x * x - y * y),
        ("3z2-1", |_, _, z| 3.0 * z * z - 1.0),
        ("y(3x2-y2)", |x, y, _| y * (3.0 * x * x - y * y)),
        ("xyz", |x, y, z| x * y * z),
        ("y(5z2-1)", |_, y, z| y * (5.0 * z * z - 1.0)),
        ("z(5z2-3)", |_, _, z| z * (5.0 * z * z - 3.0)),
        ("x(5z2-1)", |x, _, z| x * (5.0 * z * z - 1.0)),
        ("z(x2-y2)", |x, y, z| z * (x * x - y * y)),
        ("x(x2-3y2)", |x, y, _| x * (x * x - 3.0 * y * y)),
        ("xy(x2-y2)", |x, y, _| x * y * (x * x - y * y)),
        ("yz(3x2-y2)", |x, y, z| y * z * (3.0 * x * x - y * y)),
        ("xy(7z2-1)", |x, y, z| x * y * (7.0 * z * z - 1.0)),
        ("yz(7z2-3)", |_, y, z| y * z * (7.0 * z * z - 3.0)),
        ("35z4-30z2+3", |_, _, z| 35.0 * z.powi(4) - 30.0 * z * z + 3.0),
        ("xz(7z2-3)", |x, _, z| x * z * (7.0 * z * z - 3.0)),
        ("(x2-y2)(7z2-1)", |x, y, z| (x * x - y * y) * (7.0 * z * z - 1.0)),
        ("xz(x2-3y2)", |x, y, z| x * z * (x * x - 3.0 * y * y)),
        ("x4-6x2y2+y4", |x, y, _| x.powi(4) - 6.0 * x * x * y * y + y.powi(4)),
    ];
    list.into_iter()
        .map(|(name, f)| (name.to_string(), Arc::new(move |p: Point| f(p[0], p[1], p[2])) as SphereFn))
        .collect()
}

/// Sup norm and tangential gradient bound sampled on a dense spiral.
fn sampled_bounds(f: &(dyn Fn(Point) -> f64 + Send + Sync)) -> (f64, f64) {
    let n = 20_000;
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut sup = 0.0f64;
    let mut lip = 0.0f64;
    let h = 1e-6;
    for k in 0..n {
        let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
        let s = (1.0 - z * z).sqrt();
        let phi = golden * k as f64;
        let p = [s * phi.cos(), s * phi.sin(), z];
        sup = sup.max(f(p).abs());
        let mut g = [0.0; 3];
        for (i, gi) in g.iter_mut().enumerate() {
            let (mut a, mut b) = (p, p);
            a[i] += h;
            b[i] -= h;
            *gi = (f(a) - f(b)) / (2.0 * h);
        }
        let radial = g[0] * p[0] + g[1] * p[1] + g[2] * p[2];
        let t = [g[0] - radial * p[0], g[1] - radial * p[1], g[2] - radial * p[2]];
        lip = lip.max((t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt());
    }
    (sup, lip)
}

/// `max_f |∫ f dμ₁ − ∫ f dμ₂| / (‖f‖∞ + Lip f)` over the dictionary.
pub fn weak_distance(
    mu1: &CurvatureMeasure,
    mu2: &CurvatureMeasure,
    dictionary: &[DictionaryFunction],
    resolution: usize,
) -> Result<f64, ConvergenceError> {
    if dictionary.is_empty() {
        return Err(ConvergenceError::EmptyDictionary);
    }
    let diff = mu1.minus(mu2);
    let values: Vec<f64> = dictionary
        .par_iter()
        .map(|d| {
            let f = &*d.f;
            let g = move |p: Point| f(p);
            diff.integrate(&g, resolution).map(|v| v.abs() / (d.sup + d.lipschitz))
        })
        .collect::<Result<_, _>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

/// Settings of the mollification experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReshetnyakConfig {
    pub epsilons: Vec<f64>,
    pub resolution: GraphResolution,
    /// Number of seeded sample points besides the atom sites.
    pub samples: usize,
    pub seed: u64,
    pub weak_resolution: usize,
}

impl ReshetnyakConfig {
    pub fn default_for(background: Background) -> Self {
        ReshetnyakConfig {
            epsilons: vec![0.25, 0.125, 0.0625],
            resolution: match background {
                Background::Torus => GraphResolution::TorusGrid(128),
                Background::Sphere => GraphResolution::Icosphere(4),
            },
            samples: 24,
            seed: sampling::DEFAULT_SEED,
            weak_resolution: DEFAULT_WEAK_RESOLUTION,
        }
    }
}

/// Both columns of the mollification experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReshetnyakReport {
    /// Sampled `max |d_ε − d|` over pairs of sample points.
    pub uniform: ConvergenceTable,
    /// Weak distance between the mollified and the target measure.
    pub weak: ConvergenceTable,
    pub sample_points: Vec<Point>,
}

impl ReshetnyakReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,uniform_distance,weak_distance,target\n");
        for (u, w) in self.uniform.rows.iter().zip(&self.weak.rows) {
            let _ = writeln!(
                out,
                "{},{},{},0",
                format_significant(u.parameter),
                format_significant(u.measured),
                format_significant(w.measured)
            );
        }
        out
    }
}

/// Replaces every atom of `omega` by a bump of radius `epsilon`.
pub fn mollify_measure(omega: &PrescribedMeasure, epsilon: f64) -> Result<PrescribedMeasure, ConvergenceError> {
    let mut out = PrescribedMeasure::new(omega.background);
    out.smooth = omega.smooth.clone();
    for a in &omega.atoms {
        out.smooth.extend(mollify_atom(omega.background, a.point, a.mass, epsilon)?.smooth);
    }
    Ok(out)
}

/// Mollifies the atoms of `omega` along the ladder and compares each
/// mollified metric and curvature measure with the exact ones.
pub fn reshetnyak_experiment(
    omega: &PrescribedMeasure,
    config: &ReshetnyakConfig,
) -> Result<ReshetnyakReport, ConvergenceError> {
    let exact = build_alexandrov_metric(omega)?;
    let exact_graph = MetricGraph::build(&exact, config.resolution)?;
    let nodes = exact_graph.nodes();
    let mut rng = sampling::rng(config.seed);
    let mut points: Vec<Point> = omega.atoms.iter().map(|a| a.point).collect();
    while points.len() < omega.atoms.len() + config.samples.min(nodes.len()) {
        let p = nodes[rng.gen_range(0..nodes.len())];
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let pairs: Vec<(usize, usize)> = sampling::all_pairs(points.len());
    let exact_d = exact_graph.pairwise(&points)?;
    let dict = dictionary(omega.background, config.seed);
    let exact_measure = omega.to_curvature_measure();
    let mut uniform = ConvergenceTable::new("epsilon", "uniform_distance");
    let mut weak = ConvergenceTable::new("epsilon", "weak_distance");
    for &eps in &config.epsilons {
        let smooth = mollify_measure(omega, eps)?;
        let metric = build_alexandrov_metric(&smooth)?;
        let graph = MetricGraph::build(&metric, config.resolution)?;
        let d = graph.pairwise(&points)?;
        let index_pairs: Vec<((usize, usize), (usize, usize))> = pairs.iter().map(|&p| (p, p)).collect();
        let dist = uniform_distance(|&(i, j), _| d[i][j], |&(i, j), _| exact_d[i][j], &index_pairs)?;
        uniform.push(eps, dist, 0.0);
        weak.push(
            eps,
            weak_distance(&smooth.to_curvature_measure(), &exact_measure, &dict, config.weak_resolution)?,
            0.0,
        );
    }
    Ok(ReshetnyakReport { uniform, weak, sample_points: points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::normalize;
    use crate::potential::one_cone_torus;

    #[test]
    fn small_lantern_counts() {
        let s = schwarz_lantern(LanternSpec { n: 3, m: 1, r: 1.0, h: 1.0 }).unwrap();
        assert_eq!(s.face_count(), 6);
        assert_eq!(s.euler_characteristic(), 0);
        assert!(matches!(
            schwarz_lantern(LanternSpec { n: 2, m: 1, r: 1.0, h: 1.0 }),
            Err(ConvergenceError::BadSpec(_))
        ));
    }

    #[test]
    fn closed_area_matches_surface_area() {
        for (n, m) in [(3, 1), (5, 4), (8, 7)] {
            let spec = LanternSpec { n, m, r: 1.3, h: 0.7 };
            let s = schwarz_lantern(spec).unwrap();
            assert!((surface_area(&s) - spec.area()).abs() < 1e-12 * spec.area());
        }
    }

    #[test]
    fn lantern_gauss_bonnet() {
        let r = lantern_report(LanternSpec { n: 6, m: 5, r: 1.0, h: 2.0 }).unwrap();
        assert!(r.gauss_bonnet_residual.abs() < 1e-10);
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(4.0 * PI), "12.5663706");
        assert_eq!(format_significant(0.5), "0.5");
        assert_eq!(format_significant(-1e-12), "-1e-12");
        assert_eq!(format_significant(123456789012.0), "1.23456789e11");
        assert_eq!(format_significant(0.0), "0");
    }

    #[test]
    fn mollify_edge_cases() {
        let m = mollify_atom(Background::Torus, [0.5, 0.5, 0.0], 0.0, 0.1).unwrap();
        assert!(m.atoms.is_empty() && m.smooth.is_empty());
        assert!(matches!(
            mollify_atom(Background::Torus, [0.5, 0.5, 0.0], 1.0, 0.3),
            Err(ConvergenceError::EpsilonTooLarge { .. })
        ));
        let b = mollify_atom(Background::Sphere, [0.0, 0.0, 1.0], 1.5, 0.2).unwrap();
        assert!((b.total_mass() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn dictionary_is_pinned() {
        for bg in [Background::Torus, Background::Sphere] {
            let d = dictionary(bg, 7);
            assert_eq!(d.len(), 32);
            assert!(d.iter().all(|f| f.sup > 0.0 && f.lipschitz > 0.0));
            let again = dictionary(bg, 7);
            let p = bg.point(normalize([0.3, 0.2, 0.9])).unwrap_or([0.3, 0.2, 0.0]);
            assert!(d.iter().zip(&again).all(|(a, b)| (a.f)(p) == (b.f)(p)));
        }
        assert!(matches!(
            weak_distance(&CurvatureMeasure::default(), &CurvatureMeasure::default(), &[], 8),
            Err(ConvergenceError::EmptyDictionary)
        ));
    }

    #[test]
    fn weak_distance_of_shifted_atoms() {
        let dict = dictionary(Background::Torus, 1);
        let a = one_cone_torus([0.5, 0.5, 0.0], 1.0).to_curvature_measure();
        let b = one_cone_torus([0.52, 0.5, 0.0], 1.0).to_curvature_measure();
        let d = weak_distance(&a, &b, &dict, 16).unwrap();
        assert!(d > 0.0 && d <= 1.0 * 0.02 + 1e-12);
        assert_eq!(weak_distance(&a, &a, &dict, 16).unwrap(), 0.0);
    }

    #[test]
    fn smooth_prescription_has_zero_columns() {
        let omega = PrescribedMeasure::new(Background::Sphere).with_smooth(SmoothPart::Uniform(4.0 * PI));
        let mut config = ReshetnyakConfig::default_for(Background::Sphere);
        config.resolution = GraphResolution::Icosphere(2);
        config.samples = 4;
        let report = reshetnyak_experiment(&omega, &config).unwrap();
        assert!(report.uniform.measured().iter().all(|&d| d == 0.0));
        assert!(report.weak.measured().iter().all(|&d| d == 0.0));
    }
}
